#include "oitlab/scene_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace oitlab {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SceneSchemaError(context + key, "missing");
    return *it;
}

Vec3 parse_vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() ||
        !j[2].is_number()) {
        throw SceneSchemaError(field, "expected an array of 3 numbers");
    }
    return Vec3(j[0].get<float>(), j[1].get<float>(), j[2].get<float>());
}

float parse_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw SceneSchemaError(field, "expected a number");
    return j.get<float>();
}

std::uint64_t parse_uint(const json& j, const std::string& field) {
    if (!j.is_number_unsigned()) throw SceneSchemaError(field, "expected an unsigned integer");
    return j.get<std::uint64_t>();
}

void check_unit(float v, const std::string& field) {
    if (!(v >= 0.0f && v <= 1.0f)) {
        throw SceneInvariantError(field, "must be in [0, 1]");
    }
}

json vec3_to_json(const Vec3& v) {
    return json::array({static_cast<double>(v.x), static_cast<double>(v.y),
                        static_cast<double>(v.z)});
}

}  // namespace

void validate_scene(const Scene& scene) {
    const Camera& cam = scene.camera;
    if (!(cam.near_plane > 0.0f)) throw SceneInvariantError("camera.near", "must be > 0");
    if (!(cam.near_plane < cam.far_plane)) {
        throw SceneInvariantError("camera.far", "must be > near");
    }
    if (!(cam.vertical_fov > 0.0f && cam.vertical_fov < 180.0f)) {
        throw SceneInvariantError("camera.fov_deg", "must be in (0, 180)");
    }
    Vec3 view = cam.look_at - cam.eye;
    if (length(view) == 0.0f) throw SceneInvariantError("camera.look_at", "equals eye");
    if (length(cross(view, cam.up)) == 0.0f) {
        throw SceneInvariantError("camera.up", "parallel to view direction");
    }

    if (scene.meshes.empty()) throw SceneInvariantError("meshes", "at least one mesh required");

    std::set<std::uint32_t> ids;
    for (std::size_t m = 0; m < scene.meshes.size(); ++m) {
        const TriangleMesh& mesh = scene.meshes[m];
        const std::string prefix = "meshes[" + std::to_string(m) + "].";
        if (!ids.insert(mesh.object_id).second) {
            throw SceneInvariantError(prefix + "object_id", "duplicate");
        }
        if (mesh.vertex_colors.size() != mesh.vertices.size()) {
            throw SceneInvariantError(prefix + "colors", "one color per vertex required");
        }
        for (const Rgb& c : mesh.vertex_colors) {
            check_unit(c.x, prefix + "colors");
            check_unit(c.y, prefix + "colors");
            check_unit(c.z, prefix + "colors");
        }
        for (const auto& t : mesh.triangles) {
            for (std::uint32_t idx : t) {
                if (idx >= mesh.vertices.size()) {
                    throw SceneInvariantError(prefix + "triangles", "vertex index out of range");
                }
            }
        }
        if (const auto* constant = std::get_if<AlphaConstant>(&mesh.alpha)) {
            if (!(constant->value >= 0.0f && constant->value <= 1.0f)) {
                throw SceneInvariantError(prefix + "alpha", "constant must be in [0, 1]");
            }
        } else {
            const auto& rnd = std::get<AlphaPerPixelRandom>(mesh.alpha);
            if (!(0.0f <= rnd.min && rnd.min <= rnd.max && rnd.max <= 1.0f)) {
                throw SceneInvariantError(prefix + "alpha",
                                          "need 0 <= min <= max <= 1");
            }
        }
    }
}

std::string scene_to_json(const Scene& scene) {
    json j;
    j["version"] = 1;
    j["camera"] = {{"eye", vec3_to_json(scene.camera.eye)},
                   {"look_at", vec3_to_json(scene.camera.look_at)},
                   {"up", vec3_to_json(scene.camera.up)},
                   {"fov_deg", static_cast<double>(scene.camera.vertical_fov)},
                   {"near", static_cast<double>(scene.camera.near_plane)},
                   {"far", static_cast<double>(scene.camera.far_plane)}};
    j["meshes"] = json::array();
    for (const TriangleMesh& mesh : scene.meshes) {
        json jm;
        jm["object_id"] = mesh.object_id;
        jm["vertices"] = json::array();
        for (const Vec3& v : mesh.vertices) jm["vertices"].push_back(vec3_to_json(v));
        jm["colors"] = json::array();
        for (const Rgb& c : mesh.vertex_colors) jm["colors"].push_back(vec3_to_json(c));
        jm["triangles"] = json::array();
        for (const auto& t : mesh.triangles) jm["triangles"].push_back({t[0], t[1], t[2]});
        if (const auto* constant = std::get_if<AlphaConstant>(&mesh.alpha)) {
            jm["alpha"] = {{"constant", static_cast<double>(constant->value)}};
        } else {
            const auto& rnd = std::get<AlphaPerPixelRandom>(mesh.alpha);
            jm["alpha"] = {{"per_pixel_random",
                            {{"min", static_cast<double>(rnd.min)},
                             {"max", static_cast<double>(rnd.max)},
                             {"seed", rnd.seed}}}};
        }
        j["meshes"].push_back(std::move(jm));
    }
    return j.dump(2);
}

Scene scene_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SceneJsonError(std::string("scene json: ") + e.what());
    }
    if (!j.is_object()) throw SceneSchemaError("(root)", "expected an object");

    const json& version = require(j, "version", "");
    if (!version.is_number_integer() || version.get<int>() != 1) {
        throw SceneSchemaError("version", "expected 1");
    }

    Scene scene;
    const json& jc = require(j, "camera", "");
    if (!jc.is_object()) throw SceneSchemaError("camera", "expected an object");
    scene.camera.eye = parse_vec3(require(jc, "eye", "camera."), "camera.eye");
    scene.camera.look_at = parse_vec3(require(jc, "look_at", "camera."), "camera.look_at");
    scene.camera.up = parse_vec3(require(jc, "up", "camera."), "camera.up");
    scene.camera.vertical_fov = parse_number(require(jc, "fov_deg", "camera."), "camera.fov_deg");
    scene.camera.near_plane = parse_number(require(jc, "near", "camera."), "camera.near");
    scene.camera.far_plane = parse_number(require(jc, "far", "camera."), "camera.far");

    const json& jms = require(j, "meshes", "");
    if (!jms.is_array()) throw SceneSchemaError("meshes", "expected an array");
    for (std::size_t m = 0; m < jms.size(); ++m) {
        const json& jm = jms[m];
        const std::string prefix = "meshes[" + std::to_string(m) + "].";
        if (!jm.is_object()) throw SceneSchemaError(prefix, "expected an object");

        TriangleMesh mesh;
        mesh.object_id =
            static_cast<std::uint32_t>(parse_uint(require(jm, "object_id", prefix), prefix + "object_id"));

        const json& jv = require(jm, "vertices", prefix);
        if (!jv.is_array()) throw SceneSchemaError(prefix + "vertices", "expected an array");
        for (const json& v : jv) mesh.vertices.push_back(parse_vec3(v, prefix + "vertices"));

        const json& jcol = require(jm, "colors", prefix);
        if (!jcol.is_array()) throw SceneSchemaError(prefix + "colors", "expected an array");
        for (const json& c : jcol) mesh.vertex_colors.push_back(parse_vec3(c, prefix + "colors"));

        const json& jt = require(jm, "triangles", prefix);
        if (!jt.is_array()) throw SceneSchemaError(prefix + "triangles", "expected an array");
        for (const json& t : jt) {
            if (!t.is_array() || t.size() != 3) {
                throw SceneSchemaError(prefix + "triangles", "expected index triples");
            }
            std::array<std::uint32_t, 3> tri;
            for (int k = 0; k < 3; ++k) {
                tri[k] = static_cast<std::uint32_t>(parse_uint(t[k], prefix + "triangles"));
            }
            mesh.triangles.push_back(tri);
        }

        const json& ja = require(jm, "alpha", prefix);
        if (!ja.is_object()) throw SceneSchemaError(prefix + "alpha", "expected an object");
        if (ja.contains("constant")) {
            mesh.alpha = AlphaConstant{parse_number(ja["constant"], prefix + "alpha.constant")};
        } else if (ja.contains("per_pixel_random")) {
            const json& jr = ja["per_pixel_random"];
            if (!jr.is_object()) {
                throw SceneSchemaError(prefix + "alpha.per_pixel_random", "expected an object");
            }
            AlphaPerPixelRandom rnd;
            rnd.min = parse_number(require(jr, "min", prefix + "alpha.per_pixel_random."),
                                   prefix + "alpha.per_pixel_random.min");
            rnd.max = parse_number(require(jr, "max", prefix + "alpha.per_pixel_random."),
                                   prefix + "alpha.per_pixel_random.max");
            rnd.seed = parse_uint(require(jr, "seed", prefix + "alpha.per_pixel_random."),
                                  prefix + "alpha.per_pixel_random.seed");
            mesh.alpha = rnd;
        } else {
            throw SceneSchemaError(prefix + "alpha",
                                   "expected 'constant' or 'per_pixel_random'");
        }
        scene.meshes.push_back(std::move(mesh));
    }

    validate_scene(scene);
    return scene;
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SceneIoError("scene io: cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw SceneIoError("scene io: read failed: " + path);
    return scene_from_json(text);
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw SceneIoError("scene io: cannot open for writing: " + path);
    out << scene_to_json(scene) << '\n';
    if (!out) throw SceneIoError("scene io: write failed: " + path);
}

bool scenes_equal(const Scene& a, const Scene& b) {
    auto cameras_equal = [](const Camera& x, const Camera& y) {
        return x.eye == y.eye && x.look_at == y.look_at && x.up == y.up &&
               x.vertical_fov == y.vertical_fov && x.near_plane == y.near_plane &&
               x.far_plane == y.far_plane;
    };
    if (!cameras_equal(a.camera, b.camera) || a.meshes.size() != b.meshes.size()) return false;
    for (std::size_t m = 0; m < a.meshes.size(); ++m) {
        const TriangleMesh& ma = a.meshes[m];
        const TriangleMesh& mb = b.meshes[m];
        if (ma.object_id != mb.object_id || ma.vertices != mb.vertices ||
            ma.vertex_colors != mb.vertex_colors || ma.triangles != mb.triangles) {
            return false;
        }
        if (ma.alpha.index() != mb.alpha.index()) return false;
        if (const auto* ca = std::get_if<AlphaConstant>(&ma.alpha)) {
            if (ca->value != std::get<AlphaConstant>(mb.alpha).value) return false;
        } else {
            const auto& ra = std::get<AlphaPerPixelRandom>(ma.alpha);
            const auto& rb = std::get<AlphaPerPixelRandom>(mb.alpha);
            if (ra.min != rb.min || ra.max != rb.max || ra.seed != rb.seed) return false;
        }
    }
    return true;
}

}  // namespace oitlab
