#include "oitlab/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oitlab/parallel.hpp"
#include "oitlab/rng.hpp"

namespace oitlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr std::int64_t kSubpixel = 256;  // 8 fractional bits
constexpr double kGuardBand = 2.0;       // side-plane clip at |ndc| <= 2

// A vertex mid-pipeline: view-space position plus the attributes that
// interpolate linearly along 3D edges during clipping.
struct ClipVertex {
    double vx, vy, vz;
    Rgb color;
};

struct CameraBasis {
    Vec3 eye, right, up, forward;
    double half_w, half_h;  // frustum half-extents at unit depth
    double near_plane, far_plane;
};

CameraBasis make_basis(const Camera& cam, int width, int height) {
    CameraBasis b;
    b.eye = cam.eye;
    b.forward = normalized(cam.look_at - cam.eye);
    b.right = normalized(cross(b.forward, cam.up));
    b.up = cross(b.right, b.forward);
    b.half_h = std::tan(cam.vertical_fov * 0.5 * kPi / 180.0);
    b.half_w = b.half_h * static_cast<double>(width) / height;
    b.near_plane = cam.near_plane;
    b.far_plane = cam.far_plane;
    return b;
}

ClipVertex to_view(const CameraBasis& b, const Vec3& p, const Rgb& c) {
    Vec3 d = p - b.eye;
    return {dot(d, b.right), dot(d, b.up), dot(d, b.forward), c};
}

ClipVertex lerp(const ClipVertex& a, const ClipVertex& v, double t) {
    auto mix = [t](double x, double y) { return x + (y - x) * t; };
    Rgb c(static_cast<float>(mix(a.color.x, v.color.x)),
          static_cast<float>(mix(a.color.y, v.color.y)),
          static_cast<float>(mix(a.color.z, v.color.z)));
    return {mix(a.vx, v.vx), mix(a.vy, v.vy), mix(a.vz, v.vz), c};
}

// Sutherland-Hodgman against one plane f(v) >= 0, f linear in view space.
template <typename PlaneFn>
void clip_against(std::vector<ClipVertex>& poly, std::vector<ClipVertex>& scratch,
                  PlaneFn plane) {
    scratch.clear();
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const ClipVertex& a = poly[i];
        const ClipVertex& b = poly[(i + 1) % n];
        double fa = plane(a);
        double fb = plane(b);
        if (fa >= 0.0) scratch.push_back(a);
        if ((fa >= 0.0) != (fb >= 0.0)) {
            scratch.push_back(lerp(a, b, fa / (fa - fb)));
        }
    }
    poly.swap(scratch);
}

// One screen-snapped triangle ready for coverage tests.
struct TriSetup {
    std::int64_t x[3], y[3];   // fixed-point screen coords
    double inv_vz[3];
    double color_over_vz[3][3];
    int min_px, max_px, min_py, max_py;  // inclusive pixel bounds
    std::uint32_t object_id;
    const AlphaMode* alpha;
};

std::int64_t orient2d(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by,
                      std::int64_t cx, std::int64_t cy) {
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
}

// Edge inclusion for exact-boundary samples: top edges (horizontal, interior
// below) and left edges (pointing up in y-down screen coords) own their
// pixels; the opposite directions do not, so two triangles sharing an edge
// never both emit.
bool edge_is_top_left(std::int64_t ex, std::int64_t ey) {
    if (ey == 0) return ex > 0;
    return ey < 0;
}

struct FrameTarget {
    FrameFragmentBuffer* frame;
    int row_begin, row_end;  // this worker's rows
};

void raster_rows(const TriSetup& t, FrameTarget target, const CameraBasis& basis) {
    const int y0 = std::max(t.min_py, target.row_begin);
    const int y1 = std::min(t.max_py, target.row_end - 1);
    if (y0 > y1) return;

    const std::int64_t area =
        orient2d(t.x[0], t.y[0], t.x[1], t.y[1], t.x[2], t.y[2]);
    const double inv_area = 1.0 / static_cast<double>(area);

    // Per-edge zero-weight inclusion bias.
    const bool accept0 = edge_is_top_left(t.x[2] - t.x[1], t.y[2] - t.y[1]);
    const bool accept1 = edge_is_top_left(t.x[0] - t.x[2], t.y[0] - t.y[2]);
    const bool accept2 = edge_is_top_left(t.x[1] - t.x[0], t.y[1] - t.y[0]);

    FrameFragmentBuffer& frame = *target.frame;
    const double depth_span = basis.far_plane - basis.near_plane;

    for (int py = y0; py <= y1; ++py) {
        const std::int64_t sy = static_cast<std::int64_t>(py) * kSubpixel + kSubpixel / 2;
        for (int px = t.min_px; px <= t.max_px; ++px) {
            const std::int64_t sx = static_cast<std::int64_t>(px) * kSubpixel + kSubpixel / 2;
            const std::int64_t w0 = orient2d(t.x[1], t.y[1], t.x[2], t.y[2], sx, sy);
            const std::int64_t w1 = orient2d(t.x[2], t.y[2], t.x[0], t.y[0], sx, sy);
            const std::int64_t w2 = orient2d(t.x[0], t.y[0], t.x[1], t.y[1], sx, sy);
            if (w0 < 0 || w1 < 0 || w2 < 0) continue;
            if ((w0 == 0 && !accept0) || (w1 == 0 && !accept1) || (w2 == 0 && !accept2)) {
                continue;
            }

            const double b0 = static_cast<double>(w0) * inv_area;
            const double b1 = static_cast<double>(w1) * inv_area;
            const double b2 = static_cast<double>(w2) * inv_area;
            const double inv_vz = b0 * t.inv_vz[0] + b1 * t.inv_vz[1] + b2 * t.inv_vz[2];
            const double vz = 1.0 / inv_vz;
            const double z = (vz - basis.near_plane) / depth_span;
            if (z < 0.0 || z > 1.0) continue;

            Rgb color;
            color.x = static_cast<float>(
                vz * (b0 * t.color_over_vz[0][0] + b1 * t.color_over_vz[1][0] +
                      b2 * t.color_over_vz[2][0]));
            color.y = static_cast<float>(
                vz * (b0 * t.color_over_vz[0][1] + b1 * t.color_over_vz[1][1] +
                      b2 * t.color_over_vz[2][1]));
            color.z = static_cast<float>(
                vz * (b0 * t.color_over_vz[0][2] + b1 * t.color_over_vz[1][2] +
                      b2 * t.color_over_vz[2][2]));

            const std::uint64_t pixel_index =
                static_cast<std::uint64_t>(py) * frame.width + px;
            float alpha;
            if (const auto* constant = std::get_if<AlphaConstant>(t.alpha)) {
                alpha = constant->value;
            } else {
                const auto& rnd = std::get<AlphaPerPixelRandom>(*t.alpha);
                alpha = rnd.min + (rnd.max - rnd.min) *
                                      static_cast<float>(per_pixel_uniform(
                                          rnd.seed, t.object_id, pixel_index));
            }

            PixelFragments& pixel = frame.pixels[pixel_index];
            Fragment frag;
            frag.z = static_cast<float>(z);
            frag.color = Rgb(clamp01(color.x), clamp01(color.y), clamp01(color.z));
            frag.alpha = alpha;
            frag.seq = static_cast<std::uint32_t>(pixel.fragments.size());
            pixel.fragments.push_back(frag);
        }
    }
}

}  // namespace

FrameFragmentBuffer rasterize_scene(const Scene& scene, int width, int height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("rasterize_scene: width and height must be >= 1");
    }

    const CameraBasis basis = make_basis(scene.camera, width, height);
    FrameFragmentBuffer frame(width, height);

    // Pass 1 (serial): clip, project, and snap every triangle in submission
    // order. The resulting list fixes the per-pixel emission order.
    std::vector<TriSetup> setups;
    std::vector<ClipVertex> poly, scratch;
    for (const TriangleMesh& mesh : scene.meshes) {
        for (const auto& tri : mesh.triangles) {
            poly.clear();
            for (int k = 0; k < 3; ++k) {
                poly.push_back(to_view(basis, mesh.vertices[tri[k]],
                                       mesh.vertex_colors[tri[k]]));
            }
            clip_against(poly, scratch,
                         [&](const ClipVertex& v) { return v.vz - basis.near_plane; });
            clip_against(poly, scratch, [&](const ClipVertex& v) {
                return v.vx + kGuardBand * basis.half_w * v.vz;
            });
            clip_against(poly, scratch, [&](const ClipVertex& v) {
                return kGuardBand * basis.half_w * v.vz - v.vx;
            });
            clip_against(poly, scratch, [&](const ClipVertex& v) {
                return v.vy + kGuardBand * basis.half_h * v.vz;
            });
            clip_against(poly, scratch, [&](const ClipVertex& v) {
                return kGuardBand * basis.half_h * v.vz - v.vy;
            });
            if (poly.size() < 3) continue;

            // Project the clipped polygon and snap to the subpixel grid.
            std::vector<std::int64_t> xs(poly.size()), ys(poly.size());
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const double ndc_x = poly[i].vx / (poly[i].vz * basis.half_w);
                const double ndc_y = poly[i].vy / (poly[i].vz * basis.half_h);
                const double sx = (ndc_x + 1.0) * 0.5 * width;
                const double sy = (1.0 - ndc_y) * 0.5 * height;
                xs[i] = std::llround(sx * kSubpixel);
                ys[i] = std::llround(sy * kSubpixel);
            }

            // Fan-triangulate; shared fan edges stay watertight under the
            // top-left rule.
            for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
                std::size_t idx[3] = {0, i, i + 1};
                std::int64_t area = orient2d(xs[idx[0]], ys[idx[0]], xs[idx[1]],
                                             ys[idx[1]], xs[idx[2]], ys[idx[2]]);
                if (area == 0) continue;
                if (area < 0) std::swap(idx[1], idx[2]);  // both windings render

                TriSetup t;
                std::int64_t min_x = INT64_MAX, max_x = INT64_MIN;
                std::int64_t min_y = INT64_MAX, max_y = INT64_MIN;
                for (int k = 0; k < 3; ++k) {
                    const ClipVertex& v = poly[idx[k]];
                    t.x[k] = xs[idx[k]];
                    t.y[k] = ys[idx[k]];
                    t.inv_vz[k] = 1.0 / v.vz;
                    t.color_over_vz[k][0] = v.color.x / v.vz;
                    t.color_over_vz[k][1] = v.color.y / v.vz;
                    t.color_over_vz[k][2] = v.color.z / v.vz;
                    min_x = std::min(min_x, t.x[k]);
                    max_x = std::max(max_x, t.x[k]);
                    min_y = std::min(min_y, t.y[k]);
                    max_y = std::max(max_y, t.y[k]);
                }
                // Pixel centers sit at multiples of kSubpixel plus half, so a
                // center is covered only if its snapped coordinate lies in
                // the open-ended fixed-point bounding box.
                t.min_px = static_cast<int>(
                    std::max<std::int64_t>(0, (min_x - kSubpixel / 2 + kSubpixel - 1) / kSubpixel));
                t.max_px = static_cast<int>(
                    std::min<std::int64_t>(width - 1, (max_x - kSubpixel / 2) / kSubpixel));
                t.min_py = static_cast<int>(
                    std::max<std::int64_t>(0, (min_y - kSubpixel / 2 + kSubpixel - 1) / kSubpixel));
                t.max_py = static_cast<int>(
                    std::min<std::int64_t>(height - 1, (max_y - kSubpixel / 2) / kSubpixel));
                if (t.min_px > t.max_px || t.min_py > t.max_py) continue;

                t.object_id = mesh.object_id;
                t.alpha = &mesh.alpha;
                setups.push_back(t);
            }
        }
    }

    // Pass 2 (parallel): each worker owns a contiguous row band and walks the
    // setup list in order, so every pixel sees appends in submission order
    // regardless of the worker count.
    const int workers = std::min(max_threads(), height);
    const int rows_per_chunk = (height + workers - 1) / workers;
    parallel_chunks(static_cast<std::size_t>(workers), [&](std::size_t chunk) {
        FrameTarget target;
        target.frame = &frame;
        target.row_begin = static_cast<int>(chunk) * rows_per_chunk;
        target.row_end = std::min(height, target.row_begin + rows_per_chunk);
        for (const TriSetup& t : setups) raster_rows(t, target, basis);
    });

    return frame;
}

Scene gen_layered_scene(std::uint64_t seed, int layers, float alpha_min, float alpha_max,
                        std::uint64_t palette_seed) {
    if (layers < 1 || layers > 64) {
        throw std::invalid_argument("gen_layered_scene: layers must be in [1, 64]");
    }
    if (!(0.0f <= alpha_min && alpha_min <= alpha_max && alpha_max <= 1.0f)) {
        throw std::invalid_argument(
            "gen_layered_scene: need 0 <= alpha_min <= alpha_max <= 1");
    }

    Scene scene;
    scene.camera.eye = {0.0f, 0.0f, 0.0f};
    scene.camera.look_at = {0.0f, 0.0f, 1.0f};
    scene.camera.up = {0.0f, 1.0f, 0.0f};
    scene.camera.vertical_fov = 60.0f;
    scene.camera.near_plane = 1.0f;
    scene.camera.far_plane = 11.0f;

    SplitMix64 geometry_rng(seed);
    SplitMix64 palette_rng(palette_seed);
    const double tan_half = std::tan(30.0 * kPi / 180.0);
    const double span = scene.camera.far_plane - scene.camera.near_plane;

    for (int i = 0; i < layers; ++i) {
        // Jittered slot keeps depths distinct and strictly increasing.
        const double jitter = geometry_rng.next_double(-0.4, 0.4);
        const double depth =
            scene.camera.near_plane + span * (i + 1 + jitter) / (layers + 1);
        // Oversized so the quad covers the frame for any aspect up to 4:1.
        const float extent = static_cast<float>(tan_half * depth * 4.0);
        const float d = static_cast<float>(depth);

        TriangleMesh mesh;
        mesh.object_id = static_cast<std::uint32_t>(i);
        mesh.vertices = {{-extent, -extent, d},
                         {extent, -extent, d},
                         {extent, extent, d},
                         {-extent, extent, d}};
        mesh.vertex_colors.reserve(4);
        for (int v = 0; v < 4; ++v) {
            mesh.vertex_colors.push_back(
                Rgb(static_cast<float>(palette_rng.next_double()),
                    static_cast<float>(palette_rng.next_double()),
                    static_cast<float>(palette_rng.next_double())));
        }
        mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
        mesh.alpha = AlphaPerPixelRandom{alpha_min, alpha_max, geometry_rng.next_u64()};
        scene.meshes.push_back(std::move(mesh));
    }
    return scene;
}

}  // namespace oitlab
