#include "oitlab/scene_io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace oitlab {
namespace {

const char* kMinimalScene = R"({
  "version": 1,
  "camera": {"eye": [0,0,0], "look_at": [0,0,1], "up": [0,1,0],
             "fov_deg": 60.0, "near": 1.0, "far": 11.0},
  "meshes": [{
    "object_id": 0,
    "vertices": [[-1,-1,3],[1,-1,3],[0,1,3]],
    "colors": [[1,0,0],[0,1,0],[0,0,1]],
    "triangles": [[0,1,2]],
    "alpha": {"constant": 0.5}
  }]
})";

TEST(SceneJson, MinimalSceneParses) {
    Scene scene = scene_from_json(kMinimalScene);
    ASSERT_EQ(scene.meshes.size(), 1u);
    EXPECT_EQ(scene.meshes[0].triangles.size(), 1u);
    EXPECT_EQ(scene.meshes[0].vertices.size(), 3u);
    EXPECT_FLOAT_EQ(std::get<AlphaConstant>(scene.meshes[0].alpha).value, 0.5f);
}

TEST(SceneJson, AlphaOutOfRangeNamesField) {
    std::string text = kMinimalScene;
    text.replace(text.find("0.5"), 3, "1.2");
    try {
        scene_from_json(text);
        FAIL() << "expected SceneInvariantError";
    } catch (const SceneInvariantError& e) {
        EXPECT_NE(std::string(e.field()).find("alpha"), std::string::npos);
    }
}

TEST(SceneJson, RoundTripEquality) {
    Scene scene = gen_layered_scene(42, 6, 0.1f, 0.9f, 17);
    Scene back = scene_from_json(scene_to_json(scene));
    EXPECT_TRUE(scenes_equal(scene, back));
}

TEST(SceneJson, MalformedJsonIsDistinct) {
    EXPECT_THROW(scene_from_json("{ not json"), SceneJsonError);
}

TEST(SceneJson, MissingFieldNamesIt) {
    std::string text = kMinimalScene;
    text.replace(text.find("\"up\""), 4, "\"upx\"");
    try {
        scene_from_json(text);
        FAIL() << "expected SceneSchemaError";
    } catch (const SceneSchemaError& e) {
        EXPECT_NE(std::string(e.field()).find("up"), std::string::npos);
    }
}

TEST(SceneJson, WrongVersionRejected) {
    std::string text = kMinimalScene;
    text.replace(text.find("\"version\": 1"), 12, "\"version\": 2");
    EXPECT_THROW(scene_from_json(text), SceneSchemaError);
}

TEST(SceneJson, DuplicateObjectIdsRejected) {
    Scene scene = gen_layered_scene(1, 2, 0.1f, 0.2f, 1);
    scene.meshes[1].object_id = scene.meshes[0].object_id;
    EXPECT_THROW(validate_scene(scene), SceneInvariantError);
}

TEST(SceneJson, EmptySceneRejected) {
    Scene scene;
    EXPECT_THROW(validate_scene(scene), SceneInvariantError);
}

TEST(SceneJson, UpParallelToViewRejected) {
    Scene scene = gen_layered_scene(1, 2, 0.1f, 0.2f, 1);
    scene.camera.up = {0, 0, 2};  // parallel to look direction
    EXPECT_THROW(validate_scene(scene), SceneInvariantError);
}

TEST(SceneFile, LoadSaveRoundTrip) {
    Scene scene = gen_layered_scene(8, 4, 0.2f, 0.7f, 3);
    auto path = std::filesystem::temp_directory_path() / "oitlab_scene_test.json";
    save_scene(scene, path.string());
    Scene back = load_scene(path.string());
    EXPECT_TRUE(scenes_equal(scene, back));
    std::filesystem::remove(path);
}

TEST(SceneFile, MissingFileIsIoError) {
    EXPECT_THROW(load_scene("/nonexistent/oitlab_scene.json"), SceneIoError);
}

}  // namespace
}  // namespace oitlab
