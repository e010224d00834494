#include "oitlab/raster.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "oitlab/compositing.hpp"
#include "oitlab/render.hpp"

namespace oitlab {
namespace {

constexpr float kTanHalfFov = 0.57735026919f;  // tan(30 deg)

Camera test_camera() {
    Camera cam;
    cam.eye = {0, 0, 0};
    cam.look_at = {0, 0, 1};
    cam.up = {0, 1, 0};
    cam.vertical_fov = 60.0f;
    cam.near_plane = 1.0f;
    cam.far_plane = 11.0f;
    return cam;
}

// Quad that maps exactly onto the full screen at the given view depth.
TriangleMesh screen_quad(float depth, float aspect, float alpha, std::uint32_t object_id) {
    const float hy = kTanHalfFov * depth;
    const float hx = hy * aspect;
    TriangleMesh mesh;
    mesh.object_id = object_id;
    mesh.vertices = {{-hx, -hy, depth}, {hx, -hy, depth}, {hx, hy, depth}, {-hx, hy, depth}};
    mesh.vertex_colors = {Rgb(1, 0, 0), Rgb(0, 1, 0), Rgb(0, 0, 1), Rgb(1, 1, 0)};
    mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
    mesh.alpha = AlphaConstant{alpha};
    return mesh;
}

bool frames_identical(const FrameFragmentBuffer& a, const FrameFragmentBuffer& b) {
    if (a.width != b.width || a.height != b.height) return false;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const auto& fa = a.pixels[i].fragments;
        const auto& fb = b.pixels[i].fragments;
        if (fa.size() != fb.size()) return false;
        for (std::size_t j = 0; j < fa.size(); ++j) {
            if (fa[j].z != fb[j].z || !(fa[j].color == fb[j].color) ||
                fa[j].alpha != fb[j].alpha || fa[j].seq != fb[j].seq) {
                return false;
            }
        }
    }
    return true;
}

TEST(Rasterize, FullScreenQuadCoversEveryPixelExactlyOnce) {
    Scene scene;
    scene.camera = test_camera();
    scene.meshes.push_back(screen_quad(4.0f, 1.0f, 0.5f, 0));

    // Square frame: the shared diagonal passes through pixel centers, which
    // exercises the fill-rule tie-break.
    FrameFragmentBuffer frame = rasterize_scene(scene, 64, 64);
    for (const auto& px : frame.pixels) {
        ASSERT_EQ(px.size(), 1u);
        EXPECT_FLOAT_EQ(px.fragments[0].alpha, 0.5f);
    }
}

TEST(Rasterize, StackedQuadsGiveStrictlyIncreasingDepth) {
    const int layers = 7;
    Scene scene = gen_layered_scene(99, layers, 0.2f, 0.8f, 123);
    FrameFragmentBuffer frame = rasterize_scene(scene, 48, 32);
    for (const auto& px : frame.pixels) {
        ASSERT_EQ(px.size(), static_cast<std::size_t>(layers));
        for (std::size_t i = 1; i < px.size(); ++i) {
            EXPECT_GT(px.fragments[i].z, px.fragments[i - 1].z);
        }
        for (const auto& f : px.fragments) {
            EXPECT_GE(f.z, 0.0f);
            EXPECT_LE(f.z, 1.0f);
            EXPECT_GE(f.alpha, 0.2f);
            EXPECT_LE(f.alpha, 0.8f);
        }
    }
}

TEST(Rasterize, TriangleBehindFarPlaneEmitsNothing) {
    Scene scene;
    scene.camera = test_camera();
    scene.meshes.push_back(screen_quad(20.0f, 1.0f, 0.5f, 0));  // far is 11
    FrameFragmentBuffer frame = rasterize_scene(scene, 16, 16);
    for (const auto& px : frame.pixels) EXPECT_EQ(px.size(), 0u);
}

TEST(Rasterize, GeometryBeforeNearPlaneIsClipped) {
    Scene scene;
    scene.camera = test_camera();
    scene.meshes.push_back(screen_quad(0.5f, 1.0f, 0.5f, 0));  // near is 1
    FrameFragmentBuffer frame = rasterize_scene(scene, 16, 16);
    for (const auto& px : frame.pixels) EXPECT_EQ(px.size(), 0u);
}

TEST(Rasterize, GeometryBehindCameraIsClipped) {
    Scene scene;
    scene.camera = test_camera();
    TriangleMesh mesh = screen_quad(3.0f, 1.0f, 0.5f, 0);
    for (auto& v : mesh.vertices) v.z = -v.z;
    scene.meshes.push_back(mesh);
    FrameFragmentBuffer frame = rasterize_scene(scene, 16, 16);
    for (const auto& px : frame.pixels) EXPECT_EQ(px.size(), 0u);
}

TEST(Rasterize, DegenerateTriangleEmitsNothing) {
    Scene scene;
    scene.camera = test_camera();
    TriangleMesh mesh;
    mesh.object_id = 0;
    mesh.vertices = {{0, 0, 3}, {1, 1, 3}, {2, 2, 3}};  // collinear
    mesh.vertex_colors = {Rgb(1, 1, 1), Rgb(1, 1, 1), Rgb(1, 1, 1)};
    mesh.triangles = {{0, 1, 2}};
    scene.meshes.push_back(mesh);
    FrameFragmentBuffer frame = rasterize_scene(scene, 32, 32);
    for (const auto& px : frame.pixels) EXPECT_EQ(px.size(), 0u);
}

TEST(Rasterize, DeterministicAcrossThreadCounts) {
    Scene scene = gen_layered_scene(7, 9, 0.1f, 0.9f, 21);
    setenv("OITLAB_THREADS", "1", 1);
    FrameFragmentBuffer serial = rasterize_scene(scene, 40, 56);
    setenv("OITLAB_THREADS", "4", 1);
    FrameFragmentBuffer parallel = rasterize_scene(scene, 40, 56);
    unsetenv("OITLAB_THREADS");
    EXPECT_TRUE(frames_identical(serial, parallel));
}

TEST(Rasterize, ReRenderReproducesPerPixelAlphasExactly) {
    Scene scene = gen_layered_scene(31, 5, 0.05f, 0.95f, 77);
    FrameFragmentBuffer a = rasterize_scene(scene, 20, 20);
    FrameFragmentBuffer b = rasterize_scene(scene, 20, 20);
    EXPECT_TRUE(frames_identical(a, b));
}

TEST(Rasterize, RejectsBadResolution) {
    Scene scene = gen_layered_scene(1, 2, 0.1f, 0.2f, 1);
    EXPECT_THROW(rasterize_scene(scene, 0, 16), std::invalid_argument);
}

TEST(Rasterize, PerspectiveDepthMatchesAnalyticValue) {
    Scene scene;
    scene.camera = test_camera();
    scene.meshes.push_back(screen_quad(6.0f, 1.0f, 1.0f, 0));
    FrameFragmentBuffer frame = rasterize_scene(scene, 8, 8);
    // Planar quad at view depth 6 with near 1, far 11: z = (6-1)/10 = 0.5.
    for (const auto& px : frame.pixels) {
        ASSERT_EQ(px.size(), 1u);
        EXPECT_NEAR(px.fragments[0].z, 0.5f, 1e-5f);
    }
}

TEST(GenLayeredScene, DeterministicForFixedSeeds) {
    Scene a = gen_layered_scene(5, 12, 0.01f, 0.85f, 9);
    Scene b = gen_layered_scene(5, 12, 0.01f, 0.85f, 9);
    FrameFragmentBuffer fa = rasterize_scene(a, 24, 24);
    FrameFragmentBuffer fb = rasterize_scene(b, 24, 24);
    EXPECT_TRUE(frames_identical(fa, fb));
}

TEST(GenLayeredScene, SingleOpaqueLayerRendersItsOwnColor) {
    Scene scene = gen_layered_scene(3, 1, 1.0f, 1.0f, 4);
    FrameFragmentBuffer frame = rasterize_scene(scene, 24, 24);
    RenderConfig config;
    config.background = Rgb(0, 0, 0);
    config.resolver = Resolver::Exact;
    ImageRGB img = render_frame(frame, config);
    for (int y = 0; y < 24; ++y) {
        for (int x = 0; x < 24; ++x) {
            ASSERT_EQ(frame.at(x, y).size(), 1u);
            EXPECT_LE(max_abs_diff(img.at(x, y), frame.at(x, y).fragments[0].color), 1e-6f);
        }
    }
}

TEST(GenLayeredScene, RejectsBadParameters) {
    EXPECT_THROW(gen_layered_scene(1, 0, 0.1f, 0.2f, 1), std::invalid_argument);
    EXPECT_THROW(gen_layered_scene(1, 65, 0.1f, 0.2f, 1), std::invalid_argument);
    EXPECT_THROW(gen_layered_scene(1, 4, 0.5f, 0.2f, 1), std::invalid_argument);
    EXPECT_THROW(gen_layered_scene(1, 4, -0.1f, 0.2f, 1), std::invalid_argument);
}

}  // namespace
}  // namespace oitlab
