#pragma once

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "oitlab/fragment.hpp"
#include "oitlab/vec3.hpp"

namespace oitlab {

struct Camera {
    Vec3 eye;
    Vec3 look_at;
    Vec3 up{0.0f, 1.0f, 0.0f};
    float vertical_fov = 60.0f;  // degrees
    float near_plane = 0.1f;
    float far_plane = 100.0f;
};

struct AlphaConstant {
    float value = 1.0f;
};

// Opacity drawn per (object, pixel) from the splitmix64 hash of
// seed ^ (object_id * 0x9E3779B97F4A7C15) ^ pixel_index, mapped to
// [min, max]. Every fragment an object emits into a pixel shares the draw.
struct AlphaPerPixelRandom {
    float min = 0.0f;
    float max = 1.0f;
    std::uint64_t seed = 0;
};

using AlphaMode = std::variant<AlphaConstant, AlphaPerPixelRandom>;

struct TriangleMesh {
    std::uint32_t object_id = 0;
    std::vector<Vec3> vertices;
    std::vector<Rgb> vertex_colors;  // one per vertex
    std::vector<std::array<std::uint32_t, 3>> triangles;
    AlphaMode alpha = AlphaConstant{1.0f};
};

struct Scene {
    Camera camera;
    std::vector<TriangleMesh> meshes;
};

// Rasterizes every triangle with pixel-center sampling at (x+0.5, y+0.5) and
// a top-left fill rule on a 1/256-subpixel integer grid, so coverage is
// watertight across shared edges and bit-identical across thread counts.
// Fragment z is perspective-correct view depth mapped linearly onto [0,1]
// between the near and far planes; color is perspective-correct barycentric
// interpolation of vertex colors. Geometry behind the near plane is clipped;
// fragments beyond the far plane are discarded. seq follows
// (mesh, triangle, pixel emission) order.
FrameFragmentBuffer rasterize_scene(const Scene& scene, int width, int height);

// `layers` camera-facing quads at distinct, strictly increasing depths, each
// oversized to cover the full frame, with pseudo-random vertex colors from
// palette_seed and per-pixel-random opacity in [alpha_min, alpha_max] from a
// per-layer seed derived from `seed`. Deterministic for fixed seeds.
Scene gen_layered_scene(std::uint64_t seed, int layers, float alpha_min, float alpha_max,
                        std::uint64_t palette_seed);

}  // namespace oitlab
