#pragma once

#include <cstdint>
#include <vector>

#include "oitlab/vec3.hpp"

namespace oitlab {

// One rasterized surface sample covering a pixel.
// z is normalized depth in [0,1] (0 = near plane), color is linear RGB,
// alpha is opacity, seq is the submission-order ordinal used to break
// depth ties deterministically.
struct Fragment {
    float z = 0.0f;
    Rgb color;
    float alpha = 0.0f;
    std::uint32_t seq = 0;
};

// A pixel's fragment list. sorted is true when fragments are in far-to-near
// order: z non-increasing, ties broken by ascending seq. In sorted order
// index 0 is the farthest fragment and index n-1 the closest.
struct PixelFragments {
    std::vector<Fragment> fragments;
    bool sorted = false;

    std::size_t size() const { return fragments.size(); }
    bool empty() const { return fragments.empty(); }
};

// Per-pixel fragment lists for a whole frame (the A-buffer), row-major,
// top row first.
struct FrameFragmentBuffer {
    int width = 0;
    int height = 0;
    std::vector<PixelFragments> pixels;

    FrameFragmentBuffer() = default;
    FrameFragmentBuffer(int w, int h)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h) {}

    PixelFragments& at(int x, int y) {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
    const PixelFragments& at(int x, int y) const {
        return pixels[static_cast<std::size_t>(y) * width + x];
    }
};

enum class Resolver { Exact, Wsum, Wavg, Wboit, Ht, Dfaoit };

struct RenderConfig {
    Rgb background;
    Resolver resolver = Resolver::Exact;
    int ht_k = 2;  // only read by the HT resolver
};

}  // namespace oitlab
