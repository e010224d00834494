#pragma once

#include <array>

#include "oitlab/fragment.hpp"

namespace oitlab {

// The 10 network inputs. With sorted far-to-near indexing (f_n closest):
//   g_front     = a_n*C_n + (1-a_n)*a_{n-1}*C_{n-1}   (exact front-two composite)
//   a_avg_tail  = sum_{i=1..n-2} a_i / n
//   c_avg_tail  = sum_{i=1..n-2} C_i / n
//   c_acc       = sum_{i=1..n} a_i*C_i
// Every entry is in [0,1] except c_acc, which is only bounded below by 0.
struct FeatureVector {
    Rgb g_front;
    float a_avg_tail = 0.0f;
    Rgb c_avg_tail;
    Rgb c_acc;

    std::array<float, 10> to_array() const {
        return {g_front.x, g_front.y,    g_front.z,    a_avg_tail, c_avg_tail.x,
                c_avg_tail.y, c_avg_tail.z, c_acc.x,   c_acc.y,    c_acc.z};
    }
};

// Mirrors the four feature buffers of the two-pass pipeline: fragment count
// plus the closest-two fragments, the accumulators, and the background
// transmittance product.
struct PixelFeatureRecord {
    FeatureVector features;
    int n = 0;
    float bg_product = 1.0f;
    std::array<Fragment, 2> front2{};  // [0] = closest, [1] = second closest
};

struct DfaoitFrame {
    int width = 0;
    int height = 0;
    std::vector<PixelFeatureRecord> records;
};

// Sorts internally; permutation-invariant in its input.
PixelFeatureRecord extract_features(const PixelFragments& list);

DfaoitFrame extract_frame_features(const FrameFragmentBuffer& frame);

}  // namespace oitlab
