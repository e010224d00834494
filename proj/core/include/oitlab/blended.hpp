#pragma once

#include <functional>

#include "oitlab/fragment.hpp"

namespace oitlab {

// Depth/opacity weight for WBOIT; must be positive for a > 0 and monotone
// non-increasing in z.
using WeightFn = std::function<float(float z, float a)>;

// The recommended tuned weight: a * max(1e-2, 3e3 * (1-z)^3).
float weight_default(float z, float a);

// Order-free per-pixel sums shared by the blended operators. All fields are
// permutation-invariant functions of the fragment multiset.
struct BlendAccumulators {
    Rgb sum_premult;              // sum a_i * C_i
    float sum_alpha = 0.0f;       // sum a_i
    int count = 0;                // n
    float product = 1.0f;         // prod (1 - a_i)
    Rgb sum_weighted_premult;     // sum C_i * a_i * w(z_i, a_i)
    float sum_weighted_alpha = 0.0f;  // sum a_i * w(z_i, a_i)
};

BlendAccumulators accumulate_blend(const PixelFragments& list, const WeightFn& w);

// Weighted-sum blending: sum C_i a_i + C_b (1 - sum a_i). Intentionally not
// clamped; the saturation failure for high opacity stays observable until
// image write.
Rgb wsum(const PixelFragments& list, const Rgb& background);

// Weighted-average blending: C_avg (1-(1-a_avg)^n) + C_b (1-a_avg)^n with
// C_avg = sum C_i a_i / sum a_i and a_avg = sum a_i / n. All-zero alpha with
// n > 0 uses C_avg = 0, which yields the background.
Rgb wavg(const PixelFragments& list, const Rgb& background);

// Weighted-blended OIT: C_wavg * a_net + C_b (1 - a_net) with
// C_wavg = sum C_i a_i w(z_i,a_i) / sum a_i w(z_i,a_i) and
// a_net = 1 - prod(1 - a_i).
Rgb wboit(const PixelFragments& list, const Rgb& background, const WeightFn& w);
Rgb wboit(const PixelFragments& list, const Rgb& background);

// Exact compositing of the k closest fragments over a WAVG tail of the rest.
// Equals composite_exact when n <= k.
Rgb hybrid_transparency(const PixelFragments& list, const Rgb& background, int k);

}  // namespace oitlab
