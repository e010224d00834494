#pragma once

#include "oitlab/fragment.hpp"

namespace oitlab {

// Far-to-near sort: z non-increasing, depth ties broken by ascending seq.
// Idempotent; a permutation of the input.
PixelFragments sort_by_depth(PixelFragments list);
void sort_by_depth_in_place(PixelFragments& list);

// The exact over-compositing recursion, evaluated farthest to closest:
//   C(0) = background, C(i) = a_i*C_i + (1-a_i)*C(i-1).
// Requires a sorted list; the empty list returns the background.
Rgb composite_exact(const PixelFragments& sorted, const Rgb& background);

// prod(1 - a_i) over the list in its stored order; 1 for the empty list.
float transmittance_product(const PixelFragments& list);

}  // namespace oitlab
