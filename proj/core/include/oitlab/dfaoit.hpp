#pragma once

#include "oitlab/features.hpp"
#include "oitlab/image.hpp"
#include "oitlab/mlp.hpp"

namespace oitlab {

// Network prediction of the transparent-surfaces color C_t (background
// excluded). Channels land in (0,1) via the sigmoid output.
Rgb infer_transparent_color(const PixelFeatureRecord& rec, const MlpWeights& net);

// Final composition: C_t + C_b * prod(1 - a_i). Clamping happens at image
// write, not here.
Rgb compose_final(const Rgb& transparent_color, const Rgb& background, float bg_product);

// Second pass over extracted features. Pixels with n <= 2 bypass the network
// and composite exactly (their tail features are degenerate and the exact
// answer is already in the record).
ImageRGB resolve_dfaoit_frame(const DfaoitFrame& features, const MlpWeights& net,
                              const Rgb& background);

// Both passes: feature extraction, then inference + composition.
ImageRGB render_dfaoit(const FrameFragmentBuffer& frame, const MlpWeights& net,
                       const Rgb& background);

}  // namespace oitlab
