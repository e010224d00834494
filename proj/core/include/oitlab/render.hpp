#pragma once

#include <optional>
#include <string>

#include "oitlab/fragment.hpp"
#include "oitlab/image.hpp"
#include "oitlab/mlp.hpp"

namespace oitlab {

// Applies the configured resolver per pixel and clamps at image write.
// The DFAOIT resolver requires a network.
ImageRGB render_frame(const FrameFragmentBuffer& frame, const RenderConfig& config,
                      const MlpWeights* net = nullptr);

std::optional<Resolver> resolver_from_name(const std::string& name);
std::string resolver_name(Resolver resolver);

}  // namespace oitlab
