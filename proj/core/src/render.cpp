#include "oitlab/render.hpp"

#include <stdexcept>

#include "oitlab/blended.hpp"
#include "oitlab/compositing.hpp"
#include "oitlab/dfaoit.hpp"
#include "oitlab/parallel.hpp"

namespace oitlab {

ImageRGB render_frame(const FrameFragmentBuffer& frame, const RenderConfig& config,
                      const MlpWeights* net) {
    if (config.resolver == Resolver::Dfaoit) {
        if (!net) throw std::invalid_argument("render: DFAOIT requires a network");
        return render_dfaoit(frame, *net, config.background);
    }

    ImageRGB img(frame.width, frame.height);
    parallel_chunks(static_cast<std::size_t>(frame.height), [&](std::size_t row) {
        const std::size_t base = row * frame.width;
        for (int x = 0; x < frame.width; ++x) {
            const PixelFragments& list = frame.pixels[base + x];
            Rgb color;
            switch (config.resolver) {
                case Resolver::Exact:
                    color = composite_exact(sort_by_depth(list), config.background);
                    break;
                case Resolver::Wsum:
                    color = wsum(list, config.background);
                    break;
                case Resolver::Wavg:
                    color = wavg(list, config.background);
                    break;
                case Resolver::Wboit:
                    color = wboit(list, config.background);
                    break;
                case Resolver::Ht:
                    color = hybrid_transparency(list, config.background, config.ht_k);
                    break;
                case Resolver::Dfaoit:
                    break;  // handled above
            }
            img.data[base + x] = clamp01(color);
        }
    });
    return img;
}

std::optional<Resolver> resolver_from_name(const std::string& name) {
    if (name == "exact") return Resolver::Exact;
    if (name == "wsum") return Resolver::Wsum;
    if (name == "wavg") return Resolver::Wavg;
    if (name == "wboit") return Resolver::Wboit;
    if (name == "ht") return Resolver::Ht;
    if (name == "dfaoit") return Resolver::Dfaoit;
    return std::nullopt;
}

std::string resolver_name(Resolver resolver) {
    switch (resolver) {
        case Resolver::Exact: return "exact";
        case Resolver::Wsum: return "wsum";
        case Resolver::Wavg: return "wavg";
        case Resolver::Wboit: return "wboit";
        case Resolver::Ht: return "ht";
        case Resolver::Dfaoit: return "dfaoit";
    }
    return "unknown";
}

}  // namespace oitlab
