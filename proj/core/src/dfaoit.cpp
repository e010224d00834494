#include "oitlab/dfaoit.hpp"

#include "oitlab/compositing.hpp"
#include "oitlab/parallel.hpp"

namespace oitlab {

Rgb infer_transparent_color(const PixelFeatureRecord& rec, const MlpWeights& net) {
    auto y = forward(net, rec.features.to_array());
    return {y[0], y[1], y[2]};
}

Rgb compose_final(const Rgb& transparent_color, const Rgb& background, float bg_product) {
    return transparent_color + background * bg_product;
}

namespace {

// Exact composite for bypass pixels; front2 holds the whole list when
// n <= 2. Replays the same far-to-near operation order as the exact
// resolver, so the outputs match bit for bit.
Rgb composite_front2(const PixelFeatureRecord& rec, const Rgb& background) {
    PixelFragments list;
    list.sorted = true;
    if (rec.n == 2) list.fragments.push_back(rec.front2[1]);
    if (rec.n >= 1) list.fragments.push_back(rec.front2[0]);
    return composite_exact(list, background);
}

}  // namespace

ImageRGB resolve_dfaoit_frame(const DfaoitFrame& features, const MlpWeights& net,
                              const Rgb& background) {
    ImageRGB img(features.width, features.height);
    parallel_chunks(static_cast<std::size_t>(features.height), [&](std::size_t row) {
        const std::size_t base = row * features.width;
        for (int x = 0; x < features.width; ++x) {
            const PixelFeatureRecord& rec = features.records[base + x];
            Rgb color;
            if (rec.n <= 2) {
                color = composite_front2(rec, background);
            } else {
                color = compose_final(infer_transparent_color(rec, net), background,
                                      rec.bg_product);
            }
            img.data[base + x] = clamp01(color);
        }
    });
    return img;
}

ImageRGB render_dfaoit(const FrameFragmentBuffer& frame, const MlpWeights& net,
                       const Rgb& background) {
    return resolve_dfaoit_frame(extract_frame_features(frame), net, background);
}

}  // namespace oitlab
