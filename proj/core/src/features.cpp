#include "oitlab/features.hpp"

#include "oitlab/compositing.hpp"
#include "oitlab/parallel.hpp"

namespace oitlab {

PixelFeatureRecord extract_features(const PixelFragments& list) {
    PixelFragments sorted = sort_by_depth(list);
    const auto& frags = sorted.fragments;
    const int n = static_cast<int>(frags.size());

    PixelFeatureRecord rec;
    rec.n = n;
    if (n == 0) return rec;  // all-zero features, bg_product == 1

    float tail_alpha_sum = 0.0f;
    Rgb tail_color_sum;
    Rgb acc;
    float product = 1.0f;
    for (int i = 0; i < n; ++i) {
        const Fragment& f = frags[i];
        acc += f.alpha * f.color;
        product *= 1.0f - f.alpha;
        if (i < n - 2) {  // farthest n-2 fragments
            tail_alpha_sum += f.alpha;
            tail_color_sum += f.color;
        }
    }

    const Fragment& closest = frags[n - 1];
    rec.front2[0] = closest;
    if (n >= 2) {
        const Fragment& second = frags[n - 2];
        rec.front2[1] = second;
        rec.features.g_front =
            closest.alpha * closest.color + (1.0f - closest.alpha) * second.alpha * second.color;
    } else {
        rec.features.g_front = closest.alpha * closest.color;
    }
    // Divided by n, not n-2, matching the feature definition the network is
    // trained against.
    rec.features.a_avg_tail = tail_alpha_sum / static_cast<float>(n);
    rec.features.c_avg_tail = tail_color_sum / static_cast<float>(n);
    rec.features.c_acc = acc;
    rec.bg_product = product;
    return rec;
}

DfaoitFrame extract_frame_features(const FrameFragmentBuffer& frame) {
    DfaoitFrame out;
    out.width = frame.width;
    out.height = frame.height;
    out.records.resize(frame.pixels.size());
    parallel_chunks(static_cast<std::size_t>(frame.height), [&](std::size_t row) {
        const std::size_t base = row * frame.width;
        for (int x = 0; x < frame.width; ++x) {
            out.records[base + x] = extract_features(frame.pixels[base + x]);
        }
    });
    return out;
}

}  // namespace oitlab
