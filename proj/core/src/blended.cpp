#include "oitlab/blended.hpp"

#include <cmath>
#include <stdexcept>

#include "oitlab/compositing.hpp"

namespace oitlab {

float weight_default(float z, float a) {
    float d = 1.0f - z;
    return a * std::max(1e-2f, 3e3f * d * d * d);
}

BlendAccumulators accumulate_blend(const PixelFragments& list, const WeightFn& w) {
    BlendAccumulators acc;
    for (const Fragment& f : list.fragments) {
        acc.sum_premult += f.alpha * f.color;
        acc.sum_alpha += f.alpha;
        acc.count += 1;
        acc.product *= 1.0f - f.alpha;
        if (w) {
            float wi = w(f.z, f.alpha);
            acc.sum_weighted_premult += f.alpha * wi * f.color;
            acc.sum_weighted_alpha += f.alpha * wi;
        }
    }
    return acc;
}

Rgb wsum(const PixelFragments& list, const Rgb& background) {
    BlendAccumulators acc = accumulate_blend(list, nullptr);
    return acc.sum_premult + (1.0f - acc.sum_alpha) * background;
}

Rgb wavg(const PixelFragments& list, const Rgb& background) {
    BlendAccumulators acc = accumulate_blend(list, nullptr);
    if (acc.count == 0) return background;
    Rgb c_avg = acc.sum_alpha > 0.0f ? acc.sum_premult / acc.sum_alpha : Rgb();
    float a_avg = acc.sum_alpha / static_cast<float>(acc.count);
    float bg_coeff = std::pow(1.0f - a_avg, static_cast<float>(acc.count));
    return c_avg * (1.0f - bg_coeff) + background * bg_coeff;
}

Rgb wboit(const PixelFragments& list, const Rgb& background, const WeightFn& w) {
    BlendAccumulators acc = accumulate_blend(list, w);
    if (acc.count == 0) return background;
    Rgb c_wavg = acc.sum_weighted_alpha > 0.0f
                     ? acc.sum_weighted_premult / acc.sum_weighted_alpha
                     : Rgb();
    float a_net = 1.0f - acc.product;
    return c_wavg * a_net + background * (1.0f - a_net);
}

Rgb wboit(const PixelFragments& list, const Rgb& background) {
    return wboit(list, background, weight_default);
}

Rgb hybrid_transparency(const PixelFragments& list, const Rgb& background, int k) {
    if (k < 1) throw std::invalid_argument("hybrid_transparency: k must be >= 1");
    PixelFragments sorted = sort_by_depth(list);
    const std::size_t n = sorted.size();
    const std::size_t core = std::min<std::size_t>(static_cast<std::size_t>(k), n);

    // Sorted order is far-to-near, so the tail (farthest n-k) is the prefix
    // and the core (k closest) the suffix.
    PixelFragments tail;
    tail.fragments.assign(sorted.fragments.begin(), sorted.fragments.end() - core);
    tail.sorted = true;
    Rgb tail_color = wavg(tail, background);

    PixelFragments front;
    front.fragments.assign(sorted.fragments.end() - core, sorted.fragments.end());
    front.sorted = true;
    return composite_exact(front, tail_color);
}

}  // namespace oitlab
