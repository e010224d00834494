#include "oitlab/compositing.hpp"

#include <algorithm>
#include <cassert>

namespace oitlab {

void sort_by_depth_in_place(PixelFragments& list) {
    std::sort(list.fragments.begin(), list.fragments.end(),
              [](const Fragment& a, const Fragment& b) {
                  if (a.z != b.z) return a.z > b.z;
                  return a.seq < b.seq;
              });
    list.sorted = true;
}

PixelFragments sort_by_depth(PixelFragments list) {
    sort_by_depth_in_place(list);
    return list;
}

Rgb composite_exact(const PixelFragments& sorted, const Rgb& background) {
    assert(sorted.sorted || sorted.fragments.size() <= 1);
    Rgb color = background;
    for (const Fragment& f : sorted.fragments) {
        color = f.alpha * f.color + (1.0f - f.alpha) * color;
    }
    return color;
}

float transmittance_product(const PixelFragments& list) {
    float product = 1.0f;
    for (const Fragment& f : list.fragments) {
        product *= 1.0f - f.alpha;
    }
    return product;
}

}  // namespace oitlab
