#pragma once

#include <string>

#include "oitlab/image.hpp"

namespace oitlab {

// Mean over width*height*3 of squared channel differences. Both images must
// be clamped to [0,1] (every resolver clamps at image write).
double mse(const ImageRGB& a, const ImageRGB& b);

// Grayscale per-pixel mean absolute channel difference; a visual artifact.
ImageRGB error_map(const ImageRGB& a, const ImageRGB& b);

struct QualityReport {
    std::string resolver;
    int width = 0;
    int height = 0;
    double mse = 0.0;
    double rmse = 0.0;

    std::string csv_row() const;
};

QualityReport quality_report(const std::string& resolver, const ImageRGB& reference,
                             const ImageRGB& image);

}  // namespace oitlab
