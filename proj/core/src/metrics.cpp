#include "oitlab/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace oitlab {

namespace {

void check_dims(const ImageRGB& a, const ImageRGB& b) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("metrics: image dimensions differ");
    }
}

}  // namespace

double mse(const ImageRGB& a, const ImageRGB& b) {
    check_dims(a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const Rgb d = a.data[i] - b.data[i];
        sum += static_cast<double>(d.x) * d.x + static_cast<double>(d.y) * d.y +
               static_cast<double>(d.z) * d.z;
    }
    return sum / (static_cast<double>(a.data.size()) * 3.0);
}

ImageRGB error_map(const ImageRGB& a, const ImageRGB& b) {
    check_dims(a, b);
    ImageRGB map(a.width, a.height);
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        const float e = clamp01((std::fabs(a.data[i].x - b.data[i].x) +
                                 std::fabs(a.data[i].y - b.data[i].y) +
                                 std::fabs(a.data[i].z - b.data[i].z)) /
                                3.0f);
        map.data[i] = Rgb(e, e, e);
    }
    return map;
}

std::string QualityReport::csv_row() const {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%.9g,%.9g", resolver.c_str(), width, height,
                  mse, rmse);
    return buf;
}

QualityReport quality_report(const std::string& resolver, const ImageRGB& reference,
                             const ImageRGB& image) {
    QualityReport report;
    report.resolver = resolver;
    report.width = reference.width;
    report.height = reference.height;
    report.mse = mse(reference, image);
    report.rmse = std::sqrt(report.mse);
    return report;
}

}  // namespace oitlab
