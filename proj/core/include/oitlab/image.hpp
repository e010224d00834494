#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "oitlab/vec3.hpp"

namespace oitlab {

// Resolution-indexed linear-RGB raster, row-major, top row first.
struct ImageRGB {
    int width = 0;
    int height = 0;
    std::vector<Rgb> data;

    ImageRGB() = default;
    ImageRGB(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h) {}

    Rgb& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    const Rgb& at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

struct PpmError : std::runtime_error {
    explicit PpmError(const std::string& what) : std::runtime_error(what) {}
};

// Binary PPM (P6). Header "P6\n<width> <height>\n255\n", then width*height*3
// bytes row-major, top row first. Channels are quantized as
// round(clamp(c,0,1)*255), which keeps the file bit-exact across platforms.
std::vector<std::uint8_t> encode_ppm(const ImageRGB& img);

// Rejects wrong magic, malformed headers, and truncated payloads.
ImageRGB decode_ppm(const std::vector<std::uint8_t>& bytes);

void write_ppm(const ImageRGB& img, const std::string& path);
ImageRGB read_ppm(const std::string& path);

}  // namespace oitlab
