#include "oitlab/image.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace oitlab {

namespace {

std::uint8_t quantize(float c) {
    return static_cast<std::uint8_t>(std::lround(clamp01(c) * 255.0f));
}

// Reads one whitespace-delimited ASCII token starting at pos.
std::string next_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos) {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) {
        tok.push_back(static_cast<char>(bytes[pos++]));
    }
    return tok;
}

int parse_dim(const std::string& tok, const char* name) {
    if (tok.empty()) throw PpmError(std::string("ppm: missing ") + name);
    int value = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') throw PpmError(std::string("ppm: non-numeric ") + name);
        value = value * 10 + (c - '0');
        if (value > 1 << 20) throw PpmError(std::string("ppm: implausible ") + name);
    }
    if (value < 1) throw PpmError(std::string("ppm: ") + name + " must be >= 1");
    return value;
}

}  // namespace

std::vector<std::uint8_t> encode_ppm(const ImageRGB& img) {
    char header[64];
    int n = std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", img.width, img.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.reserve(out.size() + img.data.size() * 3);
    for (const Rgb& px : img.data) {
        out.push_back(quantize(px.x));
        out.push_back(quantize(px.y));
        out.push_back(quantize(px.z));
    }
    return out;
}

ImageRGB decode_ppm(const std::vector<std::uint8_t>& bytes) {
    std::size_t pos = 0;
    if (next_token(bytes, pos) != "P6") throw PpmError("ppm: bad magic, expected P6");
    int width = parse_dim(next_token(bytes, pos), "width");
    int height = parse_dim(next_token(bytes, pos), "height");
    std::string maxval = next_token(bytes, pos);
    if (maxval != "255") throw PpmError("ppm: unsupported maxval " + maxval);
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw PpmError("ppm: missing whitespace after header");
    }
    ++pos;  // exactly one whitespace byte separates header and payload

    const std::size_t need = static_cast<std::size_t>(width) * height * 3;
    if (bytes.size() - pos < need) throw PpmError("ppm: truncated payload");

    ImageRGB img(width, height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        img.data[i] = Rgb(bytes[pos + 3 * i] / 255.0f,
                          bytes[pos + 3 * i + 1] / 255.0f,
                          bytes[pos + 3 * i + 2] / 255.0f);
    }
    return img;
}

void write_ppm(const ImageRGB& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw PpmError("ppm: cannot open for writing: " + path);
    auto bytes = encode_ppm(img);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PpmError("ppm: write failed: " + path);
}

ImageRGB read_ppm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PpmError("ppm: cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_ppm(bytes);
}

}  // namespace oitlab
