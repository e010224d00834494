#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "oitlab/mlp.hpp"

namespace oitlab {

// One training example: per-pixel features paired with the exact OIT color
// over a black background (the background is re-added analytically at
// inference). Only pixels with n >= 3 are emitted; shallower pixels bypass
// the network.
struct TrainRecord {
    std::uint32_t n = 0;
    std::array<float, 10> features{};
    std::array<float, 3> target{};
    float bg_product = 1.0f;

    friend bool operator==(const TrainRecord&, const TrainRecord&) = default;
};

struct DatasetParams {
    int scene_count = 8;
    int layers_min = 10;
    int layers_max = 50;
    float alpha_min = 0.01f;
    float alpha_max = 0.85f;
    int width = 256;
    int height = 256;
    std::uint64_t master_seed = 0;
    std::size_t target_example_count = 200000;
};

// Generation shortfall: fewer eligible pixels than requested examples.
struct DatasetError : std::runtime_error {
    DatasetError(const std::string& what, std::size_t achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    std::size_t achieved() const { return achieved_; }

private:
    std::size_t achieved_;
};

struct DatasetIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Renders procedurally layered scenes (layer count uniform in
// [layers_min, layers_max] per scene) and emits records in (scene index,
// row-major pixel) order until target_example_count is reached.
// Deterministic for a fixed master_seed.
std::vector<TrainRecord> generate_dataset(const DatasetParams& params);

// Binary v1, little-endian: magic "DFADATA1", u32 record count, u32
// reserved=0, then per record u32 n and 14 f32 (10 features, 3 target RGB,
// 1 bg_product). Round trips bit-exactly.
void write_dataset(std::span<const TrainRecord> records, const std::string& path);
std::vector<TrainRecord> read_dataset(const std::string& path);

std::vector<std::uint8_t> encode_dataset(std::span<const TrainRecord> records);
std::vector<TrainRecord> decode_dataset(std::span<const std::uint8_t> bytes);

// Deterministic shuffled split; first element is the training partition.
std::pair<std::vector<TrainRecord>, std::vector<TrainRecord>> split(
    std::span<const TrainRecord> records, double val_fraction, std::uint64_t seed);

TrainingSet to_training_set(std::span<const TrainRecord> records);

}  // namespace oitlab
