#include "oitlab/dataset.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "oitlab/compositing.hpp"
#include "oitlab/features.hpp"
#include "oitlab/raster.hpp"
#include "oitlab/rng.hpp"

namespace oitlab {

namespace {

constexpr char kMagic[8] = {'D', 'F', 'A', 'D', 'A', 'T', 'A', '1'};
constexpr std::size_t kRecordBytes = 4 + 14 * 4;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

std::uint32_t get_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

float get_f32(const std::uint8_t* p) {
    std::uint32_t bits = get_u32(p);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

void validate_params(const DatasetParams& p) {
    if (!(3 <= p.layers_min && p.layers_min <= p.layers_max && p.layers_max <= 64)) {
        throw std::invalid_argument("dataset: need 3 <= layers_min <= layers_max <= 64");
    }
    if (!(0.0f <= p.alpha_min && p.alpha_min <= p.alpha_max && p.alpha_max <= 1.0f)) {
        throw std::invalid_argument("dataset: alpha range must satisfy 0 <= min <= max <= 1");
    }
    if (p.width < 1 || p.height < 1 || p.scene_count < 1) {
        throw std::invalid_argument("dataset: scene_count, width, height must be >= 1");
    }
}

}  // namespace

std::vector<TrainRecord> generate_dataset(const DatasetParams& params) {
    validate_params(params);

    std::vector<TrainRecord> records;
    records.reserve(params.target_example_count);
    const Rgb black{};

    for (int s = 0; s < params.scene_count && records.size() < params.target_example_count;
         ++s) {
        SplitMix64 scene_rng(splitmix64_hash(params.master_seed ^
                                             (0x9E3779B97F4A7C15ULL * (s + 1))));
        const int span = params.layers_max - params.layers_min + 1;
        const int layers =
            params.layers_min + static_cast<int>(scene_rng.next_below(span));
        const std::uint64_t gen_seed = scene_rng.next_u64();
        const std::uint64_t palette_seed = scene_rng.next_u64();

        Scene scene = gen_layered_scene(gen_seed, layers, params.alpha_min,
                                        params.alpha_max, palette_seed);
        FrameFragmentBuffer frame = rasterize_scene(scene, params.width, params.height);

        for (const PixelFragments& list : frame.pixels) {
            if (records.size() >= params.target_example_count) break;
            PixelFeatureRecord rec = extract_features(list);
            if (rec.n < 3) continue;
            TrainRecord r;
            r.n = static_cast<std::uint32_t>(rec.n);
            r.features = rec.features.to_array();
            Rgb target = composite_exact(sort_by_depth(list), black);
            r.target = {target.x, target.y, target.z};
            r.bg_product = rec.bg_product;
            records.push_back(r);
        }
    }

    if (records.size() < params.target_example_count) {
        throw DatasetError("dataset: requested " +
                               std::to_string(params.target_example_count) +
                               " examples but only " + std::to_string(records.size()) +
                               " eligible pixels were available",
                           records.size());
    }
    return records;
}

std::vector<std::uint8_t> encode_dataset(std::span<const TrainRecord> records) {
    std::vector<std::uint8_t> out;
    out.reserve(16 + records.size() * kRecordBytes);
    out.insert(out.end(), kMagic, kMagic + 8);
    put_u32(out, static_cast<std::uint32_t>(records.size()));
    put_u32(out, 0);  // reserved
    for (const TrainRecord& r : records) {
        put_u32(out, r.n);
        for (float f : r.features) put_f32(out, f);
        for (float f : r.target) put_f32(out, f);
        put_f32(out, r.bg_product);
    }
    return out;
}

std::vector<TrainRecord> decode_dataset(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 16) throw DatasetIoError("dataset: truncated header");
    if (std::memcmp(bytes.data(), kMagic, 8) != 0) {
        throw DatasetIoError("dataset: bad magic, expected DFADATA1");
    }
    const std::uint32_t count = get_u32(bytes.data() + 8);
    const std::size_t payload = bytes.size() - 16;
    if (payload % kRecordBytes != 0) throw DatasetIoError("dataset: truncated record");
    const std::size_t present = payload / kRecordBytes;
    if (present != count) {
        throw DatasetIoError("dataset: record count mismatch, header says " +
                             std::to_string(count) + " but file holds " +
                             std::to_string(present));
    }

    std::vector<TrainRecord> records(count);
    const std::uint8_t* p = bytes.data() + 16;
    for (TrainRecord& r : records) {
        r.n = get_u32(p);
        p += 4;
        for (float& f : r.features) {
            f = get_f32(p);
            p += 4;
        }
        for (float& f : r.target) {
            f = get_f32(p);
            p += 4;
        }
        r.bg_product = get_f32(p);
        p += 4;
    }
    return records;
}

void write_dataset(std::span<const TrainRecord> records, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetIoError("dataset: cannot open for writing: " + path);
    auto bytes = encode_dataset(records);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DatasetIoError("dataset: write failed: " + path);
}

std::vector<TrainRecord> read_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetIoError("dataset: cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return decode_dataset(bytes);
}

std::pair<std::vector<TrainRecord>, std::vector<TrainRecord>> split(
    std::span<const TrainRecord> records, double val_fraction, std::uint64_t seed) {
    if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
        throw std::invalid_argument("dataset split: val_fraction must be in (0, 1)");
    }

    std::vector<std::uint32_t> order(records.size());
    std::iota(order.begin(), order.end(), 0u);
    SplitMix64 rng(seed);
    for (std::size_t i = order.size(); i > 1; --i) {
        std::size_t j = rng.next_below(i);
        std::swap(order[i - 1], order[j]);
    }

    const std::size_t val_count = static_cast<std::size_t>(
        std::llround(val_fraction * static_cast<double>(records.size())));

    std::pair<std::vector<TrainRecord>, std::vector<TrainRecord>> out;
    out.second.reserve(val_count);
    out.first.reserve(records.size() - val_count);
    for (std::size_t i = 0; i < order.size(); ++i) {
        (i < val_count ? out.second : out.first).push_back(records[order[i]]);
    }
    return out;
}

TrainingSet to_training_set(std::span<const TrainRecord> records) {
    TrainingSet set;
    set.inputs.reserve(records.size());
    set.targets.reserve(records.size());
    for (const TrainRecord& r : records) {
        set.inputs.push_back(r.features);
        set.targets.push_back(r.target);
    }
    return set;
}

}  // namespace oitlab
