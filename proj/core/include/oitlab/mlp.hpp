#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace oitlab {

// 10 -> 32 -> 16 -> 3 dense network: ReLU on both hidden layers, sigmoid on
// the output layer.
inline constexpr std::array<int, 4> kMlpDims = {10, 32, 16, 3};
inline constexpr int kMlpLayers = 3;

// Dense-layer parameters. weights[l] is (out x in) row-major, biases[l] has
// one entry per output neuron. Training arithmetic is double precision; the
// text serialization keeps enough digits to round-trip at single precision.
struct MlpWeights {
    std::array<std::vector<double>, kMlpLayers> weights;
    std::array<std::vector<double>, kMlpLayers> biases;

    static MlpWeights zeros();
    static MlpWeights he_uniform(std::uint64_t init_seed);

    std::size_t parameter_count() const;
    bool shape_ok() const;
};

// Per-layer pre-activations and activations from one forward pass,
// sufficient for backward().
struct ForwardCache {
    std::array<std::vector<double>, kMlpLayers> pre;   // W*x + b
    std::array<std::vector<double>, kMlpLayers> post;  // activation(pre)
    std::array<double, 10> input{};
};

std::array<double, 3> forward(const MlpWeights& net, const std::array<double, 10>& x,
                              ForwardCache* cache = nullptr);
std::array<float, 3> forward(const MlpWeights& net, const std::array<float, 10>& x);

// Mean over the 3 channels of squared differences.
double loss_mse(const std::array<double, 3>& pred, const std::array<double, 3>& target);

struct MlpGradients {
    std::array<std::vector<double>, kMlpLayers> weights;
    std::array<std::vector<double>, kMlpLayers> biases;

    static MlpGradients zeros();
    void reset();
    void add(const MlpGradients& other);
    void scale(double s);
};

// Accumulates d(loss_mse(forward(x), target))/d(param) into grads for the
// example recorded in cache. ReLU subgradient at 0 is 0.
void backward(const MlpWeights& net, const ForwardCache& cache,
              const std::array<double, 3>& target, MlpGradients& grads);

struct AdamState {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::int64_t t = 0;
    MlpGradients m = MlpGradients::zeros();
    MlpGradients v = MlpGradients::zeros();
};

void adam_step(MlpWeights& params, const MlpGradients& grads, AdamState& state);

struct TrainConfig {
    int epochs = 300;
    int batch_size = 4096;
    std::uint64_t seed = 0;  // drives the per-epoch shuffles
    bool shuffle = true;
    double learning_rate = 0.001;
};

struct TrainingSet {
    std::vector<std::array<float, 10>> inputs;
    std::vector<std::array<float, 3>> targets;

    std::size_t size() const { return inputs.size(); }
};

struct EpochStats {
    int epoch = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;  // NaN when no validation set was given
};

struct TrainResult {
    MlpWeights net;
    std::vector<EpochStats> history;
};

// He-uniform init from init_seed, deterministic per-epoch shuffles from
// config.seed, mini-batch Adam. Bit-reproducible for fixed inputs, including
// across thread counts (batch gradients reduce over fixed-size chunks in
// chunk order).
TrainResult train(const TrainingSet& train_set, const TrainingSet& val_set,
                  const TrainConfig& config, std::uint64_t init_seed);

struct WeightsIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Text format v1: "DFAOIT-MLP 1" line, layer dims line, then one line per
// output neuron with its bias followed by its input weights.
void save_weights(const MlpWeights& net, const std::string& path);
MlpWeights load_weights(const std::string& path);

std::string weights_to_text(const MlpWeights& net);
MlpWeights weights_from_text(const std::string& text);

}  // namespace oitlab
