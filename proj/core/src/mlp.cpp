#include "oitlab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "oitlab/parallel.hpp"
#include "oitlab/rng.hpp"

namespace oitlab {

namespace {

constexpr int kGradChunk = 256;  // examples per deterministic reduction chunk

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void alloc_like_net(std::array<std::vector<double>, kMlpLayers>& w,
                    std::array<std::vector<double>, kMlpLayers>& b) {
    for (int l = 0; l < kMlpLayers; ++l) {
        w[l].assign(static_cast<std::size_t>(kMlpDims[l]) * kMlpDims[l + 1], 0.0);
        b[l].assign(static_cast<std::size_t>(kMlpDims[l + 1]), 0.0);
    }
}

}  // namespace

MlpWeights MlpWeights::zeros() {
    MlpWeights net;
    alloc_like_net(net.weights, net.biases);
    return net;
}

MlpWeights MlpWeights::he_uniform(std::uint64_t init_seed) {
    MlpWeights net = zeros();
    SplitMix64 rng(init_seed);
    for (int l = 0; l < kMlpLayers; ++l) {
        const double limit = std::sqrt(6.0 / kMlpDims[l]);
        for (double& w : net.weights[l]) w = rng.next_double(-limit, limit);
        // biases stay zero
    }
    return net;
}

std::size_t MlpWeights::parameter_count() const {
    std::size_t n = 0;
    for (int l = 0; l < kMlpLayers; ++l) n += weights[l].size() + biases[l].size();
    return n;
}

bool MlpWeights::shape_ok() const {
    for (int l = 0; l < kMlpLayers; ++l) {
        if (weights[l].size() != static_cast<std::size_t>(kMlpDims[l]) * kMlpDims[l + 1] ||
            biases[l].size() != static_cast<std::size_t>(kMlpDims[l + 1])) {
            return false;
        }
    }
    return true;
}

std::array<double, 3> forward(const MlpWeights& net, const std::array<double, 10>& x,
                              ForwardCache* cache) {
    if (!net.shape_ok()) throw std::invalid_argument("mlp forward: wrong layer shapes");

    thread_local ForwardCache scratch;
    ForwardCache& c = cache ? *cache : scratch;
    c.input = x;

    for (int l = 0; l < kMlpLayers; ++l) {
        const int in = kMlpDims[l];
        const int out = kMlpDims[l + 1];
        const double* prev = l > 0 ? c.post[l - 1].data() : c.input.data();
        c.pre[l].resize(static_cast<std::size_t>(out));
        c.post[l].resize(static_cast<std::size_t>(out));
        const double* w = net.weights[l].data();
        for (int o = 0; o < out; ++o) {
            double z = net.biases[l][o];
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) z += row[i] * prev[i];
            c.pre[l][o] = z;
            if (l + 1 < kMlpLayers) {
                c.post[l][o] = z > 0.0 ? z : 0.0;  // ReLU
            } else {
                c.post[l][o] = sigmoid(z);
            }
        }
    }
    const auto& y = c.post[kMlpLayers - 1];
    return {y[0], y[1], y[2]};
}

std::array<float, 3> forward(const MlpWeights& net, const std::array<float, 10>& x) {
    std::array<double, 10> xd;
    for (int i = 0; i < 10; ++i) xd[i] = x[i];
    auto y = forward(net, xd, nullptr);
    return {static_cast<float>(y[0]), static_cast<float>(y[1]), static_cast<float>(y[2])};
}

double loss_mse(const std::array<double, 3>& pred, const std::array<double, 3>& target) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
        double d = pred[c] - target[c];
        s += d * d;
    }
    return s / 3.0;
}

MlpGradients MlpGradients::zeros() {
    MlpGradients g;
    alloc_like_net(g.weights, g.biases);
    return g;
}

void MlpGradients::reset() {
    for (int l = 0; l < kMlpLayers; ++l) {
        std::fill(weights[l].begin(), weights[l].end(), 0.0);
        std::fill(biases[l].begin(), biases[l].end(), 0.0);
    }
}

void MlpGradients::add(const MlpGradients& other) {
    for (int l = 0; l < kMlpLayers; ++l) {
        for (std::size_t i = 0; i < weights[l].size(); ++i) weights[l][i] += other.weights[l][i];
        for (std::size_t i = 0; i < biases[l].size(); ++i) biases[l][i] += other.biases[l][i];
    }
}

void MlpGradients::scale(double s) {
    for (int l = 0; l < kMlpLayers; ++l) {
        for (double& w : weights[l]) w *= s;
        for (double& b : biases[l]) b *= s;
    }
}

void backward(const MlpWeights& net, const ForwardCache& cache,
              const std::array<double, 3>& target, MlpGradients& grads) {
    // d(loss)/d(pre-activation) for the sigmoid output under channel-mean MSE.
    thread_local std::vector<double> delta;
    thread_local std::vector<double> prev_delta;
    delta.resize(3);
    for (int c = 0; c < 3; ++c) {
        const double y = cache.post[kMlpLayers - 1][c];
        delta[c] = (2.0 / 3.0) * (y - target[c]) * y * (1.0 - y);
    }

    for (int l = kMlpLayers - 1; l >= 0; --l) {
        const int in = kMlpDims[l];
        const int out = kMlpDims[l + 1];
        const double* activations =
            l > 0 ? cache.post[l - 1].data() : cache.input.data();

        for (int o = 0; o < out; ++o) {
            grads.biases[l][o] += delta[o];
            double* grow = grads.weights[l].data() + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) grow[i] += delta[o] * activations[i];
        }

        if (l == 0) break;
        prev_delta.assign(static_cast<std::size_t>(in), 0.0);
        const double* w = net.weights[l].data();
        for (int o = 0; o < out; ++o) {
            const double* row = w + static_cast<std::size_t>(o) * in;
            for (int i = 0; i < in; ++i) prev_delta[i] += row[i] * delta[o];
        }
        // ReLU gate; derivative at exactly 0 is 0.
        for (int i = 0; i < in; ++i) {
            if (!(cache.pre[l - 1][i] > 0.0)) prev_delta[i] = 0.0;
        }
        delta.swap(prev_delta);
    }
}

void adam_step(MlpWeights& params, const MlpGradients& grads, AdamState& state) {
    state.t += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (int l = 0; l < kMlpLayers; ++l) {
        auto update = [&](std::vector<double>& p, const std::vector<double>& g,
                          std::vector<double>& m, std::vector<double>& v) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
                v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
                const double m_hat = m[i] / bc1;
                const double v_hat = v[i] / bc2;
                p[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
            }
        };
        update(params.weights[l], grads.weights[l], state.m.weights[l], state.v.weights[l]);
        update(params.biases[l], grads.biases[l], state.m.biases[l], state.v.biases[l]);
    }
}

namespace {

std::array<double, 10> widen(const std::array<float, 10>& x) {
    std::array<double, 10> xd;
    for (int i = 0; i < 10; ++i) xd[i] = x[i];
    return xd;
}

std::array<double, 3> widen3(const std::array<float, 3>& x) {
    return {static_cast<double>(x[0]), static_cast<double>(x[1]), static_cast<double>(x[2])};
}

// Loss and gradient sums over index range [begin, end) of the permuted set.
struct ChunkResult {
    MlpGradients grads = MlpGradients::zeros();
    double loss_sum = 0.0;
};

double evaluate_mse(const MlpWeights& net, const TrainingSet& set) {
    if (set.size() == 0) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t chunk_count = (set.size() + kGradChunk - 1) / kGradChunk;
    std::vector<double> partial(chunk_count, 0.0);
    parallel_chunks(chunk_count, [&](std::size_t c) {
        const std::size_t begin = c * kGradChunk;
        const std::size_t end = std::min(set.size(), begin + kGradChunk);
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            s += loss_mse(forward(net, widen(set.inputs[i])), widen3(set.targets[i]));
        }
        partial[c] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total / static_cast<double>(set.size());
}

}  // namespace

TrainResult train(const TrainingSet& train_set, const TrainingSet& val_set,
                  const TrainConfig& config, std::uint64_t init_seed) {
    if (train_set.size() == 0) throw std::invalid_argument("mlp train: empty dataset");
    if (train_set.inputs.size() != train_set.targets.size()) {
        throw std::invalid_argument("mlp train: inputs/targets size mismatch");
    }
    if (config.epochs < 1 || config.batch_size < 1) {
        throw std::invalid_argument("mlp train: epochs and batch_size must be >= 1");
    }

    TrainResult result;
    result.net = MlpWeights::he_uniform(init_seed);
    AdamState adam;
    adam.lr = config.learning_rate;

    const std::size_t n = train_set.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);

    const std::size_t max_chunks =
        (std::min<std::size_t>(n, static_cast<std::size_t>(config.batch_size)) + kGradChunk - 1) /
        kGradChunk;
    std::vector<ChunkResult> chunks(max_chunks);
    std::vector<ForwardCache> caches(max_chunks);
    MlpGradients batch_grad = MlpGradients::zeros();

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle) {
            SplitMix64 rng(splitmix64_hash(config.seed ^
                                           (0x9E3779B97F4A7C15ULL * (epoch + 1))));
            for (std::size_t i = n - 1; i > 0; --i) {
                std::size_t j = rng.next_below(i + 1);
                std::swap(order[i], order[j]);
            }
        }

        double epoch_loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t batch_end = std::min(n, start + config.batch_size);
            const std::size_t batch_n = batch_end - start;
            const std::size_t chunk_count = (batch_n + kGradChunk - 1) / kGradChunk;

            parallel_chunks(chunk_count, [&](std::size_t c) {
                ChunkResult& cr = chunks[c];
                cr.grads.reset();
                cr.loss_sum = 0.0;
                ForwardCache& cache = caches[c];
                const std::size_t begin = start + c * kGradChunk;
                const std::size_t end = std::min(batch_end, begin + kGradChunk);
                for (std::size_t i = begin; i < end; ++i) {
                    const std::uint32_t idx = order[i];
                    const auto target = widen3(train_set.targets[idx]);
                    auto pred = forward(result.net, widen(train_set.inputs[idx]), &cache);
                    cr.loss_sum += loss_mse(pred, target);
                    backward(result.net, cache, target, cr.grads);
                }
            });

            batch_grad.reset();
            for (std::size_t c = 0; c < chunk_count; ++c) {
                batch_grad.add(chunks[c].grads);
                epoch_loss_sum += chunks[c].loss_sum;
            }
            batch_grad.scale(1.0 / static_cast<double>(batch_n));
            adam_step(result.net, batch_grad, adam);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_mse = epoch_loss_sum / static_cast<double>(n);
        stats.val_mse = evaluate_mse(result.net, val_set);
        result.history.push_back(stats);
    }
    return result;
}

std::string weights_to_text(const MlpWeights& net) {
    if (!net.shape_ok()) throw std::invalid_argument("weights_to_text: wrong layer shapes");
    std::string out = "DFAOIT-MLP 1\n10 32 16 3\n";
    char buf[64];
    for (int l = 0; l < kMlpLayers; ++l) {
        const int in = kMlpDims[l];
        const int out_dim = kMlpDims[l + 1];
        for (int o = 0; o < out_dim; ++o) {
            std::snprintf(buf, sizeof(buf), "%.10g", net.biases[l][o]);
            out += buf;
            for (int i = 0; i < in; ++i) {
                std::snprintf(buf, sizeof(buf), " %.10g",
                              net.weights[l][static_cast<std::size_t>(o) * in + i]);
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

MlpWeights weights_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "DFAOIT-MLP" || version != 1) {
        throw WeightsIoError("weights: bad magic, expected 'DFAOIT-MLP 1'");
    }
    std::array<int, 4> dims{};
    for (int& d : dims) {
        if (!(in >> d)) throw WeightsIoError("weights: missing layer dims");
    }
    if (dims != std::array<int, 4>{kMlpDims[0], kMlpDims[1], kMlpDims[2], kMlpDims[3]}) {
        throw WeightsIoError("weights: dimension mismatch, expected 10 32 16 3");
    }

    MlpWeights net = MlpWeights::zeros();
    auto read_value = [&in](const char* what) {
        double v;
        if (!(in >> v)) {
            throw WeightsIoError(std::string("weights: non-numeric or missing token in ") + what);
        }
        return v;
    };
    for (int l = 0; l < kMlpLayers; ++l) {
        const int in_dim = kMlpDims[l];
        const int out_dim = kMlpDims[l + 1];
        for (int o = 0; o < out_dim; ++o) {
            net.biases[l][o] = read_value("bias");
            for (int i = 0; i < in_dim; ++i) {
                net.weights[l][static_cast<std::size_t>(o) * in_dim + i] = read_value("weight");
            }
        }
    }
    return net;
}

void save_weights(const MlpWeights& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw WeightsIoError("weights: cannot open for writing: " + path);
    out << weights_to_text(net);
    if (!out) throw WeightsIoError("weights: write failed: " + path);
}

MlpWeights load_weights(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WeightsIoError("weights: cannot open: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return weights_from_text(text);
}

}  // namespace oitlab
