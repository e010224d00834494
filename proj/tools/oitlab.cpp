// oitlab: CPU order-independent-transparency laboratory.
//
// Subcommands: gen-data, train, render, compare, bench. Every command is
// deterministic for fixed seeds (bench wall-clock fields excepted) and
// independent of OITLAB_THREADS.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "oitlab/blended.hpp"
#include "oitlab/compositing.hpp"
#include "oitlab/dataset.hpp"
#include "oitlab/dfaoit.hpp"
#include "oitlab/features.hpp"
#include "oitlab/image.hpp"
#include "oitlab/metrics.hpp"
#include "oitlab/mlp.hpp"
#include "oitlab/raster.hpp"
#include "oitlab/render.hpp"
#include "oitlab/rng.hpp"
#include "oitlab/scene_io.hpp"

namespace {

using namespace oitlab;

// Command-level misuse that CLI11's parser cannot see (flag combinations,
// enum values). Exits with status 2 like parse errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SceneFlags {
    std::string scene_path;
    int gen_layers = 0;
    std::uint64_t gen_seed = 1;
    std::uint64_t palette_seed = 0;  // 0 = derive from gen_seed
    float gen_alpha_min = 0.01f;
    float gen_alpha_max = 0.85f;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--scene", scene_path, "Scene JSON file");
        cmd->add_option("--gen-layers", gen_layers,
                        "Generate a layered procedural scene with this many layers");
        cmd->add_option("--gen-seed", gen_seed, "Seed for the procedural scene");
        cmd->add_option("--gen-palette-seed", palette_seed,
                        "Palette seed (default: derived from --gen-seed)");
        cmd->add_option("--gen-alpha-min", gen_alpha_min, "Procedural opacity lower bound");
        cmd->add_option("--gen-alpha-max", gen_alpha_max, "Procedural opacity upper bound");
    }

    Scene resolve() const {
        if (!scene_path.empty() && gen_layers > 0) {
            throw UsageError("use either --scene or --gen-layers, not both");
        }
        if (!scene_path.empty()) return load_scene(scene_path);
        if (gen_layers > 0) {
            std::uint64_t palette =
                palette_seed != 0 ? palette_seed : splitmix64_hash(gen_seed ^ 0x70A1E77Eull);
            return gen_layered_scene(gen_seed, gen_layers, gen_alpha_min, gen_alpha_max,
                                     palette);
        }
        throw UsageError("a scene is required: pass --scene PATH or --gen-layers N");
    }
};

Rgb parse_background(const std::string& text) {
    float r, g, b;
    if (std::sscanf(text.c_str(), "%f,%f,%f", &r, &g, &b) != 3) {
        throw UsageError("--background expects r,g,b");
    }
    if (r < 0.0f || r > 1.0f || g < 0.0f || g > 1.0f || b < 0.0f || b > 1.0f) {
        throw UsageError("--background channels must be in [0,1]");
    }
    return {r, g, b};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_gen_data(const DatasetParams& params, const std::string& out_path) {
    auto records = generate_dataset(params);
    write_dataset(records, out_path);

    std::map<std::uint32_t, std::size_t> histogram;
    for (const auto& r : records) histogram[r.n] += 1;
    std::cout << "gen-data: wrote " << records.size() << " records to " << out_path << "\n";
    for (const auto& [n, count] : histogram) {
        std::cout << "gen-data: n=" << n << ": " << count << "\n";
    }
    return 0;
}

int cmd_train(const std::string& data_path, const std::string& out_path,
              std::string history_path, const TrainConfig& config, double val_frac,
              std::uint64_t seed) {
    auto records = read_dataset(data_path);
    auto [train_records, val_records] = split(records, val_frac, seed);
    TrainingSet train_set = to_training_set(train_records);
    TrainingSet val_set = to_training_set(val_records);

    TrainResult result = train(train_set, val_set, config, splitmix64_hash(seed ^ 0x1417ull));
    save_weights(result.net, out_path);

    if (history_path.empty()) history_path = out_path + ".history.csv";
    std::ofstream history(history_path, std::ios::trunc);
    if (!history) throw std::runtime_error("train: cannot write " + history_path);
    for (const EpochStats& s : result.history) {
        char line[96];
        std::snprintf(line, sizeof(line), "%d,%.9g,%.9g\n", s.epoch, s.train_mse, s.val_mse);
        history << line;
    }

    const EpochStats& last = result.history.back();
    std::cout << "train: " << train_set.size() << " train / " << val_set.size()
              << " val examples, " << config.epochs << " epochs\n";
    std::cout << "train: final train mse " << last.train_mse << ", val mse " << last.val_mse
              << "\n";
    std::cout << "train: weights " << out_path << ", history " << history_path << "\n";
    return 0;
}

struct RenderFlags {
    SceneFlags scene;
    int width = 512;
    int height = 512;
    std::string resolver_name_flag = "exact";
    int ht_k = 2;
    std::string weights_path;
    std::string background_text = "0,0,0";
};

RenderConfig make_config(const RenderFlags& flags) {
    RenderConfig config;
    auto resolver = resolver_from_name(flags.resolver_name_flag);
    if (!resolver) throw UsageError("unknown resolver: " + flags.resolver_name_flag);
    config.resolver = *resolver;
    config.background = parse_background(flags.background_text);
    if (flags.ht_k < 1) throw UsageError("--k must be >= 1");
    config.ht_k = flags.ht_k;
    return config;
}

int cmd_render(const RenderFlags& flags, const std::string& out_path) {
    RenderConfig config = make_config(flags);
    MlpWeights net;
    const MlpWeights* net_ptr = nullptr;
    if (config.resolver == Resolver::Dfaoit) {
        if (flags.weights_path.empty()) throw UsageError("--resolver dfaoit requires --weights");
        net = load_weights(flags.weights_path);
        net_ptr = &net;
    }

    Scene scene = flags.scene.resolve();
    validate_scene(scene);
    FrameFragmentBuffer frame = rasterize_scene(scene, flags.width, flags.height);
    ImageRGB img = render_frame(frame, config, net_ptr);
    write_ppm(img, out_path);
    std::cout << "render: " << resolver_name(config.resolver) << " " << flags.width << "x"
              << flags.height << " -> " << out_path << "\n";
    return 0;
}

int cmd_compare(const RenderFlags& flags, const std::string& resolvers_csv,
                const std::string& out_base) {
    std::vector<Resolver> requested;
    std::stringstream ss(resolvers_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto r = resolver_from_name(item);
        if (!r) throw UsageError("unknown resolver: " + item);
        requested.push_back(*r);
    }
    if (requested.empty()) throw UsageError("--resolvers must name at least one resolver");

    RenderConfig config = make_config(flags);
    MlpWeights net;
    const MlpWeights* net_ptr = nullptr;
    const bool wants_dfaoit =
        std::find(requested.begin(), requested.end(), Resolver::Dfaoit) != requested.end();
    if (wants_dfaoit) {
        if (flags.weights_path.empty()) throw UsageError("resolver dfaoit requires --weights");
        net = load_weights(flags.weights_path);
        net_ptr = &net;
    }

    Scene scene = flags.scene.resolve();
    validate_scene(scene);
    FrameFragmentBuffer frame = rasterize_scene(scene, flags.width, flags.height);

    RenderConfig exact_config = config;
    exact_config.resolver = Resolver::Exact;
    ImageRGB reference = render_frame(frame, exact_config);

    std::ofstream csv(out_base + ".csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("compare: cannot write " + out_base + ".csv");
    for (Resolver r : requested) {
        RenderConfig rc = config;
        rc.resolver = r;
        ImageRGB img = render_frame(frame, rc, net_ptr);
        QualityReport report = quality_report(resolver_name(r), reference, img);
        csv << report.csv_row() << "\n";
        std::cout << report.csv_row() << "\n";
        write_ppm(error_map(reference, img), out_base + "-" + resolver_name(r) + ".ppm");
    }
    std::cout << "compare: csv " << out_base << ".csv\n";
    return 0;
}

int cmd_bench(const RenderFlags& flags, int reps) {
    if (reps < 1) throw UsageError("--reps must be >= 1");

    MlpWeights net;
    if (!flags.weights_path.empty()) {
        net = load_weights(flags.weights_path);
    } else {
        net = MlpWeights::he_uniform(7);  // untrained weights time identically
    }
    Rgb background = parse_background(flags.background_text);

    Scene scene = flags.scene.resolve();
    validate_scene(scene);
    FrameFragmentBuffer frame = rasterize_scene(scene, flags.width, flags.height);

    std::size_t fragments = 0;
    for (const auto& px : frame.pixels) fragments += px.size();

    using clock = std::chrono::steady_clock;
    std::vector<double> extract_ms, infer_ms;
    DfaoitFrame features;
    std::size_t transparent_pixels = 0;
    for (int r = 0; r < reps; ++r) {
        auto t0 = clock::now();
        features = extract_frame_features(frame);
        auto t1 = clock::now();
        ImageRGB img = resolve_dfaoit_frame(features, net, background);
        auto t2 = clock::now();
        extract_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        infer_ms.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
        if (r == 0) {
            for (const auto& rec : features.records) {
                if (rec.n > 2) transparent_pixels += 1;
            }
        }
    }

    std::cout << "bench: resolution " << flags.width << "x" << flags.height << ", reps "
              << reps << "\n";
    std::cout << "bench: fragments " << fragments << ", transparent_pixels "
              << transparent_pixels << "\n";
    std::cout << "bench: feature_extraction_ms " << median(extract_ms) << "\n";
    std::cout << "bench: inference_ms " << median(infer_ms) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CPU transparency-rendering laboratory"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "Generate a training dataset");
    DatasetParams params;
    std::string gen_out;
    gen->add_option("--seed", params.master_seed, "Master seed");
    gen->add_option("--count", params.target_example_count, "Number of training records");
    gen->add_option("--scenes", params.scene_count, "Procedural scenes to draw from");
    gen->add_option("--layers-min", params.layers_min, "Minimum depth complexity");
    gen->add_option("--layers-max", params.layers_max, "Maximum depth complexity");
    gen->add_option("--alpha-min", params.alpha_min, "Opacity lower bound");
    gen->add_option("--alpha-max", params.alpha_max, "Opacity upper bound");
    gen->add_option("--width", params.width, "Scene raster width");
    gen->add_option("--height", params.height, "Scene raster height");
    gen->add_option("--out", gen_out, "Output dataset file")->required();

    // train
    auto* tr = app.add_subcommand("train", "Train the network on a dataset");
    std::string train_data, train_out, train_history;
    TrainConfig train_config;
    double val_frac = 0.1;
    std::uint64_t train_seed = 0;
    tr->add_option("--data", train_data, "Input dataset file")->required();
    tr->add_option("--out", train_out, "Output weights file")->required();
    tr->add_option("--history", train_history, "Loss-history CSV (default: <out>.history.csv)");
    tr->add_option("--epochs", train_config.epochs, "Training epochs");
    tr->add_option("--batch", train_config.batch_size, "Mini-batch size");
    tr->add_option("--lr", train_config.learning_rate, "Adam learning rate");
    tr->add_option("--val-frac", val_frac, "Validation fraction");
    tr->add_option("--seed", train_seed, "Seed for init and shuffling");

    // render
    auto* rd = app.add_subcommand("render", "Render a scene with one resolver");
    RenderFlags render_flags;
    std::string render_out;
    render_flags.scene.add_to(rd);
    rd->add_option("--width", render_flags.width, "Image width");
    rd->add_option("--height", render_flags.height, "Image height");
    rd->add_option("--resolver", render_flags.resolver_name_flag,
                   "exact|wsum|wavg|wboit|ht|dfaoit");
    rd->add_option("--k", render_flags.ht_k, "HT core size");
    rd->add_option("--weights", render_flags.weights_path, "Network weights (dfaoit)");
    rd->add_option("--background", render_flags.background_text, "Background color r,g,b");
    rd->add_option("--out", render_out, "Output PPM")->required();

    // compare
    auto* cp = app.add_subcommand("compare", "Compare resolvers against the exact reference");
    RenderFlags compare_flags;
    std::string compare_resolvers = "wsum,wavg,wboit,ht";
    std::string compare_out;
    compare_flags.scene.add_to(cp);
    cp->add_option("--width", compare_flags.width, "Image width");
    cp->add_option("--height", compare_flags.height, "Image height");
    cp->add_option("--resolvers", compare_resolvers, "Comma-separated resolver list");
    cp->add_option("--k", compare_flags.ht_k, "HT core size");
    cp->add_option("--weights", compare_flags.weights_path, "Network weights (dfaoit)");
    cp->add_option("--background", compare_flags.background_text, "Background color r,g,b");
    cp->add_option("--out", compare_out, "Output base path for CSV and error maps")
        ->required();

    // bench
    auto* bn = app.add_subcommand("bench", "Time feature extraction and inference");
    RenderFlags bench_flags;
    bench_flags.scene.gen_layers = 20;
    int bench_reps = 5;
    bench_flags.scene.add_to(bn);
    bn->add_option("--width", bench_flags.width, "Image width");
    bn->add_option("--height", bench_flags.height, "Image height");
    bn->add_option("--weights", bench_flags.weights_path, "Network weights (optional)");
    bn->add_option("--background", bench_flags.background_text, "Background color r,g,b");
    bn->add_option("--reps", bench_reps, "Repetitions for the median");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) return cmd_gen_data(params, gen_out);
        if (tr->parsed()) {
            return cmd_train(train_data, train_out, train_history, train_config, val_frac,
                             train_seed);
        }
        if (rd->parsed()) return cmd_render(render_flags, render_out);
        if (cp->parsed()) return cmd_compare(compare_flags, compare_resolvers, compare_out);
        if (bn->parsed()) return cmd_bench(bench_flags, bench_reps);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
