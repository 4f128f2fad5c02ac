// dnlpos: synth / split / baseline / train / predict / evaluate pipeline.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error. All reports go to
// files; stderr carries progress lines only.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "json.hpp"

#include "dnl/checkpoint.hpp"
#include "dnl/community_graph.hpp"
#include "dnl/csv.hpp"
#include "dnl/errors.hpp"
#include "dnl/evaluation.hpp"
#include "dnl/fingerprint.hpp"
#include "dnl/neighborhood.hpp"
#include "dnl/rng.hpp"
#include "dnl/synth_radio.hpp"
#include "dnl/train.hpp"

namespace {

namespace fs = std::filesystem;

/// Exception-safe numeric parse for optional-valued flags; a false return
/// makes CLI11 report a usage error.
template <typename T>
bool parse_into(const CLI::results_t& res, std::optional<T>& out) {
    T v{};
    const std::string& s = res[0];
    const char* last = s.data() + s.size();
    const auto r = std::from_chars(s.data(), last, v);
    if (r.ec != std::errc() || r.ptr != last || s.empty()) return false;
    out = v;
    return true;
}


void write_run_config(const fs::path& dir, const nlohmann::json& config) {
    fs::create_directories(dir);
    std::ofstream out(dir / "run_config.json");
    if (!out) throw dnl::IoError("cannot write " + (dir / "run_config.json").string());
    out << config.dump(2) << '\n';
}

std::vector<dnl::Fingerprint> load_input_dir(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw dnl::LoadError("input directory does not exist: " + dir.string());
    }
    return dnl::load_dataset(dir / "fingerprints.csv", dir / "observations.csv");
}

/// Restricts to one floor. Without --floor the dataset must be single-floor.
std::vector<dnl::Fingerprint> apply_floor(std::vector<dnl::Fingerprint> fps,
                                          const std::optional<int>& floor) {
    if (floor) {
        std::vector<dnl::Fingerprint> out;
        for (auto& fp : fps) {
            if (fp.floor == *floor) out.push_back(std::move(fp));
        }
        if (out.empty()) {
            throw dnl::Error("no fingerprints on floor " + std::to_string(*floor));
        }
        return out;
    }
    std::set<int> floors;
    for (const auto& fp : fps) floors.insert(fp.floor);
    if (floors.size() > 1) {
        throw dnl::Error("dataset spans " + std::to_string(floors.size()) +
                         " floors; pick one with --floor (models are per-floor)");
    }
    return fps;
}

struct SplitSets {
    std::vector<dnl::Fingerprint> train;
    std::vector<dnl::Fingerprint> validation;
    std::vector<dnl::Fingerprint> test;
    std::uint64_t seed = 0;
};

SplitSets resolve_split(const std::vector<dnl::Fingerprint>& fps, const fs::path& split_path,
                        const std::optional<int>& floor) {
    const dnl::DatasetSplit split = dnl::load_split(split_path);
    // Floor filtering happens after the id lookup so one split file serves
    // every per-floor run.
    const auto take = [&](const std::vector<std::int64_t>& ids) {
        return apply_floor(dnl::filter_by_ids(fps, ids), floor);
    };
    SplitSets sets;
    sets.train = take(split.train);
    sets.validation = take(split.validation);
    sets.test = take(split.test);
    sets.seed = split.seed;
    return sets;
}

/// Corrupts a fraction of the training labels in place, logging the count.
void maybe_inject_outliers(std::vector<dnl::Fingerprint>& train_fps, double fraction,
                           std::uint64_t outlier_seed) {
    if (fraction == 0.0) return;
    dnl::OutlierInjection injection = dnl::inject_outliers(train_fps, fraction, outlier_seed);
    train_fps = std::move(injection.fingerprints);
    std::fprintf(stderr, "[outliers] corrupted %zu of %zu training labels (seed %llu)\n",
                 injection.corrupted_ids.size(), train_fps.size(),
                 static_cast<unsigned long long>(outlier_seed));
}

std::vector<dnl::Fingerprint> load_scans(const fs::path& path) {
    dnl::csv::Reader reader(path, {"fp_id", "mac", "rss_dbm"});
    std::map<std::int64_t, dnl::Fingerprint> scans;
    std::vector<std::string> f;
    while (reader.next(f)) {
        const std::int64_t id = dnl::csv::parse_int(reader, f[0]);
        const double rss = dnl::csv::parse_double(reader, f[2]);
        auto& scan = scans[id];
        scan.fp_id = id;
        if (!scan.observations.emplace(f[1], rss).second) {
            throw dnl::DuplicateObservationError(reader.file_name() + ":" +
                                                 std::to_string(reader.line_number()) +
                                                 ": duplicate observation in scans");
        }
    }
    std::vector<dnl::Fingerprint> out;
    out.reserve(scans.size());
    for (auto& [id, scan] : scans) out.push_back(std::move(scan));
    return out;
}

// ---------------------------------------------------------------------------
// Subcommand options
// ---------------------------------------------------------------------------

struct SynthOpts {
    dnl::RadioMapConfig cfg;
    std::string out_dir;
};

struct SplitOpts {
    std::string input_dir;
    std::string out_file;
    std::uint64_t seed = 0;
};

struct BaselineOpts {
    std::string input_dir;
    std::string split_file;
    std::string out_dir = ".";
    std::size_t k = 10;
    std::optional<int> floor;
    double outlier_fraction = 0.0;
    std::optional<std::uint64_t> outlier_seed;
};

struct TrainOpts {
    std::string input_dir;
    std::string split_file;
    std::string model_file;
    std::size_t k = 10;
    std::vector<std::size_t> batch_sizes = {64, 128, 256};
    std::size_t epochs = 100;
    double lr = 0.01;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::optional<int> floor;
    double outlier_fraction = 0.0;
    std::optional<std::uint64_t> outlier_seed;
    std::string dump_graphs;
};

struct PredictOpts {
    std::string model_file;
    std::string scans_file;
    std::string input_dir;
    std::string split_file;
    std::string out_file = "positions.csv";
    std::string dump_graphs;
};

struct EvaluateOpts {
    std::string input_dir;
    std::string split_file;
    std::string model_file;
    std::string out_dir = ".";
    bool baselines = false;
    std::size_t k = 10;
    std::optional<int> floor;
    double outlier_fraction = 0.0;
    std::optional<std::uint64_t> outlier_seed;
};

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int cmd_synth(const SynthOpts& o) {
    const dnl::RadioMap map = dnl::generate(o.cfg);
    dnl::write_dataset(map, o.out_dir);

    nlohmann::json rc;
    rc["subcommand"] = "synth";
    rc["fps"] = o.cfg.n_fps;
    rc["waps"] = o.cfg.n_waps;
    rc["width"] = o.cfg.width;
    rc["height"] = o.cfg.height;
    rc["tx_power_dbm"] = o.cfg.tx_power_dbm;
    rc["path_loss_exponent"] = o.cfg.path_loss_exponent;
    rc["shadowing_sigma"] = o.cfg.shadowing_sigma;
    rc["detection_threshold"] = o.cfg.detection_threshold;
    rc["grid"] = o.cfg.grid_placement;
    rc["floor"] = o.cfg.floor;
    rc["seed"] = o.cfg.seed;
    rc["out"] = o.out_dir;
    write_run_config(o.out_dir, rc);

    std::fprintf(stderr, "[synth] wrote %zu fingerprints / %zu waps to %s\n",
                 map.fingerprints.size(), map.waps.size(), o.out_dir.c_str());
    return 0;
}

int cmd_split(const SplitOpts& o) {
    const auto fps = load_input_dir(o.input_dir);
    const dnl::DatasetSplit split = dnl::split_dataset(fps, o.seed);
    const fs::path out =
        o.out_file.empty() ? fs::path(o.input_dir) / "split.json" : fs::path(o.out_file);
    dnl::save_split(split, out);

    nlohmann::json rc;
    rc["subcommand"] = "split";
    rc["input"] = o.input_dir;
    rc["seed"] = o.seed;
    rc["out"] = out.string();
    write_run_config(out.parent_path().empty() ? "." : out.parent_path(), rc);

    std::fprintf(stderr, "[split] %zu/%zu/%zu train/validation/test -> %s\n",
                 split.train.size(), split.validation.size(), split.test.size(),
                 out.string().c_str());
    return 0;
}

dnl::ErrorReport baseline_report(const char* name, bool weighted,
                                 const std::vector<dnl::Fingerprint>& test_fps,
                                 const std::vector<dnl::Fingerprint>& train_fps, std::size_t k,
                                 const dnl::WapIndex& index) {
    std::vector<dnl::Position> preds, truths;
    preds.reserve(test_fps.size());
    truths.reserve(test_fps.size());
    for (const dnl::Fingerprint& fp : test_fps) {
        preds.push_back(weighted ? dnl::wknn_predict(fp, train_fps, k, index)
                                 : dnl::knn_predict(fp, train_fps, k, index));
        truths.push_back(fp.position);
    }
    return dnl::compute_report(preds, truths, name);
}

int cmd_baseline(const BaselineOpts& o) {
    const auto fps = load_input_dir(o.input_dir);
    SplitSets sets = resolve_split(fps, o.split_file, o.floor);
    const std::uint64_t outlier_seed =
        o.outlier_seed ? *o.outlier_seed : dnl::derive_seed(sets.seed, "outliers");
    maybe_inject_outliers(sets.train, o.outlier_fraction, outlier_seed);

    const dnl::WapIndex index = dnl::build_wap_index(sets.train);
    std::vector<dnl::ErrorReport> reports;
    reports.push_back(baseline_report("KNN", false, sets.test, sets.train, o.k, index));
    reports.push_back(baseline_report("WKNN", true, sets.test, sets.train, o.k, index));
    fs::create_directories(o.out_dir);
    dnl::emit_comparison(reports, o.out_dir);

    nlohmann::json rc;
    rc["subcommand"] = "baseline";
    rc["input"] = o.input_dir;
    rc["split"] = o.split_file;
    rc["k"] = o.k;
    rc["floor"] = o.floor ? nlohmann::json(*o.floor) : nlohmann::json(nullptr);
    rc["outlier_fraction"] = o.outlier_fraction;
    rc["outlier_seed"] = outlier_seed;
    rc["out"] = o.out_dir;
    write_run_config(o.out_dir, rc);

    for (const dnl::ErrorReport& r : reports) {
        std::fprintf(stderr, "[baseline] %s: mae=%.2f rmse=%.2f cdf68=%.2f cdf95=%.2f (n=%zu)\n",
                     r.algorithm.c_str(), r.mae, r.rmse, r.cdf68, r.cdf95, r.n);
    }
    return 0;
}

int cmd_train(const TrainOpts& o) {
    const auto fps = load_input_dir(o.input_dir);
    SplitSets sets = resolve_split(fps, o.split_file, o.floor);
    const std::uint64_t outlier_seed =
        o.outlier_seed ? *o.outlier_seed : dnl::derive_seed(o.seed, "outliers");
    maybe_inject_outliers(sets.train, o.outlier_fraction, outlier_seed);

    dnl::TrainingConfig cfg;
    cfg.k = o.k;
    cfg.batch_sizes = o.batch_sizes;
    cfg.epochs = o.epochs;
    cfg.initial_lr = o.lr;
    cfg.seed = o.seed;
    cfg.jobs = o.jobs;
    std::mutex log_mutex;
    cfg.on_epoch = [&](const dnl::EpochLogRow& row) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "[train] b=%zu epoch %zu/%zu train=%.6g val=%.6g lr=%.4g\n",
                     row.batch_size, row.epoch, o.epochs, row.train_loss, row.val_loss, row.lr);
    };

    const dnl::TrainResult result = dnl::train(sets.train, sets.validation, cfg);

    const fs::path model_path(o.model_file);
    const fs::path out_dir = model_path.parent_path().empty() ? "." : model_path.parent_path();
    fs::create_directories(out_dir);
    dnl::save_checkpoint(result.model, model_path);
    dnl::write_training_log(result.log, out_dir / "training_log.csv");

    if (!o.dump_graphs.empty()) {
        fs::create_directories(o.dump_graphs);
        for (const dnl::Fingerprint& target : sets.train) {
            std::vector<dnl::Fingerprint> pool;
            pool.reserve(sets.train.size());
            for (const dnl::Fingerprint& c : sets.train) {
                if (c.fp_id != target.fp_id) pool.push_back(c);
            }
            const auto community =
                dnl::select_neighbors(target, pool, cfg.k, result.model.wap_index);
            const auto graph =
                dnl::build_graph(community, result.model.norm, result.model.wap_index, true);
            dnl::dump_graph_json(graph, fs::path(o.dump_graphs) /
                                            ("train_" + std::to_string(target.fp_id) + ".json"));
        }
    }

    nlohmann::json rc;
    rc["subcommand"] = "train";
    rc["input"] = o.input_dir;
    rc["split"] = o.split_file;
    rc["k"] = o.k;
    rc["batch_sizes"] = o.batch_sizes;
    rc["epochs"] = o.epochs;
    rc["lr"] = o.lr;
    rc["seed"] = o.seed;
    rc["jobs"] = o.jobs;
    rc["floor"] = o.floor ? nlohmann::json(*o.floor) : nlohmann::json(nullptr);
    rc["outlier_fraction"] = o.outlier_fraction;
    rc["outlier_seed"] = outlier_seed;
    rc["dump_graphs"] = o.dump_graphs;
    rc["out"] = o.model_file;
    write_run_config(out_dir, rc);

    std::fprintf(stderr, "[train] best val loss %.8g (batch %zu, epoch %zu) -> %s\n",
                 result.best_val_loss, result.best_batch_size, result.best_epoch,
                 o.model_file.c_str());
    return 0;
}

int cmd_predict(const PredictOpts& o) {
    const dnl::DnlModel model = dnl::load_checkpoint(o.model_file);
    auto fps = load_input_dir(o.input_dir);

    std::vector<dnl::Fingerprint> references;
    if (!o.split_file.empty()) {
        const dnl::DatasetSplit split = dnl::load_split(o.split_file);
        references = dnl::filter_by_ids(fps, split.train);
    } else {
        references = std::move(fps);
    }

    const auto scans = load_scans(o.scans_file);
    const fs::path out_path(o.out_file);
    const fs::path out_dir = out_path.parent_path().empty() ? "." : out_path.parent_path();
    fs::create_directories(out_dir);
    std::ofstream out(out_path);
    if (!out) throw dnl::IoError("cannot write " + o.out_file);
    out << "fp_id,x,y\n";
    for (const dnl::Fingerprint& scan : scans) {
        const dnl::Position p = dnl::predict(model, scan, references);
        out << scan.fp_id << ',' << dnl::csv::format_double(p.x) << ','
            << dnl::csv::format_double(p.y) << '\n';

        if (!o.dump_graphs.empty()) {
            fs::create_directories(o.dump_graphs);
            std::vector<dnl::Fingerprint> pool;
            for (const dnl::Fingerprint& c : references) {
                if (c.fp_id != scan.fp_id) pool.push_back(c);
            }
            const auto community =
                dnl::select_neighbors(scan, pool, model.config.k, model.wap_index);
            const auto graph = dnl::build_graph(community, model.norm, model.wap_index, false);
            dnl::dump_graph_json(graph, fs::path(o.dump_graphs) /
                                            ("scan_" + std::to_string(scan.fp_id) + ".json"));
        }
    }

    nlohmann::json rc;
    rc["subcommand"] = "predict";
    rc["model"] = o.model_file;
    rc["scans"] = o.scans_file;
    rc["input"] = o.input_dir;
    rc["split"] = o.split_file;
    rc["dump_graphs"] = o.dump_graphs;
    rc["out"] = o.out_file;
    write_run_config(out_dir, rc);

    std::fprintf(stderr, "[predict] %zu scans -> %s\n", scans.size(), o.out_file.c_str());
    return 0;
}

int cmd_evaluate(const EvaluateOpts& o) {
    const dnl::DnlModel model = dnl::load_checkpoint(o.model_file);
    const auto fps = load_input_dir(o.input_dir);
    SplitSets sets = resolve_split(fps, o.split_file, o.floor);
    const std::uint64_t outlier_seed =
        o.outlier_seed ? *o.outlier_seed : dnl::derive_seed(model.config.seed, "outliers");
    maybe_inject_outliers(sets.train, o.outlier_fraction, outlier_seed);

    std::vector<dnl::ErrorReport> reports;
    if (o.baselines) {
        const dnl::WapIndex index = dnl::build_wap_index(sets.train);
        reports.push_back(baseline_report("KNN", false, sets.test, sets.train, o.k, index));
        reports.push_back(baseline_report("WKNN", true, sets.test, sets.train, o.k, index));
    }
    {
        std::vector<dnl::Position> preds, truths;
        preds.reserve(sets.test.size());
        truths.reserve(sets.test.size());
        for (const dnl::Fingerprint& fp : sets.test) {
            preds.push_back(dnl::predict(model, fp, sets.train));
            truths.push_back(fp.position);
        }
        reports.push_back(dnl::compute_report(preds, truths, "DNL"));
    }

    fs::create_directories(o.out_dir);
    dnl::emit_comparison(reports, o.out_dir);

    nlohmann::json rc;
    rc["subcommand"] = "evaluate";
    rc["input"] = o.input_dir;
    rc["split"] = o.split_file;
    rc["model"] = o.model_file;
    rc["baselines"] = o.baselines;
    rc["k"] = o.k;
    rc["floor"] = o.floor ? nlohmann::json(*o.floor) : nlohmann::json(nullptr);
    rc["outlier_fraction"] = o.outlier_fraction;
    rc["outlier_seed"] = outlier_seed;
    rc["out"] = o.out_dir;
    write_run_config(o.out_dir, rc);

    for (const dnl::ErrorReport& r : reports) {
        std::fprintf(stderr, "[evaluate] %s: mae=%.2f rmse=%.2f cdf68=%.2f cdf95=%.2f (n=%zu)\n",
                     r.algorithm.c_str(), r.mae, r.rmse, r.cdf68, r.cdf95, r.n);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"WiFi RSS fingerprint positioning: community graphs, GIN regressor, "
                 "KNN/WKNN baselines, synthetic radio maps"};
    app.require_subcommand(1);

    SynthOpts synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic radio-map dataset");
    synth_cmd->add_option("--fps", synth.cfg.n_fps, "Number of fingerprints")
        ->capture_default_str();
    synth_cmd->add_option("--waps", synth.cfg.n_waps, "Number of WAPs")->capture_default_str();
    synth_cmd->add_option("--width", synth.cfg.width, "Floor width [m]")->capture_default_str();
    synth_cmd->add_option("--height", synth.cfg.height, "Floor height [m]")
        ->capture_default_str();
    synth_cmd->add_option("--sigma", synth.cfg.shadowing_sigma, "Shadowing sigma [dB]")
        ->capture_default_str();
    synth_cmd->add_option("--eta", synth.cfg.path_loss_exponent, "Path-loss exponent")
        ->capture_default_str();
    synth_cmd->add_option("--tx-power", synth.cfg.tx_power_dbm, "RSS at 1 m [dBm]")
        ->capture_default_str();
    synth_cmd->add_option("--threshold", synth.cfg.detection_threshold,
                          "Detection threshold [dBm]")
        ->capture_default_str();
    synth_cmd->add_flag("--grid", synth.cfg.grid_placement, "Place fingerprints on a lattice");
    synth_cmd->add_option("--floor", synth.cfg.floor, "Floor label")->capture_default_str();
    synth_cmd->add_option("--seed", synth.cfg.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("-o,--out", synth.out_dir, "Output directory")->required();

    SplitOpts split;
    auto* split_cmd = app.add_subcommand("split", "Create a seeded 6:2:2 dataset split");
    split_cmd->add_option("-i,--input", split.input_dir, "Dataset directory")->required();
    split_cmd->add_option("--seed", split.seed, "Shuffle seed")->capture_default_str();
    split_cmd->add_option("-o,--out", split.out_file, "Output file (default <input>/split.json)");

    BaselineOpts baseline;
    auto* baseline_cmd =
        app.add_subcommand("baseline", "Evaluate the KNN and WKNN baselines on the test split");
    baseline_cmd->add_option("-i,--input", baseline.input_dir, "Dataset directory")->required();
    baseline_cmd->add_option("--split", baseline.split_file, "split.json path")->required();
    baseline_cmd->add_option("--k", baseline.k, "Neighborhood size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    baseline_cmd->add_option(
        "--floor", [&baseline](const CLI::results_t& res) { return parse_into(res, baseline.floor); },
        "Restrict to one floor");
    baseline_cmd->add_option("--outlier-fraction", baseline.outlier_fraction,
                             "Fraction of training labels to corrupt")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    baseline_cmd->add_option(
        "--outlier-seed",
        [&baseline](const CLI::results_t& res) { return parse_into(res, baseline.outlier_seed); },
        "Seed for outlier injection (default: derived from the split seed)");
    baseline_cmd->add_option("-o,--out", baseline.out_dir, "Output directory")
        ->capture_default_str();

    TrainOpts train;
    auto* train_cmd = app.add_subcommand("train", "Train the graph positioning model");
    train_cmd->add_option("-i,--input", train.input_dir, "Dataset directory")->required();
    train_cmd->add_option("--split", train.split_file, "split.json path")->required();
    train_cmd->add_option("--k", train.k, "Community size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--batch-size", train.batch_sizes, "Batch-size sweep")
        ->capture_default_str();
    train_cmd->add_option("--epochs", train.epochs, "Epochs per sweep run")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option("--lr", train.lr, "Initial learning rate")->capture_default_str();
    train_cmd->add_option("--seed", train.seed, "Run seed")->capture_default_str();
    train_cmd->add_option("--jobs", train.jobs, "Parallel sweep runs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train_cmd->add_option(
        "--floor", [&train](const CLI::results_t& res) { return parse_into(res, train.floor); },
        "Restrict to one floor");
    train_cmd->add_option("--outlier-fraction", train.outlier_fraction,
                          "Fraction of training labels to corrupt")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    train_cmd->add_option(
        "--outlier-seed",
        [&train](const CLI::results_t& res) { return parse_into(res, train.outlier_seed); },
        "Seed for outlier injection (default: derived from --seed)");
    train_cmd->add_option("--dump-graphs", train.dump_graphs,
                          "Write one JSON file per training graph into this directory");
    train_cmd->add_option("-o,--out", train.model_file, "Checkpoint file")->required();

    PredictOpts predict;
    auto* predict_cmd = app.add_subcommand("predict", "Locate unlabeled scans");
    predict_cmd->add_option("--model", predict.model_file, "Checkpoint file")->required();
    predict_cmd->add_option("--scans", predict.scans_file,
                            "Scans CSV (fp_id,mac,rss_dbm)")
        ->required();
    predict_cmd->add_option("-i,--input", predict.input_dir, "Reference dataset directory")
        ->required();
    predict_cmd->add_option("--split", predict.split_file,
                            "split.json; restricts references to the train ids");
    predict_cmd->add_option("--dump-graphs", predict.dump_graphs,
                            "Write one JSON file per inference graph into this directory");
    predict_cmd->add_option("-o,--out", predict.out_file, "Output CSV")->capture_default_str();

    EvaluateOpts evaluate;
    auto* evaluate_cmd =
        app.add_subcommand("evaluate", "Evaluate a trained model (and optionally the baselines)");
    evaluate_cmd->add_option("-i,--input", evaluate.input_dir, "Dataset directory")->required();
    evaluate_cmd->add_option("--split", evaluate.split_file, "split.json path")->required();
    evaluate_cmd->add_option("--model", evaluate.model_file, "Checkpoint file")->required();
    evaluate_cmd->add_flag("--baselines", evaluate.baselines, "Also report KNN and WKNN");
    evaluate_cmd->add_option("--k", evaluate.k, "Baseline neighborhood size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate_cmd->add_option(
        "--floor", [&evaluate](const CLI::results_t& res) { return parse_into(res, evaluate.floor); },
        "Restrict to one floor");
    evaluate_cmd->add_option("--outlier-fraction", evaluate.outlier_fraction,
                             "Fraction of training labels to corrupt")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    evaluate_cmd->add_option(
        "--outlier-seed",
        [&evaluate](const CLI::results_t& res) { return parse_into(res, evaluate.outlier_seed); },
        "Seed for outlier injection (default: derived from the model seed)");
    evaluate_cmd->add_option("-o,--out", evaluate.out_dir, "Output directory")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(synth);
        if (split_cmd->parsed()) return cmd_split(split);
        if (baseline_cmd->parsed()) return cmd_baseline(baseline);
        if (train_cmd->parsed()) return cmd_train(train);
        if (predict_cmd->parsed()) return cmd_predict(predict);
        if (evaluate_cmd->parsed()) return cmd_evaluate(evaluate);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
