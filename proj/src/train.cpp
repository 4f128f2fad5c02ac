#include "dnl/train.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>

#include "dnl/csv.hpp"
#include "dnl/errors.hpp"
#include "dnl/layers.hpp"
#include "dnl/neighborhood.hpp"
#include "dnl/optim.hpp"

namespace dnl {

namespace {

struct TrainGraph {
    CommunityGraph graph;
    Position norm_label;
};

// Neighbors always come from the candidate pool minus the target's own
// fp_id; for disjoint splits the filter is a no-op, and it keeps the
// memorization setup (validation == training) well-formed.
std::vector<TrainGraph> build_labeled_graphs(const std::vector<Fingerprint>& targets,
                                             const std::vector<Fingerprint>& candidates,
                                             std::size_t k, const NormalizationParams& norm,
                                             const WapIndex& index) {
    std::vector<TrainGraph> graphs;
    graphs.reserve(targets.size());
    std::vector<Fingerprint> pool;
    for (const Fingerprint& target : targets) {
        pool.clear();
        pool.reserve(candidates.size());
        for (const Fingerprint& c : candidates) {
            if (c.fp_id != target.fp_id) pool.push_back(c);
        }
        const LocalCommunity community = select_neighbors(target, pool, k, index);
        TrainGraph tg;
        tg.graph = build_graph(community, norm, index, /*labeled=*/true);
        tg.norm_label = norm.normalize(*tg.graph.label);
        graphs.push_back(std::move(tg));
    }
    return graphs;
}

double validation_loss(const DnlModel& model, const std::vector<TrainGraph>& val_graphs) {
    Tensor pred(val_graphs.size(), 2);
    Tensor target(val_graphs.size(), 2);
    for (std::size_t i = 0; i < val_graphs.size(); ++i) {
        const Position p = forward(model, val_graphs[i].graph);
        pred.at(i, 0) = p.x;
        pred.at(i, 1) = p.y;
        target.at(i, 0) = val_graphs[i].norm_label.x;
        target.at(i, 1) = val_graphs[i].norm_label.y;
    }
    return mse_loss(pred, target);
}

struct RunOutcome {
    bool has_best = false;
    DnlModel best_model;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t best_epoch = 0;
    std::vector<EpochLogRow> log;
};

RunOutcome run_sweep_entry(const std::vector<TrainGraph>& train_graphs,
                           const std::vector<TrainGraph>& val_graphs,
                           const NormalizationParams& norm, const WapIndex& index,
                           const TrainingConfig& cfg, std::size_t batch_size) {
    RunOutcome outcome;

    ModelConfig model_cfg;
    model_cfg.k = cfg.k;
    model_cfg.seed = cfg.seed;
    RandomStream rng(derive_seed(cfg.seed, "run-b" + std::to_string(batch_size)));
    DnlModel model = init_model(model_cfg, norm, index, rng);

    AdamState adam = AdamState::create(model.tensors(), cfg.initial_lr);
    PlateauScheduler scheduler(cfg.initial_lr);

    std::vector<std::size_t> order(train_graphs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<ForwardCache> caches(batch_size);

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const double epoch_lr = scheduler.lr();
        rng.shuffle(order);

        double loss_sum = 0.0;  // sum of per-graph MSE, for the epoch average
        bool numeric_failure = false;

        for (std::size_t start = 0; start < order.size() && !numeric_failure;
             start += batch_size) {
            const std::size_t b = std::min(batch_size, order.size() - start);
            Tensor pred(b, 2);
            Tensor target(b, 2);
            for (std::size_t i = 0; i < b; ++i) {
                const TrainGraph& tg = train_graphs[order[start + i]];
                const Position p = forward(model, tg.graph, &caches[i]);
                pred.at(i, 0) = p.x;
                pred.at(i, 1) = p.y;
                target.at(i, 0) = tg.norm_label.x;
                target.at(i, 1) = tg.norm_label.y;
            }
            const double batch_loss = mse_loss(pred, target);
            loss_sum += batch_loss * static_cast<double>(b);
            if (!std::isfinite(batch_loss)) {
                numeric_failure = true;
                break;
            }

            const Tensor dpred = mse_loss_backward(pred, target);
            std::vector<Tensor> grads = zero_gradients(model);
            for (std::size_t i = 0; i < b; ++i) {
                const TrainGraph& tg = train_graphs[order[start + i]];
                backward(model, tg.graph, caches[i], {dpred.at(i, 0), dpred.at(i, 1)}, grads);
            }
            for (const Tensor& g : grads) {
                if (!all_finite(g)) {
                    numeric_failure = true;
                    break;
                }
            }
            if (numeric_failure) break;

            clip_global_norm(grads, cfg.clip_norm);
            adam.lr = epoch_lr;
            adam_step(model.tensors(), grads, adam);
        }

        const double train_loss = loss_sum / static_cast<double>(train_graphs.size());
        const double val_loss = numeric_failure ? std::numeric_limits<double>::quiet_NaN()
                                                : validation_loss(model, val_graphs);
        outcome.log.push_back({epoch, batch_size, train_loss, val_loss, epoch_lr});
        if (cfg.on_epoch) cfg.on_epoch(outcome.log.back());

        if (numeric_failure || !std::isfinite(train_loss) || !std::isfinite(val_loss)) {
            break;  // abort this run; the sweep continues
        }

        if (val_loss < outcome.best_val) {
            outcome.best_val = val_loss;
            outcome.best_epoch = epoch;
            outcome.best_model = model;
            outcome.has_best = true;
        }
        scheduler.step(val_loss);
    }
    return outcome;
}

}  // namespace

TrainResult train(const std::vector<Fingerprint>& train_fps,
                  const std::vector<Fingerprint>& val_fps, const TrainingConfig& cfg) {
    if (cfg.k == 0) throw ContractViolation("train: k must be positive");
    if (cfg.epochs == 0) throw ContractViolation("train: epochs must be positive");
    if (cfg.batch_sizes.empty()) throw ContractViolation("train: batch_sizes must be non-empty");
    for (std::size_t b : cfg.batch_sizes) {
        if (b == 0) throw ContractViolation("train: batch sizes must be positive");
    }
    if (train_fps.size() <= cfg.k) {
        throw InsufficientCandidatesError(train_fps.size(), cfg.k + 1);
    }
    if (val_fps.empty()) throw ContractViolation("train: validation set is empty");

    const WapIndex index = build_wap_index(train_fps);
    const NormalizationParams norm = fit_normalization(train_fps);

    // Communities are static given the training set; build every graph once
    // and share them across the sweep runs.
    const std::vector<TrainGraph> train_graphs =
        build_labeled_graphs(train_fps, train_fps, cfg.k, norm, index);
    const std::vector<TrainGraph> val_graphs =
        build_labeled_graphs(val_fps, train_fps, cfg.k, norm, index);

    std::vector<RunOutcome> outcomes(cfg.batch_sizes.size());
    const std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, cfg.batch_sizes.size()));
    if (jobs == 1) {
        for (std::size_t r = 0; r < cfg.batch_sizes.size(); ++r) {
            outcomes[r] = run_sweep_entry(train_graphs, val_graphs, norm, index, cfg,
                                          cfg.batch_sizes[r]);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(jobs);
        for (std::size_t w = 0; w < jobs; ++w) {
            workers.emplace_back([&] {
                for (std::size_t r = next.fetch_add(1); r < cfg.batch_sizes.size();
                     r = next.fetch_add(1)) {
                    outcomes[r] = run_sweep_entry(train_graphs, val_graphs, norm, index, cfg,
                                                  cfg.batch_sizes[r]);
                }
            });
        }
        for (std::thread& t : workers) t.join();
    }

    TrainResult result;
    result.best_val_loss = std::numeric_limits<double>::infinity();
    result.best_batch_size = 0;
    result.best_epoch = 0;
    bool any = false;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        RunOutcome& o = outcomes[r];
        result.log.insert(result.log.end(), o.log.begin(), o.log.end());
        if (o.has_best && o.best_val < result.best_val_loss) {
            result.best_val_loss = o.best_val;
            result.best_batch_size = cfg.batch_sizes[r];
            result.best_epoch = o.best_epoch;
            result.model = std::move(o.best_model);
            any = true;
        }
    }
    if (!any) {
        throw TrainingFailure("train: every sweep run aborted with non-finite losses");
    }
    return result;
}

void write_training_log(const std::vector<EpochLogRow>& log, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "epoch,batch_size,train_loss,val_loss,lr\n";
    for (const EpochLogRow& row : log) {
        out << row.epoch << ',' << row.batch_size << ',' << csv::format_double(row.train_loss)
            << ',' << csv::format_double(row.val_loss) << ',' << csv::format_double(row.lr)
            << '\n';
    }
}

}  // namespace dnl
