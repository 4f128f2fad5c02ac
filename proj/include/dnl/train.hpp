#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "dnl/model.hpp"

namespace dnl {

struct EpochLogRow;

struct TrainingConfig {
    std::size_t k = 10;
    std::vector<std::size_t> batch_sizes = {64, 128, 256};
    std::size_t epochs = 100;
    double initial_lr = 0.01;
    double clip_norm = 5.0;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;  // parallelism across the batch-size sweep

    /// Progress hook, called after every epoch. May run on worker threads
    /// when jobs > 1; must be thread-safe.
    std::function<void(const EpochLogRow&)> on_epoch;
};

struct EpochLogRow {
    std::size_t epoch;       // 1-based within one sweep run
    std::size_t batch_size;
    double train_loss;       // mean per-graph MSE, normalized coordinates
    double val_loss;
    double lr;               // learning rate in effect during the epoch
};

struct TrainResult {
    DnlModel model;               // snapshot with the lowest validation loss
    double best_val_loss;
    std::size_t best_batch_size;
    std::size_t best_epoch;
    std::vector<EpochLogRow> log;  // sweep order, runs concatenated
};

/// Trains one model per batch size in the sweep and keeps the parameter
/// snapshot with the global minimum validation loss. Each run draws its
/// weights and epoch shuffles from a stream derived from (seed, batch size),
/// so results do not depend on `jobs`.
///
/// Runs whose loss turns non-finite abort, stay in the log, and the sweep
/// continues; if every run aborts, TrainingFailure is thrown.
TrainResult train(const std::vector<Fingerprint>& train_fps,
                  const std::vector<Fingerprint>& val_fps, const TrainingConfig& cfg);

void write_training_log(const std::vector<EpochLogRow>& log, const std::filesystem::path& path);

}  // namespace dnl
