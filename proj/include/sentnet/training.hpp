#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "sentnet/config.hpp"
#include "sentnet/corpus.hpp"
#include "sentnet/model.hpp"

namespace sentnet {

// Per-run bookkeeping: per-epoch loss and validation accuracy, selected epoch,
// final test accuracy.
struct RunReport {
    std::string model;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    double data_fraction = 1.0;
    std::vector<double> epoch_train_loss;
    std::vector<double> epoch_valid_accuracy;
    std::vector<double> epoch_train_accuracy; // filled only when tracked
    int best_epoch = 0;                       // 1-based
    double best_valid_accuracy = 0.0;
    double test_accuracy = 0.0;
    double wall_seconds = 0.0;
};

struct TrainOptions {
    bool track_train_accuracy = false;
    bool stop_at_perfect_train = false; // requires track_train_accuracy
    std::ostream* log = nullptr;
};

struct TrainResult {
    RunReport report;
    std::unique_ptr<ResponseModel> model; // best-validation parameters
};

// Mean negative log-likelihood of the gold labels; probabilities below 1e-12
// are clamped (a numeric warning goes to stderr). The l2 penalty is added in
// the graph-side loss, not here.
double batch_nll(const std::vector<Tensor>& predictions, const std::vector<int>& labels);

// Graph-side batch loss: mean NLL over the examples' y nodes plus
// l2 * sum of squared trainable parameters.
int loss_node(Graph& g, const std::vector<int>& y_nodes, const std::vector<int>& labels,
              const NodeIds& param_ids, const ParamStore& params, double l2);

// Fresh untrained model per config (embeddings, mask, weights all seeded).
std::unique_ptr<ResponseModel> build_model(const Corpus& corpus, const TrainConfig& cfg);

// Learning rate for a 1-based epoch under step decay.
double lr_at_epoch(const TrainConfig& cfg, int epoch);

// The full loop: seeded shuffling, mini-batches, clipping, Adam, lr decay,
// dropout in training only, best-validation model selection.
TrainResult train_model(const Corpus& corpus, const TrainConfig& cfg,
                        const TrainOptions& options = {});

struct SweepCell {
    std::string model;
    double fraction = 1.0;
    std::uint64_t seed = 0;
    double test_accuracy = 0.0;
};

struct SweepSummaryRow {
    double fraction = 1.0;
    double mean = 0.0;
    double stddev = 0.0;
    int runs = 0;
};

struct SweepTable {
    std::vector<SweepCell> cells;
    std::vector<SweepSummaryRow> summary;
};

SweepTable sweep_fraction(const Corpus& corpus, const TrainConfig& base,
                          const std::vector<double>& fractions,
                          const std::vector<std::uint64_t>& seeds,
                          const TrainOptions& options = {});

// Trains with the random strategy on the full train split and writes the
// learned embedding table for later oracle-strategy runs.
void oracle_embedding_protocol(const Corpus& corpus, const TrainConfig& cfg,
                               const std::string& snapshot_path,
                               const TrainOptions& options = {});

// RunReport rows: "model,fraction,seed,epoch,split,metric,value".
void write_run_csv(const RunReport& report, std::ostream& out);
RunReport parse_run_csv(std::istream& in);

double mean_of(const std::vector<double>& xs);
double stddev_of(const std::vector<double>& xs); // sample stddev, 0 for n < 2

} // namespace sentnet
