#include "sentnet/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "sentnet/entnet.hpp"
#include "sentnet/eval.hpp"
#include "sentnet/gradcheck.hpp"
#include "sentnet/sentnet.hpp"

namespace sentnet {

namespace {

constexpr double kProbFloor = 1e-12;

// Distinct derived streams so that model init, shuffling/dropout, and
// subsampling draws stay independent of each other.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed * 0x9e3779b97f4a7c15ull + stream;
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    return x;
}

std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double stddev_of(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean_of(xs);
    double sq = 0.0;
    for (double x : xs) sq += (x - m) * (x - m);
    return std::sqrt(sq / static_cast<double>(xs.size() - 1));
}

double batch_nll(const std::vector<Tensor>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size() || predictions.empty())
        throw ContractError("batch_nll: prediction/label length mismatch or empty batch");
    double sum = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        double p = predictions[i].data[static_cast<std::size_t>(labels[i])];
        if (p < kProbFloor) {
            std::cerr << "[sentnet] warning: gold probability " << p << " clamped to "
                      << kProbFloor << "\n";
            p = kProbFloor;
        }
        sum -= std::log(p);
    }
    return sum / static_cast<double>(predictions.size());
}

int loss_node(Graph& g, const std::vector<int>& y_nodes, const std::vector<int>& labels,
              const NodeIds& param_ids, const ParamStore& params, double l2) {
    if (y_nodes.size() != labels.size() || y_nodes.empty())
        throw ContractError("loss_node: prediction/label length mismatch or empty batch");
    int nll_sum = -1;
    for (std::size_t i = 0; i < y_nodes.size(); ++i) {
        const Tensor& y = g.value(y_nodes[i]);
        std::vector<double> onehot(y.size(), 0.0);
        onehot[static_cast<std::size_t>(labels[i])] = 1.0;
        if (y.data[static_cast<std::size_t>(labels[i])] < kProbFloor)
            std::cerr << "[sentnet] warning: gold probability below " << kProbFloor
                      << ", clamped in loss\n";
        const int picked = g.dot(y_nodes[i], g.constant(Tensor::vector(std::move(onehot))));
        const int nll = g.scale(g.log(picked), g.scalar(-1.0));
        nll_sum = (nll_sum < 0) ? nll : g.add(nll_sum, nll);
    }
    int loss = g.scale(nll_sum, g.scalar(1.0 / static_cast<double>(y_nodes.size())));
    if (l2 > 0.0) {
        int penalty = -1;
        for (const auto& [name, p] : params.all()) {
            if (!p.trainable) continue;
            const int node = param_ids.at(name);
            const int sq = g.dot(node, node);
            penalty = (penalty < 0) ? sq : g.add(penalty, sq);
        }
        if (penalty >= 0) loss = g.add(loss, g.scale(penalty, g.scalar(l2)));
    }
    return loss;
}

double lr_at_epoch(const TrainConfig& cfg, int epoch) {
    const int decays = (epoch - 1) / cfg.decay_every;
    return cfg.lr * std::pow(cfg.decay_factor, static_cast<double>(decays));
}

std::unique_ptr<ResponseModel> build_model(const Corpus& corpus, const TrainConfig& cfg) {
    cfg.validate();
    if (cfg.use_pos && !corpus.has_pos)
        throw ContractError("build_model: use_pos requires a corpus with a POS lexicon");

    ModelConfig mcfg;
    mcfg.d = cfg.d;
    mcfg.m = cfg.m;
    mcfg.c = corpus.num_candidates();
    mcfg.use_pos = cfg.use_pos;
    mcfg.l_max = compute_l_max(corpus.train);

    EmbeddingInitOptions eopts;
    eopts.d = cfg.d;
    eopts.seed = derive_seed(cfg.seed, 1);
    eopts.pos_vocab_size = cfg.use_pos ? corpus.pos_vocab.size() : 0;
    eopts.source_path = cfg.embedding_source;
    EmbeddingTable table = init_embeddings(cfg.strategy(), corpus.vocab, eopts);

    Rng rng(derive_seed(cfg.seed, 2));
    PositionalMask mask = init_positional_mask(mcfg.l_max, cfg.d, rng);

    if (cfg.model == "entnet")
        return std::make_unique<EntNet>(EntNet::init(mcfg, std::move(table), std::move(mask), rng));
    if (cfg.model == "sentnet")
        return std::make_unique<SEntNet>(
            SEntNet::init(mcfg, std::move(table), std::move(mask), rng));
    throw RangeError("build_model: not a trainable model kind: " + cfg.model);
}

TrainResult train_model(const Corpus& corpus, const TrainConfig& cfg,
                        const TrainOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    cfg.validate();

    std::vector<DialogueExample> train = corpus.train;
    if (cfg.data_fraction < 1.0)
        train = subsample(corpus.train, cfg.data_fraction, derive_seed(cfg.seed, 3));
    if (train.empty()) throw ContractError("train: empty training split");

    std::unique_ptr<ResponseModel> model = build_model(corpus, cfg);
    AdamState adam;
    Rng train_rng(derive_seed(cfg.seed, 4));

    RunReport report;
    report.model = cfg.model;
    report.seed = cfg.seed;
    report.config_hash = cfg.hash();
    report.data_fraction = cfg.data_fraction;

    ParamStore best_params = model->parameters();
    double best_acc = -1.0;
    int best_epoch = 0;

    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const double lr = lr_at_epoch(cfg, epoch);
        train_rng.shuffle(order);

        double loss_sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(cfg.batch_size));
            Graph g;
            const NodeIds ids = model->parameters().bind(g);
            DropoutCtx dropout{cfg.dropout, &train_rng};
            std::vector<int> y_nodes;
            std::vector<int> labels;
            for (std::size_t i = begin; i < end; ++i) {
                const DialogueExample& ex = train[order[i]];
                y_nodes.push_back(
                    model->predict_node(g, ids, ex, cfg.dropout > 0.0 ? &dropout : nullptr));
                labels.push_back(ex.label);
            }
            const int loss = loss_node(g, y_nodes, labels, ids, model->parameters(), cfg.l2);
            const double loss_value = g.value(loss).data[0];
            if (!std::isfinite(loss_value)) {
                std::ostringstream diag;
                diag << "training diverged: non-finite loss at epoch " << epoch << ", batch "
                     << (begin / cfg.batch_size) << ", lr " << lr;
                throw TrainingDivergedError(diag.str());
            }
            loss_sum += loss_value * static_cast<double>(end - begin);
            seen += end - begin;

            g.backward(loss);
            GradMap grads = clip_gradients(g.param_grads(), cfg.clip_norm);
            const double gnorm = global_grad_norm(grads);
            if (!std::isfinite(gnorm)) {
                std::ostringstream diag;
                diag << "training diverged: non-finite gradient norm at epoch " << epoch
                     << ", batch " << (begin / cfg.batch_size);
                throw TrainingDivergedError(diag.str());
            }
            adam.step(model->parameters(), grads, lr);
        }
        report.epoch_train_loss.push_back(loss_sum / static_cast<double>(seen));

        const double valid_acc =
            corpus.valid.empty() ? 0.0 : evaluate_model(*model, corpus.valid).accuracy;
        report.epoch_valid_accuracy.push_back(valid_acc);
        if (valid_acc > best_acc) {
            best_acc = valid_acc;
            best_epoch = epoch;
            best_params = model->parameters();
        }

        double train_acc = -1.0;
        if (options.track_train_accuracy) {
            train_acc = evaluate_model(*model, train).accuracy;
            report.epoch_train_accuracy.push_back(train_acc);
        }
        if (options.log)
            (*options.log) << "epoch " << epoch << " lr " << lr << " loss "
                           << report.epoch_train_loss.back() << " valid_acc " << valid_acc
                           << (train_acc >= 0.0 ? " train_acc " + std::to_string(train_acc) : "")
                           << "\n";
        if (options.stop_at_perfect_train && train_acc == 1.0) break;
    }

    report.best_epoch = best_epoch;
    report.best_valid_accuracy = std::max(best_acc, 0.0);
    model->parameters() = best_params;
    report.test_accuracy =
        corpus.test.empty() ? 0.0 : evaluate_model(*model, corpus.test).accuracy;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    return TrainResult{std::move(report), std::move(model)};
}

SweepTable sweep_fraction(const Corpus& corpus, const TrainConfig& base,
                          const std::vector<double>& fractions,
                          const std::vector<std::uint64_t>& seeds, const TrainOptions& options) {
    for (double f : fractions)
        if (!(f > 0.0) || f > 1.0)
            throw RangeError("sweep_fraction: fraction must be in (0, 1], got " +
                             std::to_string(f));
    SweepTable table;
    for (double fraction : fractions) {
        std::vector<double> accs;
        for (std::uint64_t seed : seeds) {
            TrainConfig cfg = base;
            cfg.data_fraction = fraction;
            cfg.seed = seed;
            TrainResult result = train_model(corpus, cfg, options);
            table.cells.push_back(SweepCell{cfg.model, fraction, seed, result.report.test_accuracy});
            accs.push_back(result.report.test_accuracy);
        }
        table.summary.push_back(SweepSummaryRow{fraction, mean_of(accs), stddev_of(accs),
                                                static_cast<int>(accs.size())});
    }
    return table;
}

void oracle_embedding_protocol(const Corpus& corpus, const TrainConfig& cfg,
                               const std::string& snapshot_path, const TrainOptions& options) {
    TrainConfig donor = cfg;
    donor.embedding_strategy = "random";
    donor.embedding_source.clear();
    donor.data_fraction = 1.0;
    TrainResult result = train_model(corpus, donor, options);

    const ParamStore& params = result.model->parameters();
    EmbeddingTable table;
    table.E = params.tensor("E");
    table.trainable = params.at("E").trainable;
    if (params.has("Epos")) table.Epos = params.tensor("Epos");
    save_embedding_snapshot(table, corpus.vocab.hash(), snapshot_path);
}

void write_run_csv(const RunReport& report, std::ostream& out) {
    out << "model,fraction,seed,epoch,split,metric,value\n";
    auto row = [&](int epoch, const char* split, const char* metric, double value) {
        out << report.model << "," << fmt_value(report.data_fraction) << "," << report.seed << ","
            << epoch << "," << split << "," << metric << "," << fmt_value(value) << "\n";
    };
    for (std::size_t e = 0; e < report.epoch_train_loss.size(); ++e)
        row(static_cast<int>(e + 1), "train", "loss", report.epoch_train_loss[e]);
    for (std::size_t e = 0; e < report.epoch_valid_accuracy.size(); ++e)
        row(static_cast<int>(e + 1), "valid", "accuracy", report.epoch_valid_accuracy[e]);
    for (std::size_t e = 0; e < report.epoch_train_accuracy.size(); ++e)
        row(static_cast<int>(e + 1), "train", "accuracy", report.epoch_train_accuracy[e]);
    row(report.best_epoch, "test", "accuracy", report.test_accuracy);
}

RunReport parse_run_csv(std::istream& in) {
    RunReport report;
    std::string line;
    if (!std::getline(in, line) || line != "model,fraction,seed,epoch,split,metric,value")
        throw FormatError("run csv: missing or bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 7) throw FormatError("run csv: expected 7 fields, got line " + line);
        report.model = fields[0];
        report.data_fraction = std::stod(fields[1]);
        report.seed = std::stoull(fields[2]);
        const int epoch = std::stoi(fields[3]);
        const double value = std::stod(fields[6]);
        if (fields[4] == "train" && fields[5] == "loss") {
            report.epoch_train_loss.push_back(value);
        } else if (fields[4] == "valid" && fields[5] == "accuracy") {
            report.epoch_valid_accuracy.push_back(value);
        } else if (fields[4] == "train" && fields[5] == "accuracy") {
            report.epoch_train_accuracy.push_back(value);
        } else if (fields[4] == "test" && fields[5] == "accuracy") {
            report.test_accuracy = value;
            report.best_epoch = epoch;
        } else {
            throw FormatError("run csv: unknown row kind " + fields[4] + "/" + fields[5]);
        }
    }
    if (!report.epoch_valid_accuracy.empty())
        report.best_valid_accuracy =
            *std::max_element(report.epoch_valid_accuracy.begin(),
                              report.epoch_valid_accuracy.end());
    return report;
}

} // namespace sentnet
