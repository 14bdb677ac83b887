#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sentnet/baselines.hpp"
#include "sentnet/eval.hpp"
#include "sentnet/experiments.hpp"
#include "sentnet/fixtures.hpp"
#include "sentnet/gradcheck.hpp"
#include "sentnet/synthetic.hpp"
#include "sentnet/training.hpp"

namespace {

using namespace sentnet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::string resolve_data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SENTNET_DATA_DIR")) return env;
    throw ContractError("no data directory: pass --data or set SENTNET_DATA_DIR");
}

TrainConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    TrainConfig cfg = path.empty() ? TrainConfig{} : parse_config_file(path);
    for (const auto& kv : overrides) {
        const std::size_t eq = kv.find('=');
        if (eq == std::string::npos)
            throw FormatError("--set expects key=value, got \"" + kv + "\"");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
}

std::vector<double> parse_fraction_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
    std::vector<std::uint64_t> out;
    std::istringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
}

void log_run_header(const TrainConfig& cfg) {
    std::cout << "config_hash " << cfg.hash() << " seed " << cfg.seed << " model " << cfg.model
              << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"Entity-network dialogue response selection"};
    app.require_subcommand(1);

    // parse-check
    std::string pc_file;
    auto* parse_check = app.add_subcommand("parse-check", "Validate a dialogue file");
    parse_check->add_option("file", pc_file, "dialogue file")->required();

    // gen-synth
    int gs_n = 500;
    std::uint64_t gs_seed = 7;
    std::string gs_out;
    auto* gen_synth = app.add_subcommand("gen-synth", "Generate the synthetic corpus");
    gen_synth->add_option("--n", gs_n, "number of training dialogues");
    gen_synth->add_option("--seed", gs_seed, "generator seed");
    gen_synth->add_option("--out", gs_out, "output directory")->required();

    // train
    std::string tr_config, tr_data, tr_out;
    std::vector<std::string> tr_sets;
    bool tr_verbose = false;
    auto* train_cmd = app.add_subcommand("train", "Train a model and write report + checkpoint");
    train_cmd->add_option("--config", tr_config, "config file (key=value)");
    train_cmd->add_option("--set", tr_sets, "override, e.g. --set seed=3");
    train_cmd->add_option("--data", tr_data, "corpus directory");
    train_cmd->add_option("--out", tr_out, "output directory")->required();
    train_cmd->add_flag("--verbose", tr_verbose, "log each epoch");

    // eval
    std::string ev_checkpoint, ev_data, ev_split = "test";
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on a split");
    eval_cmd->add_option("--checkpoint", ev_checkpoint, "model checkpoint")->required();
    eval_cmd->add_option("--data", ev_data, "corpus directory");
    eval_cmd->add_option("--split", ev_split, "train|valid|test");

    // sweep
    std::string sw_config, sw_data, sw_out, sw_fractions = "0.1,0.5,1.0", sw_seeds = "1,2,3";
    std::vector<std::string> sw_sets;
    auto* sweep_cmd = app.add_subcommand("sweep", "Fraction x seed sweep");
    sweep_cmd->add_option("--config", sw_config, "config file");
    sweep_cmd->add_option("--set", sw_sets, "override");
    sweep_cmd->add_option("--data", sw_data, "corpus directory");
    sweep_cmd->add_option("--fractions", sw_fractions, "comma list of fractions");
    sweep_cmd->add_option("--seeds", sw_seeds, "comma list of seeds");
    sweep_cmd->add_option("--out", sw_out, "output CSV path")->required();

    // experiment
    std::string ex_kind, ex_config, ex_data, ex_out, ex_fractions, ex_seeds;
    std::vector<std::string> ex_sets;
    bool ex_force = false;
    auto* exp_cmd = app.add_subcommand("experiment", "Run E1..E4 and write artifacts");
    exp_cmd->add_option("kind", ex_kind, "E1|E2|E3|E4")->required();
    exp_cmd->add_option("--config", ex_config, "config file");
    exp_cmd->add_option("--set", ex_sets, "override");
    exp_cmd->add_option("--data", ex_data, "corpus directory");
    exp_cmd->add_option("--fractions", ex_fractions, "comma list of fractions");
    exp_cmd->add_option("--seeds", ex_seeds, "comma list of seeds");
    exp_cmd->add_option("--out", ex_out, "output directory")->required();
    exp_cmd->add_flag("--force", ex_force, "reuse an existing non-empty output directory");

    // gradcheck
    std::string gc_model = "sentnet";
    int gc_d = 4, gc_m = 2, gc_vocab = 20, gc_c = 3;
    std::uint64_t gc_seed = 11;
    auto* gc_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient check");
    gc_cmd->add_option("--model", gc_model, "entnet|sentnet");
    gc_cmd->add_option("--d", gc_d, "embedding dimension");
    gc_cmd->add_option("--m", gc_m, "memory blocks");
    gc_cmd->add_option("--vocab", gc_vocab, "vocabulary size");
    gc_cmd->add_option("--c", gc_c, "candidate count");
    gc_cmd->add_option("--seed", gc_seed, "fixture seed");

    // oracle-embed
    std::string oe_config, oe_data, oe_out;
    std::vector<std::string> oe_sets;
    auto* oe_cmd = app.add_subcommand("oracle-embed", "Train on full data, save embeddings");
    oe_cmd->add_option("--config", oe_config, "config file");
    oe_cmd->add_option("--set", oe_sets, "override");
    oe_cmd->add_option("--data", oe_data, "corpus directory");
    oe_cmd->add_option("--out", oe_out, "snapshot path")->required();

    CLI11_PARSE(app, argc, argv);

    if (parse_check->parsed()) {
        const auto dialogues = parse_dialogs_file(pc_file);
        std::size_t exchanges = 0, kb_lines = 0;
        for (const auto& d : dialogues)
            for (const auto& line : d.lines) (line.is_kb ? kb_lines : exchanges) += 1;
        std::cout << pc_file << ": " << dialogues.size() << " dialogues, " << exchanges
                  << " exchanges, " << kb_lines << " kb lines\n";
        return kExitOk;
    }

    if (gen_synth->parsed()) {
        const SyntheticCorpus corpus = gen_synthetic_raw(gs_n, gs_seed);
        write_synthetic_dir(corpus, gs_out);
        std::cout << "wrote " << gs_out << ": " << corpus.train.size() << " train / "
                  << corpus.valid.size() << " valid / " << corpus.test.size()
                  << " test dialogues, " << corpus.candidates.size() << " candidates\n";
        return kExitOk;
    }

    if (train_cmd->parsed()) {
        const TrainConfig cfg = load_config(tr_config, tr_sets);
        const Corpus corpus = load_corpus_dir(resolve_data_dir(tr_data));
        log_run_header(cfg);
        std::filesystem::create_directories(tr_out);
        TrainOptions options;
        if (tr_verbose) options.log = &std::cout;
        const TrainResult result = train_model(corpus, cfg, options);
        {
            std::ofstream out(tr_out + "/run.csv");
            write_run_csv(result.report, out);
        }
        save_checkpoint(*result.model, corpus.vocab.hash(), tr_out + "/checkpoint.txt");
        std::cout << "best epoch " << result.report.best_epoch << " valid_acc "
                  << result.report.best_valid_accuracy << " test_acc "
                  << result.report.test_accuracy << "\n";
        return kExitOk;
    }

    if (eval_cmd->parsed()) {
        const Corpus corpus = load_corpus_dir(resolve_data_dir(ev_data));
        const auto model = load_checkpoint(ev_checkpoint, corpus.vocab.hash());
        const AccuracyResult acc = evaluate_model(*model, corpus.split(ev_split));
        std::cout << ev_split << " accuracy " << acc.accuracy << " (" << acc.correct << "/"
                  << acc.total << ")\n";
        return kExitOk;
    }

    if (sweep_cmd->parsed()) {
        const TrainConfig cfg = load_config(sw_config, sw_sets);
        const Corpus corpus = load_corpus_dir(resolve_data_dir(sw_data));
        log_run_header(cfg);
        const SweepTable table =
            sweep_fraction(corpus, cfg, parse_fraction_list(sw_fractions),
                           parse_seed_list(sw_seeds));
        std::ofstream out(sw_out);
        if (!out) throw FormatError(sw_out + ": cannot open for writing");
        out << "model,fraction,seed,test_accuracy\n";
        for (const auto& cell : table.cells)
            out << cell.model << "," << cell.fraction << "," << cell.seed << ","
                << cell.test_accuracy << "\n";
        out << "model,fraction,mean,std,runs\n";
        for (const auto& row : table.summary)
            out << cfg.model << "," << row.fraction << "," << row.mean << "," << row.stddev << ","
                << row.runs << "\n";
        std::cout << "wrote " << sw_out << " (" << table.cells.size() << " runs)\n";
        return kExitOk;
    }

    if (exp_cmd->parsed()) {
        const TrainConfig cfg = load_config(ex_config, ex_sets);
        const Corpus corpus = load_corpus_dir(resolve_data_dir(ex_data));
        log_run_header(cfg);
        ExperimentOptions options;
        options.force = ex_force;
        if (!ex_fractions.empty()) options.fractions = parse_fraction_list(ex_fractions);
        if (!ex_seeds.empty()) options.seeds = parse_seed_list(ex_seeds);
        run_experiment(ex_kind, corpus, cfg, ex_out, options);
        std::cout << "wrote " << ex_out << " (see MANIFEST)\n";
        return kExitOk;
    }

    if (gc_cmd->parsed()) {
        ToyFixture fixture = make_toy_fixture(gc_model, gc_d, gc_m, gc_vocab, gc_c, gc_seed);
        ResponseModel& model = *fixture.model;
        const DialogueExample& example = fixture.example;
        const auto build = [&](Graph& g) {
            const NodeIds ids = model.parameters().bind(g);
            const int y = model.predict_node(g, ids, example, nullptr);
            std::vector<double> onehot(static_cast<std::size_t>(gc_c), 0.0);
            onehot[static_cast<std::size_t>(example.label)] = 1.0;
            const int picked = g.dot(y, g.constant(Tensor::vector(std::move(onehot))));
            return g.scale(g.log(picked), g.scalar(-1.0));
        };
        const GradCheckReport report = grad_check(build, model.parameters(), 1e-4, 1e-3);
        for (const auto& entry : report.entries)
            std::cout << "  " << entry.name << " max_rel_err " << entry.max_rel_err << "\n";
        std::cout << gc_model << " max relative error " << report.max_rel_err << " (tol "
                  << report.tol << ")\n";
        return report.pass() ? kExitOk : kExitNumeric;
    }

    if (oe_cmd->parsed()) {
        const TrainConfig cfg = load_config(oe_config, oe_sets);
        const Corpus corpus = load_corpus_dir(resolve_data_dir(oe_data));
        log_run_header(cfg);
        oracle_embedding_protocol(corpus, cfg, oe_out);
        std::cout << "wrote " << oe_out << "\n";
        return kExitOk;
    }

    return kExitUsage;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DegenerateNormError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const TrainingDivergedError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const DeterminismError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
