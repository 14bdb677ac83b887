#include "sentnet/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "sentnet/baselines.hpp"
#include "sentnet/eval.hpp"

namespace fs = std::filesystem;

namespace sentnet {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::vector<std::uint64_t> default_seeds(int n) {
    std::vector<std::uint64_t> seeds;
    for (int i = 1; i <= n; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
    return seeds;
}

RunReport baseline_run(const std::string& model, const Corpus& corpus, std::uint64_t seed) {
    RunReport report;
    report.model = model;
    report.seed = seed;
    report.data_fraction = 1.0;
    std::vector<int> predictions, labels;
    if (model == "tfidf") {
        TfIdfIndex index(corpus.train, corpus.candidate_tokens, corpus.vocab.size());
        for (const auto& ex : corpus.test) {
            predictions.push_back(index.predict(ex));
            labels.push_back(ex.label);
        }
    } else if (model == "q2a") {
        Q2AMap map(corpus.train);
        for (const auto& ex : corpus.test) {
            predictions.push_back(map.predict(ex));
            labels.push_back(ex.label);
        }
    } else {
        throw RangeError("baseline_run: not a baseline: " + model);
    }
    report.test_accuracy = turn_accuracy(predictions, labels).accuracy;
    report.best_epoch = 0;
    return report;
}

// Runs one configuration or loads its persisted CSV.
RunReport run_or_load(const fs::path& run_file, const Corpus& corpus, const TrainConfig& cfg,
                      const TrainOptions& train_options) {
    if (fs::exists(run_file)) {
        std::ifstream in(run_file);
        return parse_run_csv(in);
    }
    RunReport report;
    if (cfg.model == "tfidf" || cfg.model == "q2a") {
        report = baseline_run(cfg.model, corpus, cfg.seed);
        report.config_hash = cfg.hash();
    } else {
        report = train_model(corpus, cfg, train_options).report;
    }
    std::ofstream out(run_file);
    if (!out) throw FormatError(run_file.string() + ": cannot open for writing");
    write_run_csv(report, out);
    return report;
}

struct GroupStats {
    std::vector<double> accs;
    double best() const { return *std::max_element(accs.begin(), accs.end()); }
    double mean() const { return mean_of(accs); }
    double stddev() const { return stddev_of(accs); }
};

void prepare_out_dir(const std::string& out_dir, bool force) {
    const fs::path dir(out_dir);
    if (fs::exists(dir) && !fs::is_empty(dir) && !force)
        throw ContractError("experiment: output directory " + out_dir +
                            " is not empty (use --force to resume/overwrite)");
    fs::create_directories(dir / "runs");
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw FormatError(path.string() + ": cannot open for writing");
    out << content;
}

void run_e1(const Corpus& corpus, const TrainConfig& base, const fs::path& dir,
            const ExperimentOptions& options) {
    const auto seeds = options.seeds.empty() ? default_seeds(10) : options.seeds;
    const std::vector<std::string> models = {"tfidf", "q2a", "entnet", "sentnet"};
    std::map<std::string, GroupStats> stats;
    for (const auto& model : models)
        for (std::uint64_t seed : seeds) {
            TrainConfig cfg = base;
            cfg.model = model;
            cfg.seed = seed;
            cfg.data_fraction = 1.0;
            const fs::path run_file =
                dir / "runs" / ("E1_" + model + "_seed" + std::to_string(seed) + ".csv");
            const RunReport report = run_or_load(run_file, corpus, cfg, options.train_options);
            stats[model].accs.push_back(report.test_accuracy);
        }

    // Strongest baseline by mean accuracy; the proposed model is excluded.
    std::string strongest = "tfidf";
    for (const auto& model : {std::string("q2a"), std::string("entnet")})
        if (stats[model].mean() > stats[strongest].mean()) strongest = model;

    std::ostringstream summary;
    summary << "model,best,mean,std,baseline,t,p,significant\n";
    std::ostringstream report_txt;
    report_txt << "E1: turn-level accuracy over " << seeds.size() << " runs (test split)\n";
    for (const auto& model : models) {
        const GroupStats& s = stats.at(model);
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t i = 0; i < seeds.size(); ++i)
            pairs.emplace_back(s.accs[i], stats[strongest].accs[i]);
        PairedComparison cmp;
        if (pairs.size() >= 2) cmp = paired_ttest(pairs);
        summary << model << "," << fmt(s.best()) << "," << fmt(s.mean()) << "," << fmt(s.stddev())
                << "," << strongest << "," << fmt(cmp.t) << "," << fmt(cmp.p) << ","
                << (cmp.significant ? 1 : 0) << "\n";
        report_txt << "  " << model << ": best " << fmt(s.best()) << ", mean " << fmt(s.mean())
                   << " +/- " << fmt(s.stddev()) << (cmp.significant ? " (significant vs " : " (vs ")
                   << strongest << ", p=" << fmt(cmp.p) << ")\n";
    }
    write_text(dir / "summary.csv", summary.str());
    write_text(dir / "report.txt", report_txt.str());
}

void write_curve(const fs::path& path, const std::vector<std::string>& row_names,
                 const std::vector<double>& fractions,
                 const std::map<std::string, std::map<double, GroupStats>>& grid) {
    std::ostringstream curve;
    curve << "row,metric";
    for (double f : fractions) curve << ",f" << fmt(f);
    curve << "\n";
    for (const auto& name : row_names) {
        curve << name << ",mean";
        for (double f : fractions) curve << "," << fmt(grid.at(name).at(f).mean());
        curve << "\n" << name << ",std";
        for (double f : fractions) curve << "," << fmt(grid.at(name).at(f).stddev());
        curve << "\n";
    }
    write_text(path, curve.str());
}

void run_grid(const Corpus& corpus, const TrainConfig& base, const fs::path& dir,
              const ExperimentOptions& options, const std::string& exp_name,
              const std::vector<std::string>& row_names,
              const std::function<TrainConfig(const TrainConfig&, const std::string&)>& apply_row) {
    const auto seeds = options.seeds.empty() ? default_seeds(3) : options.seeds;
    const auto fractions =
        options.fractions.empty() ? std::vector<double>{0.1, 0.5, 1.0} : options.fractions;

    std::map<std::string, std::map<double, GroupStats>> grid;
    for (const auto& row : row_names)
        for (double fraction : fractions)
            for (std::uint64_t seed : seeds) {
                TrainConfig cfg = apply_row(base, row);
                cfg.data_fraction = fraction;
                cfg.seed = seed;
                const fs::path run_file =
                    dir / "runs" /
                    (exp_name + "_" + row + "_f" + fmt(fraction) + "_seed" + std::to_string(seed) +
                     ".csv");
                const RunReport report = run_or_load(run_file, corpus, cfg, options.train_options);
                grid[row][fraction].accs.push_back(report.test_accuracy);
            }

    std::ostringstream summary;
    summary << "row,fraction,mean,std,runs\n";
    for (const auto& row : row_names)
        for (double f : fractions) {
            const GroupStats& s = grid[row][f];
            summary << row << "," << fmt(f) << "," << fmt(s.mean()) << "," << fmt(s.stddev())
                    << "," << s.accs.size() << "\n";
        }
    write_text(dir / "summary.csv", summary.str());
    write_curve(dir / "curve.csv", row_names, fractions, grid);

    std::ostringstream report_txt;
    report_txt << exp_name << ": mean accuracy by fraction over " << seeds.size() << " seeds\n";
    for (const auto& row : row_names) {
        report_txt << "  " << row << ":";
        for (double f : fractions)
            report_txt << "  f=" << fmt(f) << " " << fmt(grid[row][f].mean()) << "+/-"
                       << fmt(grid[row][f].stddev());
        report_txt << "\n";
    }
    write_text(dir / "report.txt", report_txt.str());
}

void run_e2(const Corpus& corpus, const TrainConfig& base, const fs::path& dir,
            const ExperimentOptions& options) {
    // Oracle runs need a donor snapshot trained on the full split.
    const fs::path snapshot = dir / "oracle_embeddings.txt";
    if (!fs::exists(snapshot)) {
        TrainConfig donor = base;
        donor.seed = options.seeds.empty() ? 1 : options.seeds.front();
        oracle_embedding_protocol(corpus, donor, snapshot.string(), options.train_options);
    }
    std::vector<std::string> strategies = {"random", "fixed", "oracle"};
    if (!base.embedding_source.empty()) strategies.push_back("pretrained");
    run_grid(corpus, base, dir, options, "E2", strategies,
             [&](const TrainConfig& b, const std::string& strategy) {
                 TrainConfig cfg = b;
                 cfg.embedding_strategy = strategy;
                 if (strategy == "oracle")
                     cfg.embedding_source = snapshot.string();
                 else if (strategy != "pretrained")
                     cfg.embedding_source.clear();
                 return cfg;
             });
}

void run_e3(const Corpus& corpus, const TrainConfig& base, const fs::path& dir,
            const ExperimentOptions& options) {
    run_grid(corpus, base, dir, options, "E3", {"entnet", "sentnet"},
             [](const TrainConfig& b, const std::string& model) {
                 TrainConfig cfg = b;
                 cfg.model = model;
                 return cfg;
             });
}

void run_e4(const Corpus& corpus, const TrainConfig& base, const fs::path& dir,
            const ExperimentOptions& options) {
    const auto seeds = options.seeds.empty() ? default_seeds(3) : options.seeds;
    struct Row {
        std::string model;
        bool use_pos;
    };
    const std::vector<Row> rows = {{"entnet", false}, {"entnet", true},
                                   {"sentnet", false}, {"sentnet", true}};
    std::ostringstream summary;
    summary << "model,pos,best,mean,std\n";
    std::ostringstream report_txt;
    report_txt << "E4: lexical diversity (POS tags) over " << seeds.size() << " seeds\n";
    for (const auto& row : rows) {
        GroupStats stats;
        for (std::uint64_t seed : seeds) {
            TrainConfig cfg = base;
            cfg.model = row.model;
            cfg.use_pos = row.use_pos;
            cfg.seed = seed;
            const fs::path run_file =
                dir / "runs" /
                ("E4_" + row.model + "_pos" + (row.use_pos ? "1" : "0") + "_seed" +
                 std::to_string(seed) + ".csv");
            const RunReport report = run_or_load(run_file, corpus, cfg, options.train_options);
            stats.accs.push_back(report.test_accuracy);
        }
        summary << row.model << "," << (row.use_pos ? 1 : 0) << "," << fmt(stats.best()) << ","
                << fmt(stats.mean()) << "," << fmt(stats.stddev()) << "\n";
        report_txt << "  " << row.model << (row.use_pos ? " + pos" : "") << ": best "
                   << fmt(stats.best()) << ", mean " << fmt(stats.mean()) << " +/- "
                   << fmt(stats.stddev()) << "\n";
    }
    write_text(dir / "summary.csv", summary.str());
    write_text(dir / "report.txt", report_txt.str());
}

} // namespace

void run_experiment(const std::string& kind, const Corpus& corpus, const TrainConfig& base,
                    const std::string& out_dir, const ExperimentOptions& options) {
    prepare_out_dir(out_dir, options.force);
    const fs::path dir(out_dir);
    write_text(dir / "config.txt", base.serialize());

    if (kind == "E1")
        run_e1(corpus, base, dir, options);
    else if (kind == "E2")
        run_e2(corpus, base, dir, options);
    else if (kind == "E3")
        run_e3(corpus, base, dir, options);
    else if (kind == "E4")
        run_e4(corpus, base, dir, options);
    else
        throw RangeError("unknown experiment kind: " + kind + " (expected E1..E4)");

    write_manifest(out_dir);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_manifest(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), dir).generic_string();
        if (rel == "MANIFEST") continue;
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    std::ostringstream out;
    char buf[32];
    for (const auto& rel : files) {
        const std::uint64_t h = fnv1a64(read_text_file((fs::path(dir) / rel).string()));
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        out << buf << "  " << rel << "\n";
    }
    write_text(fs::path(dir) / "MANIFEST", out.str());
}

} // namespace sentnet
