#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sentnet/eval.hpp"
#include "sentnet/experiments.hpp"
#include "sentnet/rng.hpp"
#include "sentnet/synthetic.hpp"

using namespace sentnet;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sentnet_eval_" + tag);
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

TrainConfig fast_config() {
    TrainConfig cfg;
    cfg.d = 6;
    cfg.m = 2;
    cfg.max_epochs = 2;
    cfg.batch_size = 8;
    return cfg;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("turn accuracy counts exact matches") {
    CHECK(turn_accuracy({1, 2, 3, 4}, {1, 2, 3, 0}).accuracy == doctest::Approx(0.75));
    CHECK(turn_accuracy({5, 5}, {5, 5}).accuracy == 1.0);
    CHECK_THROWS_AS(turn_accuracy({}, {}), ContractError);
}

TEST_CASE("uniform predictions with zero labels score perfectly under the tie-break") {
    const Tensor uniform = Tensor::vector({0.25, 0.25, 0.25, 0.25});
    std::vector<int> predictions(6, argmax(uniform));
    std::vector<int> labels(6, 0);
    CHECK(turn_accuracy(predictions, labels).accuracy == 1.0);
}

TEST_CASE("accuracy equals a brute-force recount") {
    Rng rng(31);
    std::vector<int> predictions, labels;
    for (int i = 0; i < 200; ++i) {
        predictions.push_back(static_cast<int>(rng.below(5)));
        labels.push_back(static_cast<int>(rng.below(5)));
    }
    int recount = 0;
    for (int i = 0; i < 200; ++i)
        if (predictions[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(i)])
            ++recount;
    const AccuracyResult r = turn_accuracy(predictions, labels);
    CHECK(r.correct == recount);
    CHECK(r.total == 200);
    CHECK(r.accuracy == doctest::Approx(recount / 200.0));
}

TEST_CASE("identical pairs give t = 0 and p = 1") {
    const PairedComparison r = paired_ttest({{0.5, 0.5}, {0.7, 0.7}, {0.9, 0.9}});
    CHECK(r.t == 0.0);
    CHECK(r.p == 1.0);
    CHECK_FALSE(r.significant);
    CHECK_FALSE(r.degenerate);
}

TEST_CASE("constant nonzero differences are flagged degenerate-significant") {
    // dyadic values keep every difference exactly 0.125
    const PairedComparison r = paired_ttest({{0.625, 0.5}, {0.75, 0.625}, {0.375, 0.25}});
    CHECK(r.degenerate);
    CHECK(r.significant);
    CHECK(r.p == 0.0);
}

TEST_CASE("t statistic and p value match the reference table") {
    // differences 0.02, 0.05, 0.03, 0.06 -> t = 4.38178046004133, p = 0.0220060464907983
    const PairedComparison r =
        paired_ttest({{0.52, 0.5}, {0.55, 0.5}, {0.53, 0.5}, {0.56, 0.5}});
    CHECK(r.t == doctest::Approx(4.38178046004133).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(0.0220060464907983).epsilon(1e-9));
    CHECK_FALSE(r.significant);
}

TEST_CASE("swapping the pair order negates t and preserves p") {
    const std::vector<std::pair<double, double>> ab = {{0.52, 0.5}, {0.55, 0.51}, {0.53, 0.5}};
    std::vector<std::pair<double, double>> ba;
    for (const auto& [a, b] : ab) ba.emplace_back(b, a);
    const PairedComparison fwd = paired_ttest(ab);
    const PairedComparison rev = paired_ttest(ba);
    CHECK(fwd.t == doctest::Approx(-rev.t).epsilon(1e-12));
    CHECK(fwd.p == doctest::Approx(rev.p).epsilon(1e-12));
}

TEST_CASE("fewer than two pairs is a contract violation") {
    CHECK_THROWS_AS(paired_ttest({{0.5, 0.4}}), ContractError);
}

TEST_CASE("E1 emits one run per model-seed pair and a summary") {
    const Corpus corpus = gen_synthetic(6, 3);
    TempDir dir("e1");
    ExperimentOptions options;
    options.seeds = {1, 2};
    run_experiment("E1", corpus, fast_config(), dir.path.string(), options);

    int run_files = 0;
    for (const auto& entry : fs::directory_iterator(dir.path / "runs")) {
        (void)entry;
        ++run_files;
    }
    CHECK(run_files == 8); // 4 models x 2 seeds

    const std::string summary = read_text_file((dir.path / "summary.csv").string());
    CHECK(count_lines(summary) == 5); // header + 4 models
    CHECK(summary.find("tfidf") != std::string::npos);
    CHECK(summary.find("sentnet") != std::string::npos);
    CHECK(fs::exists(dir.path / "report.txt"));
    CHECK(fs::exists(dir.path / "MANIFEST"));
}

TEST_CASE("experiment reruns reuse persisted runs and reproduce the summary bytes") {
    const Corpus corpus = gen_synthetic(6, 3);
    TempDir dir("resume");
    ExperimentOptions options;
    options.seeds = {1, 2};
    run_experiment("E1", corpus, fast_config(), dir.path.string(), options);
    const std::string first = read_text_file((dir.path / "summary.csv").string());

    fs::remove(dir.path / "summary.csv");
    options.force = true;
    run_experiment("E1", corpus, fast_config(), dir.path.string(), options);
    CHECK(read_text_file((dir.path / "summary.csv").string()) == first);
}

TEST_CASE("a non-empty output dir without force is refused") {
    const Corpus corpus = gen_synthetic(4, 3);
    TempDir dir("refuse");
    fs::create_directories(dir.path);
    std::ofstream(dir.path / "stale.txt") << "x";
    CHECK_THROWS_AS(run_experiment("E1", corpus, fast_config(), dir.path.string(), {}),
                    ContractError);
}

TEST_CASE("E3 curve has one fraction column per requested fraction") {
    const Corpus corpus = gen_synthetic(6, 3);
    TempDir dir("e3");
    ExperimentOptions options;
    options.seeds = {1};
    options.fractions = {0.5, 1.0};
    TrainConfig cfg = fast_config();
    cfg.max_epochs = 1;
    run_experiment("E3", corpus, cfg, dir.path.string(), options);

    const std::string curve = read_text_file((dir.path / "curve.csv").string());
    std::istringstream in(curve);
    std::string header;
    std::getline(in, header);
    CHECK(header == "row,metric,f0.5,f1");
    CHECK(count_lines(curve) == 5); // header + {entnet,sentnet} x {mean,std}
}

TEST_CASE("E4 emits the four-row POS ablation table") {
    const Corpus corpus = gen_synthetic(6, 3, /*with_pos=*/true);
    TempDir dir("e4");
    ExperimentOptions options;
    options.seeds = {1};
    TrainConfig cfg = fast_config();
    cfg.max_epochs = 1;
    run_experiment("E4", corpus, cfg, dir.path.string(), options);

    const std::string summary = read_text_file((dir.path / "summary.csv").string());
    std::istringstream in(summary);
    std::string line;
    std::getline(in, line);
    CHECK(line == "model,pos,best,mean,std");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(line);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].rfind("entnet,0", 0) == 0);
    CHECK(rows[1].rfind("entnet,1", 0) == 0);
    CHECK(rows[2].rfind("sentnet,0", 0) == 0);
    CHECK(rows[3].rfind("sentnet,1", 0) == 0);
}

TEST_CASE("manifest hashes every artifact") {
    const Corpus corpus = gen_synthetic(4, 3);
    TempDir dir("manifest");
    ExperimentOptions options;
    options.seeds = {1};
    TrainConfig cfg = fast_config();
    cfg.max_epochs = 1;
    run_experiment("E1", corpus, cfg, dir.path.string(), options);

    const std::string manifest = read_text_file((dir.path / "MANIFEST").string());
    int files_on_disk = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir.path))
        if (entry.is_regular_file() && entry.path().filename() != "MANIFEST") ++files_on_disk;
    CHECK(count_lines(manifest) == files_on_disk);
    CHECK(manifest.find("summary.csv") != std::string::npos);
    CHECK(manifest.find("config.txt") != std::string::npos);
}

TEST_CASE("unknown experiment kinds are rejected") {
    const Corpus corpus = gen_synthetic(3, 3);
    TempDir dir("bad");
    CHECK_THROWS_AS(run_experiment("E9", corpus, fast_config(), dir.path.string(), {}),
                    RangeError);
}
