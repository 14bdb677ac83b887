#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "sentnet/synthetic.hpp"
#include "sentnet/training.hpp"

using namespace sentnet;

namespace {

// Small, fast configuration for loop-behavior tests.
TrainConfig tiny_config(const std::string& model) {
    TrainConfig cfg;
    cfg.model = model;
    cfg.d = 6;
    cfg.m = 2;
    cfg.max_epochs = 3;
    cfg.batch_size = 8;
    cfg.seed = 5;
    return cfg;
}

Tensor prob_vector(std::vector<double> v) { return Tensor::vector(std::move(v)); }

} // namespace

TEST_CASE("nll of a one-hot prediction is zero") {
    CHECK(batch_nll({prob_vector({0.0, 1.0, 0.0})}, {1}) == 0.0);
}

TEST_CASE("nll of a uniform prediction over four candidates is ln 4") {
    CHECK(batch_nll({prob_vector({0.25, 0.25, 0.25, 0.25})}, {2}) ==
          doctest::Approx(1.3862943611198906).epsilon(1e-15));
}

TEST_CASE("two-example batch averages the per-example nll") {
    const double nll = batch_nll({prob_vector({0.5, 0.5}), prob_vector({0.25, 0.75})}, {0, 0});
    CHECK(nll == doctest::Approx(1.0397207708399179).epsilon(1e-15));
}

TEST_CASE("graph loss matches the plain nll plus the l2 penalty") {
    ParamStore params;
    params.add("w", Tensor::vector({0.5, -0.5}));
    Graph g;
    const NodeIds ids = params.bind(g);
    const int y = g.softmax(g.scale(ids.at("w"), g.scalar(0.0))); // uniform over 2
    const int loss = loss_node(g, {y}, {0}, ids, params, 0.001);
    const double expect = std::log(2.0) + 0.001 * 0.5;
    CHECK(g.value(loss).data[0] == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("learning rate halves every decay_every epochs") {
    TrainConfig cfg;
    cfg.lr = 0.01;
    cfg.decay_every = 10;
    cfg.decay_factor = 0.5;
    CHECK(lr_at_epoch(cfg, 1) == 0.01);
    CHECK(lr_at_epoch(cfg, 10) == 0.01);
    CHECK(lr_at_epoch(cfg, 11) == 0.005);
    CHECK(lr_at_epoch(cfg, 20) == 0.005);
    CHECK(lr_at_epoch(cfg, 21) == 0.0025);
}

TEST_CASE("training is deterministic per seed") {
    const Corpus corpus = gen_synthetic(6, 3);
    const TrainConfig cfg = tiny_config("sentnet");
    const TrainResult a = train_model(corpus, cfg);
    const TrainResult b = train_model(corpus, cfg);
    REQUIRE(a.report.epoch_train_loss.size() == b.report.epoch_train_loss.size());
    for (std::size_t e = 0; e < a.report.epoch_train_loss.size(); ++e) {
        CHECK(a.report.epoch_train_loss[e] == b.report.epoch_train_loss[e]);
        CHECK(a.report.epoch_valid_accuracy[e] == b.report.epoch_valid_accuracy[e]);
    }
    CHECK(a.report.test_accuracy == b.report.test_accuracy);
    for (const auto& [name, p] : a.model->parameters().all())
        CHECK(p.value.data == b.model->parameters().tensor(name).data);
}

TEST_CASE("pure-adam trajectories without dropout/l2/clipping are reproducible") {
    const Corpus corpus = gen_synthetic(6, 3);
    TrainConfig cfg = tiny_config("entnet");
    cfg.dropout = 0.0;
    cfg.l2 = 0.0;
    cfg.clip_norm = 1e9;
    const TrainResult a = train_model(corpus, cfg);
    const TrainResult b = train_model(corpus, cfg);
    CHECK(a.report.epoch_train_loss == b.report.epoch_train_loss);
}

TEST_CASE("different seeds change the trajectory") {
    const Corpus corpus = gen_synthetic(6, 3);
    TrainConfig cfg = tiny_config("entnet");
    const TrainResult a = train_model(corpus, cfg);
    cfg.seed = 6;
    const TrainResult b = train_model(corpus, cfg);
    CHECK(a.report.epoch_train_loss != b.report.epoch_train_loss);
}

TEST_CASE("model selection returns the epoch with maximal validation accuracy") {
    const Corpus corpus = gen_synthetic(8, 9);
    TrainConfig cfg = tiny_config("sentnet");
    cfg.max_epochs = 5;
    const TrainResult result = train_model(corpus, cfg);
    const auto& accs = result.report.epoch_valid_accuracy;
    const double best = *std::max_element(accs.begin(), accs.end());
    CHECK(result.report.best_valid_accuracy == best);
    CHECK(accs[static_cast<std::size_t>(result.report.best_epoch - 1)] == best);
}

TEST_CASE("training loss falls on a memorizable fixture") {
    const Corpus corpus = gen_synthetic(4, 13);
    TrainConfig cfg = tiny_config("sentnet");
    cfg.d = 10;
    cfg.max_epochs = 12;
    cfg.dropout = 0.0;
    cfg.batch_size = 4;
    const TrainResult result = train_model(corpus, cfg);
    const auto& losses = result.report.epoch_train_loss;
    CHECK(losses.back() < 0.5 * losses.front());
}

TEST_CASE("fixed-strategy embeddings stay bitwise frozen through training") {
    const Corpus corpus = gen_synthetic(5, 4);
    TrainConfig cfg = tiny_config("entnet");
    cfg.embedding_strategy = "fixed";
    const auto fresh = build_model(corpus, cfg);
    const std::vector<double> init = fresh->parameters().tensor("E").data;
    const TrainResult result = train_model(corpus, cfg);
    CHECK(result.model->parameters().tensor("E").data == init);
    CHECK_FALSE(result.model->parameters().at("E").trainable);
}

TEST_CASE("random-strategy embeddings do change during training") {
    const Corpus corpus = gen_synthetic(5, 4);
    const TrainConfig cfg = tiny_config("entnet");
    const auto fresh = build_model(corpus, cfg);
    const TrainResult result = train_model(corpus, cfg);
    CHECK(result.model->parameters().tensor("E").data != fresh->parameters().tensor("E").data);
}

TEST_CASE("use_pos training exercises the tag table") {
    const Corpus corpus = gen_synthetic(5, 8, /*with_pos=*/true);
    TrainConfig cfg = tiny_config("sentnet");
    cfg.use_pos = true;
    cfg.max_epochs = 2;
    const auto fresh = build_model(corpus, cfg);
    const TrainResult result = train_model(corpus, cfg);
    CHECK(result.model->parameters().has("Epos"));
    CHECK(result.model->parameters().tensor("Epos").data !=
          fresh->parameters().tensor("Epos").data);
}

TEST_CASE("use_pos without a lexicon is rejected") {
    const Corpus corpus = gen_synthetic(3, 8);
    TrainConfig cfg = tiny_config("sentnet");
    cfg.use_pos = true;
    CHECK_THROWS_AS(build_model(corpus, cfg), ContractError);
}

TEST_CASE("sweep with one fraction and one seed equals a direct train call") {
    const Corpus corpus = gen_synthetic(6, 3);
    const TrainConfig cfg = tiny_config("entnet");
    const TrainResult direct = train_model(corpus, cfg);
    const SweepTable table = sweep_fraction(corpus, cfg, {1.0}, {cfg.seed});
    REQUIRE(table.cells.size() == 1);
    CHECK(table.cells[0].test_accuracy == direct.report.test_accuracy);
    REQUIRE(table.summary.size() == 1);
    CHECK(table.summary[0].mean == direct.report.test_accuracy);
    CHECK(table.summary[0].stddev == 0.0);
}

TEST_CASE("sweep summary of identical runs has zero spread") {
    const Corpus corpus = gen_synthetic(5, 3);
    const TrainConfig cfg = tiny_config("entnet");
    const SweepTable table = sweep_fraction(corpus, cfg, {1.0}, {7, 7, 7});
    REQUIRE(table.summary.size() == 1);
    CHECK(table.summary[0].stddev == 0.0);
    CHECK(table.summary[0].runs == 3);
}

TEST_CASE("a two-by-two sweep runs four cells") {
    const Corpus corpus = gen_synthetic(6, 3);
    TrainConfig cfg = tiny_config("entnet");
    cfg.max_epochs = 1;
    const SweepTable table = sweep_fraction(corpus, cfg, {0.5, 1.0}, {1, 2});
    CHECK(table.cells.size() == 4);
    CHECK(table.summary.size() == 2);
}

TEST_CASE("sweep rejects out-of-range fractions") {
    const Corpus corpus = gen_synthetic(3, 3);
    CHECK_THROWS_AS(sweep_fraction(corpus, tiny_config("entnet"), {0.0}, {1}), RangeError);
}

TEST_CASE("oracle protocol writes a reusable snapshot of the learned table") {
    const Corpus corpus = gen_synthetic(5, 3);
    TrainConfig cfg = tiny_config("entnet");
    cfg.max_epochs = 2;
    const auto dir = std::filesystem::temp_directory_path() / "sentnet_oracle_test";
    std::filesystem::create_directories(dir);
    const std::string snapshot = (dir / "snap.txt").string();
    oracle_embedding_protocol(corpus, cfg, snapshot);

    // The snapshot holds exactly the donor's learned embeddings.
    const TrainResult donor = train_model(corpus, cfg);
    const EmbeddingTable loaded = load_embedding_snapshot(snapshot, corpus.vocab.hash());
    CHECK(loaded.E.data == donor.model->parameters().tensor("E").data);

    // Re-initializing from it reproduces the donor's encoder bitwise.
    TrainConfig oracle_cfg = cfg;
    oracle_cfg.embedding_strategy = "oracle";
    oracle_cfg.embedding_source = snapshot;
    const auto reinit = build_model(corpus, oracle_cfg);
    CHECK(reinit->parameters().tensor("E").data ==
          donor.model->parameters().tensor("E").data);
    std::filesystem::remove_all(dir);
}

TEST_CASE("run csv round-trips through parse") {
    RunReport report;
    report.model = "sentnet";
    report.seed = 9;
    report.data_fraction = 0.5;
    report.epoch_train_loss = {1.25, 0.75};
    report.epoch_valid_accuracy = {0.5, 0.625};
    report.best_epoch = 2;
    report.test_accuracy = 0.71875;
    std::ostringstream out;
    write_run_csv(report, out);
    std::istringstream in(out.str());
    const RunReport parsed = parse_run_csv(in);
    std::ostringstream again;
    write_run_csv(parsed, again);
    CHECK(again.str() == out.str());
    CHECK(parsed.best_valid_accuracy == 0.625);
}

TEST_CASE("config files parse, override, and reject unknown keys") {
    std::istringstream in(
        "# comment\nmodel=entnet\nd=12\nlr=0.02\nuse_pos=1\ndata_fraction=0.5\n");
    TrainConfig cfg = parse_config(in);
    CHECK(cfg.model == "entnet");
    CHECK(cfg.d == 12);
    CHECK(cfg.lr == 0.02);
    CHECK(cfg.use_pos);
    CHECK(cfg.data_fraction == 0.5);

    cfg.set("seed", "42");
    CHECK(cfg.seed == 42);
    CHECK_THROWS_AS(cfg.set("nonsense", "1"), FormatError);

    std::istringstream bad("dropout=1.5\n");
    CHECK_THROWS_AS(parse_config(bad), RangeError);

    // canonical serialization round-trips
    std::istringstream round(cfg.serialize());
    const TrainConfig parsed = parse_config(round);
    CHECK(parsed.serialize() == cfg.serialize());
    CHECK(parsed.hash() == cfg.hash());
}
