#include "sentnet/fixtures.hpp"

#include "sentnet/entnet.hpp"
#include "sentnet/sentnet.hpp"

namespace sentnet {

ToyFixture make_toy_fixture(const std::string& model_kind, int d, int m, int vocab_size, int c,
                            std::uint64_t seed) {
    if (vocab_size < 8) throw RangeError("make_toy_fixture: vocab_size must be >= 8");
    Rng rng(seed);

    ModelConfig cfg;
    cfg.d = d;
    cfg.m = m;
    cfg.c = c;
    cfg.l_max = 4;

    Vocab vocab;
    for (int i = 2; i < vocab_size; ++i) vocab.add("tok" + std::to_string(i));

    EmbeddingTable table;
    table.E = Tensor::zeros({vocab_size, d});
    for (int r = 1; r < vocab_size; ++r)
        for (int col = 0; col < d; ++col) table.E.at(r, col) = rng.gaussian(0.0, 0.1);
    PositionalMask mask;
    mask.F = Tensor::zeros({cfg.l_max, d});
    for (double& v : mask.F.data) v = rng.gaussian(0.0, 0.1);

    ToyFixture fixture;
    if (model_kind == "entnet")
        fixture.model =
            std::make_unique<EntNet>(EntNet::init(cfg, std::move(table), std::move(mask), rng));
    else if (model_kind == "sentnet")
        fixture.model = std::make_unique<SEntNet>(
            SEntNet::init(cfg, std::move(table), std::move(mask), rng));
    else
        throw RangeError("make_toy_fixture: unknown model kind " + model_kind);

    auto tok = [&](int i) { return 2 + (i % (vocab_size - 2)); };
    auto utt = [&](SourceTag src, std::vector<int> tokens, int global_turn, int source_turn) {
        Utterance u;
        u.source = src;
        u.tokens = std::move(tokens);
        u.global_turn = global_turn;
        u.source_turn = source_turn;
        return u;
    };
    DialogueExample ex;
    ex.history.push_back(utt(SourceTag::User, {tok(0), tok(1), tok(2)}, 1, 1));
    ex.history.push_back(utt(SourceTag::System, {tok(3), tok(4)}, 2, 1));
    ex.history.push_back(utt(SourceTag::Kb, {tok(5), tok(6), tok(7)}, 3, 1));
    ex.history.push_back(utt(SourceTag::User, {tok(8), tok(9)}, 4, 2));
    ex.query = ex.history.back();
    ex.label = 1 % c;
    fixture.example = std::move(ex);
    return fixture;
}

} // namespace sentnet
