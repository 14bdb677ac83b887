#include "sentnet/sentnet.hpp"

namespace sentnet {

namespace {

Tensor gaussian(int rows, int cols, Rng& rng) {
    Tensor t = Tensor::zeros({rows, cols});
    for (double& v : t.data) v = rng.gaussian(0.0, 0.1);
    return t;
}

constexpr std::array<SourceTag, 3> kSourceOrder = {SourceTag::User, SourceTag::System,
                                                   SourceTag::Kb};

} // namespace

std::array<std::vector<Utterance>, 3> split_history(const std::vector<Utterance>& history) {
    std::array<std::vector<Utterance>, 3> parts;
    for (const auto& utt : history) parts[static_cast<std::size_t>(utt.source)].push_back(utt);
    return parts;
}

SEntNet SEntNet::init(const ModelConfig& cfg, EmbeddingTable table, PositionalMask mask,
                      Rng& rng) {
    SEntNet model;
    model.cfg_ = cfg;
    model.cfg_.vocab_size = table.E.rows();
    model.cfg_.pos_vocab_size = table.Epos ? table.Epos->rows() : 0;
    model.cfg_.l_max = mask.l_max();

    ParamStore& p = model.params_;
    p.add("E", std::move(table.E), table.trainable);
    if (table.Epos) p.add("Epos", std::move(*table.Epos), table.trainable);
    p.add("F", std::move(mask.F));
    for (SourceTag s : kSourceOrder) {
        const std::string suffix = std::string("_") + source_name(s);
        p.add("K" + suffix, gaussian(cfg.m, cfg.d, rng));
        p.add("G" + suffix, gaussian(cfg.d, cfg.d, rng));
        p.add("V" + suffix, gaussian(cfg.d, cfg.d, rng));
        p.add("W" + suffix, gaussian(cfg.d, cfg.d, rng));
    }
    p.add("H", gaussian(cfg.d, 3 * cfg.d, rng));
    p.add("L", gaussian(cfg.c, cfg.d, rng));
    return model;
}

EncoderNodes SEntNet::encoder_nodes(const NodeIds& ids) const {
    EncoderNodes enc;
    enc.E = ids.at("E");
    enc.Epos = cfg_.use_pos ? ids.at("Epos") : -1;
    enc.F = ids.at("F");
    enc.use_pos = cfg_.use_pos;
    enc.l_max = cfg_.l_max;
    return enc;
}

MemoryNodes SEntNet::memory_nodes(const NodeIds& ids, SourceTag source) const {
    const std::string suffix = std::string("_") + source_name(source);
    return MemoryNodes{ids.at("K" + suffix), ids.at("G" + suffix), ids.at("V" + suffix),
                       ids.at("W" + suffix), cfg_.m};
}

std::vector<int> SEntNet::run_source_memory(Graph& g, const std::vector<Utterance>& utterances,
                                            const MemoryNodes& mem, const EncoderNodes& enc,
                                            const DropoutCtx* dropout) {
    if (utterances.empty()) return initial_memory_state(g, mem);
    return run_memory(g, utterances, mem, enc, dropout);
}

int SEntNet::predict_node(Graph& g, const NodeIds& ids, const DialogueExample& ex,
                          const DropoutCtx* dropout) const {
    if (ex.query.source != SourceTag::User)
        throw ContractError("predict: query must be a user utterance");
    const EncoderNodes enc = encoder_nodes(ids);
    const auto parts = split_history(ex.history);
    const int q = encode_utterance(g, ex.query, enc.E, enc.Epos, enc.F, enc.use_pos, enc.l_max);

    std::vector<int> per_source_z;
    per_source_z.reserve(3);
    for (SourceTag s : kSourceOrder) {
        const std::vector<int> state = run_source_memory(
            g, parts[static_cast<std::size_t>(s)], memory_nodes(ids, s), enc, dropout);
        per_source_z.push_back(attention_readout(g, state, q));
    }
    const int z = g.concat(per_source_z);
    return output_head(g, q, z, ids.at("H"), ids.at("L"), dropout);
}

} // namespace sentnet
