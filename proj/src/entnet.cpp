#include "sentnet/entnet.hpp"

namespace sentnet {

namespace {

Tensor gaussian(int rows, int cols, Rng& rng) {
    Tensor t = Tensor::zeros({rows, cols});
    for (double& v : t.data) v = rng.gaussian(0.0, 0.1);
    return t;
}

} // namespace

EntNet EntNet::init(const ModelConfig& cfg, EmbeddingTable table, PositionalMask mask, Rng& rng) {
    EntNet model;
    model.cfg_ = cfg;
    model.cfg_.vocab_size = table.E.rows();
    model.cfg_.pos_vocab_size = table.Epos ? table.Epos->rows() : 0;
    model.cfg_.l_max = mask.l_max();

    ParamStore& p = model.params_;
    p.add("E", std::move(table.E), table.trainable);
    if (table.Epos) p.add("Epos", std::move(*table.Epos), table.trainable);
    p.add("F", std::move(mask.F));
    p.add("K", gaussian(cfg.m, cfg.d, rng));
    p.add("G", gaussian(cfg.d, cfg.d, rng));
    p.add("V", gaussian(cfg.d, cfg.d, rng));
    p.add("W", gaussian(cfg.d, cfg.d, rng));
    p.add("H", gaussian(cfg.d, cfg.d, rng));
    p.add("L", gaussian(cfg.c, cfg.d, rng));
    return model;
}

EncoderNodes EntNet::encoder_nodes(const NodeIds& ids) const {
    EncoderNodes enc;
    enc.E = ids.at("E");
    enc.Epos = cfg_.use_pos ? ids.at("Epos") : -1;
    enc.F = ids.at("F");
    enc.use_pos = cfg_.use_pos;
    enc.l_max = cfg_.l_max;
    return enc;
}

MemoryNodes EntNet::memory_nodes(const NodeIds& ids) const {
    return MemoryNodes{ids.at("K"), ids.at("G"), ids.at("V"), ids.at("W"), cfg_.m};
}

int EntNet::predict_node(Graph& g, const NodeIds& ids, const DialogueExample& ex,
                         const DropoutCtx* dropout) const {
    if (ex.query.source != SourceTag::User)
        throw ContractError("predict: query must be a user utterance");
    const EncoderNodes enc = encoder_nodes(ids);
    const std::vector<int> state = run_memory(g, ex.history, memory_nodes(ids), enc, dropout);
    const int q = encode_utterance(g, ex.query, enc.E, enc.Epos, enc.F, enc.use_pos, enc.l_max);
    const int z = attention_readout(g, state, q);
    return output_head(g, q, z, ids.at("H"), ids.at("L"), dropout);
}

} // namespace sentnet
