#pragma once

#include "sentnet/model.hpp"

namespace sentnet {

// Recurrent entity network: m gated memory blocks folded over the interleaved
// dialogue history, attention readout against the query, softmax over
// candidates.
class EntNet : public ResponseModel {
public:
    static EntNet init(const ModelConfig& cfg, EmbeddingTable table, PositionalMask mask,
                       Rng& rng);

    const char* kind() const override { return "entnet"; }
    std::unique_ptr<ResponseModel> clone() const override {
        return std::make_unique<EntNet>(*this);
    }

    int predict_node(Graph& g, const NodeIds& ids, const DialogueExample& ex,
                     const DropoutCtx* dropout) const override;

    EncoderNodes encoder_nodes(const NodeIds& ids) const;
    MemoryNodes memory_nodes(const NodeIds& ids) const;
};

} // namespace sentnet
