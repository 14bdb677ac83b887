#pragma once

#include <array>

#include "sentnet/model.hpp"

namespace sentnet {

// Stable partition of a history by source tag; within-source order is the
// per-source temporal index.
std::array<std::vector<Utterance>, 3> split_history(const std::vector<Utterance>& history);

// Source-aware entity network: one separately parameterized memory module per
// source (user, system, KB), per-source attention, concatenated readout
// through H in R^{d x 3d}.
class SEntNet : public ResponseModel {
public:
    static SEntNet init(const ModelConfig& cfg, EmbeddingTable table, PositionalMask mask,
                        Rng& rng);

    const char* kind() const override { return "sentnet"; }
    std::unique_ptr<ResponseModel> clone() const override {
        return std::make_unique<SEntNet>(*this);
    }

    int predict_node(Graph& g, const NodeIds& ids, const DialogueExample& ex,
                     const DropoutCtx* dropout) const override;

    EncoderNodes encoder_nodes(const NodeIds& ids) const;
    MemoryNodes memory_nodes(const NodeIds& ids, SourceTag source) const;

    // Per-source fold; an empty utterance list returns the initialized states.
    static std::vector<int> run_source_memory(Graph& g, const std::vector<Utterance>& utterances,
                                              const MemoryNodes& mem, const EncoderNodes& enc,
                                              const DropoutCtx* dropout);
};

} // namespace sentnet
