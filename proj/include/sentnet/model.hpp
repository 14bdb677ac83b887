#pragma once

#include <map>
#include <memory>
#include <string>

#include "sentnet/corpus.hpp"
#include "sentnet/encoder.hpp"
#include "sentnet/graph.hpp"
#include "sentnet/optim.hpp"

namespace sentnet {

struct ModelConfig {
    int d = 50;
    int m = 5;
    int c = 0;           // candidate count
    int l_max = 30;
    int vocab_size = 0;
    int pos_vocab_size = 0;
    bool use_pos = false;
};

// Training-time dropout; a null context means evaluation mode.
struct DropoutCtx {
    double rate = 0.5;
    Rng* rng = nullptr;
};

using NodeIds = std::map<std::string, int>;

// Encoder parameter nodes inside one graph.
struct EncoderNodes {
    int E = -1;
    int Epos = -1;
    int F = -1;
    bool use_pos = false;
    int l_max = 30;
};

// One memory module's parameter nodes: slot keys plus shared update matrices.
struct MemoryNodes {
    int K = -1;
    int G = -1;
    int V = -1;
    int W = -1;
    int m = 0;
};

// Dynamic-memory primitives shared by both models.

// h_j^0 = k_j / |k_j|: unit-norm rows from the start, matching the update's
// precondition.
std::vector<int> initial_memory_state(Graph& g, const MemoryNodes& mem);

// One gated update of all m blocks for an encoded utterance e:
//   gate   g_j = sigmoid(e.h_j + e.k_j)           (scalar, broadcast over d)
//   cand   c_j = relu(G h_j + V k_j + W e)
//   state  h_j = normalize(h_j + g_j * c_j)
std::vector<int> memory_update(Graph& g, const std::vector<int>& state, int e_node,
                               const MemoryNodes& mem);

// Folds memory_update over the encoded history in order; empty history raises
// ContractError (per-source folds allow empty input, see run_source_memory).
std::vector<int> run_memory(Graph& g, const std::vector<Utterance>& history,
                            const MemoryNodes& mem, const EncoderNodes& enc,
                            const DropoutCtx* dropout);

// Attention-weighted readout z = sum_j p_j h_j with p = softmax_j(q.h_j).
int attention_readout(Graph& g, const std::vector<int>& state, int q_node);

// y = softmax(L relu(q + H z)); dropout applies to z before the projection.
int output_head(Graph& g, int q_node, int z_node, int h_mat_node, int l_mat_node,
                const DropoutCtx* dropout);

class ResponseModel {
public:
    virtual ~ResponseModel() = default;
    virtual const char* kind() const = 0;
    virtual std::unique_ptr<ResponseModel> clone() const = 0;

    ModelConfig& config() { return cfg_; }
    const ModelConfig& config() const { return cfg_; }
    ParamStore& parameters() { return params_; }
    const ParamStore& parameters() const { return params_; }

    // Builds the prediction subgraph for one example; `ids` must contain every
    // parameter node (from parameters().bind(g)). Returns the y node.
    virtual int predict_node(Graph& g, const NodeIds& ids, const DialogueExample& ex,
                             const DropoutCtx* dropout) const = 0;

    // Evaluation-mode forward pass.
    Tensor predict(const DialogueExample& ex) const;

    int argmax_prediction(const DialogueExample& ex) const;

protected:
    ModelConfig cfg_;
    ParamStore params_;
};

// Lowest index wins ties, so results are deterministic.
int argmax(const Tensor& y);

void save_checkpoint(const ResponseModel& model, std::uint64_t vocab_hash,
                     const std::string& path);
std::unique_ptr<ResponseModel> load_checkpoint(const std::string& path,
                                               std::uint64_t expect_vocab_hash);

} // namespace sentnet
