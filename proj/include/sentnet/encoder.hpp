#pragma once

#include <istream>
#include <map>
#include <optional>
#include <string>

#include "sentnet/corpus.hpp"
#include "sentnet/graph.hpp"
#include "sentnet/rng.hpp"
#include "sentnet/tensor.hpp"

namespace sentnet {

// Word embedding rows (|V| x d) plus an optional POS-tag table. The PAD row is
// zero at init and, having zero gradient forever, stays zero.
struct EmbeddingTable {
    Tensor E;
    bool trainable = true;
    std::optional<Tensor> Epos;
};

// Learnable per-position mask vectors f_x, one row per position up to L_max.
struct PositionalMask {
    Tensor F;
    int l_max() const { return F.rows(); }
};

enum class EmbeddingStrategy { Random, Fixed, Oracle, Pretrained };

EmbeddingStrategy embedding_strategy_from(const std::string& name);
const char* embedding_strategy_name(EmbeddingStrategy s);

// 95th-percentile training-utterance length, capped at 30.
int compute_l_max(const std::vector<DialogueExample>& train);

// Builds graph nodes for e = sum_x f_x * (w_x + [use_pos] l_x); utterances
// longer than the mask are truncated to their first l_max tokens.
int encode_utterance(Graph& g, const Utterance& utt, int table_node, int pos_table_node,
                     int mask_node, bool use_pos, int l_max);

struct PretrainedVectors {
    std::map<int, std::vector<double>> rows; // vocab index -> vector
    int found = 0;
    int content_vocab = 0; // vocab size minus PAD/UNK
    double coverage = 0.0;
};

// Word-vector text file: "token v1 ... vd" per line, space separated.
PretrainedVectors load_pretrained_vectors(std::istream& in, const Vocab& vocab, int d,
                                          const std::string& filename = "<input>");
PretrainedVectors load_pretrained_vectors_file(const std::string& path, const Vocab& vocab, int d);

struct EmbeddingInitOptions {
    int d = 50;
    std::uint64_t seed = 0;
    int pos_vocab_size = 0;              // > 0 adds an Epos table
    std::string source_path;             // pretrained vector file or oracle snapshot
};

// Random: N(0, 0.1^2), trainable. Fixed: same init, frozen. Oracle: rows from
// a snapshot of a full-data run. Pretrained: file rows where found, random
// fallback elsewhere.
EmbeddingTable init_embeddings(EmbeddingStrategy strategy, const Vocab& vocab,
                               const EmbeddingInitOptions& opts);

PositionalMask init_positional_mask(int l_max, int d, Rng& rng);

// Snapshot round-trips the table bit-exactly and carries the vocab hash so a
// mismatched donor is rejected.
void save_embedding_snapshot(const EmbeddingTable& table, std::uint64_t vocab_hash,
                             const std::string& path);
EmbeddingTable load_embedding_snapshot(const std::string& path, std::uint64_t expect_vocab_hash);

} // namespace sentnet
