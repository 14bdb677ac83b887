#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "sentnet/corpus.hpp"

namespace sentnet {

// TF-IDF weighted cosine similarity between the context's term-count vector
// and each candidate. tf = raw count, idf = ln(N / (1 + df)) + 1, document
// frequencies over training contexts plus candidates, candidate vectors
// pre-normalized.
class TfIdfIndex {
public:
    TfIdfIndex(const std::vector<DialogueExample>& train,
               const std::vector<std::vector<int>>& candidate_tokens, int vocab_size);

    // Candidates sorted by similarity descending, ties by candidate index.
    std::vector<int> rank(const std::vector<int>& context_tokens) const;
    int predict(const DialogueExample& ex) const;

    double idf(int token) const { return idf_.at(static_cast<std::size_t>(token)); }
    double similarity(const std::vector<int>& context_tokens, int candidate) const;

private:
    std::vector<double> idf_;
    std::vector<std::unordered_map<int, double>> candidate_vecs_; // L2-normalized
};

std::vector<int> context_tokens_of(const DialogueExample& ex);

// Exact-match query-to-answer lookup: most frequent training response per
// query key, global mode as fallback, ties to the lowest candidate index.
class Q2AMap {
public:
    explicit Q2AMap(const std::vector<DialogueExample>& train);

    int predict(const DialogueExample& ex) const;

private:
    static std::string key_of(const std::vector<int>& tokens);
    std::unordered_map<std::string, std::map<int, int>> counts_;
    int global_mode_ = -1;
    bool trained_on_data_ = false;
};

} // namespace sentnet
