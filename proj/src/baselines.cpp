#include "sentnet/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace sentnet {

std::vector<int> context_tokens_of(const DialogueExample& ex) {
    std::vector<int> out;
    for (const auto& u : ex.history) out.insert(out.end(), u.tokens.begin(), u.tokens.end());
    return out;
}

namespace {

std::unordered_map<int, double> count_vector(const std::vector<int>& tokens) {
    std::unordered_map<int, double> counts;
    for (int t : tokens) counts[t] += 1.0;
    return counts;
}

} // namespace

TfIdfIndex::TfIdfIndex(const std::vector<DialogueExample>& train,
                       const std::vector<std::vector<int>>& candidate_tokens, int vocab_size) {
    std::vector<int> df(static_cast<std::size_t>(vocab_size), 0);
    long long num_docs = 0;
    auto count_doc = [&](const std::vector<int>& tokens) {
        ++num_docs;
        std::vector<int> uniq = tokens;
        std::sort(uniq.begin(), uniq.end());
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        for (int t : uniq) ++df[static_cast<std::size_t>(t)];
    };
    for (const auto& ex : train) count_doc(context_tokens_of(ex));
    for (const auto& cand : candidate_tokens) count_doc(cand);

    idf_.resize(static_cast<std::size_t>(vocab_size));
    for (int t = 0; t < vocab_size; ++t)
        idf_[static_cast<std::size_t>(t)] =
            std::log(static_cast<double>(num_docs) / (1.0 + df[static_cast<std::size_t>(t)])) + 1.0;

    candidate_vecs_.reserve(candidate_tokens.size());
    for (const auto& cand : candidate_tokens) {
        auto vec = count_vector(cand);
        double sq = 0.0;
        for (auto& [t, v] : vec) {
            v *= idf_[static_cast<std::size_t>(t)];
            sq += v * v;
        }
        const double norm = std::sqrt(sq);
        if (norm > 0.0)
            for (auto& [t, v] : vec) v /= norm;
        candidate_vecs_.push_back(std::move(vec));
    }
}

double TfIdfIndex::similarity(const std::vector<int>& context_tokens, int candidate) const {
    auto query = count_vector(context_tokens);
    double sq = 0.0;
    for (auto& [t, v] : query) {
        v *= idf_[static_cast<std::size_t>(t)];
        sq += v * v;
    }
    const double norm = std::sqrt(sq);
    if (norm == 0.0) return 0.0;
    const auto& cand = candidate_vecs_[static_cast<std::size_t>(candidate)];
    double dot = 0.0;
    for (const auto& [t, v] : query) {
        auto it = cand.find(t);
        if (it != cand.end()) dot += v * it->second;
    }
    return dot / norm;
}

std::vector<int> TfIdfIndex::rank(const std::vector<int>& context_tokens) const {
    std::vector<std::pair<double, int>> scored;
    scored.reserve(candidate_vecs_.size());
    for (int c = 0; c < static_cast<int>(candidate_vecs_.size()); ++c)
        scored.emplace_back(similarity(context_tokens, c), c);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<int> out;
    out.reserve(scored.size());
    for (const auto& [s, c] : scored) out.push_back(c);
    return out;
}

int TfIdfIndex::predict(const DialogueExample& ex) const {
    return rank(context_tokens_of(ex)).front();
}

std::string Q2AMap::key_of(const std::vector<int>& tokens) {
    std::string key;
    for (int t : tokens) {
        key += std::to_string(t);
        key += ' ';
    }
    return key;
}

Q2AMap::Q2AMap(const std::vector<DialogueExample>& train) {
    std::map<int, int> global;
    for (const auto& ex : train) {
        ++counts_[key_of(ex.query.tokens)][ex.label];
        ++global[ex.label];
    }
    trained_on_data_ = !train.empty();
    int best_count = 0;
    for (const auto& [label, count] : global)
        if (count > best_count) { // map order makes ties resolve to lowest index
            best_count = count;
            global_mode_ = label;
        }
}

int Q2AMap::predict(const DialogueExample& ex) const {
    if (!trained_on_data_) throw ContractError("q2a: predict on an empty train set");
    auto it = counts_.find(key_of(ex.query.tokens));
    if (it == counts_.end()) return global_mode_;
    int best_label = -1, best_count = 0;
    for (const auto& [label, count] : it->second)
        if (count > best_count) {
            best_count = count;
            best_label = label;
        }
    return best_label;
}

} // namespace sentnet
