#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sentnet/corpus.hpp"

namespace sentnet {

// Template-driven restaurant-booking corpus. Every dialogue ends with a
// recommendation turn whose restaurant appears only in that dialogue's KB
// lines; user and system turns mention other restaurants as distractors, so
// resolving the recommendation requires reading the KB part of the history.
struct SyntheticCorpus {
    std::vector<RawDialogue> train;
    std::vector<RawDialogue> valid;
    std::vector<RawDialogue> test;
    std::vector<std::string> candidates;       // full enumerated response space
    std::map<std::string, std::string> pos_lexicon;
};

// Deterministic per (n_dialogues, seed); valid and test get
// max(1, n_dialogues / 5) dialogues each from derived seeds.
SyntheticCorpus gen_synthetic_raw(int n_dialogues, std::uint64_t seed);

// Convenience: raw generation + example construction + vocabulary.
Corpus gen_synthetic(int n_dialogues, std::uint64_t seed, bool with_pos = false);

// Writes train.txt/valid.txt/test.txt/candidates.txt/pos_lexicon.txt.
void write_synthetic_dir(const SyntheticCorpus& corpus, const std::string& dir);

} // namespace sentnet
