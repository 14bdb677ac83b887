#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "sentnet/error.hpp"

namespace sentnet {

// Origin class of an utterance. The ordering User < System < Kb fixes every
// deterministic concatenation order downstream.
enum class SourceTag : int { User = 0, System = 1, Kb = 2 };

inline const char* source_name(SourceTag s) {
    switch (s) {
        case SourceTag::User: return "user";
        case SourceTag::System: return "system";
        case SourceTag::Kb: return "kb";
    }
    return "?";
}

struct Utterance {
    SourceTag source = SourceTag::User;
    std::vector<int> tokens;              // vocab indices
    std::vector<int> pos_tags;            // pos-vocab indices; empty when unused
    int global_turn = 0;                  // 1-based position in the full dialogue
    int source_turn = 0;                  // 1-based position within this source's history
};

// One supervised example: everything seen up to and including the current user
// turn, the user turn itself as the query, and the gold candidate index.
struct DialogueExample {
    std::vector<Utterance> history;
    Utterance query;
    int label = -1;
    int dialogue_id = 0;
};

// Token -> index map with reserved PAD=0 and UNK=1 rows.
struct Vocab {
    std::vector<std::string> tokens{"<pad>", "<unk>"};
    std::unordered_map<std::string, int> index{{"<pad>", 0}, {"<unk>", 1}};

    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;

    int add(const std::string& tok) {
        auto it = index.find(tok);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(tokens.size());
        tokens.push_back(tok);
        index.emplace(tok, id);
        return id;
    }
    int encode(const std::string& tok) const {
        auto it = index.find(tok);
        return it == index.end() ? kUnk : it->second;
    }
    int size() const { return static_cast<int>(tokens.size()); }
    std::uint64_t hash() const;
};

// Raw parse of one dialogue; text is kept verbatim for round-tripping and
// candidate matching.
struct RawDialogue {
    struct Line {
        bool is_kb = false;
        std::string user;   // empty for kb lines
        std::string system; // empty for kb lines
        std::string kb;     // full kb text, e.g. "resto_3 r_rating 7"
    };
    std::vector<Line> lines;
};

// Lowercase, whitespace-split, terminal punctuation split into its own token.
std::vector<std::string> tokenize(const std::string& text);

// Dialogue file grammar: dialogues separated by a blank line; each line
// "N user<TAB>system" or "N entity1 relation entity2" (no tab -> KB triple);
// N restarts at 1 per dialogue and is strictly increasing within one.
std::vector<RawDialogue> parse_dialogs(std::istream& in, const std::string& filename = "<input>");
std::vector<RawDialogue> parse_dialogs_file(const std::string& path);

// Inverse of parse_dialogs; parse(serialize(x)) == x.
void serialize_dialogs(const std::vector<RawDialogue>& dialogues, std::ostream& out);

// String-level example: tokens, not ids yet.
struct RawUtterance {
    SourceTag source = SourceTag::User;
    std::vector<std::string> tokens;
    int global_turn = 0;
    int source_turn = 0;
};

struct RawExample {
    std::vector<RawUtterance> history;
    RawUtterance query;
    int label = -1;
    int dialogue_id = 0;
};

// One example per system turn; history covers every line strictly before the
// system response, so the current user utterance is both in the history and
// the query. Candidate lookup is by exact response string.
std::vector<RawExample> build_examples(const std::vector<RawDialogue>& dialogues,
                                       const std::vector<std::string>& candidates,
                                       int dialogue_id_base = 0);

// PAD=0, UNK=1, then first-occurrence order over example tokens followed by
// candidate tokens; tokens seen fewer than min_count times fall back to UNK.
Vocab build_vocab(const std::vector<RawExample>& examples,
                  const std::vector<std::string>& candidates, int min_count = 1);

// POS lexicon: "token<TAB>tag" per line, first entry wins on duplicates.
std::map<std::string, std::string> load_pos_lexicon(std::istream& in,
                                                    const std::string& filename = "<input>");
std::map<std::string, std::string> load_pos_lexicon_file(const std::string& path);

// Tag vocabulary mirrors Vocab's reserved rows: PAD_TAG=0, UNK_TAG=1.
struct PosVocab {
    std::vector<std::string> tags{"<pad_tag>", "<unk_tag>"};
    std::unordered_map<std::string, int> index{{"<pad_tag>", 0}, {"<unk_tag>", 1}};
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    int add(const std::string& t) {
        auto it = index.find(t);
        if (it != index.end()) return it->second;
        const int id = static_cast<int>(tags.size());
        tags.push_back(t);
        index.emplace(t, id);
        return id;
    }
    int encode(const std::string& t) const {
        auto it = index.find(t);
        return it == index.end() ? kUnk : it->second;
    }
    int size() const { return static_cast<int>(tags.size()); }
};

struct Corpus {
    std::vector<DialogueExample> train;
    std::vector<DialogueExample> valid;
    std::vector<DialogueExample> test;
    std::vector<std::string> candidates;
    std::vector<std::vector<int>> candidate_tokens;
    Vocab vocab;
    PosVocab pos_vocab;
    bool has_pos = false;

    const std::vector<DialogueExample>& split(const std::string& name) const;
    int num_candidates() const { return static_cast<int>(candidates.size()); }
    int num_train_dialogues() const;
};

// Assembles a Corpus from parsed splits: vocabulary from the train split plus
// candidates, valid/test tokens fall back to UNK. The POS lexicon is optional.
Corpus assemble_corpus(const std::vector<RawDialogue>& train_dlgs,
                       const std::vector<RawDialogue>& valid_dlgs,
                       const std::vector<RawDialogue>& test_dlgs,
                       const std::vector<std::string>& candidates,
                       const std::map<std::string, std::string>* pos_lexicon = nullptr,
                       int min_count = 1);

// Reads train.txt/valid.txt/test.txt/candidates.txt (and pos_lexicon.txt if
// present) from a directory.
Corpus load_corpus_dir(const std::string& dir, int min_count = 1);

std::vector<std::string> load_candidates_file(const std::string& path);

// Keeps ceil(fraction * #dialogues) whole dialogues, chosen uniformly with the
// given seed; never splits a dialogue.
std::vector<DialogueExample> subsample(const std::vector<DialogueExample>& examples,
                                       double fraction, std::uint64_t seed);

std::uint64_t fnv1a64(const std::string& s);

} // namespace sentnet
