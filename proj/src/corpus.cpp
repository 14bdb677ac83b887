#include "sentnet/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sentnet/rng.hpp"

namespace sentnet {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool is_terminal_punct(char c) {
    return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open file");
    return in;
}

} // namespace

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t Vocab::hash() const {
    std::string joined;
    for (const auto& t : tokens) {
        joined += t;
        joined += '\n';
    }
    return fnv1a64(joined);
}

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string piece;
    while (ss >> piece) {
        for (char& c : piece) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        std::vector<std::string> tail;
        while (piece.size() > 1 && is_terminal_punct(piece.back())) {
            tail.push_back(std::string(1, piece.back()));
            piece.pop_back();
        }
        out.push_back(piece);
        for (auto it = tail.rbegin(); it != tail.rend(); ++it) out.push_back(*it);
    }
    return out;
}

std::vector<RawDialogue> parse_dialogs(std::istream& in, const std::string& filename) {
    std::vector<RawDialogue> dialogues;
    RawDialogue current;
    int expected_prev = 0; // last line number seen in the current dialogue
    int lineno = 0;
    std::string line;

    auto flush = [&]() {
        if (!current.lines.empty()) {
            dialogues.push_back(std::move(current));
            current = RawDialogue();
        }
        expected_prev = 0;
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) {
            flush();
            continue;
        }
        const std::size_t sp = line.find(' ');
        if (sp == std::string::npos)
            throw FormatError(filename + ":" + std::to_string(lineno) +
                              ": expected \"N text\", got no space");
        int number = 0;
        try {
            std::size_t used = 0;
            number = std::stoi(line.substr(0, sp), &used);
            if (used != sp) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw FormatError(filename + ":" + std::to_string(lineno) +
                              ": line must start with a number");
        }
        if (expected_prev == 0 && number != 1)
            throw FormatError(filename + ":" + std::to_string(lineno) +
                              ": dialogue must start at line number 1, got " +
                              std::to_string(number));
        if (expected_prev != 0 && number <= expected_prev)
            throw FormatError(filename + ":" + std::to_string(lineno) +
                              ": non-monotonic line number " + std::to_string(number) + " after " +
                              std::to_string(expected_prev));
        expected_prev = number;

        const std::string rest = line.substr(sp + 1);
        const std::size_t tab = rest.find('\t');
        RawDialogue::Line parsed;
        if (tab == std::string::npos) {
            parsed.is_kb = true;
            parsed.kb = trim(rest);
            if (parsed.kb.empty())
                throw FormatError(filename + ":" + std::to_string(lineno) + ": empty KB line");
        } else {
            parsed.user = trim(rest.substr(0, tab));
            parsed.system = trim(rest.substr(tab + 1));
            if (parsed.user.empty())
                throw FormatError(filename + ":" + std::to_string(lineno) +
                                  ": empty user side of an exchange");
            if (parsed.system.empty())
                throw FormatError(filename + ":" + std::to_string(lineno) +
                                  ": empty system side of an exchange");
        }
        current.lines.push_back(std::move(parsed));
    }
    flush();
    return dialogues;
}

std::vector<RawDialogue> parse_dialogs_file(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_dialogs(in, path);
}

void serialize_dialogs(const std::vector<RawDialogue>& dialogues, std::ostream& out) {
    for (std::size_t d = 0; d < dialogues.size(); ++d) {
        if (d) out << "\n";
        int n = 1;
        for (const auto& line : dialogues[d].lines) {
            if (line.is_kb)
                out << n << " " << line.kb << "\n";
            else
                out << n << " " << line.user << "\t" << line.system << "\n";
            ++n;
        }
    }
}

std::vector<RawExample> build_examples(const std::vector<RawDialogue>& dialogues,
                                       const std::vector<std::string>& candidates,
                                       int dialogue_id_base) {
    std::unordered_map<std::string, int> candidate_index;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        candidate_index.emplace(candidates[i], static_cast<int>(i));

    std::vector<RawExample> examples;
    for (std::size_t d = 0; d < dialogues.size(); ++d) {
        std::vector<RawUtterance> history;
        int global_turn = 0;
        int source_turns[3] = {0, 0, 0};
        auto push = [&](SourceTag src, const std::string& text) {
            RawUtterance u;
            u.source = src;
            u.tokens = tokenize(text);
            u.global_turn = ++global_turn;
            u.source_turn = ++source_turns[static_cast<int>(src)];
            history.push_back(std::move(u));
        };
        for (const auto& line : dialogues[d].lines) {
            if (line.is_kb) {
                push(SourceTag::Kb, line.kb);
                continue;
            }
            push(SourceTag::User, line.user);
            auto it = candidate_index.find(line.system);
            if (it == candidate_index.end())
                throw UnknownCandidateError("system response not in candidate list: \"" +
                                            line.system + "\"");
            RawExample ex;
            ex.history = history;
            ex.query = history.back();
            ex.label = it->second;
            ex.dialogue_id = dialogue_id_base + static_cast<int>(d);
            examples.push_back(std::move(ex));
            push(SourceTag::System, line.system);
        }
    }
    return examples;
}

Vocab build_vocab(const std::vector<RawExample>& examples,
                  const std::vector<std::string>& candidates, int min_count) {
    std::unordered_map<std::string, int> counts;
    std::vector<std::string> order;
    auto see = [&](const std::string& tok) {
        if (++counts[tok] == 1) order.push_back(tok);
    };
    for (const auto& ex : examples)
        for (const auto& utt : ex.history)
            for (const auto& tok : utt.tokens) see(tok);
    for (const auto& c : candidates)
        for (const auto& tok : tokenize(c)) see(tok);

    Vocab vocab;
    for (const auto& tok : order)
        if (counts[tok] >= min_count) vocab.add(tok);
    return vocab;
}

std::map<std::string, std::string> load_pos_lexicon(std::istream& in, const std::string& filename) {
    std::map<std::string, std::string> lex;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw FormatError(filename + ":" + std::to_string(lineno) +
                              ": expected \"token<TAB>tag\"");
        const std::string tok = trim(line.substr(0, tab));
        const std::string tag = trim(line.substr(tab + 1));
        if (tok.empty() || tag.empty())
            throw FormatError(filename + ":" + std::to_string(lineno) + ": empty token or tag");
        lex.emplace(tok, tag); // first entry wins
    }
    return lex;
}

std::map<std::string, std::string> load_pos_lexicon_file(const std::string& path) {
    auto in = open_or_throw(path);
    return load_pos_lexicon(in, path);
}

const std::vector<DialogueExample>& Corpus::split(const std::string& name) const {
    if (name == "train") return train;
    if (name == "valid") return valid;
    if (name == "test") return test;
    throw ContractError("unknown split: " + name);
}

int Corpus::num_train_dialogues() const {
    int maxid = -1;
    for (const auto& ex : train) maxid = std::max(maxid, ex.dialogue_id);
    return maxid + 1;
}

namespace {

Utterance index_utterance(const RawUtterance& raw, const Vocab& vocab,
                          const std::map<std::string, std::string>* lexicon, PosVocab& pos_vocab) {
    Utterance u;
    u.source = raw.source;
    u.global_turn = raw.global_turn;
    u.source_turn = raw.source_turn;
    u.tokens.reserve(raw.tokens.size());
    for (const auto& tok : raw.tokens) u.tokens.push_back(vocab.encode(tok));
    if (lexicon) {
        u.pos_tags.reserve(raw.tokens.size());
        for (const auto& tok : raw.tokens) {
            auto it = lexicon->find(tok);
            u.pos_tags.push_back(it == lexicon->end() ? PosVocab::kUnk : pos_vocab.add(it->second));
        }
    }
    return u;
}

std::vector<DialogueExample> index_examples(const std::vector<RawExample>& raw, const Vocab& vocab,
                                            const std::map<std::string, std::string>* lexicon,
                                            PosVocab& pos_vocab) {
    std::vector<DialogueExample> out;
    out.reserve(raw.size());
    for (const auto& rex : raw) {
        DialogueExample ex;
        ex.label = rex.label;
        ex.dialogue_id = rex.dialogue_id;
        ex.history.reserve(rex.history.size());
        for (const auto& u : rex.history)
            ex.history.push_back(index_utterance(u, vocab, lexicon, pos_vocab));
        ex.query = index_utterance(rex.query, vocab, lexicon, pos_vocab);
        out.push_back(std::move(ex));
    }
    return out;
}

} // namespace

Corpus assemble_corpus(const std::vector<RawDialogue>& train_dlgs,
                       const std::vector<RawDialogue>& valid_dlgs,
                       const std::vector<RawDialogue>& test_dlgs,
                       const std::vector<std::string>& candidates,
                       const std::map<std::string, std::string>* pos_lexicon, int min_count) {
    {
        std::unordered_map<std::string, int> seen;
        for (const auto& c : candidates)
            if (++seen[c] > 1) throw FormatError("duplicate candidate: \"" + c + "\"");
    }
    const auto raw_train = build_examples(train_dlgs, candidates, 0);
    const auto raw_valid = build_examples(valid_dlgs, candidates, 0);
    const auto raw_test = build_examples(test_dlgs, candidates, 0);

    Corpus corpus;
    corpus.vocab = build_vocab(raw_train, candidates, min_count);
    corpus.candidates = candidates;
    corpus.has_pos = pos_lexicon != nullptr;
    corpus.train = index_examples(raw_train, corpus.vocab, pos_lexicon, corpus.pos_vocab);
    corpus.valid = index_examples(raw_valid, corpus.vocab, pos_lexicon, corpus.pos_vocab);
    corpus.test = index_examples(raw_test, corpus.vocab, pos_lexicon, corpus.pos_vocab);
    corpus.candidate_tokens.reserve(candidates.size());
    for (const auto& c : candidates) {
        std::vector<int> ids;
        for (const auto& tok : tokenize(c)) ids.push_back(corpus.vocab.encode(tok));
        corpus.candidate_tokens.push_back(std::move(ids));
    }
    return corpus;
}

std::vector<std::string> load_candidates_file(const std::string& path) {
    auto in = open_or_throw(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string t = trim(line);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

Corpus load_corpus_dir(const std::string& dir, int min_count) {
    const auto train = parse_dialogs_file(dir + "/train.txt");
    const auto valid = parse_dialogs_file(dir + "/valid.txt");
    const auto test = parse_dialogs_file(dir + "/test.txt");
    const auto candidates = load_candidates_file(dir + "/candidates.txt");
    std::map<std::string, std::string> lexicon;
    bool has_lexicon = false;
    {
        std::ifstream in(dir + "/pos_lexicon.txt");
        if (in) {
            lexicon = load_pos_lexicon(in, dir + "/pos_lexicon.txt");
            has_lexicon = true;
        }
    }
    return assemble_corpus(train, valid, test, candidates, has_lexicon ? &lexicon : nullptr,
                           min_count);
}

std::vector<DialogueExample> subsample(const std::vector<DialogueExample>& examples,
                                       double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw RangeError("subsample: fraction must be in (0, 1], got " + std::to_string(fraction));
    std::vector<int> dialogue_ids;
    for (const auto& ex : examples)
        if (dialogue_ids.empty() || dialogue_ids.back() != ex.dialogue_id) {
            if (std::find(dialogue_ids.begin(), dialogue_ids.end(), ex.dialogue_id) ==
                dialogue_ids.end())
                dialogue_ids.push_back(ex.dialogue_id);
        }
    const std::size_t want =
        static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(dialogue_ids.size())));
    if (want >= dialogue_ids.size()) return examples;

    Rng rng(seed);
    std::vector<int> pool = dialogue_ids;
    rng.shuffle(pool);
    pool.resize(want);
    std::sort(pool.begin(), pool.end());

    std::vector<DialogueExample> out;
    for (const auto& ex : examples)
        if (std::binary_search(pool.begin(), pool.end(), ex.dialogue_id)) out.push_back(ex);
    return out;
}

} // namespace sentnet
