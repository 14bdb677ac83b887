#include "sentnet/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sentnet {

namespace {

Tensor gaussian_table(int rows, int cols, Rng& rng, bool zero_pad_row) {
    Tensor t = Tensor::zeros({rows, cols});
    for (int r = 0; r < rows; ++r) {
        if (zero_pad_row && r == Vocab::kPad) continue;
        for (int c = 0; c < cols; ++c) t.at(r, c) = rng.gaussian(0.0, 0.1);
    }
    return t;
}

void write_tensor(std::ofstream& out, const char* name, const Tensor& t) {
    out << name << " " << t.rows() << " " << t.cols() << "\n";
    char buf[64];
    for (int r = 0; r < t.rows(); ++r) {
        for (int c = 0; c < t.cols(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", t.at(r, c));
            out << (c ? " " : "") << buf;
        }
        out << "\n";
    }
}

Tensor read_tensor(std::istream& in, const std::string& path) {
    int rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows <= 0 || cols <= 0)
        throw FormatError(path + ": bad tensor header");
    Tensor t = Tensor::zeros({rows, cols});
    for (std::size_t i = 0; i < t.size(); ++i)
        if (!(in >> t.data[i])) throw FormatError(path + ": truncated tensor data");
    return t;
}

} // namespace

EmbeddingStrategy embedding_strategy_from(const std::string& name) {
    if (name == "random") return EmbeddingStrategy::Random;
    if (name == "fixed") return EmbeddingStrategy::Fixed;
    if (name == "oracle") return EmbeddingStrategy::Oracle;
    if (name == "pretrained") return EmbeddingStrategy::Pretrained;
    throw RangeError("unknown embedding strategy: " + name);
}

const char* embedding_strategy_name(EmbeddingStrategy s) {
    switch (s) {
        case EmbeddingStrategy::Random: return "random";
        case EmbeddingStrategy::Fixed: return "fixed";
        case EmbeddingStrategy::Oracle: return "oracle";
        case EmbeddingStrategy::Pretrained: return "pretrained";
    }
    return "?";
}

int compute_l_max(const std::vector<DialogueExample>& train) {
    std::vector<int> lengths;
    for (const auto& ex : train)
        for (const auto& u : ex.history) lengths.push_back(static_cast<int>(u.tokens.size()));
    if (lengths.empty()) return 1;
    std::sort(lengths.begin(), lengths.end());
    const std::size_t idx = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(lengths.size()))) - 1;
    const int p95 = lengths[std::min(idx, lengths.size() - 1)];
    return std::clamp(p95, 1, 30);
}

int encode_utterance(Graph& g, const Utterance& utt, int table_node, int pos_table_node,
                     int mask_node, bool use_pos, int l_max) {
    if (utt.tokens.empty()) throw ContractError("encode_utterance: empty token list");
    if (use_pos && utt.pos_tags.size() != utt.tokens.size())
        throw ContractError("encode_utterance: use_pos requires aligned pos_tags");
    const int len = std::min(static_cast<int>(utt.tokens.size()), l_max);
    int sum = -1;
    for (int x = 0; x < len; ++x) {
        int w = g.embed_lookup(table_node, utt.tokens[static_cast<std::size_t>(x)]);
        if (use_pos) {
            const int l = g.embed_lookup(pos_table_node, utt.pos_tags[static_cast<std::size_t>(x)]);
            w = g.add(w, l);
        }
        const int fx = g.embed_lookup(mask_node, x);
        const int term = g.mul(fx, w);
        sum = (sum < 0) ? term : g.add(sum, term);
    }
    return sum;
}

PretrainedVectors load_pretrained_vectors(std::istream& in, const Vocab& vocab, int d,
                                          const std::string& filename) {
    PretrainedVectors out;
    out.content_vocab = std::max(0, vocab.size() - 2);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        std::vector<double> vec;
        vec.reserve(static_cast<std::size_t>(d));
        double v = 0.0;
        while (ss >> v) vec.push_back(v);
        if (static_cast<int>(vec.size()) != d)
            throw FormatError(filename + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(d) + " floats, got " + std::to_string(vec.size()));
        const int id = vocab.encode(tok);
        if (id != Vocab::kUnk && id != Vocab::kPad && out.rows.emplace(id, std::move(vec)).second)
            ++out.found;
    }
    out.coverage = out.content_vocab > 0
                       ? static_cast<double>(out.found) / static_cast<double>(out.content_vocab)
                       : 0.0;
    return out;
}

PretrainedVectors load_pretrained_vectors_file(const std::string& path, const Vocab& vocab, int d) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open file");
    return load_pretrained_vectors(in, vocab, d, path);
}

EmbeddingTable init_embeddings(EmbeddingStrategy strategy, const Vocab& vocab,
                               const EmbeddingInitOptions& opts) {
    Rng rng(opts.seed);
    EmbeddingTable table;
    table.E = gaussian_table(vocab.size(), opts.d, rng, /*zero_pad_row=*/true);
    if (opts.pos_vocab_size > 0)
        table.Epos = gaussian_table(opts.pos_vocab_size, opts.d, rng, /*zero_pad_row=*/true);

    switch (strategy) {
        case EmbeddingStrategy::Random:
            table.trainable = true;
            break;
        case EmbeddingStrategy::Fixed:
            table.trainable = false;
            break;
        case EmbeddingStrategy::Oracle: {
            EmbeddingTable donor = load_embedding_snapshot(opts.source_path, vocab.hash());
            if (donor.E.rows() != vocab.size() || donor.E.cols() != opts.d)
                throw VocabMismatchError("oracle snapshot shape " + shape_str(donor.E.shape) +
                                         " does not match vocab " + std::to_string(vocab.size()) +
                                         " x d " + std::to_string(opts.d));
            table.E = donor.E;
            if (donor.Epos && opts.pos_vocab_size > 0) table.Epos = donor.Epos;
            table.trainable = true;
            break;
        }
        case EmbeddingStrategy::Pretrained: {
            const PretrainedVectors vecs =
                load_pretrained_vectors_file(opts.source_path, vocab, opts.d);
            for (const auto& [id, row] : vecs.rows)
                std::copy(row.begin(), row.end(),
                          table.E.data.begin() + static_cast<std::size_t>(id) * opts.d);
            table.trainable = true;
            break;
        }
    }
    return table;
}

PositionalMask init_positional_mask(int l_max, int d, Rng& rng) {
    PositionalMask mask;
    mask.F = gaussian_table(l_max, d, rng, /*zero_pad_row=*/false);
    return mask;
}

void save_embedding_snapshot(const EmbeddingTable& table, std::uint64_t vocab_hash,
                             const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError(path + ": cannot open for writing");
    out << "embedding-snapshot v1\n";
    out << "vocab_hash " << vocab_hash << "\n";
    write_tensor(out, "E", table.E);
    if (table.Epos) write_tensor(out, "Epos", *table.Epos);
    out << "end\n";
}

EmbeddingTable load_embedding_snapshot(const std::string& path, std::uint64_t expect_vocab_hash) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open file");
    std::string magic, version;
    in >> magic >> version;
    if (magic != "embedding-snapshot" || version != "v1")
        throw FormatError(path + ": not an embedding snapshot");
    std::string key;
    std::uint64_t hash = 0;
    in >> key >> hash;
    if (key != "vocab_hash") throw FormatError(path + ": missing vocab_hash header");
    if (hash != expect_vocab_hash)
        throw VocabMismatchError(path + ": snapshot vocab hash " + std::to_string(hash) +
                                 " does not match corpus vocab hash " +
                                 std::to_string(expect_vocab_hash));
    EmbeddingTable table;
    bool have_e = false;
    while (in >> key) {
        if (key == "end") break;
        if (key == "E") {
            table.E = read_tensor(in, path);
            have_e = true;
        } else if (key == "Epos") {
            table.Epos = read_tensor(in, path);
        } else {
            throw FormatError(path + ": unexpected section " + key);
        }
    }
    if (!have_e) throw FormatError(path + ": snapshot has no E table");
    return table;
}

} // namespace sentnet
