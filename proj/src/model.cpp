#include "sentnet/model.hpp"

#include <cstdio>
#include <fstream>

#include "sentnet/entnet.hpp"
#include "sentnet/sentnet.hpp"

namespace sentnet {

std::vector<int> initial_memory_state(Graph& g, const MemoryNodes& mem) {
    std::vector<int> state;
    state.reserve(static_cast<std::size_t>(mem.m));
    for (int j = 0; j < mem.m; ++j)
        state.push_back(g.l2normalize(g.embed_lookup(mem.K, j)));
    return state;
}

std::vector<int> memory_update(Graph& g, const std::vector<int>& state, int e_node,
                               const MemoryNodes& mem) {
    std::vector<int> next;
    next.reserve(state.size());
    for (int j = 0; j < mem.m; ++j) {
        const int h = state[static_cast<std::size_t>(j)];
        const int k = g.embed_lookup(mem.K, j);
        const int gate = g.sigmoid(g.add(g.dot(e_node, h), g.dot(e_node, k)));
        const int cand =
            g.relu(g.add(g.add(g.matmul(mem.G, h), g.matmul(mem.V, k)), g.matmul(mem.W, e_node)));
        next.push_back(g.l2normalize(g.add(h, g.scale(cand, gate))));
    }
    return next;
}

std::vector<int> run_memory(Graph& g, const std::vector<Utterance>& history,
                            const MemoryNodes& mem, const EncoderNodes& enc,
                            const DropoutCtx* dropout) {
    if (history.empty()) throw ContractError("run_memory: empty history");
    std::vector<int> state = initial_memory_state(g, mem);
    for (const auto& utt : history) {
        int e = encode_utterance(g, utt, enc.E, enc.Epos, enc.F, enc.use_pos, enc.l_max);
        if (dropout && dropout->rate > 0.0) e = g.dropout(e, 1.0 - dropout->rate, *dropout->rng);
        state = memory_update(g, state, e, mem);
    }
    return state;
}

int attention_readout(Graph& g, const std::vector<int>& state, int q_node) {
    std::vector<int> scores;
    scores.reserve(state.size());
    for (int h : state) scores.push_back(g.dot(q_node, h));
    const int p = g.softmax(g.concat(scores));
    const int m = static_cast<int>(state.size());
    int z = -1;
    for (int j = 0; j < m; ++j) {
        std::vector<double> onehot(static_cast<std::size_t>(m), 0.0);
        onehot[static_cast<std::size_t>(j)] = 1.0;
        const int pj = g.dot(p, g.constant(Tensor::vector(std::move(onehot))));
        const int term = g.scale(state[static_cast<std::size_t>(j)], pj);
        z = (z < 0) ? term : g.add(z, term);
    }
    return z;
}

int output_head(Graph& g, int q_node, int z_node, int h_mat_node, int l_mat_node,
                const DropoutCtx* dropout) {
    int z = z_node;
    if (dropout && dropout->rate > 0.0) z = g.dropout(z, 1.0 - dropout->rate, *dropout->rng);
    const int hidden = g.relu(g.add(q_node, g.matmul(h_mat_node, z)));
    return g.softmax(g.matmul(l_mat_node, hidden));
}

Tensor ResponseModel::predict(const DialogueExample& ex) const {
    Graph g;
    const NodeIds ids = params_.bind(g);
    const int y = predict_node(g, ids, ex, nullptr);
    return g.value(y);
}

int argmax(const Tensor& y) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(y.size()); ++i)
        if (y.data[static_cast<std::size_t>(i)] > y.data[static_cast<std::size_t>(best)]) best = i;
    return best;
}

int ResponseModel::argmax_prediction(const DialogueExample& ex) const {
    return argmax(predict(ex));
}

void save_checkpoint(const ResponseModel& model, std::uint64_t vocab_hash,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FormatError(path + ": cannot open for writing");
    const ModelConfig& cfg = model.config();
    out << "model-checkpoint v1\n";
    out << "kind " << model.kind() << "\n";
    out << "vocab_hash " << vocab_hash << "\n";
    out << "config " << cfg.d << " " << cfg.m << " " << cfg.c << " " << cfg.l_max << " "
        << cfg.vocab_size << " " << cfg.pos_vocab_size << " " << (cfg.use_pos ? 1 : 0) << "\n";
    char buf[64];
    for (const auto& [name, p] : model.parameters().all()) {
        out << "param " << name << " " << p.value.rows() << " " << p.value.cols() << " "
            << (p.trainable ? 1 : 0) << "\n";
        for (int r = 0; r < p.value.rows(); ++r) {
            for (int c = 0; c < p.value.cols(); ++c) {
                std::snprintf(buf, sizeof(buf), "%.17g", p.value.at(r, c));
                out << (c ? " " : "") << buf;
            }
            out << "\n";
        }
    }
    out << "end\n";
}

std::unique_ptr<ResponseModel> load_checkpoint(const std::string& path,
                                               std::uint64_t expect_vocab_hash) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open file");
    std::string magic, version;
    in >> magic >> version;
    if (magic != "model-checkpoint" || version != "v1")
        throw FormatError(path + ": not a model checkpoint");
    std::string key, kind;
    in >> key >> kind;
    if (key != "kind") throw FormatError(path + ": missing kind");
    std::uint64_t hash = 0;
    in >> key >> hash;
    if (key != "vocab_hash") throw FormatError(path + ": missing vocab_hash");
    if (expect_vocab_hash != 0 && hash != expect_vocab_hash)
        throw VocabMismatchError(path + ": checkpoint vocab hash does not match corpus");
    ModelConfig cfg;
    int use_pos = 0;
    in >> key >> cfg.d >> cfg.m >> cfg.c >> cfg.l_max >> cfg.vocab_size >> cfg.pos_vocab_size >>
        use_pos;
    if (key != "config") throw FormatError(path + ": missing config");
    cfg.use_pos = use_pos != 0;

    std::unique_ptr<ResponseModel> model;
    if (kind == "entnet")
        model = std::make_unique<EntNet>();
    else if (kind == "sentnet")
        model = std::make_unique<SEntNet>();
    else
        throw FormatError(path + ": unknown model kind " + kind);
    model->config() = cfg;

    while (in >> key) {
        if (key == "end") break;
        if (key != "param") throw FormatError(path + ": unexpected token " + key);
        std::string name;
        int rows = 0, cols = 0, trainable = 0;
        if (!(in >> name >> rows >> cols >> trainable) || rows <= 0 || cols <= 0)
            throw FormatError(path + ": bad param header");
        Tensor t = Tensor::zeros({rows, cols});
        for (std::size_t i = 0; i < t.size(); ++i)
            if (!(in >> t.data[i])) throw FormatError(path + ": truncated param " + name);
        model->parameters().add(name, std::move(t), trainable != 0);
    }
    return model;
}

} // namespace sentnet
