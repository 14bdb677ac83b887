#include "sentnet/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sentnet/corpus.hpp"

namespace sentnet {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw FormatError("config: bad integer for " + key + ": \"" + value + "\"");
    }
}

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw FormatError("config: bad number for " + key + ": \"" + value + "\"");
    }
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true") return true;
    if (value == "0" || value == "false") return false;
    throw FormatError("config: bad boolean for " + key + ": \"" + value + "\"");
}

} // namespace

void TrainConfig::validate() const {
    if (model != "entnet" && model != "sentnet" && model != "tfidf" && model != "q2a")
        throw RangeError("config: unknown model \"" + model + "\"");
    if (d <= 0 || m <= 0 || max_epochs <= 0 || batch_size <= 0 || decay_every <= 0)
        throw RangeError("config: d, m, max_epochs, batch_size, decay_every must be positive");
    if (!(lr > 0.0) || !(decay_factor > 0.0) || !(clip_norm > 0.0) || l2 < 0.0)
        throw RangeError("config: lr, decay_factor, clip_norm must be positive, l2 >= 0");
    if (dropout < 0.0 || dropout >= 1.0) throw RangeError("config: dropout must be in [0, 1)");
    if (!(data_fraction > 0.0) || data_fraction > 1.0)
        throw RangeError("config: data_fraction must be in (0, 1]");
    embedding_strategy_from(embedding_strategy); // validates the name
}

std::string TrainConfig::serialize() const {
    std::ostringstream out;
    out << "model=" << model << "\n";
    out << "d=" << d << "\n";
    out << "m=" << m << "\n";
    out << "max_epochs=" << max_epochs << "\n";
    out << "lr=" << fmt(lr) << "\n";
    out << "decay_every=" << decay_every << "\n";
    out << "decay_factor=" << fmt(decay_factor) << "\n";
    out << "clip_norm=" << fmt(clip_norm) << "\n";
    out << "l2=" << fmt(l2) << "\n";
    out << "dropout=" << fmt(dropout) << "\n";
    out << "batch_size=" << batch_size << "\n";
    out << "seed=" << seed << "\n";
    out << "embedding_strategy=" << embedding_strategy << "\n";
    out << "embedding_source=" << embedding_source << "\n";
    out << "use_pos=" << (use_pos ? 1 : 0) << "\n";
    out << "data_fraction=" << fmt(data_fraction) << "\n";
    return out.str();
}

std::uint64_t TrainConfig::hash() const { return fnv1a64(serialize()); }

void TrainConfig::set(const std::string& key, const std::string& value) {
    if (key == "model") model = value;
    else if (key == "d") d = to_int(key, value);
    else if (key == "m") m = to_int(key, value);
    else if (key == "max_epochs") max_epochs = to_int(key, value);
    else if (key == "lr") lr = to_double(key, value);
    else if (key == "decay_every") decay_every = to_int(key, value);
    else if (key == "decay_factor") decay_factor = to_double(key, value);
    else if (key == "clip_norm") clip_norm = to_double(key, value);
    else if (key == "l2") l2 = to_double(key, value);
    else if (key == "dropout") dropout = to_double(key, value);
    else if (key == "batch_size") batch_size = to_int(key, value);
    else if (key == "seed") seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "embedding_strategy") embedding_strategy = value;
    else if (key == "embedding_source") embedding_source = value;
    else if (key == "use_pos") use_pos = to_bool(key, value);
    else if (key == "data_fraction") data_fraction = to_double(key, value);
    else throw FormatError("config: unknown key \"" + key + "\"");
}

TrainConfig parse_config(std::istream& in, const std::string& filename) {
    TrainConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        const std::size_t hash_pos = trimmed.find('#');
        if (hash_pos != std::string::npos) trimmed = trimmed.substr(0, hash_pos);
        while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
            trimmed.pop_back();
        std::size_t b = 0;
        while (b < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[b]))) ++b;
        trimmed = trimmed.substr(b);
        if (trimmed.empty()) continue;
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw FormatError(filename + ":" + std::to_string(lineno) + ": expected key=value");
        try {
            cfg.set(trimmed.substr(0, eq), trimmed.substr(eq + 1));
        } catch (const FormatError& e) {
            throw FormatError(filename + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

TrainConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path + ": cannot open file");
    return parse_config(in, path);
}

} // namespace sentnet
