#pragma once

#include <cstdint>
#include <istream>
#include <string>

#include "sentnet/encoder.hpp"

namespace sentnet {

// Every training hyperparameter as an explicit field. Files are flat
// key=value text; unknown keys are rejected.
struct TrainConfig {
    std::string model = "sentnet"; // entnet | sentnet | tfidf | q2a
    int d = 50;
    int m = 5;
    int max_epochs = 50;
    double lr = 0.01;
    int decay_every = 10;       // epochs between learning-rate decays
    double decay_factor = 0.5;
    double clip_norm = 40.0;
    double l2 = 0.001;
    double dropout = 0.5;
    int batch_size = 32;
    std::uint64_t seed = 1;
    std::string embedding_strategy = "random"; // random | fixed | oracle | pretrained
    std::string embedding_source;              // snapshot or vector file path
    bool use_pos = false;
    double data_fraction = 1.0;

    void validate() const;
    EmbeddingStrategy strategy() const { return embedding_strategy_from(embedding_strategy); }

    // Canonical key=value form; identical configs serialize identically.
    std::string serialize() const;
    std::uint64_t hash() const;

    void set(const std::string& key, const std::string& value);
};

TrainConfig parse_config(std::istream& in, const std::string& filename = "<input>");
TrainConfig parse_config_file(const std::string& path);

} // namespace sentnet
