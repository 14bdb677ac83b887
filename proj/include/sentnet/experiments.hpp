#pragma once

#include <string>
#include <vector>

#include "sentnet/training.hpp"

namespace sentnet {

struct ExperimentOptions {
    std::vector<std::uint64_t> seeds;  // empty -> per-experiment default
    std::vector<double> fractions;     // empty -> per-experiment default (E2/E3)
    bool force = false;                // reuse an existing non-empty output dir
    TrainOptions train_options;
};

// E1: all models x seeds, best/mean/std per model, paired t-tests against the
//     strongest baseline.
// E2: embedding strategy x fraction grid for the base model.
// E3: {entnet, sentnet} x fraction grid.
// E4: {entnet, sentnet} x {with, without} POS tags.
// Each run's CSV is persisted under runs/ and reused when present, so an
// interrupted experiment resumes where it stopped.
void run_experiment(const std::string& kind, const Corpus& corpus, const TrainConfig& base,
                    const std::string& out_dir, const ExperimentOptions& options = {});

// "hash  relative-path" per line, every file under dir except MANIFEST itself.
void write_manifest(const std::string& dir);

std::string read_text_file(const std::string& path);

} // namespace sentnet
