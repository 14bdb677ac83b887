#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sentnet/optim.hpp"

namespace sentnet {

// Builds a fresh graph from the current parameter values and returns the
// scalar loss node. Called repeatedly with perturbed parameters, so it must
// be deterministic (dropout off or identically seeded).
using LossBuilder = std::function<int(Graph&)>;

struct GradCheckReport {
    struct Entry {
        std::string name;
        double max_rel_err = 0.0;
    };
    std::vector<Entry> entries;
    double max_rel_err = 0.0;
    double tol = 0.0;

    bool pass() const { return max_rel_err <= tol; }
};

// Central finite differences against reverse-mode gradients, entry by entry.
// Relative error per entry: |g_ad - g_fd| / max(|g_ad| + |g_fd|, 1e-8).
GradCheckReport grad_check(const LossBuilder& build, ParamStore& params, double eps, double tol);

} // namespace sentnet
