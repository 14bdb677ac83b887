#pragma once

#include <map>
#include <string>

#include "sentnet/graph.hpp"
#include "sentnet/tensor.hpp"

namespace sentnet {

// Named parameter tensors with per-tensor trainable flags. Iteration order is
// the map's key order, so update and serialization order is deterministic.
struct Param {
    Tensor value;
    bool trainable = true;
};

class ParamStore {
public:
    void add(const std::string& name, Tensor t, bool trainable = true);
    bool has(const std::string& name) const { return params_.count(name) > 0; }
    Param& at(const std::string& name);
    const Param& at(const std::string& name) const;
    Tensor& tensor(const std::string& name) { return at(name).value; }
    const Tensor& tensor(const std::string& name) const { return at(name).value; }

    std::map<std::string, Param>& all() { return params_; }
    const std::map<std::string, Param>& all() const { return params_; }

    // Total scalar entries across all parameters (trainable or not).
    long long count() const;
    long long trainable_count() const;

    // Registers every parameter as a graph leaf; returns name -> node id.
    std::map<std::string, int> bind(Graph& g) const;

private:
    std::map<std::string, Param> params_;
};

// Scales every gradient by max_norm / g when the global L2 norm g exceeds
// max_norm; a hair of slack on the comparison keeps the op idempotent.
GradMap clip_gradients(GradMap grads, double max_norm = 40.0);

double global_grad_norm(const GradMap& grads);

// Adam with bias correction; beta1 = 0.9, beta2 = 0.999, eps = 1e-8.
class AdamState {
public:
    AdamState() = default;

    // One update over the store's trainable parameters. Parameters without an
    // entry in `grads` are left untouched.
    void step(ParamStore& params, const GradMap& grads, double lr);

    long long steps() const { return t_; }

    static constexpr double kBeta1 = 0.9;
    static constexpr double kBeta2 = 0.999;
    static constexpr double kEps = 1e-8;

private:
    struct Moments {
        Tensor m;
        Tensor v;
    };
    std::map<std::string, Moments> moments_;
    long long t_ = 0;
};

} // namespace sentnet
