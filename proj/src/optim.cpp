#include "sentnet/optim.hpp"

#include <cmath>

namespace sentnet {

void ParamStore::add(const std::string& name, Tensor t, bool trainable) {
    if (has(name)) throw ContractError("param store: duplicate parameter " + name);
    params_.emplace(name, Param{std::move(t), trainable});
}

Param& ParamStore::at(const std::string& name) {
    auto it = params_.find(name);
    if (it == params_.end()) throw ContractError("param store: unknown parameter " + name);
    return it->second;
}

const Param& ParamStore::at(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw ContractError("param store: unknown parameter " + name);
    return it->second;
}

long long ParamStore::count() const {
    long long n = 0;
    for (const auto& [name, p] : params_) n += static_cast<long long>(p.value.size());
    return n;
}

long long ParamStore::trainable_count() const {
    long long n = 0;
    for (const auto& [name, p] : params_)
        if (p.trainable) n += static_cast<long long>(p.value.size());
    return n;
}

std::map<std::string, int> ParamStore::bind(Graph& g) const {
    std::map<std::string, int> ids;
    for (const auto& [name, p] : params_) ids[name] = g.param(name, p.value, p.trainable);
    return ids;
}

double global_grad_norm(const GradMap& grads) {
    double sq = 0.0;
    for (const auto& [name, g] : grads)
        for (double v : g.data) sq += v * v;
    return std::sqrt(sq);
}

GradMap clip_gradients(GradMap grads, double max_norm) {
    if (!(max_norm > 0.0)) throw RangeError("clip_gradients: max_norm must be positive");
    const double norm = global_grad_norm(grads);
    if (norm <= max_norm * (1.0 + 1e-12)) return grads;
    const double scale = max_norm / norm;
    for (auto& [name, g] : grads)
        for (double& v : g.data) v *= scale;
    return grads;
}

void AdamState::step(ParamStore& params, const GradMap& grads, double lr) {
    if (!(lr > 0.0)) throw RangeError("adam: learning rate must be positive");
    ++t_;
    const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
    for (auto& [name, p] : params.all()) {
        if (!p.trainable) continue;
        auto git = grads.find(name);
        if (git == grads.end()) continue;
        const Tensor& g = git->second;
        if (!g.same_shape(p.value))
            throw ShapeError("adam: gradient shape " + shape_str(g.shape) + " vs parameter " +
                             shape_str(p.value.shape) + " for " + name);
        auto& mom = moments_[name];
        if (mom.m.data.empty()) {
            mom.m = Tensor::zeros(p.value.shape);
            mom.v = Tensor::zeros(p.value.shape);
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double gi = g.data[i];
            mom.m.data[i] = kBeta1 * mom.m.data[i] + (1.0 - kBeta1) * gi;
            mom.v.data[i] = kBeta2 * mom.v.data[i] + (1.0 - kBeta2) * gi * gi;
            const double mhat = mom.m.data[i] / bc1;
            const double vhat = mom.v.data[i] / bc2;
            p.value.data[i] -= lr * mhat / (std::sqrt(vhat) + kEps);
        }
    }
}

} // namespace sentnet
