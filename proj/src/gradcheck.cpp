#include "sentnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>

namespace sentnet {

namespace {

double eval_loss(const LossBuilder& build) {
    Graph g;
    const int loss = build(g);
    if (g.value(loss).size() != 1) throw ContractError("grad_check: builder must return a scalar loss");
    return g.value(loss).data[0];
}

} // namespace

GradCheckReport grad_check(const LossBuilder& build, ParamStore& params, double eps, double tol) {
    if (!(eps > 0.0)) throw RangeError("grad_check: eps must be positive");

    const double l0 = eval_loss(build);
    const double l0_again = eval_loss(build);
    if (l0 != l0_again)
        throw DeterminismError("grad_check: builder returned different losses on repeat evaluation (" +
                               std::to_string(l0) + " vs " + std::to_string(l0_again) + ")");

    Graph g;
    const int loss = build(g);
    g.backward(loss);
    const GradMap analytic = g.param_grads();

    GradCheckReport report;
    report.tol = tol;
    for (auto& [name, p] : params.all()) {
        if (!p.trainable) continue;
        auto it = analytic.find(name);
        if (it == analytic.end())
            throw ContractError("grad_check: builder did not register parameter " + name);
        const Tensor& g_ad = it->second;
        GradCheckReport::Entry entry{name, 0.0};
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            const double saved = p.value.data[i];
            p.value.data[i] = saved + eps;
            const double lp = eval_loss(build);
            p.value.data[i] = saved - eps;
            const double lm = eval_loss(build);
            p.value.data[i] = saved;
            const double g_fd = (lp - lm) / (2.0 * eps);
            const double denom = std::max(std::abs(g_ad.data[i]) + std::abs(g_fd), 1e-8);
            const double rel = std::abs(g_ad.data[i] - g_fd) / denom;
            entry.max_rel_err = std::max(entry.max_rel_err, rel);
        }
        report.max_rel_err = std::max(report.max_rel_err, entry.max_rel_err);
        report.entries.push_back(std::move(entry));
    }
    return report;
}

} // namespace sentnet
