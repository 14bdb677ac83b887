#include "sentnet/eval.hpp"

#include <cmath>

namespace sentnet {

AccuracyResult turn_accuracy(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size())
        throw ContractError("turn_accuracy: prediction/label length mismatch");
    if (predictions.empty()) throw ContractError("turn_accuracy: empty example set");
    AccuracyResult r;
    r.total = static_cast<int>(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (predictions[i] == labels[i]) ++r.correct;
    r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
    return r;
}

AccuracyResult evaluate_model(const ResponseModel& model,
                              const std::vector<DialogueExample>& examples) {
    std::vector<int> predictions, labels;
    predictions.reserve(examples.size());
    labels.reserve(examples.size());
    for (const auto& ex : examples) {
        predictions.push_back(model.argmax_prediction(ex));
        labels.push_back(ex.label);
    }
    return turn_accuracy(predictions, labels);
}

namespace {

// Lentz's continued fraction for the incomplete beta function.
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 200;
    constexpr double kEps = 3e-14;
    constexpr double kFpMin = 1e-300;
    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double betai(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double bt = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                               a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * betacf(a, b, x) / a;
    return 1.0 - bt * betacf(b, a, 1.0 - x) / b;
}

} // namespace

double student_t_two_sided_p(double t, int dof) {
    if (dof < 1) throw ContractError("student_t_two_sided_p: dof must be >= 1");
    const double nu = static_cast<double>(dof);
    return betai(0.5 * nu, 0.5, nu / (nu + t * t));
}

PairedComparison paired_ttest(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 2) throw ContractError("paired_ttest: need at least 2 pairs");
    PairedComparison r;
    r.n = static_cast<int>(pairs.size());
    double sum = 0.0;
    for (const auto& [a, b] : pairs) sum += a - b;
    r.mean_diff = sum / r.n;
    double sq = 0.0;
    for (const auto& [a, b] : pairs) {
        const double d = (a - b) - r.mean_diff;
        sq += d * d;
    }
    const double var = sq / (r.n - 1);
    if (var == 0.0) {
        if (r.mean_diff == 0.0) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            // All differences identical and nonzero: infinite t, report the
            // degenerate-significant case explicitly.
            r.t = r.mean_diff > 0.0 ? HUGE_VAL : -HUGE_VAL;
            r.p = 0.0;
            r.degenerate = true;
            r.significant = true;
        }
        return r;
    }
    r.t = r.mean_diff / std::sqrt(var / r.n);
    r.p = student_t_two_sided_p(r.t, r.n - 1);
    r.significant = r.p < 0.01;
    return r;
}

} // namespace sentnet
