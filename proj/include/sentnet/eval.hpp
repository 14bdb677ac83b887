#pragma once

#include <utility>
#include <vector>

#include "sentnet/model.hpp"

namespace sentnet {

struct AccuracyResult {
    int correct = 0;
    int total = 0;
    double accuracy = 0.0;
};

// Fraction of turns where the argmax candidate equals the gold label; argmax
// ties go to the lowest candidate index.
AccuracyResult turn_accuracy(const std::vector<int>& predictions, const std::vector<int>& labels);

AccuracyResult evaluate_model(const ResponseModel& model,
                              const std::vector<DialogueExample>& examples);

struct PairedComparison {
    int n = 0;
    double mean_diff = 0.0;
    double t = 0.0;
    double p = 1.0;
    bool significant = false; // p < 0.01
    bool degenerate = false;  // zero-variance nonzero-mean differences
};

// Two-sided paired t-test on (a_i - b_i) with n-1 degrees of freedom.
PairedComparison paired_ttest(const std::vector<std::pair<double, double>>& pairs);

// Survival-style two-sided p for Student's t via the regularized incomplete
// beta function.
double student_t_two_sided_p(double t, int dof);

} // namespace sentnet
