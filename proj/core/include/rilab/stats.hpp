#ifndef RILAB_STATS_HPP
#define RILAB_STATS_HPP

#include <vector>

namespace rilab {

struct MeanSe {
    double mean = 0;
    double se = 0;
    long long n = 0;
};

MeanSe mean_se(const std::vector<double> &xs);

// Goodness of fit of observed counts against expected cell probabilities.
// Cells with expected count below `min_expected` are merged into a tail cell.
double chisq_gof_pvalue(const std::vector<long long> &observed,
                        const std::vector<double> &expected_probs,
                        double min_expected = 5.0);

// Homogeneity of two count vectors over the same cells.
double chisq_two_sample_pvalue(const std::vector<long long> &a,
                               const std::vector<long long> &b,
                               double min_expected = 5.0);

// Kolmogorov-Smirnov against Exponential(rate), asymptotic p-value.
double ks_exponential_pvalue(std::vector<double> samples, double rate = 1.0);

struct LinReg {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
};

LinReg linear_regression(const std::vector<double> &x, const std::vector<double> &y);

} // namespace rilab

#endif
