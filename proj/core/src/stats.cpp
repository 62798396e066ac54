#include "rilab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <gsl/gsl_cdf.h>

namespace rilab {

MeanSe mean_se(const std::vector<double> &xs) {
    MeanSe m;
    m.n = static_cast<long long>(xs.size());
    if (m.n == 0) return m;
    double s = 0;
    for (double x : xs) s += x;
    m.mean = s / m.n;
    double v = 0;
    for (double x : xs) v += (x - m.mean) * (x - m.mean);
    if (m.n > 1) m.se = std::sqrt(v / (m.n - 1) / m.n);
    return m;
}

double chisq_gof_pvalue(const std::vector<long long> &observed,
                        const std::vector<double> &expected_probs,
                        double min_expected) {
    if (observed.size() != expected_probs.size())
        throw std::invalid_argument("chisq: size mismatch");
    long long n = 0;
    for (long long o : observed) n += o;
    if (n == 0) return 1.0;

    // merge small-expectation cells into one tail cell
    double stat = 0, tail_exp = 0;
    long long tail_obs = 0;
    int dof = -1;
    for (size_t i = 0; i < observed.size(); ++i) {
        double e = expected_probs[i] * n;
        if (e < min_expected) {
            tail_exp += e;
            tail_obs += observed[i];
            continue;
        }
        stat += (observed[i] - e) * (observed[i] - e) / e;
        ++dof;
    }
    if (tail_exp > 0) {
        stat += (tail_obs - tail_exp) * (tail_obs - tail_exp) / tail_exp;
        ++dof;
    }
    if (dof < 1) return 1.0;
    return gsl_cdf_chisq_Q(stat, dof);
}

double chisq_two_sample_pvalue(const std::vector<long long> &a,
                               const std::vector<long long> &b,
                               double min_expected) {
    if (a.size() != b.size()) throw std::invalid_argument("chisq: size mismatch");
    double na = 0, nb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        na += a[i];
        nb += b[i];
    }
    if (na == 0 || nb == 0) return 1.0;
    double stat = 0;
    int dof = -1;
    double tka = 0, tkb = 0;
    auto add_cell = [&](double ca, double cb) {
        double tot = ca + cb;
        double ea = tot * na / (na + nb), eb = tot * nb / (na + nb);
        if (ea > 0) stat += (ca - ea) * (ca - ea) / ea;
        if (eb > 0) stat += (cb - eb) * (cb - eb) / eb;
        ++dof;
    };
    for (size_t i = 0; i < a.size(); ++i) {
        double tot = a[i] + b[i];
        if (tot * std::min(na, nb) / (na + nb) < min_expected) {
            tka += a[i];
            tkb += b[i];
            continue;
        }
        add_cell(double(a[i]), double(b[i]));
    }
    if (tka + tkb > 0) add_cell(tka, tkb);
    if (dof < 1) return 1.0;
    return gsl_cdf_chisq_Q(stat, dof);
}

double ks_exponential_pvalue(std::vector<double> samples, double rate) {
    size_t n = samples.size();
    if (n == 0) return 1.0;
    std::sort(samples.begin(), samples.end());
    double dmax = 0;
    for (size_t i = 0; i < n; ++i) {
        double f = 1.0 - std::exp(-rate * samples[i]);
        dmax = std::max(dmax, std::max(f - double(i) / n, double(i + 1) / n - f));
    }
    double sn = std::sqrt(double(n));
    double t = (sn + 0.12 + 0.11 / sn) * dmax;
    // Kolmogorov tail sum
    double p = 0;
    for (int k = 1; k <= 100; ++k) p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * t * t);
    return std::clamp(p, 0.0, 1.0);
}

LinReg linear_regression(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("regression needs paired data");
    double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    double vx = sxx - sx * sx / n, vy = syy - sy * sy / n, cxy = sxy - sx * sy / n;
    LinReg r;
    r.slope = cxy / vx;
    r.intercept = (sy - r.slope * sx) / n;
    r.r2 = vy > 0 ? cxy * cxy / (vx * vy) : 1.0;
    return r;
}

} // namespace rilab
