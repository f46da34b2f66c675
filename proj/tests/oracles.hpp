// Independent reference computations for the tests. Plain loops over
// std::vector, no library code.
#ifndef BIBASIS_TESTS_ORACLES_HPP
#define BIBASIS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace oracle {

// Values frozen from a separate high-precision computation.
inline constexpr double two_vector_haar_sweep_max = 1.1441228056351924; // 10^6-point circle sweep
inline constexpr double golden_over_sqrt2 = 1.1441228056353685;
inline constexpr double expected_abs_s8 = 35.0 / 16.0;                  // E|r_1 + ... + r_8|

inline double weighted_norm(const std::vector<double>& v, const std::vector<double>& w, double p)
{
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v)
            m = std::max(m, std::abs(x));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += w[i] * std::pow(std::abs(v[i]), p);
    return std::pow(s, 1.0 / p);
}

/// ||max_n |s_n| || / ||s_m|| with rows[k] = x_{k+1}.
inline double bibasis_ratio(const std::vector<std::vector<double>>& rows,
                            const std::vector<double>& w, double p, const std::vector<double>& alpha)
{
    const std::size_t d = w.size();
    std::vector<double> partial(d, 0.0);
    std::vector<double> envelope(d, 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        for (std::size_t i = 0; i < d; ++i) {
            partial[i] += alpha[k] * rows[k][i];
            envelope[i] = std::max(envelope[i], std::abs(partial[i]));
        }
    }
    return weighted_norm(envelope, w, p) / weighted_norm(partial, w, p);
}

/// Largest M-ratio of (1,1), (1,-1) on two cells of weight 1/2 in L2 over
/// `points` equally spaced directions in [0, pi).
inline double two_vector_haar_sweep(int points)
{
    const std::vector<std::vector<double>> rows{{1.0, 1.0}, {1.0, -1.0}};
    const std::vector<double> w{0.5, 0.5};
    const double pi = std::acos(-1.0);
    double best = 0.0;
    for (int i = 0; i < points; ++i) {
        const double t = pi * i / points;
        best = std::max(best, bibasis_ratio(rows, w, 2.0, {std::cos(t), std::sin(t)}));
    }
    return best;
}

/// E|r_1 + ... + r_m|^p by enumerating all 2^m sign rows of the dyadic grid.
inline double rademacher_sum_moment(int m, double p)
{
    double total = 0.0;
    for (long row = 0; row < (1L << m); ++row) {
        int s = 0;
        for (int k = 0; k < m; ++k)
            s += ((row >> k) & 1L) ? -1 : 1;
        total += std::pow(std::abs(double(s)), p);
    }
    return total / double(1L << m);
}

} // namespace oracle

#endif // BIBASIS_TESTS_ORACLES_HPP
