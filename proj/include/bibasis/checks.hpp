// Reproducible numerical verifications. Each check returns a CheckOutcome
// whose `measured` and `bound` maps share keys where a comparison is made.
#ifndef BIBASIS_CHECKS_HPP
#define BIBASIS_CHECKS_HPP

#include "bibasis/constants.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bibasis {

struct CheckOutcome {
    std::string id;
    /// The claim being verified, in words.
    std::string paper_anchor;
    std::map<std::string, double> measured;
    std::map<std::string, double> bound;
    bool passed = false;
    double tolerance = 0.0;
    long runtime_ms = 0;
    std::uint64_t seed = 0;
    /// Coefficient vectors attaining reported values.
    std::map<std::string, std::vector<double>> witnesses;
};

inline constexpr double exact_tolerance = 1e-9;
inline constexpr double optimizer_tolerance = 1e-6;

/// Doob: every ratio the search evaluates on haar(p, level) stays below
/// q = p/(p-1), and the best one reaches (1 + 1/(2^p - 2))^(1/p).
CheckOutcome check_haar_doob(double p, int level, long budget, std::uint64_t seed,
                             double tol = exact_tolerance);
/// Optimized M lower bounds of haar(1, l) strictly increase over l = 2..level_max.
CheckOutcome check_haar_l1_failure(int level_max, long budget_per_level = 50000,
                                   std::uint64_t seed = 0);
/// M-ratio of the difference basis at alpha = 1 equals m.
CheckOutcome check_difference_basis(int m, double tol = 1e-12);
/// M-ratio of the two-vector Haar system peaks at the golden ratio over sqrt 2.
CheckOutcome check_haar_two_vector(long budget = 10000, double tol = optimizer_tolerance);
/// Random perturbations y of haar(p, level) obey M_y <= (q + theta)/(1 - theta).
CheckOutcome check_perturbation(double p, int level, double perturbation_scale, int trials,
                                std::uint64_t seed, long budget_per_trial = 2000,
                                double tol = optimizer_tolerance);
/// Block envelopes are dominated by the envelopes of the expanded coefficients.
CheckOutcome check_blocks(double p, int level, int trials, std::uint64_t seed,
                          double tol = 1e-10);
/// Permuted M-ratios of the Rademacher system plateau in m while the
/// A-ratio at alpha = 1 grows.
CheckOutcome check_rademacher(double p, int m, long budget, std::uint64_t seed,
                              int permutations = 10);
/// For unconditional block bases of the L1 Haar system, M-ratio over K_u-ratio
/// stays bounded as the level grows.
CheckOutcome check_unc_block_L1(int level, int trials, std::uint64_t seed, long budget = 4000);
/// ||sum alpha_k x_k||_inf = sum |alpha_k| and the moduli system has K_u >= m.
CheckOutcome check_absolute_matrix(int m, std::uint64_t seed = 0, int random_trials = 1000,
                                   double tol = 1e-12);
/// Walsh norm growth, the Hadamard-Walsh factorization and equality of the
/// Krengel and Walsh column constants.
CheckOutcome check_walsh(int n, std::uint64_t seed = 0, double tol = 1e-12);
/// Permuted and selected M-ratios of the discretized Rademacher system stay
/// below the largest single-block constant; distortion from l_p grows with the block.
CheckOutcome check_discretized_rademacher(double p, int blocks, int trials, std::uint64_t seed,
                                          long distortion_budget = 20000,
                                          double tol = exact_tolerance);
/// sum |x_k| = sup_eps sum eps_k x_k and sum |x_k| <= 2 sup_S |sum_{k in S} x_k|
/// on random families.
CheckOutcome check_lattice_identities(int trials, std::uint64_t seed, double tol = 1e-12);
/// Empirical ranges of ||f*||/||S(f)|| for Haar martingales and of
/// ||sum alpha_k r_k|| / |alpha|_2, stable across two seeds.
CheckOutcome check_bgd_khintchine_report(double p, int m, std::uint64_t seed, int trials = 400);
/// multistart_ascent never falls below exhaustive_signs on small systems.
CheckOutcome check_optimizer_oracle(std::uint64_t seed, double tol = exact_tolerance);

/// Ids in suite order.
const std::vector<std::string>& check_ids();
bool is_check_id(const std::string& id);

struct SuiteConfig {
    std::uint64_t seed = 0;
    /// Per-estimate evaluation budget.
    long budget = 10000;
    /// Overrides each check's comparison tolerance.
    std::optional<double> tolerance;
    /// Trial count override for randomized checks.
    std::optional<int> trials;
    /// Size overrides (p, level, m, n) for single-check runs.
    std::optional<double> p;
    std::optional<int> level;
    std::optional<int> m;
    std::optional<int> n;
    /// nullopt runs every check; an empty list runs none.
    std::optional<std::vector<std::string>> selection;
    bool parallel = true;
};

/// Runs the selected checks (some ids expand to several outcomes, e.g. one per
/// exponent) and returns outcomes in declaration order. Throws
/// std::invalid_argument for an unknown id.
std::vector<CheckOutcome> run_suite(const SuiteConfig& config);

bool all_passed(const std::vector<CheckOutcome>& outcomes);

} // namespace bibasis

#endif // BIBASIS_CHECKS_HPP
