// Ratio functionals for the basis (K), bibasis (M), unconditional-bibasis
// (L), unconditional (K_u) and absolute (A) constants of a finite system,
// and search-based lower bounds for them.
//
// Every ratio has the denominator ||sum_{k<=m} alpha_k x_k||. Numerators:
//
//   K    max_n ||s_n||
//   M    || max_n |s_n| ||
//   L    sup_eps || max_n |sum_{k<=n} eps_k alpha_k x_k| ||
//   K_u  sup_eps || sum_k eps_k alpha_k x_k ||
//   A    || sum_k |alpha_k x_k| ||
//
// with eps ranging over {-1,+1}^m (or a fixed pattern when given).
#ifndef BIBASIS_CONSTANTS_HPP
#define BIBASIS_CONSTANTS_HPP

#include "bibasis/optimize.hpp"
#include "bibasis/system.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bibasis {

enum class ConstantKind { basis, bibasis, unc_bibasis, unconditional, absolute };

/// "K_basis", "M_bibasis", "L_unc_bibasis", "Ku_unconditional", "A_absolute".
std::string_view to_string(ConstantKind kind) noexcept;
/// Accepts the tags above and the short names basis, bibasis, unc-bibasis,
/// unconditional, absolute.
ConstantKind parse_constant_kind(std::string_view text);

/// Sign suprema enumerate 2^(m-1) patterns; larger systems are rejected.
inline constexpr int max_sign_sup_size = 20;

/// Evaluates one ratio kind repeatedly on a fixed system. Keeps scratch
/// buffers, so an instance must not be shared between threads.
class RatioEvaluator {
public:
    RatioEvaluator(const System& system, ConstantKind kind);

    /// Throws std::invalid_argument for a zero or mis-sized alpha and
    /// DegenerateSystemError when the combination vanishes.
    double operator()(const Eigen::VectorXd& alpha);
    /// L and K_u at one fixed sign pattern (entries +-1). Other kinds ignore
    /// the signs.
    double operator()(const Eigen::VectorXd& alpha, std::span<const int> signs);

    /// Sign pattern attaining the last sign supremum (L, K_u only).
    const std::vector<int>& last_signs() const noexcept { return last_signs_; }
    ConstantKind kind() const noexcept { return kind_; }

private:
    double denominator(const Eigen::VectorXd& alpha);
    double numerator(const Eigen::VectorXd& alpha);
    double signed_numerator(const Eigen::VectorXd& alpha, std::span<const int> signs);
    double space_norm(const Eigen::VectorXd& v) const;

    const System* system_;
    ConstantKind kind_;
    Eigen::VectorXd row_norms_;
    Eigen::VectorXd partial_;
    Eigen::VectorXd envelope_;
    Eigen::VectorXd signed_alpha_;
    std::vector<int> signs_;
    std::vector<int> last_signs_;
};

/// One ratio evaluation; see RatioEvaluator.
double ratio(const System& system, const Eigen::VectorXd& alpha, ConstantKind kind,
             std::optional<std::vector<int>> signs = std::nullopt);

enum class UpperProvenance { none, doob, am_equality };
std::string_view to_string(UpperProvenance provenance) noexcept;

struct ConstantEstimate {
    ConstantKind kind = ConstantKind::bibasis;
    /// Best ratio found: a certified lower bound for the constant.
    double lower = 0.0;
    Eigen::VectorXd witness;
    /// Sign pattern at the witness (L and K_u).
    std::vector<int> signs;
    /// Order of the system the witness refers to (permuted estimates).
    std::vector<int> permutation;
    /// Theorem-backed upper bound, never a search result.
    std::optional<double> upper;
    UpperProvenance upper_provenance = UpperProvenance::none;
    Strategy strategy = Strategy::multistart_ascent;
    long budget = 0;
    long evaluations = 0;
    std::uint64_t seed = 0;
    /// Exhaustive enumeration finished within the budget.
    bool complete = false;
    std::string system;
};

struct EstimateOptions {
    std::vector<Eigen::VectorXd> warm_starts{};
};

/// Lower bound for the constant by maximizing the ratio; attaches an upper
/// bound only when a theorem provides one (Doob's q = p/(p-1) for M of the
/// Haar system with 1 < p < inf; the basis constant for M in p = inf spaces,
/// where M-ratio = K-ratio exactly).
ConstantEstimate estimate_constant(const System& system, ConstantKind kind, Strategy strategy,
                                   long budget, std::uint64_t seed,
                                   const EstimateOptions& options = {});

/// Which reorderings permuted_estimate searches. The identity comes first in
/// every mode except an explicit order.
struct PermutationMode {
    enum class Type { explicit_order, random, exhaustive, subsets };

    Type type = Type::random;
    std::vector<int> order{};
    int count = 0;

    static PermutationMode explicit_order(std::vector<int> order);
    static PermutationMode random(int count);
    static PermutationMode exhaustive();
    static PermutationMode subsets(int count);
};

inline constexpr int max_exhaustive_permutation_size = 8;

/// The maximum of estimate_constant over the selected reorderings. The budget
/// and seed apply to each reordering, so the identity run reproduces the
/// plain estimate exactly.
ConstantEstimate permuted_estimate(const System& system, ConstantKind kind,
                                   const PermutationMode& mode, Strategy strategy, long budget,
                                   std::uint64_t seed);

/// y_j = sum_{k in block j} c_k x_k. `block_ends` are exclusive 0-based ends,
/// strictly increasing and at most m; block j covers [end_{j-1}, end_j).
/// `inner` holds one coefficient per covered vector.
System block_system(const System& system, std::span<const int> block_ends,
                    const Eigen::VectorXd& inner);

/// Coefficients alpha on the original system with sum alpha_k x_k equal to
/// sum beta_j y_j for the blocking above (alpha_k = beta_j c_k).
Eigen::VectorXd expand_block_coefficients(int m, std::span<const int> block_ends,
                                          const Eigen::VectorXd& inner,
                                          const Eigen::VectorXd& beta);

struct DistortionEstimate {
    double lower = 0.0;
    double upper = 0.0;
    Eigen::VectorXd lower_witness;
    Eigen::VectorXd upper_witness;
    long evaluations = 0;
};

/// Range of ||sum alpha_k x_k|| / ||alpha||_p over searched alpha, with p the
/// exponent of the ambient space. Half the budget goes to each side.
DistortionEstimate distortion_vs_lp(const System& system, Strategy strategy, long budget,
                                    std::uint64_t seed);

/// 2 K sum_k ||x_k - y_k|| / ||x_k||.
double perturbation_theta(const System& x, const System& y, double basis_constant_upper);

} // namespace bibasis

#endif // BIBASIS_CONSTANTS_HPP
