// Budgeted maximizers for scale-invariant objectives on R^m \ {0}.
#ifndef BIBASIS_OPTIMIZE_HPP
#define BIBASIS_OPTIMIZE_HPP

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace bibasis {

enum class Strategy { exhaustive_signs, grid_sphere, multistart_ascent };

std::string_view to_string(Strategy strategy) noexcept;
/// Accepts both "exhaustive-signs" and "exhaustive_signs" spellings.
Strategy parse_strategy(std::string_view text);

/// Objectives must be even and positively homogeneous of degree 0, i.e.
/// f(c alpha) = f(alpha) for all c != 0.
using Objective = std::function<double(const Eigen::VectorXd&)>;

struct SearchOptions {
    long budget = 10000;
    std::uint64_t seed = 0;
    /// Extra starting points for multistart_ascent. Shorter vectors are
    /// padded with zeros (a prefix of the family), longer ones truncated.
    std::vector<Eigen::VectorXd> warm_starts{};
};

struct SearchResult {
    double best = 0.0;
    Eigen::VectorXd witness;
    long evaluations = 0;
    /// True when an exhaustive enumeration visited every candidate.
    bool complete = false;
};

inline constexpr int max_exhaustive_size = 20;
inline constexpr int max_grid_size = 4;

/// Number of sign patterns in {-1,0,1}^m \ {0} whose first nonzero entry is +1.
long sign_pattern_count(int m);

/// Visits the patterns of sign_pattern_count(m) in odometer order (first
/// coordinate fastest; digit order 0, +1, -1) and stops early when the visitor
/// returns false.
void for_each_sign_pattern(int m, const std::function<bool(const Eigen::VectorXd&)>& visit);

SearchResult exhaustive_sign_search(const Objective& f, int m, long budget);
SearchResult grid_sphere_search(const Objective& f, int m, long budget);
SearchResult multistart_ascent(const Objective& f, int m, const SearchOptions& options);

/// Dispatches on the strategy. Throws std::invalid_argument for budget < 1
/// or sizes the strategy does not support.
SearchResult maximize(const Objective& f, int m, Strategy strategy, const SearchOptions& options);

} // namespace bibasis

#endif // BIBASIS_OPTIMIZE_HPP
