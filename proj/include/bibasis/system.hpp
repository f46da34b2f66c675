// Ordered finite families of lattice vectors and the martingale-style
// functionals evaluated on them.
#ifndef BIBASIS_SYSTEM_HPP
#define BIBASIS_SYSTEM_HPP

#include "bibasis/lattice.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bibasis {

/// Row k holds the coordinates of x_{k+1}.
using VectorRows = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Family {
    custom,
    unit_vectors,
    summing_basis,
    difference_basis,
    haar,
    rademacher,
    walsh,
    krengel,
    discretized_rademacher,
    absolute_matrix,
    schauder_c01,
    blocked,
    reordered,
};

std::string_view to_string(Family family) noexcept;

/// Half-open coordinate range [begin, end).
struct BlockRange {
    int begin = 0;
    int end = 0;

    friend bool operator==(const BlockRange&, const BlockRange&) = default;
};

struct SystemParams {
    std::optional<int> level;
    std::optional<int> m;
    std::optional<int> n;
};

class System {
public:
    struct Options {
        Family family = Family::custom;
        SystemParams params{};
        std::vector<BlockRange> blocks{};
        /// Known upper bound on the basis constant, e.g. 1 for monotone bases.
        std::optional<double> certified_basis_constant{};
    };

    /// Validates: at least one vector, all nonzero, correct length, and if
    /// blocks are given they are disjoint and every vector lies in one block.
    System(std::string name, SpacePtr space, VectorRows vectors);
    System(std::string name, SpacePtr space, VectorRows vectors, Options options);

    const std::string& name() const noexcept { return name_; }
    const Space& space() const noexcept { return *space_; }
    const SpacePtr& space_ptr() const noexcept { return space_; }
    const VectorRows& vectors() const noexcept { return vectors_; }
    int size() const noexcept { return static_cast<int>(vectors_.rows()); }
    int dim() const noexcept { return static_cast<int>(vectors_.cols()); }

    Family family() const noexcept { return options_.family; }
    const SystemParams& params() const noexcept { return options_.params; }
    const std::vector<BlockRange>& blocks() const noexcept { return options_.blocks; }
    /// Block index of each vector; empty when the system has no blocks.
    const std::vector<int>& block_of() const noexcept { return block_of_; }
    std::optional<double> certified_basis_constant() const noexcept
    {
        return options_.certified_basis_constant;
    }

    LVec vector(int k) const;
    double vector_norm(int k) const;

    /// The family (x_{order[0]}, x_{order[1]}, ...). `order` may be a full
    /// permutation or a selection of distinct indices.
    System reordered(std::span<const int> order) const;
    /// The first `count` vectors.
    System prefix(int count) const;

private:
    std::string name_;
    SpacePtr space_;
    VectorRows vectors_;
    Options options_;
    std::vector<int> block_of_;
};

/// Raised when a coefficient combination of a system vanishes although the
/// coefficients do not, i.e. the system is linearly dependent.
class DegenerateSystemError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Coordinatewise max_{n<=m} |sum_{k<=n} alpha_k x_k|.
LVec partial_sum_envelope(const System& system, const Eigen::VectorXd& alpha);
/// f* = sup_n |f_n| for f_n = sum_{k<=n} alpha_k x_k.
LVec maximal_function(const System& system, const Eigen::VectorXd& alpha);
/// S(f) = (sum_k |alpha_k x_k|^2)^(1/2).
LVec square_function(const System& system, const Eigen::VectorXd& alpha);
/// sum_k alpha_k x_k.
LVec combination(const System& system, const Eigen::VectorXd& alpha);

} // namespace bibasis

#endif // BIBASIS_SYSTEM_HPP
