// Finite-dimensional Banach lattices: weighted l_p / dyadic L_p spaces,
// coordinatewise lattice operations and the norms used throughout.
//
// The free function templates at the bottom of this header operate on any
// Eigen expression; the Space/LVec wrappers add the bookkeeping (space
// identity, validation) on top of them.
#ifndef BIBASIS_LATTICE_HPP
#define BIBASIS_LATTICE_HPP

#include <Eigen/Core>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bibasis {

/// Exponent p in [1, inf]. Infinity is a separate state, never a large float.
class Exponent {
public:
    Exponent() = default;

    static Exponent finite(double p);
    static Exponent infinity() noexcept;
    /// Accepts "inf", "infinity" or a decimal number >= 1.
    static Exponent parse(std::string_view text);

    bool is_infinite() const noexcept { return infinite_; }
    /// Throws std::logic_error for p = inf.
    double value() const;
    /// p/(p-1); infinite for p = 1, 1 for p = inf.
    Exponent conjugate() const;
    std::string to_string() const;

    friend bool operator==(const Exponent&, const Exponent&) = default;

private:
    Exponent(double value, bool infinite) : value_(value), infinite_(infinite) {}

    double value_ = 1.0;
    bool infinite_ = false;
};

enum class SpaceKind { lp_n, Lp_dyadic };

std::string_view to_string(SpaceKind kind) noexcept;
SpaceKind parse_space_kind(std::string_view text);

class Space;
using SpacePtr = std::shared_ptr<const Space>;

/// A coordinate space R^dim with order given coordinatewise and the norm
/// (sum_i w_i |v_i|^p)^(1/p), or max_i |v_i| when p = inf.
class Space {
public:
    /// size_param is the dimension for lp_n and the dyadic level for Lp_dyadic.
    Space(SpaceKind kind, Exponent p, int size_param);

    SpaceKind kind() const noexcept { return kind_; }
    const Exponent& p() const noexcept { return p_; }
    int size_param() const noexcept { return size_param_; }
    int dim() const noexcept { return static_cast<int>(weights_.size()); }
    const Eigen::VectorXd& weights() const noexcept { return weights_; }

    friend bool operator==(const Space& a, const Space& b)
    {
        return a.kind_ == b.kind_ && a.p_ == b.p_ && a.size_param_ == b.size_param_;
    }

    static constexpr int max_dyadic_level = 24;

private:
    SpaceKind kind_;
    Exponent p_;
    int size_param_;
    Eigen::VectorXd weights_;
};

SpacePtr make_space(SpaceKind kind, Exponent p, int size_param);

/// Raised when two operands live in different spaces.
class SpaceMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A vector bound to a Space.
class LVec {
public:
    LVec(SpacePtr space, Eigen::VectorXd coords);

    const Space& space() const noexcept { return *space_; }
    const SpacePtr& space_ptr() const noexcept { return space_; }
    const Eigen::VectorXd& coords() const noexcept { return coords_; }
    int dim() const noexcept { return static_cast<int>(coords_.size()); }
    double operator[](int i) const { return coords_[i]; }

private:
    SpacePtr space_;
    Eigen::VectorXd coords_;
};

// ---------------------------------------------------------------------------
// Expression-level kernels

/// Weighted p-norm of v. Weights are ignored for p = inf.
template <typename Derived, typename WeightDerived>
typename Derived::Scalar weighted_norm(const Eigen::MatrixBase<Derived>& v,
                                       const Eigen::MatrixBase<WeightDerived>& weights,
                                       const Exponent& p)
{
    using Scalar = typename Derived::Scalar;
    using std::abs;
    using std::pow;
    using std::sqrt;
    if (v.size() == 0)
        return Scalar(0);
    if (p.is_infinite())
        return v.cwiseAbs().maxCoeff();
    const auto w = weights.template cast<Scalar>();
    const double e = p.value();
    if (e == 1.0)
        return w.dot(v.cwiseAbs());
    if (e == 2.0)
        return sqrt(w.dot(v.cwiseAbs2()));
    // Scale by the peak so |v_i|^p cannot overflow for large entries.
    const Scalar peak = v.cwiseAbs().maxCoeff();
    if (peak == Scalar(0))
        return peak;
    const Scalar sum = w.dot((v.cwiseAbs() / peak).array().pow(Scalar(e)).matrix());
    return peak * pow(sum, Scalar(1) / Scalar(e));
}

/// Coordinatewise |v|.
template <typename Derived>
auto modulus(const Eigen::MatrixBase<Derived>& v)
{
    return v.cwiseAbs();
}

/// Coordinatewise max(a, b), the lattice supremum.
template <typename A, typename B>
auto sup(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b)
{
    return a.cwiseMax(b);
}

/// Running maximum of |s_n|, s_n = sum_{k<=n} alpha_k x_k, where row k of
/// `rows` holds x_k.
template <typename RowsDerived, typename CoeffDerived>
Eigen::Matrix<typename RowsDerived::Scalar, Eigen::Dynamic, 1>
partial_sum_envelope(const Eigen::MatrixBase<RowsDerived>& rows,
                     const Eigen::MatrixBase<CoeffDerived>& alpha)
{
    using Vec = Eigen::Matrix<typename RowsDerived::Scalar, Eigen::Dynamic, 1>;
    Vec partial = Vec::Zero(rows.cols());
    Vec envelope = Vec::Zero(rows.cols());
    for (Eigen::Index k = 0; k < rows.rows(); ++k) {
        if (alpha[k] == 0)
            continue;
        partial += alpha[k] * rows.row(k).transpose();
        envelope = envelope.cwiseMax(partial.cwiseAbs());
    }
    return envelope;
}

// ---------------------------------------------------------------------------
// LVec-level operations

double norm(const LVec& v);
LVec modulus(const LVec& v);
LVec sup(const LVec& a, const LVec& b);
/// Coordinatewise v_i^r. Negative coordinates are only allowed for integer r.
LVec pointwise_pow(const LVec& v, double r);

} // namespace bibasis

#endif // BIBASIS_LATTICE_HPP
