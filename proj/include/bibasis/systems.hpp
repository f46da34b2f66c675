// Constructors for classical finite Schauder systems, represented exactly
// on a coordinate grid.
#ifndef BIBASIS_SYSTEMS_HPP
#define BIBASIS_SYSTEMS_HPP

#include "bibasis/system.hpp"

#include <vector>

namespace bibasis {

using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

/// A 2^n x 2^n matrix with entries exactly +-1.
class SignMatrix {
public:
    SignMatrix(int order, IntMatrix entries);

    int order() const noexcept { return order_; }
    int size() const noexcept { return static_cast<int>(entries_.rows()); }
    const IntMatrix& entries() const noexcept { return entries_; }
    int operator()(int r, int c) const { return entries_(r, c); }

    /// Number of sign changes down column c.
    int sign_changes(int c) const;

private:
    int order_;
    IntMatrix entries_;
};

/// H_0 = (1), H_{n+1} = [H_n H_n; H_n -H_n].
SignMatrix hadamard(int n);

/// Sequency-ordered Walsh matrix W_n and the column order relating it to H_n:
/// column j of W_n is column hadamard_column[j] of H_n.
struct WalshMatrix {
    SignMatrix matrix;
    std::vector<int> hadamard_column;

    /// The permutation matrix P with H_n = W_n P (equivalently H_n = P^T W_n).
    IntMatrix permutation_matrix() const;
};

WalshMatrix walsh_matrix(int n);

enum class HaarNormalization { sup, lp };

/// e_1, ..., e_m in the given space.
System unit_vectors(const SpacePtr& space, int m);
/// x_k = e_1 + ... + e_k in l_inf^n.
System summing_basis(int n);
/// x_1 = e_1, x_k = e_k - e_{k-1} in l_1^n.
System difference_basis(int n);
/// The 2^level Haar functions on the dyadic grid of the given level, in the
/// usual order: constant first, then level by level, left to right.
/// Default normalization is +-1 valued.
System haar(Exponent p, int level, HaarNormalization normalization = HaarNormalization::sup);
/// r_1, ..., r_m on the dyadic grid of level m.
System rademacher(Exponent p, int m);
/// The columns of W_n as step functions on the dyadic grid of level n.
System walsh(Exponent p, int n);
/// The columns of T_n = 2^{-n/2} H_n in l_p^{2^n}.
System krengel_columns(Exponent p, int n);
/// The columns of 2^{-n/2} W_n in l_p^{2^n}.
System walsh_columns(Exponent p, int n);
/// Direct sum over s = 1..blocks of the first s Rademacher functions pulled
/// back to l_p^{2^s} (coordinates +-2^{-s/p}). p must be finite.
System discretized_rademacher(Exponent p, int blocks);
/// Rows of the +-1 block matrix whose k-th row vanishes on blocks 1..k-1 and
/// carries the k-th Rademacher pattern on each later block of width 2^s.
/// Truncated after block m, so it lives in l_inf^{2^{m+1}-2}.
System absolute_matrix_example(int m);
/// Faber-Schauder system of C[0,1] sampled at the 2^level + 1 dyadic nodes
/// (an isometric representation in l_inf since span elements are piecewise
/// linear between nodes).
System schauder_c01(int level);

} // namespace bibasis

#endif // BIBASIS_SYSTEMS_HPP
