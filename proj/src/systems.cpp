#include "bibasis/systems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bibasis {

namespace {

constexpr int max_sign_matrix_order = 14;

void require(bool condition, const char* message)
{
    if (!condition)
        throw std::invalid_argument(message);
}

int dyadic_size(int level)
{
    return 1 << level;
}

} // namespace

SignMatrix::SignMatrix(int order, IntMatrix entries) : order_(order), entries_(std::move(entries))
{
    require(order >= 0 && order <= max_sign_matrix_order, "sign matrix order out of range");
    const Eigen::Index n = Eigen::Index{1} << order;
    require(entries_.rows() == n && entries_.cols() == n, "sign matrix must be 2^n x 2^n");
    require((entries_.array().abs() == 1).all(), "sign matrix entries must be +-1");
}

int SignMatrix::sign_changes(int c) const
{
    int changes = 0;
    for (Eigen::Index r = 1; r < entries_.rows(); ++r)
        changes += entries_(r, c) != entries_(r - 1, c);
    return changes;
}

SignMatrix hadamard(int n)
{
    require(n >= 0 && n <= max_sign_matrix_order, "hadamard order out of range");
    IntMatrix h = IntMatrix::Ones(1, 1);
    for (int level = 0; level < n; ++level) {
        const Eigen::Index s = h.rows();
        IntMatrix next(2 * s, 2 * s);
        next.topLeftCorner(s, s) = h;
        next.topRightCorner(s, s) = h;
        next.bottomLeftCorner(s, s) = h;
        next.bottomRightCorner(s, s) = -h;
        h = std::move(next);
    }
    return {n, std::move(h)};
}

WalshMatrix walsh_matrix(int n)
{
    const SignMatrix h = hadamard(n);
    const int size = h.size();
    std::vector<int> changes(static_cast<std::size_t>(size));
    for (int c = 0; c < size; ++c)
        changes[static_cast<std::size_t>(c)] = h.sign_changes(c);

    std::vector<int> order(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), 0);
    // Counts are the distinct values 0..2^n-1, so the order is unique.
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return changes[static_cast<std::size_t>(a)] < changes[static_cast<std::size_t>(b)];
    });
    for (int j = 0; j < size; ++j)
        if (changes[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] != j)
            throw std::logic_error("Hadamard sign-change counts are not 0..2^n-1");

    IntMatrix w(size, size);
    for (int j = 0; j < size; ++j)
        w.col(j) = h.entries().col(order[static_cast<std::size_t>(j)]);
    return {SignMatrix(n, std::move(w)), std::move(order)};
}

IntMatrix WalshMatrix::permutation_matrix() const
{
    const auto size = static_cast<Eigen::Index>(hadamard_column.size());
    IntMatrix p = IntMatrix::Zero(size, size);
    for (Eigen::Index j = 0; j < size; ++j)
        p(j, hadamard_column[static_cast<std::size_t>(j)]) = 1;
    return p;
}

System unit_vectors(const SpacePtr& space, int m)
{
    require(space != nullptr, "unit_vectors requires a space");
    require(m >= 1, "unit_vectors requires m >= 1");
    require(m <= space->dim(), "unit_vectors: m exceeds the space dimension");
    VectorRows rows = VectorRows::Identity(m, space->dim());
    System::Options opts;
    opts.family = Family::unit_vectors;
    opts.params.m = m;
    opts.params.n = space->dim();
    opts.certified_basis_constant = 1.0;
    return {"unit-vectors", space, std::move(rows), std::move(opts)};
}

System summing_basis(int n)
{
    require(n >= 1, "summing_basis requires n >= 1");
    VectorRows rows = VectorRows::Zero(n, n);
    for (int k = 0; k < n; ++k)
        rows.row(k).head(k + 1).setOnes();
    System::Options opts;
    opts.family = Family::summing_basis;
    opts.params.n = n;
    opts.params.m = n;
    return {"summing-basis", make_space(SpaceKind::lp_n, Exponent::infinity(), n), std::move(rows),
            std::move(opts)};
}

System difference_basis(int n)
{
    require(n >= 2, "difference_basis requires n >= 2");
    VectorRows rows = VectorRows::Zero(n, n);
    rows(0, 0) = 1.0;
    for (int k = 1; k < n; ++k) {
        rows(k, k - 1) = -1.0;
        rows(k, k) = 1.0;
    }
    System::Options opts;
    opts.family = Family::difference_basis;
    opts.params.n = n;
    opts.params.m = n;
    return {"diff-basis", make_space(SpaceKind::lp_n, Exponent::finite(1.0), n), std::move(rows),
            std::move(opts)};
}

System haar(Exponent p, int level, HaarNormalization normalization)
{
    require(level >= 0 && level <= Space::max_dyadic_level, "haar level out of range");
    auto space = make_space(SpaceKind::Lp_dyadic, p, level);
    const int cells = dyadic_size(level);
    VectorRows rows = VectorRows::Zero(cells, cells);
    rows.row(0).setOnes();
    int k = 1;
    for (int j = 0; j < level; ++j) {
        const int width = cells >> j;
        for (int i = 0; i < (1 << j); ++i, ++k) {
            rows.row(k).segment(i * width, width / 2).setConstant(1.0);
            rows.row(k).segment(i * width + width / 2, width / 2).setConstant(-1.0);
        }
    }
    if (normalization == HaarNormalization::lp && !p.is_infinite()) {
        for (int r = 0; r < cells; ++r)
            rows.row(r) /= weighted_norm(rows.row(r).transpose(), space->weights(), p);
    }
    System::Options opts;
    opts.family = Family::haar;
    opts.params.level = level;
    opts.params.m = cells;
    // Partial-sum projections are conditional expectations.
    opts.certified_basis_constant = 1.0;
    return {"haar", std::move(space), std::move(rows), std::move(opts)};
}

System rademacher(Exponent p, int m)
{
    require(m >= 1 && m <= Space::max_dyadic_level, "rademacher m out of range");
    const int cells = dyadic_size(m);
    VectorRows rows(m, cells);
    for (int k = 1; k <= m; ++k)
        for (int i = 0; i < cells; ++i)
            rows(k - 1, i) = ((i >> (m - k)) & 1) ? -1.0 : 1.0;
    System::Options opts;
    opts.family = Family::rademacher;
    opts.params.m = m;
    opts.params.level = m;
    opts.certified_basis_constant = 1.0;
    return {"rademacher", make_space(SpaceKind::Lp_dyadic, p, m), std::move(rows), std::move(opts)};
}

namespace {

VectorRows columns_as_rows(const IntMatrix& matrix, double scale)
{
    return (matrix.transpose().cast<double>() * scale).eval();
}

} // namespace

System walsh(Exponent p, int n)
{
    require(n >= 0 && n <= max_sign_matrix_order, "walsh order out of range");
    const WalshMatrix w = walsh_matrix(n);
    System::Options opts;
    opts.family = Family::walsh;
    opts.params.n = n;
    opts.params.level = n;
    opts.params.m = w.matrix.size();
    return {"walsh", make_space(SpaceKind::Lp_dyadic, p, n), columns_as_rows(w.matrix.entries(), 1.0),
            std::move(opts)};
}

System krengel_columns(Exponent p, int n)
{
    const SignMatrix h = hadamard(n);
    System::Options opts;
    opts.family = Family::krengel;
    opts.params.n = n;
    opts.params.m = h.size();
    return {"krengel", make_space(SpaceKind::lp_n, p, h.size()),
            columns_as_rows(h.entries(), 1.0 / std::sqrt(double(h.size()))),
            std::move(opts)};
}

System walsh_columns(Exponent p, int n)
{
    const WalshMatrix w = walsh_matrix(n);
    System::Options opts;
    opts.family = Family::walsh;
    opts.params.n = n;
    opts.params.m = w.matrix.size();
    return {"walsh-columns", make_space(SpaceKind::lp_n, p, w.matrix.size()),
            columns_as_rows(w.matrix.entries(), 1.0 / std::sqrt(double(w.matrix.size()))),
            std::move(opts)};
}

System discretized_rademacher(Exponent p, int blocks)
{
    require(blocks >= 1 && blocks <= 20, "discretized_rademacher block count out of range");
    if (p.is_infinite())
        throw std::invalid_argument("discretized_rademacher requires p < inf");
    const int dim = (1 << (blocks + 1)) - 2;
    const int m = blocks * (blocks + 1) / 2;
    VectorRows rows = VectorRows::Zero(m, dim);
    std::vector<BlockRange> ranges;
    int row = 0;
    int offset = 0;
    for (int s = 1; s <= blocks; ++s) {
        const int width = dyadic_size(s);
        const double value = std::pow(2.0, -double(s) / p.value());
        for (int k = 1; k <= s; ++k, ++row)
            for (int i = 0; i < width; ++i)
                rows(row, offset + i) = ((i >> (s - k)) & 1) ? -value : value;
        ranges.push_back({offset, offset + width});
        offset += width;
    }
    System::Options opts;
    opts.family = Family::discretized_rademacher;
    opts.params.level = blocks;
    opts.params.m = m;
    opts.blocks = std::move(ranges);
    return {"disc-rademacher", make_space(SpaceKind::lp_n, p, dim), std::move(rows), std::move(opts)};
}

System absolute_matrix_example(int m)
{
    require(m >= 1 && m <= 20, "absolute_matrix_example m out of range");
    const int dim = (1 << (m + 1)) - 2;
    VectorRows rows = VectorRows::Zero(m, dim);
    int offset = 0;
    for (int s = 1; s <= m; ++s) {
        const int width = dyadic_size(s);
        for (int k = 1; k <= s; ++k)
            for (int i = 0; i < width; ++i)
                rows(k - 1, offset + i) = ((i >> (s - k)) & 1) ? -1.0 : 1.0;
        offset += width;
    }
    System::Options opts;
    opts.family = Family::absolute_matrix;
    opts.params.m = m;
    return {"abs-matrix", make_space(SpaceKind::lp_n, Exponent::infinity(), dim), std::move(rows),
            std::move(opts)};
}

System schauder_c01(int level)
{
    require(level >= 1 && level <= 20, "schauder_c01 level out of range");
    const int intervals = dyadic_size(level);
    const int nodes = intervals + 1;
    const int m = intervals + 1;
    VectorRows rows = VectorRows::Zero(m, nodes);
    rows.row(0).setOnes();
    for (int i = 0; i < nodes; ++i)
        rows(1, i) = double(i) / intervals;
    int k = 2;
    for (int j = 1; j <= level; ++j) {
        // Tents of half-width 2^-j centred at (2i-1)/2^j, i = 1..2^{j-1}.
        const int half = intervals >> j;
        for (int i = 1; i <= (1 << (j - 1)); ++i, ++k) {
            const int centre = (2 * i - 1) * half;
            for (int t = -half; t <= half; ++t)
                rows(k, centre + t) = 1.0 - double(std::abs(t)) / half;
        }
    }
    System::Options opts;
    opts.family = Family::schauder_c01;
    opts.params.level = level;
    opts.params.m = m;
    opts.certified_basis_constant = 1.0;
    return {"schauder", make_space(SpaceKind::lp_n, Exponent::infinity(), nodes), std::move(rows),
            std::move(opts)};
}

} // namespace bibasis
