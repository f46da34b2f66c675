#include "bibasis/system.hpp"

#include <algorithm>

namespace bibasis {

std::string_view to_string(Family family) noexcept
{
    switch (family) {
    case Family::custom: return "custom";
    case Family::unit_vectors: return "unit-vectors";
    case Family::summing_basis: return "summing-basis";
    case Family::difference_basis: return "diff-basis";
    case Family::haar: return "haar";
    case Family::rademacher: return "rademacher";
    case Family::walsh: return "walsh";
    case Family::krengel: return "krengel";
    case Family::discretized_rademacher: return "disc-rademacher";
    case Family::absolute_matrix: return "abs-matrix";
    case Family::schauder_c01: return "schauder";
    case Family::blocked: return "blocked";
    case Family::reordered: return "reordered";
    }
    return "custom";
}

System::System(std::string name, SpacePtr space, VectorRows vectors)
    : System(std::move(name), std::move(space), std::move(vectors), Options{})
{
}

System::System(std::string name, SpacePtr space, VectorRows vectors, Options options)
    : name_(std::move(name)), space_(std::move(space)), vectors_(std::move(vectors)),
      options_(std::move(options))
{
    if (!space_)
        throw std::invalid_argument("system requires a space");
    if (vectors_.rows() < 1)
        throw std::invalid_argument("system must contain at least one vector");
    if (vectors_.cols() != space_->dim())
        throw std::invalid_argument("system vectors have length " + std::to_string(vectors_.cols())
                                    + ", space dimension is " + std::to_string(space_->dim()));
    for (Eigen::Index k = 0; k < vectors_.rows(); ++k) {
        if (!vectors_.row(k).allFinite())
            throw std::invalid_argument("system vector " + std::to_string(k + 1) + " is not finite");
        if (vectors_.row(k).isZero(0.0))
            throw std::invalid_argument("system vector " + std::to_string(k + 1) + " is zero");
    }

    auto& blocks = options_.blocks;
    if (blocks.empty())
        return;

    std::vector<BlockRange> sorted = blocks;
    std::sort(sorted.begin(), sorted.end(),
              [](const BlockRange& a, const BlockRange& b) { return a.begin < b.begin; });
    for (std::size_t b = 0; b < sorted.size(); ++b) {
        if (sorted[b].begin < 0 || sorted[b].end > dim() || sorted[b].begin >= sorted[b].end)
            throw std::invalid_argument("invalid block coordinate range");
        if (b > 0 && sorted[b].begin < sorted[b - 1].end)
            throw std::invalid_argument("block coordinate ranges overlap");
    }

    block_of_.assign(static_cast<std::size_t>(size()), -1);
    for (int k = 0; k < size(); ++k) {
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& r = blocks[b];
            const auto row = vectors_.row(k);
            const bool inside = row.segment(r.begin, r.end - r.begin).cwiseAbs().sum() > 0.0;
            const bool outside = row.head(r.begin).cwiseAbs().sum() > 0.0
                                 || row.tail(dim() - r.end).cwiseAbs().sum() > 0.0;
            if (inside && !outside) {
                block_of_[static_cast<std::size_t>(k)] = static_cast<int>(b);
                break;
            }
        }
        if (block_of_[static_cast<std::size_t>(k)] < 0)
            throw std::invalid_argument("system vector " + std::to_string(k + 1)
                                        + " is not supported in exactly one block");
    }
}

LVec System::vector(int k) const
{
    return {space_, vectors_.row(k).transpose()};
}

double System::vector_norm(int k) const
{
    return weighted_norm(vectors_.row(k).transpose(), space_->weights(), space_->p());
}

System System::reordered(std::span<const int> order) const
{
    if (order.empty())
        throw std::invalid_argument("reordering must select at least one vector");
    std::vector<char> seen(static_cast<std::size_t>(size()), 0);
    VectorRows rows(static_cast<Eigen::Index>(order.size()), dim());
    std::vector<BlockRange> blocks;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int k = order[i];
        if (k < 0 || k >= size())
            throw std::invalid_argument("reordering index out of range");
        if (seen[static_cast<std::size_t>(k)]++)
            throw std::invalid_argument("reordering indices must be distinct");
        rows.row(static_cast<Eigen::Index>(i)) = vectors_.row(k);
    }
    Options opts;
    opts.family = Family::reordered;
    opts.params = options_.params;
    opts.blocks = options_.blocks;
    return {name_ + "[reordered]", space_, std::move(rows), std::move(opts)};
}

System System::prefix(int count) const
{
    if (count < 1 || count > size())
        throw std::invalid_argument("prefix length out of range");
    Options opts = options_;
    opts.params.m = count;
    return {name_, space_, vectors_.topRows(count), std::move(opts)};
}

namespace {

void require_length(const System& system, const Eigen::VectorXd& alpha)
{
    if (alpha.size() != system.size())
        throw std::invalid_argument("coefficient vector has length " + std::to_string(alpha.size())
                                    + ", system has " + std::to_string(system.size()) + " vectors");
}

} // namespace

LVec partial_sum_envelope(const System& system, const Eigen::VectorXd& alpha)
{
    require_length(system, alpha);
    return {system.space_ptr(), partial_sum_envelope(system.vectors(), alpha)};
}

LVec maximal_function(const System& system, const Eigen::VectorXd& alpha)
{
    return partial_sum_envelope(system, alpha);
}

LVec square_function(const System& system, const Eigen::VectorXd& alpha)
{
    require_length(system, alpha);
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(system.dim());
    for (int k = 0; k < system.size(); ++k)
        acc += (alpha[k] * system.vectors().row(k).transpose()).cwiseAbs2();
    return {system.space_ptr(), acc.cwiseSqrt()};
}

LVec combination(const System& system, const Eigen::VectorXd& alpha)
{
    require_length(system, alpha);
    // Same accumulation order as the partial sums inside the envelope.
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(system.dim());
    for (int k = 0; k < system.size(); ++k)
        if (alpha[k] != 0.0)
            acc += alpha[k] * system.vectors().row(k).transpose();
    return {system.space_ptr(), std::move(acc)};
}

} // namespace bibasis
