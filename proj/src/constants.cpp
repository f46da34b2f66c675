#include "bibasis/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace bibasis {

std::string_view to_string(ConstantKind kind) noexcept
{
    switch (kind) {
    case ConstantKind::basis: return "K_basis";
    case ConstantKind::bibasis: return "M_bibasis";
    case ConstantKind::unc_bibasis: return "L_unc_bibasis";
    case ConstantKind::unconditional: return "Ku_unconditional";
    case ConstantKind::absolute: return "A_absolute";
    }
    return "M_bibasis";
}

ConstantKind parse_constant_kind(std::string_view text)
{
    if (text == "K_basis" || text == "basis" || text == "K")
        return ConstantKind::basis;
    if (text == "M_bibasis" || text == "bibasis" || text == "M")
        return ConstantKind::bibasis;
    if (text == "L_unc_bibasis" || text == "unc-bibasis" || text == "unc_bibasis" || text == "L")
        return ConstantKind::unc_bibasis;
    if (text == "Ku_unconditional" || text == "unconditional" || text == "Ku")
        return ConstantKind::unconditional;
    if (text == "A_absolute" || text == "absolute" || text == "A")
        return ConstantKind::absolute;
    throw std::invalid_argument("unknown constant kind '" + std::string(text) + "'");
}

std::string_view to_string(UpperProvenance provenance) noexcept
{
    switch (provenance) {
    case UpperProvenance::none: return "none";
    case UpperProvenance::doob: return "doob";
    case UpperProvenance::am_equality: return "am_equality";
    }
    return "none";
}

namespace {

bool uses_signs(ConstantKind kind)
{
    return kind == ConstantKind::unc_bibasis || kind == ConstantKind::unconditional;
}

} // namespace

RatioEvaluator::RatioEvaluator(const System& system, ConstantKind kind)
    : system_(&system), kind_(kind), row_norms_(system.size()), partial_(system.dim()),
      envelope_(system.dim()), signed_alpha_(system.size()),
      signs_(static_cast<std::size_t>(system.size()), 1),
      last_signs_(static_cast<std::size_t>(system.size()), 1)
{
    for (int k = 0; k < system.size(); ++k)
        row_norms_[k] = system.vector_norm(k);
}

double RatioEvaluator::space_norm(const Eigen::VectorXd& v) const
{
    return weighted_norm(v, system_->space().weights(), system_->space().p());
}

double RatioEvaluator::denominator(const Eigen::VectorXd& alpha)
{
    if (alpha.size() != system_->size())
        throw std::invalid_argument("coefficient vector has length " + std::to_string(alpha.size())
                                    + ", system has " + std::to_string(system_->size())
                                    + " vectors");
    if (alpha.isZero(0.0))
        throw std::invalid_argument("coefficients are all zero");
    partial_.setZero();
    for (int k = 0; k < system_->size(); ++k)
        if (alpha[k] != 0.0)
            partial_ += alpha[k] * system_->vectors().row(k).transpose();
    const double den = space_norm(partial_);
    const double scale = alpha.cwiseAbs().dot(row_norms_);
    if (!(den > 1e-12 * scale))
        throw DegenerateSystemError("combination vanishes for nonzero coefficients; system '"
                                    + system_->name() + "' is linearly dependent");
    return den;
}

double RatioEvaluator::numerator(const Eigen::VectorXd& alpha)
{
    const auto& rows = system_->vectors();
    switch (kind_) {
    case ConstantKind::basis: {
        partial_.setZero();
        double best = 0.0;
        for (int k = 0; k < system_->size(); ++k) {
            if (alpha[k] == 0.0)
                continue;
            partial_ += alpha[k] * rows.row(k).transpose();
            best = std::max(best, space_norm(partial_));
        }
        return best;
    }
    case ConstantKind::bibasis:
        envelope_ = partial_sum_envelope(rows, alpha);
        return space_norm(envelope_);
    case ConstantKind::absolute:
        envelope_.setZero();
        for (int k = 0; k < system_->size(); ++k)
            if (alpha[k] != 0.0)
                envelope_ += (alpha[k] * rows.row(k).transpose()).cwiseAbs();
        return space_norm(envelope_);
    case ConstantKind::unc_bibasis:
    case ConstantKind::unconditional: {
        if (system_->size() > max_sign_sup_size)
            throw std::invalid_argument("sign supremum limited to m <= "
                                        + std::to_string(max_sign_sup_size));
        // Only the signs of nonzero coefficients matter, and eps and -eps
        // give the same value, so the first nonzero coefficient keeps +1.
        std::vector<int> support;
        for (int k = 0; k < system_->size(); ++k)
            if (alpha[k] != 0.0)
                support.push_back(k);
        std::fill(signs_.begin(), signs_.end(), 1);
        const std::size_t free = support.size() - 1;
        double best = -1.0;
        for (unsigned long mask = 0; mask < (1UL << free); ++mask) {
            for (std::size_t j = 0; j < free; ++j)
                signs_[static_cast<std::size_t>(support[j + 1])] = ((mask >> j) & 1UL) ? -1 : 1;
            const double v = signed_numerator(alpha, signs_);
            if (v > best) {
                best = v;
                last_signs_ = signs_;
            }
        }
        return best;
    }
    }
    return 0.0;
}

double RatioEvaluator::signed_numerator(const Eigen::VectorXd& alpha, std::span<const int> signs)
{
    for (int k = 0; k < system_->size(); ++k)
        signed_alpha_[k] = signs[static_cast<std::size_t>(k)] * alpha[k];
    const auto& rows = system_->vectors();
    if (kind_ == ConstantKind::unc_bibasis) {
        envelope_ = partial_sum_envelope(rows, signed_alpha_);
        return space_norm(envelope_);
    }
    envelope_.setZero();
    for (int k = 0; k < system_->size(); ++k)
        if (signed_alpha_[k] != 0.0)
            envelope_ += signed_alpha_[k] * rows.row(k).transpose();
    return space_norm(envelope_);
}

double RatioEvaluator::operator()(const Eigen::VectorXd& alpha)
{
    const double den = denominator(alpha);
    return numerator(alpha) / den;
}

double RatioEvaluator::operator()(const Eigen::VectorXd& alpha, std::span<const int> signs)
{
    if (!uses_signs(kind_))
        return (*this)(alpha);
    if (signs.size() != static_cast<std::size_t>(system_->size()))
        throw std::invalid_argument("sign pattern length does not match the system");
    for (int s : signs)
        if (s != 1 && s != -1)
            throw std::invalid_argument("sign pattern entries must be +-1");
    const double den = denominator(alpha);
    last_signs_.assign(signs.begin(), signs.end());
    return signed_numerator(alpha, signs) / den;
}

double ratio(const System& system, const Eigen::VectorXd& alpha, ConstantKind kind,
             std::optional<std::vector<int>> signs)
{
    RatioEvaluator eval(system, kind);
    if (signs)
        return eval(alpha, *signs);
    return eval(alpha);
}

ConstantEstimate estimate_constant(const System& system, ConstantKind kind, Strategy strategy,
                                   long budget, std::uint64_t seed, const EstimateOptions& options)
{
    RatioEvaluator eval(system, kind);
    const Objective objective = [&eval](const Eigen::VectorXd& alpha) { return eval(alpha); };
    SearchOptions search;
    search.budget = budget;
    search.seed = seed;
    search.warm_starts = options.warm_starts;
    const SearchResult found = maximize(objective, system.size(), strategy, search);

    ConstantEstimate est;
    est.kind = kind;
    est.lower = found.best;
    est.witness = found.witness;
    est.strategy = strategy;
    est.budget = budget;
    est.evaluations = found.evaluations;
    est.seed = seed;
    est.complete = found.complete;
    est.system = system.name();
    est.permutation.resize(static_cast<std::size_t>(system.size()));
    std::iota(est.permutation.begin(), est.permutation.end(), 0);
    if (uses_signs(kind) && found.witness.size() == system.size()) {
        eval(found.witness);
        est.signs = eval.last_signs();
    }

    if (kind == ConstantKind::bibasis) {
        const Exponent& p = system.space().p();
        const auto basis_upper = system.certified_basis_constant();
        if (p.is_infinite() && basis_upper) {
            // In an AM-space the norm of the envelope is the largest partial
            // sum norm, so the M-ratio coincides with the K-ratio.
            est.upper = *basis_upper;
            est.upper_provenance = UpperProvenance::am_equality;
        } else if (system.family() == Family::haar && !p.is_infinite() && p.value() > 1.0) {
            est.upper = p.conjugate().value();
            est.upper_provenance = UpperProvenance::doob;
        }
    }
    return est;
}

PermutationMode PermutationMode::explicit_order(std::vector<int> order)
{
    return {Type::explicit_order, std::move(order), 1};
}

PermutationMode PermutationMode::random(int count)
{
    return {Type::random, {}, count};
}

PermutationMode PermutationMode::exhaustive()
{
    return {Type::exhaustive, {}, 0};
}

PermutationMode PermutationMode::subsets(int count)
{
    return {Type::subsets, {}, count};
}

namespace {

std::vector<std::vector<int>> select_orders(int m, const PermutationMode& mode, std::uint64_t seed)
{
    std::vector<int> identity(static_cast<std::size_t>(m));
    std::iota(identity.begin(), identity.end(), 0);
    std::vector<std::vector<int>> orders;
    // Independent of the search seed stream, but reproducible from it.
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

    switch (mode.type) {
    case PermutationMode::Type::explicit_order: {
        std::vector<int> sorted = mode.order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != identity)
            throw std::invalid_argument("explicit order must be a permutation of 0..m-1");
        orders.push_back(mode.order);
        break;
    }
    case PermutationMode::Type::exhaustive: {
        if (m > max_exhaustive_permutation_size)
            throw std::invalid_argument("exhaustive permutations limited to m <= "
                                        + std::to_string(max_exhaustive_permutation_size));
        std::vector<int> order = identity;
        do {
            orders.push_back(order);
        } while (std::next_permutation(order.begin(), order.end()));
        break;
    }
    case PermutationMode::Type::random: {
        if (mode.count < 0)
            throw std::invalid_argument("permutation count must be >= 0");
        orders.push_back(identity);
        for (int i = 0; i < mode.count; ++i) {
            std::vector<int> order = identity;
            std::shuffle(order.begin(), order.end(), rng);
            orders.push_back(std::move(order));
        }
        break;
    }
    case PermutationMode::Type::subsets: {
        if (mode.count < 0)
            throw std::invalid_argument("subset count must be >= 0");
        orders.push_back(identity);
        std::uniform_int_distribution<int> size(1, m);
        for (int i = 0; i < mode.count; ++i) {
            std::vector<int> order = identity;
            std::shuffle(order.begin(), order.end(), rng);
            order.resize(static_cast<std::size_t>(size(rng)));
            orders.push_back(std::move(order));
        }
        break;
    }
    }
    return orders;
}

} // namespace

ConstantEstimate permuted_estimate(const System& system, ConstantKind kind,
                                   const PermutationMode& mode, Strategy strategy, long budget,
                                   std::uint64_t seed)
{
    const auto orders = select_orders(system.size(), mode, seed);
    std::vector<int> identity(static_cast<std::size_t>(system.size()));
    std::iota(identity.begin(), identity.end(), 0);

    ConstantEstimate merged;
    long evaluations = 0;
    bool all_upper = true;
    double upper = 0.0;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        const auto& order = orders[i];
        ConstantEstimate est = order == identity
                                   ? estimate_constant(system, kind, strategy, budget, seed)
                                   : estimate_constant(system.reordered(order), kind, strategy,
                                                       budget, seed);
        evaluations += est.evaluations;
        if (est.upper)
            upper = std::max(upper, *est.upper);
        else
            all_upper = false;
        if (i == 0 || est.lower > merged.lower) {
            merged = std::move(est);
            merged.permutation = order;
        }
    }
    merged.evaluations = evaluations;
    merged.system = system.name();
    merged.complete = merged.complete && strategy == Strategy::exhaustive_signs;
    if (all_upper) {
        merged.upper = upper;
    } else {
        merged.upper.reset();
        merged.upper_provenance = UpperProvenance::none;
    }
    return merged;
}

namespace {

void validate_blocking(int m, std::span<const int> block_ends, const Eigen::VectorXd& inner)
{
    if (block_ends.empty())
        throw std::invalid_argument("blocking needs at least one block");
    int previous = 0;
    for (int end : block_ends) {
        if (end <= previous)
            throw std::invalid_argument("empty block: block ends must be strictly increasing");
        previous = end;
    }
    if (previous > m)
        throw std::invalid_argument("block end exceeds the system length");
    if (inner.size() != previous)
        throw std::invalid_argument("inner coefficients must cover every blocked vector");
}

} // namespace

System block_system(const System& system, std::span<const int> block_ends,
                    const Eigen::VectorXd& inner)
{
    validate_blocking(system.size(), block_ends, inner);
    VectorRows rows = VectorRows::Zero(static_cast<Eigen::Index>(block_ends.size()), system.dim());
    int begin = 0;
    for (std::size_t j = 0; j < block_ends.size(); ++j) {
        const int end = block_ends[j];
        if (inner.segment(begin, end - begin).isZero(0.0))
            throw std::invalid_argument("block " + std::to_string(j + 1) + " has zero coefficients");
        for (int k = begin; k < end; ++k)
            if (inner[k] != 0.0)
                rows.row(static_cast<Eigen::Index>(j)) += inner[k] * system.vectors().row(k);
        if (rows.row(static_cast<Eigen::Index>(j)).isZero(0.0))
            throw std::invalid_argument("block " + std::to_string(j + 1)
                                        + " combination is the zero vector");
        begin = end;
    }
    System::Options opts;
    opts.family = Family::blocked;
    opts.params.m = static_cast<int>(block_ends.size());
    return {system.name() + "[blocked]", system.space_ptr(), std::move(rows), std::move(opts)};
}

Eigen::VectorXd expand_block_coefficients(int m, std::span<const int> block_ends,
                                          const Eigen::VectorXd& inner, const Eigen::VectorXd& beta)
{
    validate_blocking(m, block_ends, inner);
    if (beta.size() != static_cast<Eigen::Index>(block_ends.size()))
        throw std::invalid_argument("one block coefficient per block required");
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    int begin = 0;
    for (std::size_t j = 0; j < block_ends.size(); ++j) {
        for (int k = begin; k < block_ends[j]; ++k)
            alpha[k] = beta[static_cast<Eigen::Index>(j)] * inner[k];
        begin = block_ends[j];
    }
    return alpha;
}

DistortionEstimate distortion_vs_lp(const System& system, Strategy strategy, long budget,
                                    std::uint64_t seed)
{
    const Exponent& p = system.space().p();
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(system.size());
    const auto quotient = [&](const Eigen::VectorXd& alpha) {
        const double coeff = weighted_norm(alpha, ones, p);
        if (coeff == 0.0)
            throw std::invalid_argument("coefficients are all zero");
        return norm(combination(system, alpha)) / coeff;
    };
    SearchOptions search;
    search.budget = std::max<long>(budget / 2, 1);
    search.seed = seed;
    const SearchResult high = maximize(quotient, system.size(), strategy, search);
    const SearchResult low = maximize(
        [&](const Eigen::VectorXd& alpha) { return 1.0 / quotient(alpha); }, system.size(), strategy,
        search);
    return {1.0 / low.best, high.best, low.witness, high.witness,
            high.evaluations + low.evaluations};
}

double perturbation_theta(const System& x, const System& y, double basis_constant_upper)
{
    if (x.size() != y.size())
        throw std::invalid_argument("perturbation requires systems of equal length");
    if (!(x.space() == y.space()))
        throw SpaceMismatch("perturbation requires systems in the same space");
    if (!(basis_constant_upper >= 1.0))
        throw std::invalid_argument("basis constant bound must be >= 1");
    double sum = 0.0;
    for (int k = 0; k < x.size(); ++k) {
        const Eigen::VectorXd diff = (x.vectors().row(k) - y.vectors().row(k)).transpose();
        sum += weighted_norm(diff, x.space().weights(), x.space().p()) / x.vector_norm(k);
    }
    return 2.0 * basis_constant_upper * sum;
}

} // namespace bibasis
