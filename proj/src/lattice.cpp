#include "bibasis/lattice.hpp"

#include <charconv>
#include <limits>

namespace bibasis {

Exponent Exponent::finite(double p)
{
    if (!std::isfinite(p) || !(p >= 1.0))
        throw std::invalid_argument("exponent must satisfy 1 <= p < inf, got " + std::to_string(p));
    return {p, false};
}

Exponent Exponent::infinity() noexcept
{
    return {std::numeric_limits<double>::infinity(), true};
}

Exponent Exponent::parse(std::string_view text)
{
    if (text == "inf" || text == "infinity" || text == "Inf" || text == "oo")
        return infinity();
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument("cannot parse exponent '" + std::string(text) + "'");
    return finite(value);
}

double Exponent::value() const
{
    if (infinite_)
        throw std::logic_error("exponent is infinite");
    return value_;
}

Exponent Exponent::conjugate() const
{
    if (infinite_)
        return finite(1.0);
    if (value_ == 1.0)
        return infinity();
    return finite(value_ / (value_ - 1.0));
}

std::string Exponent::to_string() const
{
    if (infinite_)
        return "inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value_);
    return {buf, ptr};
}

std::string_view to_string(SpaceKind kind) noexcept
{
    return kind == SpaceKind::lp_n ? "lp_n" : "Lp_dyadic";
}

SpaceKind parse_space_kind(std::string_view text)
{
    if (text == "lp_n")
        return SpaceKind::lp_n;
    if (text == "Lp_dyadic")
        return SpaceKind::Lp_dyadic;
    throw std::invalid_argument("unknown space kind '" + std::string(text) + "'");
}

Space::Space(SpaceKind kind, Exponent p, int size_param)
    : kind_(kind), p_(p), size_param_(size_param)
{
    switch (kind) {
    case SpaceKind::lp_n:
        if (size_param < 1)
            throw std::invalid_argument("lp_n dimension must be >= 1");
        weights_ = Eigen::VectorXd::Ones(size_param);
        break;
    case SpaceKind::Lp_dyadic:
        // Level 0 is the one-cell grid.
        if (size_param < 0 || size_param > max_dyadic_level)
            throw std::invalid_argument("dyadic level out of range [0, "
                                        + std::to_string(max_dyadic_level) + "]");
        weights_ = Eigen::VectorXd::Constant(Eigen::Index{1} << size_param,
                                             std::ldexp(1.0, -size_param));
        break;
    }
}

SpacePtr make_space(SpaceKind kind, Exponent p, int size_param)
{
    return std::make_shared<const Space>(kind, p, size_param);
}

LVec::LVec(SpacePtr space, Eigen::VectorXd coords) : space_(std::move(space)), coords_(std::move(coords))
{
    if (!space_)
        throw std::invalid_argument("LVec requires a space");
    if (coords_.size() != space_->dim())
        throw std::invalid_argument("LVec length " + std::to_string(coords_.size())
                                    + " does not match space dimension "
                                    + std::to_string(space_->dim()));
}

namespace {

void require_same_space(const LVec& a, const LVec& b)
{
    if (a.space_ptr() != b.space_ptr() && !(a.space() == b.space()))
        throw SpaceMismatch("operands live in different spaces");
}

} // namespace

double norm(const LVec& v)
{
    return weighted_norm(v.coords(), v.space().weights(), v.space().p());
}

LVec modulus(const LVec& v)
{
    return {v.space_ptr(), modulus(v.coords())};
}

LVec sup(const LVec& a, const LVec& b)
{
    require_same_space(a, b);
    return {a.space_ptr(), sup(a.coords(), b.coords())};
}

LVec pointwise_pow(const LVec& v, double r)
{
    const bool integral = std::floor(r) == r;
    if (!integral && (v.coords().array() < 0.0).any())
        throw std::domain_error("fractional power of a vector with negative coordinates");
    Eigen::VectorXd out = v.coords().array().pow(r).matrix();
    return {v.space_ptr(), std::move(out)};
}

} // namespace bibasis
