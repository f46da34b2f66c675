#include "bibasis/lattice.hpp"
#include "bibasis/system.hpp"
#include "bibasis/systems.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bibasis;

namespace {

LVec vec(const SpacePtr& s, std::initializer_list<double> values)
{
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values)
        v[i++] = x;
    return {s, v};
}

} // namespace

TEST(Exponent, ParsesFiniteAndInfinite)
{
    EXPECT_TRUE(Exponent::parse("inf").is_infinite());
    EXPECT_DOUBLE_EQ(Exponent::parse("2.5").value(), 2.5);
    EXPECT_THROW(Exponent::finite(0.5), std::invalid_argument);
    EXPECT_THROW(Exponent::parse("abc"), std::invalid_argument);
    EXPECT_DOUBLE_EQ(Exponent::finite(2.0).conjugate().value(), 2.0);
    EXPECT_TRUE(Exponent::finite(1.0).conjugate().is_infinite());
    EXPECT_EQ(Exponent::infinity().to_string(), "inf");
}

TEST(Space, SequenceSpaceHasUnitWeights)
{
    const auto s = make_space(SpaceKind::lp_n, Exponent::finite(2), 3);
    EXPECT_EQ(s->dim(), 3);
    EXPECT_TRUE(s->weights().isOnes());
}

TEST(Space, DyadicSpaceHasCellWeights)
{
    const auto s = make_space(SpaceKind::Lp_dyadic, Exponent::finite(1), 2);
    EXPECT_EQ(s->dim(), 4);
    EXPECT_TRUE((s->weights().array() == 0.25).all());
}

TEST(Space, DyadicLevelZeroIsOneCell)
{
    const auto s = make_space(SpaceKind::Lp_dyadic, Exponent::infinity(), 0);
    EXPECT_EQ(s->dim(), 1);
    EXPECT_EQ(s->weights()[0], 1.0);
}

TEST(Space, RejectsBadSizes)
{
    EXPECT_THROW(make_space(SpaceKind::lp_n, Exponent::finite(2), 0), std::invalid_argument);
    EXPECT_THROW(make_space(SpaceKind::Lp_dyadic, Exponent::finite(2), -1), std::invalid_argument);
}

TEST(Norm, Examples)
{
    const auto l2 = make_space(SpaceKind::lp_n, Exponent::finite(2), 4);
    EXPECT_DOUBLE_EQ(norm(vec(l2, {1, 0, 0, 0})), 1.0);
    const auto l1 = make_space(SpaceKind::Lp_dyadic, Exponent::finite(1), 3);
    EXPECT_DOUBLE_EQ(norm(LVec(l1, Eigen::VectorXd::Ones(8))), 1.0);
    const auto linf = make_space(SpaceKind::lp_n, Exponent::infinity(), 2);
    EXPECT_DOUBLE_EQ(norm(vec(linf, {3, -4})), 4.0);
}

TEST(Norm, AxiomsOnRandomVectors)
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (const Exponent p : {Exponent::finite(1), Exponent::finite(1.5), Exponent::finite(2),
                             Exponent::finite(3), Exponent::infinity()}) {
        const auto s = make_space(SpaceKind::Lp_dyadic, p, 3);
        for (int t = 0; t < 200; ++t) {
            Eigen::VectorXd u(8), v(8);
            for (int i = 0; i < 8; ++i) {
                u[i] = g(rng);
                v[i] = g(rng);
            }
            const double c = g(rng);
            EXPECT_NEAR(norm(LVec(s, c * u)), std::abs(c) * norm(LVec(s, u)),
                        1e-12 * (1 + norm(LVec(s, u))));
            EXPECT_LE(norm(LVec(s, u + v)), norm(LVec(s, u)) + norm(LVec(s, v)) + 1e-12);
            // 0 <= |u| min |v| <= |v|
            const Eigen::VectorXd lo = u.cwiseAbs().cwiseMin(v.cwiseAbs());
            EXPECT_LE(norm(LVec(s, lo)), norm(LVec(s, v.cwiseAbs())) + 1e-12);
            // Agreement with the plain-loop reference.
            const std::vector<double> uv(u.data(), u.data() + 8);
            const std::vector<double> w(8, 0.125);
            EXPECT_NEAR(norm(LVec(s, u)),
                        oracle::weighted_norm(uv, w, p.is_infinite() ? INFINITY : p.value()),
                        1e-12);
        }
    }
}

TEST(Norm, ZeroOnlyForZero)
{
    const auto s = make_space(SpaceKind::lp_n, Exponent::finite(3), 3);
    EXPECT_EQ(norm(LVec(s, Eigen::VectorXd::Zero(3))), 0.0);
    EXPECT_GT(norm(vec(s, {0, 1e-200, 0})), 0.0);
}

TEST(LatticeOps, Examples)
{
    const auto s = make_space(SpaceKind::lp_n, Exponent::finite(2), 2);
    EXPECT_EQ(modulus(vec(s, {1, -2})).coords(), Eigen::Vector2d(1, 2));
    EXPECT_EQ(sup(vec(s, {1, 0}), vec(s, {0, 1})).coords(), Eigen::Vector2d(1, 1));
    EXPECT_EQ(pointwise_pow(vec(s, {4, 9}), 0.5).coords(), Eigen::Vector2d(2, 3));
}

TEST(LatticeOps, Errors)
{
    const auto a = make_space(SpaceKind::lp_n, Exponent::finite(2), 2);
    const auto b = make_space(SpaceKind::lp_n, Exponent::finite(1), 2);
    EXPECT_THROW(sup(vec(a, {1, 0}), vec(b, {0, 1})), SpaceMismatch);
    EXPECT_THROW(pointwise_pow(vec(a, {-1, 4}), 0.5), std::domain_error);
    EXPECT_NO_THROW(pointwise_pow(vec(a, {-1, 4}), 2.0));
    EXPECT_THROW(LVec(a, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Envelope, SingleVector)
{
    const System h = haar(Exponent::finite(2), 1).prefix(1);
    const LVec e = partial_sum_envelope(h, Eigen::VectorXd::Constant(1, -3.0));
    EXPECT_EQ(e.coords(), Eigen::Vector2d(3, 3));
}

TEST(Envelope, DifferenceBasisPartialSumsAreUnitVectors)
{
    const System x = difference_basis(5);
    const LVec e = partial_sum_envelope(x, Eigen::VectorXd::Ones(5));
    EXPECT_TRUE(e.coords().isOnes());
}

TEST(Envelope, TwoCellHaar)
{
    const System h = haar(Exponent::finite(2), 1);
    const Eigen::Vector2d alpha(1, 1);
    EXPECT_EQ(partial_sum_envelope(h, alpha).coords(), Eigen::Vector2d(2, 1));
    EXPECT_EQ(maximal_function(h, alpha).coords(), Eigen::Vector2d(2, 1));
}

TEST(Envelope, LengthMismatch)
{
    const System h = haar(Exponent::finite(2), 1);
    EXPECT_THROW(partial_sum_envelope(h, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST(SquareFunction, Examples)
{
    const System h = haar(Exponent::finite(2), 1).prefix(1);
    const Eigen::VectorXd a = Eigen::VectorXd::Constant(1, -2.0);
    EXPECT_EQ(square_function(h, a).coords(), maximal_function(h, a).coords());
    const System r = rademacher(Exponent::finite(2), 2);
    const LVec s = square_function(r, Eigen::Vector2d(1, 1));
    EXPECT_TRUE(s.coords().isApprox(Eigen::VectorXd::Constant(4, std::sqrt(2.0)), 1e-15));
}

TEST(Envelope, DominationAndTriangleBound)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    const System x = haar(Exponent::finite(1.5), 3);
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd alpha(x.size());
        for (int k = 0; k < x.size(); ++k)
            alpha[k] = g(rng);
        const Eigen::VectorXd env = partial_sum_envelope(x, alpha).coords();
        Eigen::VectorXd partial = Eigen::VectorXd::Zero(x.dim());
        Eigen::VectorXd moduli = Eigen::VectorXd::Zero(x.dim());
        for (int k = 0; k < x.size(); ++k) {
            partial += alpha[k] * x.vectors().row(k).transpose();
            moduli += (alpha[k] * x.vectors().row(k).transpose()).cwiseAbs();
            EXPECT_TRUE((env.array() >= partial.cwiseAbs().array() - 1e-12).all());
        }
        EXPECT_TRUE((env.array() <= moduli.array() + 1e-12).all());
    }
}

TEST(Envelope, SupNormOfEnvelopeIsLargestPartialSum)
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    const System x = summing_basis(6);
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd alpha(6);
        for (int k = 0; k < 6; ++k)
            alpha[k] = g(rng);
        double best = 0.0;
        Eigen::VectorXd partial = Eigen::VectorXd::Zero(6);
        for (int k = 0; k < 6; ++k) {
            partial += alpha[k] * x.vectors().row(k).transpose();
            best = std::max(best, partial.cwiseAbs().maxCoeff());
        }
        EXPECT_EQ(norm(partial_sum_envelope(x, alpha)), best);
    }
}
