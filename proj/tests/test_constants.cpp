#include "bibasis/constants.hpp"
#include "bibasis/systems.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bibasis;

namespace {

constexpr ConstantKind all_kinds[] = {ConstantKind::basis, ConstantKind::bibasis,
                                      ConstantKind::unc_bibasis, ConstantKind::unconditional,
                                      ConstantKind::absolute};

Eigen::VectorXd gaussian(int m, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Eigen::VectorXd v(m);
    for (int k = 0; k < m; ++k)
        v[k] = g(rng);
    return v;
}

std::vector<System> sample_systems()
{
    return {haar(Exponent::finite(1), 3),       haar(Exponent::finite(2.5), 3),
            haar(Exponent::infinity(), 2),      rademacher(Exponent::finite(1), 5),
            walsh(Exponent::finite(3), 3),      krengel_columns(Exponent::finite(1), 2),
            difference_basis(6),                summing_basis(6),
            discretized_rademacher(Exponent::finite(4), 3),
            absolute_matrix_example(4),         schauder_c01(2)};
}

} // namespace

TEST(ConstantKind, Names)
{
    EXPECT_EQ(to_string(ConstantKind::bibasis), "M_bibasis");
    EXPECT_EQ(parse_constant_kind("unc-bibasis"), ConstantKind::unc_bibasis);
    EXPECT_EQ(parse_constant_kind("Ku_unconditional"), ConstantKind::unconditional);
    EXPECT_THROW(parse_constant_kind("x"), std::invalid_argument);
}

TEST(Ratio, UnitVectorsAreOne)
{
    std::mt19937_64 rng(1);
    const System e = unit_vectors(make_space(SpaceKind::lp_n, Exponent::finite(2), 4), 4);
    for (int t = 0; t < 20; ++t) {
        const Eigen::VectorXd a = gaussian(4, rng);
        for (ConstantKind kind : all_kinds)
            EXPECT_NEAR(ratio(e, a, kind), 1.0, 1e-14);
    }
}

TEST(Ratio, DifferenceBasisAtOnes)
{
    EXPECT_DOUBLE_EQ(ratio(difference_basis(5), Eigen::VectorXd::Ones(5), ConstantKind::bibasis),
                     5.0);
}

TEST(Ratio, TwoVectorHaarClosedForm)
{
    const Eigen::Vector2d a(1.0, (std::sqrt(5.0) - 1.0) / 2.0);
    EXPECT_NEAR(ratio(haar(Exponent::finite(2), 1), a, ConstantKind::bibasis),
                oracle::golden_over_sqrt2, 1e-14);
}

TEST(Ratio, RademacherAbsoluteAtOnesMatchesEnumeration)
{
    for (int m = 1; m <= 8; ++m) {
        const double expected = m / oracle::rademacher_sum_moment(m, 1.0);
        EXPECT_NEAR(ratio(rademacher(Exponent::finite(1), m), Eigen::VectorXd::Ones(m),
                          ConstantKind::absolute),
                    expected, 1e-12);
    }
    EXPECT_DOUBLE_EQ(oracle::rademacher_sum_moment(8, 1.0), oracle::expected_abs_s8);
    for (int m = 1; m <= 8; ++m)
        EXPECT_NEAR(ratio(rademacher(Exponent::finite(2), m), Eigen::VectorXd::Ones(m),
                          ConstantKind::absolute),
                    std::sqrt(double(m)), 1e-12);
}

TEST(Ratio, Errors)
{
    const System h = haar(Exponent::finite(2), 1);
    EXPECT_THROW(ratio(h, Eigen::Vector2d::Zero(), ConstantKind::bibasis), std::invalid_argument);
    EXPECT_THROW(ratio(h, Eigen::Vector3d::Ones(), ConstantKind::bibasis), std::invalid_argument);
    const auto s = make_space(SpaceKind::lp_n, Exponent::finite(2), 2);
    VectorRows twice(2, 2);
    twice << 1, 1, 1, 1;
    const System dependent("dependent", s, twice);
    EXPECT_THROW(ratio(dependent, Eigen::Vector2d(1, -1), ConstantKind::bibasis),
                 DegenerateSystemError);
    EXPECT_THROW(ratio(h, Eigen::Vector2d(1, 1), ConstantKind::unconditional, std::vector<int>{1, 0}),
                 std::invalid_argument);
}

TEST(Ratio, ExplicitSigns)
{
    const System x = summing_basis(3);
    const Eigen::Vector3d a(1, -1, 1);
    EXPECT_DOUBLE_EQ(ratio(x, a, ConstantKind::unconditional, std::vector<int>{1, -1, 1}), 3.0);
    EXPECT_DOUBLE_EQ(ratio(x, a, ConstantKind::unconditional, std::vector<int>{1, 1, 1}), 1.0);
    EXPECT_DOUBLE_EQ(ratio(x, a, ConstantKind::unconditional), 3.0);
}

// Property: K <= M <= L, M <= A, K_u <= A for every alpha.
TEST(RatioProperties, PointwiseChain)
{
    std::mt19937_64 rng(2);
    for (const System& s : sample_systems()) {
        for (int t = 0; t < 30; ++t) {
            const Eigen::VectorXd a = gaussian(s.size(), rng);
            const double k = ratio(s, a, ConstantKind::basis);
            const double m = ratio(s, a, ConstantKind::bibasis);
            const double l = ratio(s, a, ConstantKind::unc_bibasis);
            const double u = ratio(s, a, ConstantKind::unconditional);
            const double abs = ratio(s, a, ConstantKind::absolute);
            EXPECT_GE(k, 1.0 - 1e-12) << s.name();
            EXPECT_LE(k, m + 1e-10) << s.name();
            EXPECT_LE(m, l + 1e-10) << s.name();
            EXPECT_LE(m, abs + 1e-10) << s.name();
            EXPECT_LE(u, abs + 1e-10) << s.name();
        }
    }
}

TEST(RatioProperties, ScaleInvariance)
{
    std::mt19937_64 rng(3);
    for (const System& s : sample_systems()) {
        const Eigen::VectorXd a = gaussian(s.size(), rng);
        for (ConstantKind kind : all_kinds)
            for (double c : {-3.0, 1e-3, 250.0})
                EXPECT_NEAR(ratio(s, c * a, kind), ratio(s, a, kind), 1e-12 * ratio(s, a, kind));
    }
}

TEST(RatioProperties, AmSpaceEnvelopeEquality)
{
    std::mt19937_64 rng(4);
    for (const System& s : {haar(Exponent::infinity(), 3), summing_basis(7),
                            absolute_matrix_example(5), schauder_c01(3)}) {
        for (int t = 0; t < 50; ++t) {
            const Eigen::VectorXd a = gaussian(s.size(), rng);
            EXPECT_DOUBLE_EQ(ratio(s, a, ConstantKind::bibasis), ratio(s, a, ConstantKind::basis));
        }
    }
}

TEST(RatioProperties, DoobPointwise)
{
    std::mt19937_64 rng(5);
    for (double p : {1.25, 2.0, 3.0, 6.0}) {
        const System h = haar(Exponent::finite(p), 4);
        for (int t = 0; t < 300; ++t)
            EXPECT_LE(ratio(h, gaussian(h.size(), rng), ConstantKind::bibasis), p / (p - 1) + 1e-9);
    }
}

TEST(Estimate, UnitVectorsAbsoluteExhaustive)
{
    const System e = unit_vectors(make_space(SpaceKind::lp_n, Exponent::finite(1), 6), 6);
    const ConstantEstimate est =
        estimate_constant(e, ConstantKind::absolute, Strategy::exhaustive_signs, 1000, 0);
    EXPECT_DOUBLE_EQ(est.lower, 1.0);
    EXPECT_TRUE(est.complete);
    EXPECT_EQ(est.evaluations, sign_pattern_count(6));
    EXPECT_FALSE(est.upper.has_value());
}

TEST(Estimate, HaarL2LevelThreeBetweenBounds)
{
    const System h = haar(Exponent::finite(2), 3);
    const ConstantEstimate est =
        estimate_constant(h, ConstantKind::bibasis, Strategy::multistart_ascent, 10000, 0);
    EXPECT_GE(est.lower, std::sqrt(1.5) - 1e-6);
    ASSERT_TRUE(est.upper.has_value());
    EXPECT_EQ(*est.upper, 2.0);
    EXPECT_EQ(est.upper_provenance, UpperProvenance::doob);
    EXPECT_LE(est.lower, *est.upper);
    EXPECT_LE(est.evaluations, 10000);
    const ConstantEstimate oracle =
        estimate_constant(h, ConstantKind::bibasis, Strategy::exhaustive_signs, 10000, 0);
    EXPECT_GE(est.lower, oracle.lower - 1e-9);
    EXPECT_NEAR(ratio(h, est.witness, ConstantKind::bibasis), est.lower, 1e-15);
}

TEST(Estimate, TwoVectorHaarGridMatchesSweepOracle)
{
    const double sweep = oracle::two_vector_haar_sweep(1000000);
    EXPECT_NEAR(sweep, oracle::two_vector_haar_sweep_max, 1e-15);
    const ConstantEstimate est = estimate_constant(haar(Exponent::finite(2), 1),
                                                   ConstantKind::bibasis, Strategy::grid_sphere,
                                                   10000, 0);
    EXPECT_NEAR(est.lower, sweep, 1e-6);
    EXPECT_NEAR(est.lower, oracle::golden_over_sqrt2, 1e-6);
    EXPECT_GE(est.lower, sweep - 1e-12);
}

TEST(Estimate, AmEqualityUpper)
{
    const ConstantEstimate est = estimate_constant(haar(Exponent::infinity(), 2),
                                                   ConstantKind::bibasis,
                                                   Strategy::exhaustive_signs, 100, 0);
    ASSERT_TRUE(est.upper.has_value());
    EXPECT_EQ(est.upper_provenance, UpperProvenance::am_equality);
    EXPECT_EQ(*est.upper, 1.0);
    EXPECT_DOUBLE_EQ(est.lower, 1.0);
}

TEST(Estimate, SignWitnessRecorded)
{
    const ConstantEstimate est = estimate_constant(summing_basis(4), ConstantKind::unconditional,
                                                   Strategy::exhaustive_signs, 100, 0);
    EXPECT_DOUBLE_EQ(est.lower, 4.0);
    ASSERT_EQ(est.signs.size(), 4u);
    EXPECT_DOUBLE_EQ(ratio(summing_basis(4), est.witness, ConstantKind::unconditional, est.signs),
                     4.0);
}

TEST(Estimate, DeterministicGivenSeed)
{
    const System h = haar(Exponent::finite(3), 3);
    const auto a = estimate_constant(h, ConstantKind::bibasis, Strategy::multistart_ascent, 4000, 9);
    const auto b = estimate_constant(h, ConstantKind::bibasis, Strategy::multistart_ascent, 4000, 9);
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.witness, b.witness);
    EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(Estimate, WitnessInvariantUnderRescaling)
{
    const System h = haar(Exponent::finite(1.5), 2);
    const System scaled("scaled", h.space_ptr(), h.vectors() * 7.5);
    const auto a = estimate_constant(h, ConstantKind::bibasis, Strategy::exhaustive_signs, 100, 0);
    const auto b =
        estimate_constant(scaled, ConstantKind::bibasis, Strategy::exhaustive_signs, 100, 0);
    EXPECT_EQ(a.witness, b.witness);
    EXPECT_NEAR(a.lower, b.lower, 1e-14);
}

TEST(Estimate, PrefixNeverExceedsFullSystem)
{
    const System h = haar(Exponent::finite(1), 3);
    double previous = 0.0;
    for (int m = 1; m <= h.size(); ++m) {
        const double v = estimate_constant(h.prefix(m), ConstantKind::bibasis,
                                           Strategy::exhaustive_signs, sign_pattern_count(m), 0)
                             .lower;
        EXPECT_GE(v, previous - 1e-12);
        previous = v;
    }
}

TEST(Estimate, MultistartReachesExhaustiveOptimum)
{
    for (const System& s : sample_systems()) {
        if (s.size() > 8)
            continue;
        const long patterns = sign_pattern_count(s.size());
        for (ConstantKind kind : {ConstantKind::basis, ConstantKind::bibasis, ConstantKind::absolute}) {
            const double ex =
                estimate_constant(s, kind, Strategy::exhaustive_signs, patterns, 0).lower;
            const double ms =
                estimate_constant(s, kind, Strategy::multistart_ascent, 4 * patterns + 1000, 0).lower;
            EXPECT_GE(ms, ex - 1e-9) << s.name() << " " << to_string(kind);
        }
    }
}

TEST(Permuted, ExplicitIdentityEqualsPlain)
{
    const System h = haar(Exponent::finite(2), 2);
    const auto plain = estimate_constant(h, ConstantKind::bibasis, Strategy::multistart_ascent, 2000, 3);
    const auto perm = permuted_estimate(h, ConstantKind::bibasis,
                                        PermutationMode::explicit_order({0, 1, 2, 3}),
                                        Strategy::multistart_ascent, 2000, 3);
    EXPECT_EQ(plain.lower, perm.lower);
    EXPECT_EQ(plain.witness, perm.witness);
    EXPECT_EQ(plain.upper, perm.upper);
}

TEST(Permuted, ExhaustiveIncludesIdentity)
{
    const System h = haar(Exponent::finite(2), 2);
    const auto plain = estimate_constant(h, ConstantKind::bibasis, Strategy::exhaustive_signs, 100, 0);
    const auto perm = permuted_estimate(h, ConstantKind::bibasis, PermutationMode::exhaustive(),
                                        Strategy::exhaustive_signs, 100, 0);
    EXPECT_GE(perm.lower, plain.lower);
    EXPECT_EQ(perm.evaluations, 24 * plain.evaluations);
    EXPECT_FALSE(perm.upper.has_value());
    EXPECT_THROW(permuted_estimate(haar(Exponent::finite(2), 4), ConstantKind::bibasis,
                                   PermutationMode::exhaustive(), Strategy::exhaustive_signs, 10, 0),
                 std::invalid_argument);
    EXPECT_THROW(permuted_estimate(h, ConstantKind::bibasis,
                                   PermutationMode::explicit_order({0, 0, 1, 2}),
                                   Strategy::exhaustive_signs, 10, 0),
                 std::invalid_argument);
}

TEST(Permuted, SubsetsAndRandomAreReproducible)
{
    const System r = rademacher(Exponent::finite(1), 5);
    const auto a = permuted_estimate(r, ConstantKind::bibasis, PermutationMode::subsets(5),
                                     Strategy::exhaustive_signs, 500, 8);
    const auto b = permuted_estimate(r, ConstantKind::bibasis, PermutationMode::subsets(5),
                                     Strategy::exhaustive_signs, 500, 8);
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.permutation, b.permutation);
}

TEST(Blocks, TrivialBlockingIsOriginal)
{
    const System h = haar(Exponent::finite(2), 2);
    const std::vector<int> ends{1, 2, 3, 4};
    EXPECT_EQ(block_system(h, ends, Eigen::VectorXd::Ones(4)).vectors(), h.vectors());
}

TEST(Blocks, LevelwiseHaarBlocksAreRademacher)
{
    const int level = 4;
    const System h = haar(Exponent::finite(3), level);
    std::vector<int> ends{1};
    for (int j = 1; j <= level; ++j)
        ends.push_back(1 << j);
    const System y = block_system(h, ends, Eigen::VectorXd::Ones(h.size()));
    const System r = rademacher(Exponent::finite(3), level);
    EXPECT_TRUE(y.vectors().row(0).isOnes());
    EXPECT_EQ(Eigen::MatrixXd(y.vectors().bottomRows(level)), Eigen::MatrixXd(r.vectors()));
}

TEST(Blocks, DifferenceBasisPairs)
{
    const std::vector<int> ends{2, 4};
    const System y = block_system(difference_basis(4), ends, Eigen::VectorXd::Ones(4));
    Eigen::MatrixXd expected(2, 4);
    expected << 0, 1, 0, 0, 0, -1, 0, 1;
    EXPECT_EQ(Eigen::MatrixXd(y.vectors()), expected);
}

TEST(Blocks, Errors)
{
    const System h = haar(Exponent::finite(2), 2);
    EXPECT_THROW(block_system(h, std::vector<int>{2, 2, 4}, Eigen::VectorXd::Ones(4)),
                 std::invalid_argument);
    EXPECT_THROW(block_system(h, std::vector<int>{2, 4}, Eigen::Vector4d(0, 0, 1, 1)),
                 std::invalid_argument);
    EXPECT_THROW(block_system(h, std::vector<int>{2, 5}, Eigen::VectorXd::Ones(5)),
                 std::invalid_argument);
}

TEST(Blocks, NumeratorDomination)
{
    std::mt19937_64 rng(6);
    const System h = haar(Exponent::finite(2), 3);
    const std::vector<int> ends{3, 4, 8};
    const Eigen::VectorXd inner = gaussian(8, rng);
    const System y = block_system(h, ends, inner);
    for (int t = 0; t < 50; ++t) {
        const Eigen::VectorXd beta = gaussian(3, rng);
        const Eigen::VectorXd alpha = expand_block_coefficients(8, ends, inner, beta);
        const LVec sy = combination(y, beta);
        const LVec sx = combination(h, alpha);
        EXPECT_NEAR(norm(sy), norm(sx), 1e-12);
        EXPECT_TRUE((partial_sum_envelope(y, beta).coords().array()
                     <= partial_sum_envelope(h, alpha).coords().array() + 1e-12)
                        .all());
    }
}

TEST(Distortion, UnitVectorsAreIsometric)
{
    const System e = unit_vectors(make_space(SpaceKind::lp_n, Exponent::finite(3), 4), 4);
    const DistortionEstimate d = distortion_vs_lp(e, Strategy::multistart_ascent, 2000, 0);
    EXPECT_NEAR(d.lower, 1.0, 1e-12);
    EXPECT_NEAR(d.upper, 1.0, 1e-12);
}

TEST(Distortion, RademacherL1GapGrows)
{
    double previous = 1.0;
    for (int m = 2; m <= 6; ++m) {
        const DistortionEstimate d = distortion_vs_lp(rademacher(Exponent::finite(1), m),
                                                      Strategy::multistart_ascent, 4000, 0);
        EXPECT_LE(d.lower, d.upper);
        EXPECT_GT(d.upper / d.lower, previous);
        previous = d.upper / d.lower;
    }
}

TEST(Theta, Examples)
{
    const System h = haar(Exponent::finite(2), 2);
    EXPECT_EQ(perturbation_theta(h, h, 1.0), 0.0);
    const System doubled("doubled", h.space_ptr(), h.vectors() * 2.0);
    EXPECT_NEAR(perturbation_theta(h, doubled, 1.0), 2.0 * h.size(), 1e-14);
    VectorRows shifted = h.vectors();
    shifted.col(0).array() += 0.01;
    const System y("shifted", h.space_ptr(), shifted);
    double expected = 0.0;
    for (int k = 0; k < h.size(); ++k)
        expected += 0.01 * std::sqrt(0.25) / h.vector_norm(k);
    EXPECT_NEAR(perturbation_theta(h, y, 1.0), 2.0 * expected, 1e-14);
    EXPECT_THROW(perturbation_theta(h, h.prefix(2), 1.0), std::invalid_argument);
}
