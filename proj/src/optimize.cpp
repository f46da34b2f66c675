#include "bibasis/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace bibasis {

std::string_view to_string(Strategy strategy) noexcept
{
    switch (strategy) {
    case Strategy::exhaustive_signs: return "exhaustive_signs";
    case Strategy::grid_sphere: return "grid_sphere";
    case Strategy::multistart_ascent: return "multistart_ascent";
    }
    return "multistart_ascent";
}

Strategy parse_strategy(std::string_view text)
{
    std::string s(text);
    std::replace(s.begin(), s.end(), '-', '_');
    if (s == "exhaustive_signs")
        return Strategy::exhaustive_signs;
    if (s == "grid_sphere")
        return Strategy::grid_sphere;
    if (s == "multistart_ascent")
        return Strategy::multistart_ascent;
    throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

long sign_pattern_count(int m)
{
    if (m < 1 || m > 38)
        throw std::invalid_argument("sign pattern size out of range");
    long total = 1;
    for (int k = 0; k < m; ++k)
        total *= 3;
    return (total - 1) / 2;
}

void for_each_sign_pattern(int m, const std::function<bool(const Eigen::VectorXd&)>& visit)
{
    if (m < 1)
        throw std::invalid_argument("sign pattern size must be >= 1");
    std::vector<int> digit(static_cast<std::size_t>(m), 0);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m);
    for (;;) {
        int k = 0;
        for (; k < m; ++k) {
            auto& d = digit[static_cast<std::size_t>(k)];
            if (++d == 3) {
                d = 0;
                alpha[k] = 0.0;
                continue;
            }
            alpha[k] = d == 1 ? 1.0 : -1.0;
            break;
        }
        if (k == m)
            return;
        int first = 0;
        while (alpha[first] == 0.0)
            ++first;
        if (alpha[first] < 0.0)
            continue;
        if (!visit(alpha))
            return;
    }
}

namespace {

constexpr double pi = std::numbers::pi;

/// Counts evaluations, enforces the budget and remembers the first point
/// attaining the running maximum.
class Tracker {
public:
    Tracker(const Objective& f, long budget) : f_(f), budget_(budget) {}

    double operator()(const Eigen::VectorXd& alpha)
    {
        if (used_ >= budget_)
            return -std::numeric_limits<double>::infinity();
        ++used_;
        double v = f_(alpha);
        if (std::isnan(v))
            v = -std::numeric_limits<double>::infinity();
        if (v > best_ || witness_.size() == 0) {
            best_ = v;
            witness_ = alpha;
        }
        return v;
    }

    bool exhausted() const noexcept { return used_ >= budget_; }
    long used() const noexcept { return used_; }
    long budget() const noexcept { return budget_; }
    double best() const noexcept { return best_; }
    const Eigen::VectorXd& witness() const noexcept { return witness_; }

    SearchResult result(bool complete = false) const
    {
        return {best_, witness_, used_, complete};
    }

private:
    const Objective& f_;
    long budget_;
    long used_ = 0;
    double best_ = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd witness_;
};

struct Point {
    Eigen::VectorXd x;
    double value = -std::numeric_limits<double>::infinity();
};

/// Maximizes along the great circle cos(t) u + sin(t) e, starting from the
/// point at angle t0 whose value is `current`. u and e are orthonormal.
/// A coarse scan locates the best arc, golden-section search refines it.
Point rotate_search(Tracker& track, const Eigen::VectorXd& u, const Eigen::VectorXd& e,
                    double t0, double current)
{
    constexpr int scan = 12;
    constexpr int golden_steps = 28;
    const auto at = [&](double t) -> Eigen::VectorXd { return std::cos(t) * u + std::sin(t) * e; };

    double best_t = t0;
    double best_v = current;
    for (int i = 0; i < scan && !track.exhausted(); ++i) {
        const double t = -pi / 2 + pi * i / scan;
        const double v = track(at(t));
        if (v > best_v) {
            best_v = v;
            best_t = t;
        }
    }

    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_t - pi / scan;
    double hi = best_t + pi / scan;
    double c = hi - ratio * (hi - lo);
    double d = lo + ratio * (hi - lo);
    double fc = track(at(c));
    double fd = track(at(d));
    for (int i = 0; i < golden_steps && !track.exhausted(); ++i) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = track(at(c));
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = track(at(d));
        }
    }
    if (fc > best_v) {
        best_v = fc;
        best_t = c;
    }
    if (fd > best_v) {
        best_v = fd;
        best_t = d;
    }
    return {at(best_t), best_v};
}

/// Coordinatewise ascent over the first `active` coordinates, on the unit
/// sphere, until a sweep improves by less than 1e-10 relative.
Point ascend(Tracker& track, Eigen::VectorXd start, int active)
{
    const double len = start.norm();
    if (len == 0.0 || track.exhausted())
        return {std::move(start), -std::numeric_limits<double>::infinity()};
    Point p{start / len, 0.0};
    p.value = track(p.x);
    const int m = static_cast<int>(p.x.size());
    for (;;) {
        const double before = p.value;
        for (int k = 0; k < active && !track.exhausted(); ++k) {
            Eigen::VectorXd u = p.x;
            u[k] = 0.0;
            const double rest = u.norm();
            if (rest == 0.0)
                continue;
            u /= rest;
            const Eigen::VectorXd e = Eigen::VectorXd::Unit(m, k);
            Point q = rotate_search(track, u, e, std::atan2(p.x[k], rest), p.value);
            if (q.value > p.value)
                p = std::move(q);
        }
        if (track.exhausted() || !(p.value - before > 1e-10 * std::abs(before)))
            return p;
    }
}

/// Keeps the k best candidates; earlier candidates win ties.
class TopCandidates {
public:
    explicit TopCandidates(std::size_t k) : k_(k) {}

    void offer(double value, const Eigen::VectorXd& x)
    {
        if (entries_.size() == k_ && !(value > entries_.back().value))
            return;
        auto it = std::find_if(entries_.begin(), entries_.end(),
                               [&](const Point& p) { return value > p.value; });
        entries_.insert(it, Point{x, value});
        if (entries_.size() > k_)
            entries_.pop_back();
    }

    const std::vector<Point>& entries() const noexcept { return entries_; }

private:
    std::size_t k_;
    std::vector<Point> entries_;
};

Eigen::VectorXd fit_length(const Eigen::VectorXd& v, int m)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    const auto n = std::min<Eigen::Index>(v.size(), m);
    out.head(n) = v.head(n);
    return out;
}

void require_budget(long budget)
{
    if (budget < 1)
        throw std::invalid_argument("budget must be >= 1");
}

} // namespace

SearchResult exhaustive_sign_search(const Objective& f, int m, long budget)
{
    require_budget(budget);
    if (m < 1 || m > max_exhaustive_size)
        throw std::invalid_argument("exhaustive_signs supports 1 <= m <= "
                                    + std::to_string(max_exhaustive_size));
    Tracker track(f, budget);
    long visited = 0;
    for_each_sign_pattern(m, [&](const Eigen::VectorXd& alpha) {
        if (track.exhausted())
            return false;
        track(alpha);
        ++visited;
        return true;
    });
    return track.result(visited == sign_pattern_count(m));
}

SearchResult grid_sphere_search(const Objective& f, int m, long budget)
{
    require_budget(budget);
    if (m < 1 || m > max_grid_size)
        throw std::invalid_argument("grid_sphere supports 1 <= m <= " + std::to_string(max_grid_size));
    Tracker track(f, budget);
    if (m == 1) {
        track(Eigen::VectorXd::Ones(1));
        return track.result(true);
    }

    // Hyperspherical angles, each on a uniform grid of [0, pi); the last angle
    // restricted to [0, pi) covers the sphere modulo alpha -> -alpha.
    const long refine = std::min<long>(budget / 5, 400L * m);
    const long grid_budget = std::max<long>(budget - refine, 1);
    const int per_angle = std::max(
        2, static_cast<int>(std::floor(std::pow(double(grid_budget), 1.0 / (m - 1)) + 1e-9)));
    std::vector<int> index(static_cast<std::size_t>(m - 1), 0);
    Eigen::VectorXd alpha(m);
    bool done = false;
    while (!done && !track.exhausted()) {
        double sin_prod = 1.0;
        for (int a = 0; a < m - 1; ++a) {
            const double theta = pi * index[static_cast<std::size_t>(a)] / per_angle;
            alpha[a] = sin_prod * std::cos(theta);
            sin_prod *= std::sin(theta);
        }
        alpha[m - 1] = sin_prod;
        track(alpha);
        int a = 0;
        for (; a < m - 1; ++a) {
            if (++index[static_cast<std::size_t>(a)] < per_angle)
                break;
            index[static_cast<std::size_t>(a)] = 0;
        }
        done = a == m - 1;
    }
    if (!track.exhausted()) {
        const Eigen::VectorXd best = track.witness();
        ascend(track, best, m);
    }
    return track.result();
}

SearchResult multistart_ascent(const Objective& f, int m, const SearchOptions& options)
{
    require_budget(options.budget);
    if (m < 1)
        throw std::invalid_argument("multistart_ascent requires m >= 1");
    Tracker track(f, options.budget);
    std::mt19937_64 rng(options.seed);

    // Seed with sign patterns: the ratios are piecewise smooth with kinks
    // along lattice hyperplanes, and sign patterns sit on those kinks.
    // Enumerate all of them when they fit in a quarter of the budget.
    TopCandidates top(3);
    const long quarter = std::max<long>(options.budget / 4, 1);
    const bool enumerate = m <= max_exhaustive_size && sign_pattern_count(m) <= quarter;
    if (enumerate) {
        for_each_sign_pattern(m, [&](const Eigen::VectorXd& alpha) {
            top.offer(track(alpha), alpha);
            return !track.exhausted();
        });
    } else {
        std::uniform_int_distribution<int> digit(-1, 1);
        const long samples = std::max<long>(options.budget / 10, 1);
        Eigen::VectorXd alpha(m);
        for (long i = 0; i < samples && !track.exhausted(); ++i) {
            do {
                for (int k = 0; k < m; ++k)
                    alpha[k] = digit(rng);
            } while (alpha.isZero(0.0));
            top.offer(track(alpha), alpha);
        }
    }

    for (const auto& start : options.warm_starts)
        ascend(track, fit_length(start, m), m);
    for (const auto& candidate : top.entries())
        ascend(track, candidate.x, m);

    // Continuation over prefixes 1, 2, 4, ..., m: each stage ascends from the
    // previous stage's best (padded with zeros), then perturbs and re-ascends
    // until it stalls or its share of the remaining budget is spent.
    std::vector<int> stages;
    for (int a = 1; a < m; a *= 2)
        stages.push_back(a);
    stages.push_back(m);

    std::normal_distribution<double> gauss(0.0, 1.0);
    constexpr double sigmas[] = {0.5, 0.2, 0.05};
    Eigen::VectorXd carry = Eigen::VectorXd::Unit(m, 0);
    for (std::size_t s = 0; s < stages.size() && !track.exhausted(); ++s) {
        const int active = stages[s];
        const bool last = s + 1 == stages.size();
        const long remaining = track.budget() - track.used();
        const long stage_end = last ? track.budget()
                                    : track.used() + remaining / static_cast<long>(stages.size() - s);

        Point best = ascend(track, carry, active);
        if (last && track.best() > best.value) {
            Point alt = ascend(track, track.witness(), active);
            if (alt.value > best.value)
                best = std::move(alt);
        }

        const int stall_limit = last ? 20 + 10 * active : 5 + 3 * active;
        int stalls = 0;
        int cycle = 0;
        while (!track.exhausted() && track.used() < stage_end && stalls < stall_limit) {
            Eigen::VectorXd start = best.x;
            const double sigma = sigmas[cycle++ % 3] / std::sqrt(double(active));
            for (int k = 0; k < active; ++k)
                start[k] += sigma * gauss(rng);
            Point candidate = ascend(track, std::move(start), active);
            if (candidate.value > best.value + 1e-12 * std::abs(best.value)) {
                best = std::move(candidate);
                stalls = 0;
            } else {
                ++stalls;
            }
        }
        carry = best.x;
    }
    return track.result();
}

SearchResult maximize(const Objective& f, int m, Strategy strategy, const SearchOptions& options)
{
    switch (strategy) {
    case Strategy::exhaustive_signs: return exhaustive_sign_search(f, m, options.budget);
    case Strategy::grid_sphere: return grid_sphere_search(f, m, options.budget);
    case Strategy::multistart_ascent: return multistart_ascent(f, m, options);
    }
    throw std::invalid_argument("unknown strategy");
}

} // namespace bibasis
