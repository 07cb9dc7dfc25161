#include <catch2/catch_amalgamated.hpp>

#include "inhibnet/rng.hpp"
#include "inhibnet/stats.hpp"

#include <cmath>

using namespace inhibnet;

namespace {
std::vector<double> exponential_draws(std::size_t n, std::uint64_t seed) {
    StreamEngine eng(derive_key(seed, {tag(Purpose::Test)}));
    std::vector<double> v(n);
    for (auto& x : v) x = -std::log(eng.uniform());
    return v;
}
} // namespace

TEST_CASE("summary statistics and quantiles", "[stats][summary]") {
    const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    const Summary s = summarize(v);
    CHECK(s.mean == 5.5);
    CHECK(s.sd == Catch::Approx(std::sqrt(82.5 / 9.0)).epsilon(1e-15));
    CHECK(s.min == 1.0);
    CHECK(s.max == 10.0);
    CHECK(quantile(v, 0.25) == 3.25);
    CHECK(quantile(v, 0.5) == 5.5);
    CHECK(quantile(v, 1.0) == 10.0);
    CHECK_THROWS_AS(summarize(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("KDE recovers the exponential density", "[stats][kde][oracle]") {
    const auto x = exponential_draws(10'000, 1);
    const auto est = kde(x, 2048);
    REQUIRE(std::holds_alternative<DensityEstimate>(est));
    const auto& d = std::get<DensityEstimate>(est);
    CHECK(d.n == 10'000);
    CHECK(d.bandwidth == silverman_bandwidth(x));
    CHECK(d.grid.front() == Catch::Approx(summarize(x).min - 4.0 * d.bandwidth));
    CHECK(d.grid.back() == summarize(x).max + 4.0 * d.bandwidth);
    const auto at = std::lower_bound(d.grid.begin(), d.grid.end(), 0.5) - d.grid.begin();
    const double f = d.values[static_cast<std::size_t>(at)];
    CHECK(std::abs(f - std::exp(-0.5)) < 0.05);
    const double mass = trapezoid(d.grid, d.values);
    CHECK(mass >= 0.98);
    CHECK(mass <= 1.02);
    for (double v : d.values) CHECK(v >= 0.0);
}

TEST_CASE("KDE degenerate and parallel paths", "[stats][kde]") {
    const auto pm = kde(std::vector<double>{2.0, 2.0, 2.0});
    REQUIRE(std::holds_alternative<PointMass>(pm));
    CHECK(std::get<PointMass>(pm).location == 2.0);
    CHECK_THROWS_AS(kde(std::vector<double>{1.0}), std::invalid_argument);

    const auto x = exponential_draws(3000, 2);
    const auto s = std::get<DensityEstimate>(kde(x, 700, Exec::Serial));
    const auto p = std::get<DensityEstimate>(kde(x, 700, Exec::Parallel));
    CHECK(s.values == p.values);

    // Half the samples share one value: the IQR can vanish while sd does not.
    std::vector<double> tied(100, 1.0);
    tied.push_back(5.0);
    CHECK(silverman_bandwidth(tied) == Catch::Approx(0.9 * summarize(tied).sd * std::pow(101.0, -0.2)));
}

TEST_CASE("two-sample Kolmogorov-Smirnov distance", "[stats][ks]") {
    const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
    CHECK(ks_distance(a, a) == 0.0);
    CHECK(ks_distance(a, b) == 1.0);
    CHECK(ks_distance(std::vector<double>{1, 2, 3, 4}, std::vector<double>{3, 4, 5, 6}) == 0.5);

    const auto x = exponential_draws(2000, 3), y = exponential_draws(2000, 4), z = exponential_draws(500, 5);
    CHECK(ks_distance(x, y) == ks_distance(y, x));
    CHECK(ks_distance(x, z) <= ks_distance(x, y) + ks_distance(y, z));
    CHECK(ks_distance(x, y) < 0.05);
}

TEST_CASE("one-sample Kolmogorov-Smirnov distance", "[stats][ks]") {
    CHECK(ks_distance(std::vector<double>{0.5}, [](double t) { return std::clamp(t, 0.0, 1.0); }) == 0.5);
    const auto x = exponential_draws(20'000, 6);
    const double d = ks_distance(x, [](double t) { return 1.0 - std::exp(-t); });
    CHECK(d < 1.63 / std::sqrt(20'000.0));
}

TEST_CASE("confidence bands", "[stats][bands]") {
    CHECK(dkw_epsilon(2000, 0.01) == Catch::Approx(std::sqrt(std::log(200.0) / 4000.0)));
    CHECK(two_sample_band(2000, 2000, 0.01) == Catch::Approx(0.05147).epsilon(1e-3));
    CHECK_THROWS_AS(dkw_epsilon(0, 0.01), std::invalid_argument);
}

TEST_CASE("histogram and trapezoid", "[stats][histogram]") {
    const auto x = exponential_draws(1000, 7);
    const Histogram h = histogram(x, 20);
    CHECK(h.edges.size() == 21);
    std::size_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == 1000);
    const std::vector<double> t{0.0, 1.0, 3.0}, y{1.0, 3.0, 7.0};
    CHECK(trapezoid(t, y) == 2.0 + 10.0);
}
