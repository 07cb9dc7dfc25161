#include <catch2/catch_amalgamated.hpp>

#include "inhibnet/errors.hpp"
#include "inhibnet/flow.hpp"
#include "inhibnet/pdmp.hpp"
#include "support.hpp"

#include <cmath>

using namespace inhibnet;
using test_support::finite;

namespace {
NetworkModel three_neuron() {
    auto m = finite(3, {DriftSpec::Linear{1.0}}, test_support::paper_rate(), {ResetSpec::Exponential{1.0}},
                    {WeightStructure::Explicit{{{0.0, 0.5, 0.2}, {0.1, 0.0, 0.7}, {0.4, 0.3, 0.0}}}});
    m.initial_state = {0.5, 2.5, 4.0};
    return m;
}
} // namespace

TEST_CASE("simulation is reproducible from its seed", "[pdmp][determinism]") {
    const auto m = three_neuron();
    const Trajectory a = simulate(m, 2000, 17), b = simulate(m, 2000, 17), c = simulate(m, 2000, 18);
    CHECK(a.events == b.events);
    CHECK(a.states == b.states);
    CHECK(a.events != c.events);
}

TEST_CASE("trajectory invariants", "[pdmp][invariants]") {
    const auto m = three_neuron();
    const Trajectory t = simulate(m, 5000, 3);
    double last = 0.0;
    for (std::size_t e = 0; e < t.events.size(); ++e) {
        const auto& ev = t.events[e];
        CHECK(ev.time > last);
        last = ev.time;
        CHECK(ev.reset_value.has_value() == ev.accepted);
        if (ev.label == Label::Sure) CHECK(ev.accepted);
        for (double x : t.states[e]) CHECK(x >= 0.0);
    }
}

TEST_CASE("post-event states match an independent replay of the event list", "[pdmp][oracle]") {
    const auto m = three_neuron();
    const Trajectory t = simulate(m, 3000, 11);
    std::vector<double> x = m.initial_state;
    double now = 0.0;
    for (std::size_t e = 0; e < t.events.size(); ++e) {
        const auto& ev = t.events[e];
        for (double& xi : x) xi = xi * std::exp(-(ev.time - now));
        now = ev.time;
        if (ev.accepted) {
            for (std::size_t j = 0; j < 3; ++j)
                if (j != ev.neuron) x[j] += weight(m, static_cast<std::int64_t>(ev.neuron), static_cast<std::int64_t>(j));
            x[ev.neuron] = *ev.reset_value;
        }
        for (std::size_t j = 0; j < 3; ++j) REQUIRE(t.states[e][j] == Catch::Approx(x[j]).epsilon(1e-9).margin(1e-12));
        x = t.states[e];
    }
}

TEST_CASE("sure labels arrive with probability beta_* / beta^*", "[pdmp][statistical]") {
    const Trajectory t = simulate(three_neuron(), 40'000, 5);
    const double n = static_cast<double>(t.events.size());
    const double sure = static_cast<double>(std::count_if(t.events.begin(), t.events.end(),
                                                          [](const EventRecord& e) { return e.label == Label::Sure; }));
    const double p = 0.75;
    CHECK(std::abs(sure / n - p) < 4.0 * std::sqrt(p * (1 - p) / n));
    // Proposals form a Poisson process of rate beta^* N = 12.
    CHECK(std::abs(t.elapsed() - n / 12.0) < 4.0 * std::sqrt(n) / 12.0);
}

TEST_CASE("thinning reproduces the boosted rate of a neuron pinned at zero", "[pdmp][statistical]") {
    // Constant drift far faster than the rate and resets to 0: the state sits at 0, so beta = 4.
    auto m = finite(1, {DriftSpec::Constant{1e9}}, test_support::paper_rate(), {ResetSpec::Discrete{{0.0}, {1.0}}},
                    {WeightStructure::Explicit{{{0.0}}}});
    const Trajectory t = simulate(m, 50'000, 8);
    const double count = static_cast<double>(t.accepted_count(0));
    const double rate = empirical_jump_rate(t, 0);
    CHECK(std::abs(rate - 4.0) < 4.0 * std::sqrt(count) / t.elapsed());
}

TEST_CASE("batch kernels: parallel matches serial bit for bit", "[pdmp][parallel]") {
    const auto m = three_neuron();
    CHECK(first_accepted_jump_times(m, 3000, 21, Exec::Serial) == first_accepted_jump_times(m, 3000, 21, Exec::Parallel));
    TimeAverageOptions o;
    o.neuron = 1;
    o.runs = 40;
    o.samples_per_run = 5;
    o.burn_in = 2.0;
    o.spacing = 1.5;
    const auto s = time_average_samples(m, o, 4, Exec::Serial);
    CHECK(s.size() == 200);
    CHECK(s == time_average_samples(m, o, 4, Exec::Parallel));
}

TEST_CASE("state at a horizon", "[pdmp][horizon]") {
    const auto m = three_neuron();
    const auto a = state_at_horizon(m, m.initial_state, 0.0, 1);
    CHECK(a == m.initial_state);
    const auto b = state_at_horizon(m, m.initial_state, 3.0, 1);
    ThinningSimulator sim(m, m.initial_state, 1);
    while (sim.next_event_time() <= 3.0) sim.step();
    CHECK(b == sim.state_at(3.0));
}

TEST_CASE("simulate rejects bad inputs", "[pdmp][errors]") {
    CHECK_THROWS_AS(simulate(test_support::paper_lattice(), 10, 1), ConfigError);
    CHECK_THROWS_AS(simulate(three_neuron(), 0, 1), std::invalid_argument);
    auto bad = three_neuron();
    bad.initial_state = {1.0};
    CHECK_THROWS_AS(simulate(bad, 10, 1), ConfigError);
    Trajectory empty;
    CHECK_THROWS_AS(empirical_jump_rate(empty, 0), std::invalid_argument);
}
