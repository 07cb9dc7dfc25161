#include <catch2/catch_amalgamated.hpp>

#include "inhibnet/errors.hpp"
#include "inhibnet/perfect.hpp"
#include "inhibnet/stats.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

using namespace inhibnet;

namespace {

struct RawEvent {
    double depth;
    std::int64_t neuron;
    StreamKind kind;
    std::size_t ordinal;
};

/// Every event of every neuron in [lo, hi] up to `max_depth`, regenerated from fresh streams.
std::vector<RawEvent> all_events(std::uint64_t seed, std::int64_t lo, std::int64_t hi, double beta_lo, double beta_hi,
                                 double max_depth) {
    std::vector<RawEvent> out;
    for (std::int64_t j = lo; j <= hi; ++j) {
        for (StreamKind kind : {StreamKind::Sure, StreamKind::Possible}) {
            EventStream s(seed, j, kind, kind == StreamKind::Sure ? beta_lo : beta_hi - beta_lo);
            for (std::size_t k = 0; s.depth(k) <= max_depth; ++k) out.push_back({s.depth(k), j, kind, k});
        }
    }
    std::sort(out.begin(), out.end(), [](const RawEvent& a, const RawEvent& b) {
        return std::tie(a.depth, a.neuron, a.kind) < std::tie(b.depth, b.neuron, b.kind);
    });
    return out;
}

/// Backward rules for nearest-neighbour weights, applied to the complete event list.
std::vector<ClanEvent> reference_clan(const std::vector<RawEvent>& events, std::int64_t root) {
    std::set<std::int64_t> members{root};
    std::vector<ClanEvent> out;
    for (const auto& e : events) {
        if (members.empty()) break;
        const bool member = members.count(e.neuron) > 0;
        const bool boundary = members.count(e.neuron - 1) > 0 || members.count(e.neuron + 1) > 0;
        if (!member && !boundary) continue;
        MembershipChange change = MembershipChange::None;
        if (e.kind == StreamKind::Possible && !member) {
            members.insert(e.neuron);
            change = MembershipChange::Joined;
        } else if (e.kind == StreamKind::Sure && member) {
            members.erase(e.neuron);
            change = MembershipChange::Removed;
        }
        out.push_back({e.depth, e.neuron, e.kind, e.ordinal, change, members.size()});
    }
    return out;
}

bool same_event(const ClanEvent& a, const ClanEvent& b) {
    return a.depth == b.depth && a.neuron == b.neuron && a.kind == b.kind && a.ordinal == b.ordinal &&
           a.change == b.change && a.size_after == b.size_after;
}

} // namespace

TEST_CASE("event streams are reproducible and strictly increasing", "[perfect][stream]") {
    EventStream a(5, -3, StreamKind::Possible, 2.0), b(5, -3, StreamKind::Possible, 2.0);
    std::vector<double> first;
    for (std::size_t k = 0; k < 1000; ++k) first.push_back(a.depth(k));
    for (std::size_t k = 1000; k-- > 0;) CHECK(b.depth(k) == first[k]);
    for (std::size_t k = 1; k < first.size(); ++k) CHECK(first[k] > first[k - 1]);
    CHECK(first.back() / 1000.0 == Catch::Approx(0.5).margin(0.05));
    CHECK(a.first_after(first[10]) == 11);
    CHECK(a.first_after(0.0) == 0);
    CHECK(EventStream(5, -3, StreamKind::Sure, 2.0).depth(0) != first[0]);
    EventStream none(5, 0, StreamKind::Possible, 0.0);
    CHECK(std::isinf(none.depth(0)));
    CHECK_THROWS_AS(EventStream(5, 0, StreamKind::Sure, -1.0), std::invalid_argument);
}

TEST_CASE("clan histories conform to the backward rules", "[perfect][clan][oracle]") {
    const auto model = test_support::paper_lattice();
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const ClanState clan = backward_clan(model, 4, seed);
        REQUIRE(clan.status == ClanStatus::Stopped);
        REQUIRE(clan.stop_depth.has_value());
        CHECK(clan.members.empty());
        CHECK(clan.step_count == clan.history.size());
        std::int64_t lo = 4, hi = 4;
        for (const auto& e : clan.history) {
            lo = std::min(lo, e.neuron);
            hi = std::max(hi, e.neuron);
        }
        const auto reference = reference_clan(all_events(seed, lo - 1, hi + 1, 3.0, 4.0, *clan.stop_depth), 4);
        INFO("seed " << seed);
        REQUIRE(reference.size() == clan.history.size());
        for (std::size_t k = 0; k < reference.size(); ++k) REQUIRE(same_event(reference[k], clan.history[k]));
        const auto sizes = clan.size_trajectory();
        CHECK(*std::max_element(sizes.begin(), sizes.end()) == clan.max_size);
        CHECK(clan.history.back().change == MembershipChange::Removed);
        CHECK(*clan.stop_depth == clan.history.back().depth);
    }
}

TEST_CASE("a neighbour's possible event as the first scanned event grows the clan", "[perfect][clan]") {
    const auto model = test_support::paper_lattice();
    int found = 0;
    for (std::uint64_t seed = 0; seed < 100 && found < 3; ++seed) {
        const ClanState clan = backward_clan(model, 0, seed);
        const auto& e = clan.history.front();
        if (e.kind != StreamKind::Possible || e.neuron == 0) continue;
        ++found;
        CHECK(std::abs(e.neuron) == 1);
        CHECK(e.change == MembershipChange::Joined);
        CHECK(e.size_after == 2);
    }
    CHECK(found == 3);
}

TEST_CASE("degenerate rates: no possible events", "[perfect][degenerate]") {
    const auto model = test_support::lattice({RateSpec::Constant{3.0}}, {ResetSpec::Exponential{1.0}});
    CHECK(std::isinf(delta(model)));
    double depth_sum = 0.0;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const ClanState clan = backward_clan(model, 2, seed);
        REQUIRE(clan.status == ClanStatus::Stopped);
        CHECK(clan.max_size == 1);
        for (const auto& e : clan.history) CHECK(e.kind == StreamKind::Sure);
        EventStream root_sure(seed, 2, StreamKind::Sure, 3.0);
        CHECK(*clan.stop_depth == root_sure.depth(0));
        depth_sum += *clan.stop_depth;

        // Closed form: flowed reset plus every neighbour Sure inhibition, each decayed to depth 0.
        const StationarySample s = forward_fill(model, clan, seed);
        double want = std::exp(-*clan.stop_depth) * model.reset_of(0).sample(forward_reset_uniform(seed, 2, StreamKind::Sure, 0));
        for (const auto& e : clan.history)
            if (e.neuron != 2) want += std::exp(-e.depth);
        CHECK(s.value == Catch::Approx(want).epsilon(1e-12));
    }
    CHECK(depth_sum / 300.0 == Catch::Approx(1.0 / 3.0).margin(4.0 / 3.0 / std::sqrt(300.0)));
}

TEST_CASE("forward fill on hand-built histories", "[perfect][forward]") {
    const auto model = test_support::paper_lattice({ResetSpec::Exponential{1.0}});
    const RateSpec rate = test_support::paper_rate();
    const auto Y = [&](std::uint64_t seed, std::int64_t k, StreamKind kind, std::size_t ord) {
        return model.reset_of(0).sample(forward_reset_uniform(seed, k, kind, ord));
    };

    SECTION("member reset, boundary inhibition, member possible event") {
        ClanState clan;
        clan.root = 0;
        clan.history = {{1.0, 0, StreamKind::Possible, 0, MembershipChange::None, 1},
                        {2.0, 1, StreamKind::Sure, 0, MembershipChange::None, 1},
                        {3.0, 0, StreamKind::Sure, 0, MembershipChange::Removed, 0}};
        clan.stop_depth = 3.0;
        clan.step_count = 3;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            double x = Y(seed, 0, StreamKind::Sure, 0);
            x = x * std::exp(-1.0) + 1.0;
            x *= std::exp(-1.0);
            if (forward_coin_uniform(seed, 0, 0) < rate(x) - 3.0) x = Y(seed, 0, StreamKind::Possible, 0);
            x *= std::exp(-1.0);
            CHECK(forward_fill(model, clan, seed).value == Catch::Approx(x).epsilon(1e-14));
        }
    }
    SECTION("a joined neighbour inhibits only if its coin says it spiked") {
        ClanState clan;
        clan.root = 0;
        clan.history = {{0.5, 1, StreamKind::Possible, 0, MembershipChange::Joined, 2},
                        {1.5, 1, StreamKind::Sure, 0, MembershipChange::Removed, 1},
                        {2.5, 0, StreamKind::Sure, 0, MembershipChange::Removed, 0}};
        clan.stop_depth = 2.5;
        clan.step_count = 3;
        int spiked = 0;
        // x1 exceeds the threshold only for large resets, so many seeds are needed to see both outcomes.
        for (std::uint64_t seed = 0; seed < 2000; ++seed) {
            double x0 = Y(seed, 0, StreamKind::Sure, 0) * std::exp(-1.0) + 1.0;
            const double x1 = Y(seed, 1, StreamKind::Sure, 0) * std::exp(-1.0);
            x0 *= std::exp(-1.0);
            if (forward_coin_uniform(seed, 1, 0) < rate(x1) - 3.0) {
                x0 += 1.0;
                ++spiked;
            }
            x0 *= std::exp(-0.5);
            CHECK(forward_fill(model, clan, seed).value == Catch::Approx(x0).epsilon(1e-14));
        }
        CHECK(spiked > 0);
        CHECK(spiked < 2000);
    }
    SECTION("an unresolved possible event is an internal error") {
        ClanState clan;
        clan.root = 0;
        clan.history = {{0.5, 1, StreamKind::Possible, 0, MembershipChange::Joined, 2},
                        {2.5, 0, StreamKind::Sure, 0, MembershipChange::Removed, 0}};
        clan.stop_depth = 2.5;
        CHECK_THROWS_AS(forward_fill(model, clan, 1), UnresolvedDependency);
    }
    SECTION("capped explorations cannot be filled") {
        ClanState clan;
        clan.status = ClanStatus::CapExceeded;
        CHECK_THROWS_AS(forward_fill(model, clan, 1), std::invalid_argument);
    }
}

TEST_CASE("stationary sampling", "[perfect][draw]") {
    const auto model = test_support::paper_lattice();
    const SampleSet a = draw_stationary(model, 0, 500, 31, 1'000'000, Exec::Serial);
    const SampleSet b = draw_stationary(model, 0, 500, 31, 1'000'000, Exec::Parallel);
    CHECK(a.capped == 0);
    CHECK(a.values() == b.values());
    for (const auto& r : a.records) {
        REQUIRE(r.sample.has_value());
        CHECK(r.sample->value >= 0.0);
        CHECK(r.events_processed == r.sample->events_processed);
    }
    CHECK(draw_stationary(model, 0, 500, 32).values() != a.values());

    SECTION("translation invariance") {
        const auto here = draw_stationary(model, 0, 2000, 8).values();
        const auto there = draw_stationary(model, 7, 2000, 9).values();
        CHECK(ks_distance(here, there) < 0.05);
    }
    SECTION("a tiny cap aborts the batch and reports what completed") {
        // With a cap of one event only pipelines whose root first meets a sure event finish.
        try {
            draw_stationary(model, 0, 50, 1, 1);
            FAIL("expected SubcriticalityError");
        } catch (const SubcriticalityError& e) {
            const auto& set = e.samples();
            const auto capped = std::count_if(set.records.begin(), set.records.end(),
                                              [](const SampleRecord& r) { return r.status == ClanStatus::CapExceeded; });
            CHECK(set.capped == static_cast<std::size_t>(capped));
            CHECK(set.capped > 0);
            CHECK(set.values().size() == 50 - set.capped);
            for (const auto& r : set.records) CHECK(r.sample.has_value() == (r.status == ClanStatus::Stopped));
        }
    }
    SECTION("non-lattice models are rejected") {
        auto finite = test_support::finite(3, {DriftSpec::Linear{1.0}}, test_support::paper_rate(),
                                           {ResetSpec::Exponential{1.0}}, {WeightStructure::Torus{1.0}});
        CHECK_THROWS_AS(backward_clan(finite, 0, 1), ConfigError);
    }
}

TEST_CASE("capped explorations report their status", "[perfect][cap]") {
    // delta = 1/3: the clan grows faster than it shrinks.
    const auto hot = test_support::lattice({RateSpec::Step{1.0, 3.0, 2.0}}, {ResetSpec::Exponential{1.0}});
    const ClanState clan = backward_clan(hot, 0, 3, 2000);
    if (clan.status == ClanStatus::CapExceeded) {
        CHECK(clan.step_count == 2000);
        CHECK(clan.history.size() == 2000);
        CHECK_FALSE(clan.stop_depth.has_value());
        CHECK_FALSE(clan.members.empty());
    }
    int capped = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) capped += backward_clan(hot, 0, seed, 2000).status == ClanStatus::CapExceeded;
    CHECK(capped > 0);
}

TEST_CASE("delta and branching diagnostics", "[perfect][branching]") {
    CHECK(delta(3.0, 4.0) == 3.0);
    CHECK(delta(1.0, 2.0) == 1.0);
    CHECK(std::isinf(delta(5.0, 5.0)));
    CHECK_THROWS_AS(delta(4.0, 3.0), std::invalid_argument);

    const auto r = branching_domination_check(test_support::paper_lattice());
    CHECK(r.birth == std::vector<double>{2.0});
    CHECK(r.death == std::vector<double>{3.0});
    CHECK(r.subcritical);
    CHECK(r.delta == 3.0);
    CHECK(r.theorem_extinction == 1.0);
    CHECK(r.dominating_extinction == 1.0);

    const auto weak = branching_domination_check(test_support::lattice({RateSpec::Step{1.0, 3.0, 2.0}}, {ResetSpec::Exponential{1.0}}));
    CHECK(weak.birth[0] == 6.0);
    CHECK_FALSE(weak.subcritical);
    CHECK(weak.theorem_extinction == Catch::Approx(1.0 / 3.0));
    CHECK(weak.dominating_extinction == Catch::Approx(1.0 / 6.0));

    const auto flat = branching_domination_check(test_support::lattice({RateSpec::Constant{2.0}}, {ResetSpec::Exponential{1.0}}));
    CHECK(flat.birth[0] == 0.0);
    CHECK(flat.subcritical);

    const auto torus = branching_domination_check(test_support::finite(
        5, {DriftSpec::Linear{1.0}}, test_support::paper_rate(), {ResetSpec::Exponential{1.0}}, {WeightStructure::Torus{1.0}}));
    CHECK(torus.birth == std::vector<double>(5, 2.0));
    CHECK(torus.subcritical);
}

TEST_CASE("contour bound", "[perfect][contour]") {
    const double d = 1e-6;
    double series = d + 4.0 * d * d;
    for (int n = 3; n <= 200; ++n) series += std::pow(16.0, n) * std::pow(d, n / 2.0);
    CHECK(contour_bound(d) == Catch::Approx(series).epsilon(1e-12));
    CHECK(contour_bound(d) == Catch::Approx(5.1626e-6).epsilon(1e-4));
    CHECK(contour_bound(1e-14) < 1e-13);
    double last = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double x = (1.0 / 256.0) * k / 101.0;
        const double phi = contour_bound(x);
        CHECK(phi > last);
        last = phi;
    }
    CHECK_THROWS_AS(contour_bound(1.0 / 256.0), DomainError);
    CHECK_THROWS_AS(contour_bound(0.0), DomainError);
    CHECK_THROWS_AS(contour_bound(-1.0), DomainError);
}
