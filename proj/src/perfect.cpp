#include "inhibnet/perfect.hpp"

#include "inhibnet/errors.hpp"
#include "inhibnet/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <unordered_map>

namespace inhibnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t as_tag(std::int64_t neuron) { return static_cast<std::uint64_t>(neuron); }

void require_valid_lattice(const NetworkModel& model) {
    const auto report = validate(model);
    if (!report.ok()) throw ConfigError("invalid model:\n" + report.describe());
    if (!model.is_lattice()) throw ConfigError("perfect simulation needs a lattice model");
}

std::vector<std::int64_t> offsets_of(const std::vector<std::pair<std::int64_t, double>>& around_zero) {
    std::vector<std::int64_t> out;
    for (const auto& [site, w] : around_zero)
        if (site != 0 && w > 0.0) out.push_back(site);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}
} // namespace

const char* to_string(StreamKind kind) { return kind == StreamKind::Sure ? "sure" : "possible"; }

const char* to_string(ClanStatus status) { return status == ClanStatus::Stopped ? "stopped" : "cap_exceeded"; }

EventStream::EventStream(std::uint64_t seed, std::int64_t neuron, StreamKind kind, double intensity)
    : neuron_(neuron),
      kind_(kind),
      intensity_(intensity),
      gaps_(derive_key(seed, {tag(Purpose::LatticeGap), as_tag(neuron), static_cast<std::uint64_t>(kind)})) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
        throw std::invalid_argument("EventStream: intensity must be finite and nonnegative");
}

double EventStream::depth(std::size_t ordinal) {
    if (intensity_ == 0.0) return kInf;
    while (depths_.size() <= ordinal) {
        const double last = depths_.empty() ? 0.0 : depths_.back();
        const double next = last - std::log(gaps_.uniform(depths_.size())) / intensity_;
        depths_.push_back(next > last ? next : std::nextafter(last, kInf));
    }
    return depths_[ordinal];
}

std::size_t EventStream::first_after(double d) {
    if (intensity_ == 0.0) return 0;
    std::size_t k = 0;
    if (!depths_.empty() && depths_.back() <= d) k = depths_.size();
    else k = static_cast<std::size_t>(std::upper_bound(depths_.begin(), depths_.end(), d) - depths_.begin());
    while (depth(k) <= d) ++k;
    return k;
}

std::vector<std::size_t> ClanState::size_trajectory() const {
    std::vector<std::size_t> out{1};
    out.reserve(history.size() + 1);
    for (const auto& e : history) out.push_back(e.size_after);
    return out;
}

std::vector<std::size_t> ClanState::jump_chain() const {
    std::vector<std::size_t> out{1};
    for (const auto& e : history)
        if (e.change != MembershipChange::None) out.push_back(e.size_after);
    return out;
}

ClanState backward_clan(const NetworkModel& model, std::int64_t root, std::uint64_t seed, std::size_t max_events) {
    require_valid_lattice(model);
    if (max_events == 0) throw std::invalid_argument("backward_clan: cap must be at least 1");

    const RateBounds b = model_rate_bounds(model);
    const double intensity[2] = {b.lower, b.upper - b.lower};
    const auto in_offsets = offsets_of(lattice_in_neighbors(model.weights, 0));
    const auto out_offsets = offsets_of(lattice_out_neighbors(model.weights, 0));

    struct Cursor {
        EventStream stream;
        bool queued = false;
    };
    struct Streams {
        Cursor kinds[2];
    };
    std::unordered_map<std::int64_t, Streams> store;
    auto streams_of = [&](std::int64_t j) -> Streams& {
        auto it = store.find(j);
        if (it == store.end())
            it = store
                     .emplace(j, Streams{{Cursor{EventStream(seed, j, StreamKind::Sure, intensity[0])},
                                          Cursor{EventStream(seed, j, StreamKind::Possible, intensity[1])}}})
                     .first;
        return it->second;
    };

    struct Entry {
        double depth;
        std::int64_t neuron;
        StreamKind kind;
        std::size_t ordinal;
        bool operator>(const Entry& o) const {
            if (depth != o.depth) return depth > o.depth;
            if (neuron != o.neuron) return neuron > o.neuron;
            return kind > o.kind;
        }
    };
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

    ClanState clan;
    clan.root = root;
    clan.members.insert(root);
    double current = 0.0;

    auto push = [&](std::int64_t j, StreamKind kind, std::size_t ordinal) {
        Cursor& c = streams_of(j).kinds[static_cast<int>(kind)];
        const double d = c.stream.depth(ordinal);
        c.queued = std::isfinite(d);
        if (c.queued) heap.push({d, j, kind, ordinal});
    };
    auto ensure_queued = [&](std::int64_t j) {
        for (StreamKind kind : {StreamKind::Sure, StreamKind::Possible}) {
            Cursor& c = streams_of(j).kinds[static_cast<int>(kind)];
            if (!c.queued) push(j, kind, c.stream.first_after(current));
        }
    };
    auto in_scan = [&](std::int64_t k) {
        if (clan.members.count(k)) return true;
        return std::any_of(out_offsets.begin(), out_offsets.end(),
                           [&](std::int64_t off) { return clan.members.count(k + off) > 0; });
    };
    auto enter = [&](std::int64_t k) {
        ensure_queued(k);
        for (std::int64_t off : in_offsets) ensure_queued(k + off);
    };

    enter(root);
    while (!clan.members.empty()) {
        if (clan.step_count >= max_events || heap.empty()) {
            clan.status = ClanStatus::CapExceeded;
            return clan;
        }
        const Entry e = heap.top();
        heap.pop();
        streams_of(e.neuron).kinds[static_cast<int>(e.kind)].queued = false;
        if (!in_scan(e.neuron)) continue;

        current = e.depth;
        push(e.neuron, e.kind, e.ordinal + 1);
        const bool member = clan.members.count(e.neuron) > 0;
        MembershipChange change = MembershipChange::None;
        if (e.kind == StreamKind::Possible && !member) {
            clan.members.insert(e.neuron);
            change = MembershipChange::Joined;
            enter(e.neuron);
        } else if (e.kind == StreamKind::Sure && member) {
            clan.members.erase(e.neuron);
            change = MembershipChange::Removed;
        }
        ++clan.step_count;
        clan.max_size = std::max(clan.max_size, clan.members.size());
        clan.history.push_back({e.depth, e.neuron, e.kind, e.ordinal, change, clan.members.size()});
    }
    clan.stop_depth = current;
    clan.status = ClanStatus::Stopped;
    return clan;
}

double forward_reset_uniform(std::uint64_t seed, std::int64_t neuron, StreamKind kind, std::size_t ordinal) {
    return CounterStream(
               derive_key(seed, {tag(Purpose::ForwardReset), as_tag(neuron), static_cast<std::uint64_t>(kind)}))
        .uniform(ordinal);
}

double forward_coin_uniform(std::uint64_t seed, std::int64_t neuron, std::size_t ordinal) {
    return CounterStream(derive_key(seed, {tag(Purpose::ForwardCoin), as_tag(neuron)})).uniform(ordinal);
}

StationarySample forward_fill(const NetworkModel& model, const ClanState& clan, std::uint64_t seed) {
    require_valid_lattice(model);
    if (clan.status != ClanStatus::Stopped || !clan.stop_depth)
        throw std::invalid_argument("forward_fill: the clan exploration did not stop");

    const DriftSpec& drift = model.drift_of(0);
    const RateSpec& rate = model.rate_of(0);
    const ResetSpec& reset = model.reset_of(0);
    const RateBounds b = model_rate_bounds(model);
    const auto out = lattice_out_neighbors(model.weights, 0);

    std::map<std::int64_t, double> live;
    auto inhibit = [&](std::int64_t k) {
        for (const auto& [off, w] : out) {
            if (off == 0) continue;
            if (auto it = live.find(k + off); it != live.end()) it->second += w;
        }
    };
    auto spikes = [&](std::int64_t k, std::size_t ordinal) {
        auto it = live.find(k);
        if (it == live.end())
            throw UnresolvedDependency("forward_fill: possible event of neuron " + std::to_string(k) +
                                       " before its state is known");
        const double p = (rate(it->second) - b.lower) / (b.upper - b.lower);
        return forward_coin_uniform(seed, k, ordinal) < p;
    };

    double previous = clan.history.empty() ? 0.0 : clan.history.back().depth;
    for (auto e = clan.history.rbegin(); e != clan.history.rend(); ++e) {
        const double gap = previous - e->depth;
        if (gap > 0.0)
            for (auto& [k, x] : live) x = evolve(drift, x, gap);
        previous = e->depth;

        switch (e->change) {
        case MembershipChange::Removed:
            inhibit(e->neuron);
            live[e->neuron] = reset.sample(forward_reset_uniform(seed, e->neuron, StreamKind::Sure, e->ordinal));
            break;
        case MembershipChange::Joined:
            if (spikes(e->neuron, e->ordinal)) inhibit(e->neuron);
            live.erase(e->neuron);
            break;
        case MembershipChange::None:
            if (e->kind == StreamKind::Sure) {
                inhibit(e->neuron);
            } else if (spikes(e->neuron, e->ordinal)) {
                inhibit(e->neuron);
                live[e->neuron] =
                    reset.sample(forward_reset_uniform(seed, e->neuron, StreamKind::Possible, e->ordinal));
            }
            break;
        }
    }
    auto it = live.find(clan.root);
    if (it == live.end()) throw UnresolvedDependency("forward_fill: root state unresolved at depth 0");
    const double value = evolve(drift, it->second, previous);
    return {clan.root, value, clan.step_count, clan.max_size};
}

std::vector<double> SampleSet::values() const {
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records)
        if (r.sample) out.push_back(r.sample->value);
    return out;
}

SampleSet draw_stationary(const NetworkModel& model, std::int64_t root, std::size_t n_samples, std::uint64_t seed,
                          std::size_t cap, Exec exec) {
    require_valid_lattice(model);
    SampleSet set;
    set.neuron = root;
    set.records.resize(n_samples);
    for_each_index(n_samples, exec, [&](std::size_t s) {
        const std::uint64_t sample_seed = derive_key(seed, {tag(Purpose::Sample), s});
        const ClanState clan = backward_clan(model, root, sample_seed, cap);
        SampleRecord& rec = set.records[s];
        rec.index = s;
        rec.status = clan.status;
        rec.events_processed = clan.step_count;
        rec.clan_max_size = clan.max_size;
        if (clan.status == ClanStatus::Stopped) rec.sample = forward_fill(model, clan, sample_seed);
    });
    set.capped = static_cast<std::size_t>(std::count_if(set.records.begin(), set.records.end(), [](const auto& r) {
        return r.status == ClanStatus::CapExceeded;
    }));
    if (set.capped * 100 > n_samples)
        throw SubcriticalityError(std::to_string(set.capped) + " of " + std::to_string(n_samples) +
                                      " samples exceeded the cap of " + std::to_string(cap) +
                                      " events; delta is likely below the critical value or the cap is too small",
                                  std::move(set));
    return set;
}

double delta(double beta_lower, double beta_upper) {
    if (!(beta_lower >= 0.0) || !(beta_upper >= beta_lower))
        throw std::invalid_argument("delta: need 0 <= beta_lower <= beta_upper");
    if (beta_upper == beta_lower) return kInf;
    return beta_lower / (beta_upper - beta_lower);
}

double delta(const NetworkModel& model) {
    const RateBounds b = model_rate_bounds(model);
    return delta(b.lower, b.upper);
}

BranchingReport branching_domination_check(const NetworkModel& model) {
    BranchingReport r;
    const RateBounds global = model_rate_bounds(model);
    if (model.is_lattice()) {
        const double extra = global.upper - global.lower;
        const auto in = offsets_of(lattice_in_neighbors(model.weights, 0));
        r.birth = {static_cast<double>(in.size()) * extra};
        r.death = {global.lower};
    } else {
        const std::size_t n = model.size();
        r.birth.assign(n, 0.0);
        r.death.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            r.death[j] = rate_bounds(model.rate_of(j)).lower;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == j || weight(model, static_cast<std::int64_t>(k), static_cast<std::int64_t>(j)) <= 0.0)
                    continue;
                const RateBounds bk = rate_bounds(model.rate_of(k));
                r.birth[j] += bk.upper - bk.lower;
            }
        }
    }
    r.subcritical = true;
    for (std::size_t j = 0; j < r.birth.size(); ++j) r.subcritical = r.subcritical && r.birth[j] < r.death[j];
    r.delta = delta(global.lower, global.upper);
    r.theorem_extinction = std::min(1.0, r.delta);
    const double b_max = *std::max_element(r.birth.begin(), r.birth.end());
    const double d_min = *std::min_element(r.death.begin(), r.death.end());
    r.dominating_extinction = b_max > 0.0 ? std::min(1.0, d_min / b_max) : 1.0;
    return r;
}

double contour_bound(double delta) {
    if (!(delta > 0.0) || !(delta < 1.0 / 256.0))
        throw DomainError("contour_bound: delta must lie in (0, 1/256); got " + std::to_string(delta));
    const double s = 16.0 * std::sqrt(delta);
    return delta + 4.0 * delta * delta + s * s * s / (1.0 - s);
}

} // namespace inhibnet
