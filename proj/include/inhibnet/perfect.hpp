#pragma once

#include "inhibnet/model.hpp"
#include "inhibnet/parallel.hpp"
#include "inhibnet/rng.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace inhibnet {

enum class StreamKind : std::uint64_t { Sure = 0, Possible = 1 };

const char* to_string(StreamKind kind);

/// Poisson event depths on the backward half-line for one (neuron, kind).
/// Event `ordinal` depends only on (seed, neuron, kind, ordinal).
class EventStream {
public:
    EventStream(std::uint64_t seed, std::int64_t neuron, StreamKind kind, double intensity);

    /// Depth of event `ordinal` (0-based). +infinity when the intensity is 0.
    double depth(std::size_t ordinal);
    /// Smallest ordinal whose depth exceeds `d`.
    std::size_t first_after(double d);

    std::int64_t neuron() const { return neuron_; }
    StreamKind kind() const { return kind_; }
    double intensity() const { return intensity_; }

private:
    std::int64_t neuron_;
    StreamKind kind_;
    double intensity_;
    CounterStream gaps_;
    std::vector<double> depths_;
};

enum class MembershipChange { None, Joined, Removed };

struct ClanEvent {
    double depth;
    std::int64_t neuron;
    StreamKind kind;
    std::size_t ordinal;
    MembershipChange change;
    std::size_t size_after;
};

enum class ClanStatus { Stopped, CapExceeded };

const char* to_string(ClanStatus status);

struct ClanState {
    std::int64_t root = 0;
    std::set<std::int64_t> members;  // at the end of exploration
    std::vector<ClanEvent> history;  // increasing depth
    std::optional<double> stop_depth;
    std::size_t step_count = 0;
    ClanStatus status = ClanStatus::Stopped;
    std::size_t max_size = 1;

    /// Clan size after each scanned event, preceded by the initial size 1.
    std::vector<std::size_t> size_trajectory() const;
    /// Clan size after each membership change, preceded by 1.
    std::vector<std::size_t> jump_chain() const;
};

/// Backward exploration from `root` on a lattice model. Stops when the clan is empty
/// or after `max_events` scanned events (status CapExceeded).
ClanState backward_clan(const NetworkModel& model, std::int64_t root, std::uint64_t seed,
                        std::size_t max_events = 1'000'000);

struct StationarySample {
    std::int64_t neuron;
    double value;
    std::size_t events_processed;
    std::size_t clan_max_size;
};

/// Uniforms consumed by forward_fill, exposed for independent reconstruction.
double forward_reset_uniform(std::uint64_t seed, std::int64_t neuron, StreamKind kind, std::size_t ordinal);
double forward_coin_uniform(std::uint64_t seed, std::int64_t neuron, std::size_t ordinal);

/// Replays a stopped clan from its deepest event up to depth 0 and returns the root's state.
StationarySample forward_fill(const NetworkModel& model, const ClanState& clan, std::uint64_t seed);

struct SampleRecord {
    std::size_t index;
    ClanStatus status;
    std::size_t events_processed;
    std::size_t clan_max_size;
    std::optional<StationarySample> sample;  // set iff status == Stopped
};

struct SampleSet {
    std::int64_t neuron = 0;
    std::vector<SampleRecord> records;  // ordered by index
    std::size_t capped = 0;

    std::vector<double> values() const;
};

class SubcriticalityError : public std::runtime_error {
public:
    SubcriticalityError(const std::string& what, SampleSet set) : std::runtime_error(what), set_(std::move(set)) {}
    const SampleSet& samples() const noexcept { return set_; }

private:
    SampleSet set_;
};

/// Independent perfect-simulation pipelines; sample s uses seed derive_key(seed, {Sample, s}).
/// Throws SubcriticalityError when more than 1% of the pipelines hit the cap.
SampleSet draw_stationary(const NetworkModel& model, std::int64_t root, std::size_t n_samples, std::uint64_t seed,
                          std::size_t cap = 1'000'000, Exec exec = Exec::Parallel);

/// beta_* / (beta^* - beta_*); +infinity when the bounds coincide.
double delta(double beta_lower, double beta_upper);
double delta(const NetworkModel& model);

struct BranchingReport {
    std::vector<double> birth;  // b_j = sum over in-neighbours k of (beta^*_k - beta_{*k})
    std::vector<double> death;  // d_j = beta_{*j}
    bool subcritical;           // b_j < d_j for every j
    double delta;
    double theorem_extinction;     // min(1, delta)
    double dominating_extinction;  // min(1, d / b) for the per-member birth-death chain
};

/// Lattice models report one translation class; finite models one entry per neuron.
BranchingReport branching_domination_check(const NetworkModel& model);

/// delta + 4 delta^2 + (16 sqrt(delta))^3 / (1 - 16 sqrt(delta)) on 0 < delta < 1/256.
double contour_bound(double delta);

} // namespace inhibnet
