#pragma once

#include "inhibnet/model.hpp"
#include "inhibnet/parallel.hpp"
#include "inhibnet/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace inhibnet {

enum class Label { Sure, Uncertain };

struct EventRecord {
    double time = 0.0;
    std::size_t neuron = 0;
    Label label = Label::Sure;
    bool accepted = false;
    std::optional<double> reset_value;  // present iff accepted

    friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

struct Trajectory {
    std::vector<double> initial_state;
    std::vector<EventRecord> events;
    std::vector<std::vector<double>> states;  // post-event state per event

    double elapsed() const { return events.empty() ? 0.0 : events.back().time; }
    std::size_t accepted_count() const;
    std::size_t accepted_count(std::size_t neuron) const;
};

/// Event-by-event thinning simulation of a finite network.
///
/// Proposals arrive at rate beta^* N. Each is Sure with probability beta_* / beta^*;
/// an Uncertain proposal on neuron k is accepted with probability
/// (beta_k(x) - beta_*) / (beta^* - beta_*) at the flowed state. Each random input has
/// its own Philox substream keyed by (seed, purpose) and indexed by the proposal count,
/// so runs are bit-reproducible.
///
/// The simulator keeps a reference to `model`; the model must outlive it.
class ThinningSimulator {
public:
    ThinningSimulator(const NetworkModel& model, std::vector<double> initial_state, std::uint64_t seed);

    /// Absolute time of the next proposal (drawn lazily, stable across calls).
    double next_event_time() const;
    EventRecord step();

    double time() const { return time_; }
    std::span<const double> state() const { return state_; }
    std::uint64_t proposals() const { return index_; }
    /// State at absolute time t with time() <= t <= next_event_time().
    std::vector<double> state_at(double t) const;

    RateBounds bounds() const { return bounds_; }

private:
    const NetworkModel& model_;
    std::size_t n_;
    RateBounds bounds_;
    double sure_probability_;
    std::vector<double> weights_;  // weights_[k * n + j] = W_{k -> j}
    std::vector<double> state_;
    double time_ = 0.0;
    std::uint64_t index_ = 0;
    CounterStream gaps_, labels_, neurons_, coins_, resets_;
};

/// Validates the model (ConfigError) and runs exactly n_events proposals.
Trajectory simulate(const NetworkModel& model, std::size_t n_events, std::uint64_t seed);

/// Accepted events of `neuron` per unit of simulated time.
double empirical_jump_rate(const Trajectory& traj, std::size_t neuron);

/// Time of the first accepted jump (of any neuron) in `runs` independent runs from
/// model.initial_state. Run r uses seed derive_key(seed, {Run, r}).
std::vector<double> first_accepted_jump_times(const NetworkModel& model, std::size_t runs, std::uint64_t seed,
                                              Exec exec = Exec::Parallel);

struct TimeAverageOptions {
    std::size_t neuron = 0;
    std::size_t runs = 1;
    std::size_t samples_per_run = 1;
    double burn_in = 0.0;
    double spacing = 1.0;
};

/// State of one neuron read at times burn_in + k * spacing in each of several runs.
/// The output is run-major: samples of run r occupy [r * samples_per_run, (r + 1) * samples_per_run).
std::vector<double> time_average_samples(const NetworkModel& model, const TimeAverageOptions& options,
                                         std::uint64_t seed, Exec exec = Exec::Parallel);

/// State vector at time `horizon` starting from x.
std::vector<double> state_at_horizon(const NetworkModel& model, std::span<const double> x, double horizon,
                                     std::uint64_t seed);

} // namespace inhibnet
