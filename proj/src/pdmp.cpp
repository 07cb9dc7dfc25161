#include "inhibnet/pdmp.hpp"

#include "inhibnet/errors.hpp"
#include "inhibnet/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace inhibnet {

std::size_t Trajectory::accepted_count() const {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [](const EventRecord& e) { return e.accepted; }));
}

std::size_t Trajectory::accepted_count(std::size_t neuron) const {
    return static_cast<std::size_t>(std::count_if(
        events.begin(), events.end(), [neuron](const EventRecord& e) { return e.accepted && e.neuron == neuron; }));
}

namespace {
void require_finite_valid(const NetworkModel& model) {
    const auto report = validate(model);
    if (!report.ok()) throw ConfigError("invalid model:\n" + report.describe());
    if (model.is_lattice()) throw ConfigError("the thinning simulator needs a finite model");
}
} // namespace

ThinningSimulator::ThinningSimulator(const NetworkModel& model, std::vector<double> initial_state, std::uint64_t seed)
    : model_(model),
      n_(model.size()),
      bounds_(model_rate_bounds(model)),
      sure_probability_(bounds_.lower / bounds_.upper),
      state_(std::move(initial_state)),
      gaps_(derive_key(seed, {tag(Purpose::ProposalGap)})),
      labels_(derive_key(seed, {tag(Purpose::ProposalLabel)})),
      neurons_(derive_key(seed, {tag(Purpose::ProposalNeuron)})),
      coins_(derive_key(seed, {tag(Purpose::AcceptanceCoin)})),
      resets_(derive_key(seed, {tag(Purpose::ResetDraw)})) {
    if (state_.size() != n_) throw std::invalid_argument("ThinningSimulator: state size differs from n");
    weights_.assign(n_ * n_, 0.0);
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t j = 0; j < n_; ++j)
            weights_[k * n_ + j] = weight(model, static_cast<std::int64_t>(k), static_cast<std::int64_t>(j));
}

double ThinningSimulator::next_event_time() const {
    const double total_rate = bounds_.upper * static_cast<double>(n_);
    const double gap = -std::log(gaps_.uniform(index_)) / total_rate;
    const double t = time_ + gap;
    return t > time_ ? t : std::nextafter(time_, std::numeric_limits<double>::infinity());
}

EventRecord ThinningSimulator::step() {
    const double t = next_event_time();
    const double gap = t - time_;
    for (std::size_t j = 0; j < n_; ++j) state_[j] = evolve(model_.drift_of(j), state_[j], gap);

    EventRecord ev;
    ev.time = t;
    ev.label = labels_.uniform(index_) < sure_probability_ ? Label::Sure : Label::Uncertain;
    ev.neuron = std::min(static_cast<std::size_t>(neurons_.uniform(index_) * static_cast<double>(n_)), n_ - 1);

    const std::size_t k = ev.neuron;
    if (ev.label == Label::Sure) {
        ev.accepted = true;
    } else {
        const double p = (model_.rate_of(k)(state_[k]) - bounds_.lower) / (bounds_.upper - bounds_.lower);
        ev.accepted = coins_.uniform(index_) < p;
    }
    if (ev.accepted) {
        const double y = model_.reset_of(k).sample(resets_.uniform(index_));
        const double* w = weights_.data() + k * n_;
        for (std::size_t j = 0; j < n_; ++j) state_[j] += w[j];
        state_[k] = y;
        ev.reset_value = y;
    }
    time_ = t;
    ++index_;
    return ev;
}

std::vector<double> ThinningSimulator::state_at(double t) const {
    if (t < time_) throw std::invalid_argument("state_at: time precedes the last event");
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = evolve(model_.drift_of(j), state_[j], t - time_);
    return out;
}

Trajectory simulate(const NetworkModel& model, std::size_t n_events, std::uint64_t seed) {
    require_finite_valid(model);
    if (n_events == 0) throw std::invalid_argument("simulate: n_events must be at least 1");
    ThinningSimulator sim(model, model.initial_state, seed);
    Trajectory traj;
    traj.initial_state = model.initial_state;
    traj.events.reserve(n_events);
    traj.states.reserve(n_events);
    for (std::size_t e = 0; e < n_events; ++e) {
        traj.events.push_back(sim.step());
        traj.states.emplace_back(sim.state().begin(), sim.state().end());
    }
    return traj;
}

double empirical_jump_rate(const Trajectory& traj, std::size_t neuron) {
    if (traj.events.empty()) throw std::invalid_argument("empirical_jump_rate: empty trajectory");
    const double elapsed = traj.elapsed();
    if (!(elapsed > 0.0)) throw std::invalid_argument("empirical_jump_rate: zero elapsed time");
    return static_cast<double>(traj.accepted_count(neuron)) / elapsed;
}

std::vector<double> first_accepted_jump_times(const NetworkModel& model, std::size_t runs, std::uint64_t seed,
                                              Exec exec) {
    require_finite_valid(model);
    std::vector<double> out(runs);
    for_each_index(
        runs, exec,
        [&](std::size_t r) {
            ThinningSimulator sim(model, model.initial_state, derive_key(seed, {tag(Purpose::Run), r}));
            for (;;) {
                const auto ev = sim.step();
                if (ev.accepted) {
                    out[r] = ev.time;
                    return;
                }
            }
        },
        Schedule::Static);
    return out;
}

std::vector<double> time_average_samples(const NetworkModel& model, const TimeAverageOptions& opt,
                                         std::uint64_t seed, Exec exec) {
    require_finite_valid(model);
    if (opt.neuron >= model.size()) throw std::out_of_range("time_average_samples: neuron index");
    if (!(opt.spacing > 0.0) || !(opt.burn_in >= 0.0))
        throw std::invalid_argument("time_average_samples: need spacing > 0 and burn_in >= 0");
    std::vector<double> out(opt.runs * opt.samples_per_run);
    const DriftSpec& drift = model.drift_of(opt.neuron);
    for_each_index(
        opt.runs, exec,
        [&](std::size_t r) {
            ThinningSimulator sim(model, model.initial_state, derive_key(seed, {tag(Purpose::Run), r}));
            for (std::size_t k = 0; k < opt.samples_per_run; ++k) {
                const double t = opt.burn_in + static_cast<double>(k) * opt.spacing;
                while (sim.next_event_time() <= t) sim.step();
                out[r * opt.samples_per_run + k] = evolve(drift, sim.state()[opt.neuron], t - sim.time());
            }
        },
        Schedule::Static);
    return out;
}

std::vector<double> state_at_horizon(const NetworkModel& model, std::span<const double> x, double horizon,
                                     std::uint64_t seed) {
    ThinningSimulator sim(model, std::vector<double>(x.begin(), x.end()), seed);
    while (sim.next_event_time() <= horizon) sim.step();
    return sim.state_at(horizon);
}

} // namespace inhibnet
