#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace inhibnet {

/// Drift alpha of the decay flow dx/dt = -alpha(x).
struct DriftSpec {
    struct Linear { double slope; };          // alpha(x) = slope * x
    struct Constant { double level; };        // alpha(x) = level
    struct AffinePlusOne { double slope; };   // alpha(x) = slope * (1 + x)

    std::variant<Linear, Constant, AffinePlusOne> kind;

    double operator()(double x) const;
    double parameter() const;
    std::string name() const;
};

/// Nonincreasing, bounded spiking rate beta.
struct RateSpec {
    struct Constant { double b; };
    /// beta(x) = base + boost * 1{x <= threshold}
    struct Step { double base; double boost; double threshold; };
    /// beta(x) = floor + amplitude * exp(-scale * x)
    struct ExpDecay { double floor; double amplitude; double scale; };

    std::variant<Constant, Step, ExpDecay> kind;

    double operator()(double x) const;
    std::string name() const;
};

struct RateBounds {
    double lower;  // beta_* = inf beta
    double upper;  // beta^* = sup beta
};

RateBounds rate_bounds(const RateSpec& rate);

/// Law F of the post-spike state. Every entry has an analytic mean.
struct ResetSpec {
    struct Exponential { double rate; };
    struct Uniform { double lo; double hi; };
    struct Discrete { std::vector<double> atoms; std::vector<double> probs; };

    std::variant<Exponential, Uniform, Discrete> kind;

    double mean() const;
    /// Inverse-CDF draw from a uniform u in (0, 1).
    double sample(double u) const;
    std::string name() const;
};

/// Inhibition weights. `weight(from, to)` is W_{from -> to}.
struct WeightStructure {
    /// matrix[i][j] = W_{j -> i}: row is the receiving neuron.
    struct Explicit { std::vector<std::vector<double>> matrix; };
    struct MeanField { double theta; };
    /// Ring of n >= 3 neurons, each inhibiting its two neighbours.
    struct Torus { double theta; };
    /// Integer lattice, W_{j -> i} = w when |i - j| = 1.
    struct NearestNeighborZ { double w; };
    /// Translation-invariant finite-range lattice weights: W_{j -> j + offsets[k]} = weights[k].
    struct Stencil { std::vector<std::int64_t> offsets; std::vector<double> weights; };

    std::variant<Explicit, MeanField, Torus, NearestNeighborZ, Stencil> kind;

    bool lattice_kind() const;
    std::string name() const;
};

/// Full parameterization. Per-neuron spec vectors hold either one shared entry or n entries.
struct NetworkModel {
    std::optional<std::size_t> n;  // unset on the lattice
    bool lattice = false;
    std::vector<DriftSpec> drift;
    std::vector<RateSpec> rate;
    std::vector<ResetSpec> reset;
    WeightStructure weights;
    std::vector<double> initial_state;
    std::optional<std::uint64_t> seed;

    bool is_lattice() const { return lattice; }
    /// Neuron count of a finite model; throws std::logic_error on the lattice.
    std::size_t size() const;

    const DriftSpec& drift_of(std::size_t i) const { return drift.size() == 1 ? drift[0] : drift.at(i); }
    const RateSpec& rate_of(std::size_t i) const { return rate.size() == 1 ? rate[0] : rate.at(i); }
    const ResetSpec& reset_of(std::size_t i) const { return reset.size() == 1 ? reset[0] : reset.at(i); }
};

struct Violation {
    std::string code;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(const std::string& code) const;
    std::string describe() const;
};

ValidationReport validate(const NetworkModel& model);

/// W_{from -> to}. Finite models range-check both indices (std::out_of_range).
double weight(const NetworkModel& model, std::int64_t from, std::int64_t to);

/// Global (beta_*, beta^*) over all neurons.
RateBounds model_rate_bounds(const NetworkModel& model);

/// Lattice neighbourhoods as (neuron, weight) pairs with nonzero weight.
std::vector<std::pair<std::int64_t, double>> lattice_in_neighbors(const WeightStructure& w, std::int64_t site);
std::vector<std::pair<std::int64_t, double>> lattice_out_neighbors(const WeightStructure& w, std::int64_t site);

/// Dense receive-major weight matrix of a finite model: out[i * n + j] = W_{j -> i}.
std::vector<double> dense_weights(const NetworkModel& model);

} // namespace inhibnet
