#pragma once

#include "inhibnet/model.hpp"

namespace inhibnet {

/// Deterministic inter-jump dynamics of one neuron.
struct FlowContext {
    DriftSpec drift;
    RateSpec rate;
};

/// Solution of dx/dt = -alpha(x) from x after time t, held at 0 once it gets there.
/// Throws std::invalid_argument for negative x or t.
double evolve(const DriftSpec& drift, double x, double t);
inline double evolve(const FlowContext& ctx, double x, double t) { return evolve(ctx.drift, x, t); }

/// t0(x) = integral_0^x dy / alpha(y); +infinity when the flow never reaches 0.
double hit_time_zero(const DriftSpec& drift, double x);

/// Time for the flow started at x to decrease to `level` (0 when x <= level).
double hit_time_level(const DriftSpec& drift, double x, double level);

/// gamma(x) = beta(x) / alpha(x).
double gamma(const FlowContext& ctx, double x);

/// Whether Gamma(0) = -infinity, i.e. integral_{0+} gamma diverges. Decided from an analytic
/// table over (drift, rate); throws UndecidableError where the table has no answer.
bool assumption1_holds(const FlowContext& ctx);

/// Conjunction over every neuron of a finite model.
bool assumption1_holds(const NetworkModel& model);

struct IntegratedRate {
    double value = 0.0;
    bool quadrature = false;  // true when the closed form was unavailable
};

/// integral_0^t beta(x_s(x)) ds.
IntegratedRate integrated_rate(const FlowContext& ctx, double x, double t);

struct SurvivalResult {
    double probability = 1.0;
    bool quadrature = false;
};

/// P(S_1 > t) for the first jump of any neuron, started from model.initial_state.
SurvivalResult first_jump_survival(const NetworkModel& model, double t);

FlowContext flow_context(const NetworkModel& model, std::size_t neuron);

} // namespace inhibnet
