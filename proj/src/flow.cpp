#include "inhibnet/flow.hpp"

#include "inhibnet/errors.hpp"
#include "inhibnet/overloaded.hpp"
#include "inhibnet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace inhibnet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadratureTolerance = 1e-10;
constexpr std::size_t kQuadratureBudget = 1'000'000;
} // namespace

double evolve(const DriftSpec& drift, double x, double t) {
    if (!(x >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("evolve: x and t must be nonnegative");
    if (t == 0.0) return x;
    return std::visit(overloaded{
                          [&](const DriftSpec::Linear& d) { return x * std::exp(-d.slope * t); },
                          [&](const DriftSpec::Constant& d) { return std::max(x - d.level * t, 0.0); },
                          [&](const DriftSpec::AffinePlusOne& d) {
                              return std::max((1.0 + x) * std::exp(-d.slope * t) - 1.0, 0.0);
                          },
                      },
                      drift.kind);
}

double hit_time_zero(const DriftSpec& drift, double x) {
    if (!(x > 0.0)) throw std::invalid_argument("hit_time_zero: x must be positive");
    return std::visit(overloaded{
                          [](const DriftSpec::Linear&) { return kInf; },
                          [&](const DriftSpec::Constant& d) { return x / d.level; },
                          [&](const DriftSpec::AffinePlusOne& d) { return std::log1p(x) / d.slope; },
                      },
                      drift.kind);
}

double hit_time_level(const DriftSpec& drift, double x, double level) {
    if (x <= level) return 0.0;
    if (level <= 0.0) return hit_time_zero(drift, x);
    return std::visit(overloaded{
                          [&](const DriftSpec::Linear& d) { return std::log(x / level) / d.slope; },
                          [&](const DriftSpec::Constant& d) { return (x - level) / d.level; },
                          [&](const DriftSpec::AffinePlusOne& d) {
                              return std::log((1.0 + x) / (1.0 + level)) / d.slope;
                          },
                      },
                      drift.kind);
}

double gamma(const FlowContext& ctx, double x) { return ctx.rate(x) / ctx.drift(x); }

bool assumption1_holds(const FlowContext& ctx) {
    // Every registered rate is bounded above and below near 0, so divergence of
    // integral_{0+} beta / alpha is governed by 1 / alpha alone.
    const RateBounds b = rate_bounds(ctx.rate);
    if (!(b.lower > 0.0) || !std::isfinite(b.upper))
        throw UndecidableError("assumption1_holds: rate is not bounded away from 0 and infinity");
    return std::visit(overloaded{
                          [](const DriftSpec::Linear&) { return true; },
                          [](const DriftSpec::Constant&) { return false; },
                          [](const DriftSpec::AffinePlusOne&) { return false; },
                      },
                      ctx.drift.kind);
}

bool assumption1_holds(const NetworkModel& model) {
    for (std::size_t i = 0; i < model.size(); ++i)
        if (!assumption1_holds(flow_context(model, i))) return false;
    return true;
}

IntegratedRate integrated_rate(const FlowContext& ctx, double x, double t) {
    if (!(t >= 0.0) || !(x >= 0.0)) throw std::invalid_argument("integrated_rate: x and t must be nonnegative");
    if (t == 0.0) return {};
    const auto quadrature = [&] {
        const auto q = adaptive_simpson([&](double s) { return ctx.rate(evolve(ctx.drift, x, s)); }, 0.0, t,
                                        kQuadratureTolerance, kQuadratureBudget);
        return IntegratedRate{q.value, true};
    };
    return std::visit(overloaded{
                          [&](const RateSpec::Constant& r) { return IntegratedRate{r.b * t, false}; },
                          [&](const RateSpec::Step& r) {
                              // The flow is nonincreasing, so beta switches to base + boost exactly once.
                              const double crossing = hit_time_level(ctx.drift, x, r.threshold);
                              const double boosted = std::max(0.0, t - crossing);
                              return IntegratedRate{r.base * t + r.boost * boosted, false};
                          },
                          [&](const RateSpec::ExpDecay& r) {
                              if (const auto* d = std::get_if<DriftSpec::Constant>(&ctx.drift.kind)) {
                                  const double t0 = x / d->level;
                                  const double moving = std::min(t, t0);
                                  const double ca = r.scale * d->level;
                                  double value = r.floor * t +
                                                 r.amplitude * std::exp(-r.scale * x) * std::expm1(ca * moving) / ca;
                                  value += r.amplitude * std::max(0.0, t - t0);
                                  return IntegratedRate{value, false};
                              }
                              return quadrature();
                          },
                      },
                      ctx.rate.kind);
}

FlowContext flow_context(const NetworkModel& model, std::size_t neuron) {
    return {model.drift_of(neuron), model.rate_of(neuron)};
}

SurvivalResult first_jump_survival(const NetworkModel& model, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("first_jump_survival: t must be nonnegative");
    const std::size_t n = model.size();
    if (model.initial_state.size() != n) throw std::invalid_argument("first_jump_survival: initial_state size");
    SurvivalResult out;
    double exponent = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = integrated_rate(flow_context(model, i), model.initial_state[i], t);
        exponent += r.value;
        out.quadrature = out.quadrature || r.quadrature;
    }
    out.probability = std::exp(-exponent);
    return out;
}

} // namespace inhibnet
