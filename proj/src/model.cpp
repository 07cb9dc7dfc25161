#include "inhibnet/model.hpp"

#include "inhibnet/overloaded.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace inhibnet {

double DriftSpec::operator()(double x) const {
    return std::visit(overloaded{
                          [x](const Linear& d) { return d.slope * x; },
                          [](const Constant& d) { return d.level; },
                          [x](const AffinePlusOne& d) { return d.slope * (1.0 + x); },
                      },
                      kind);
}

double DriftSpec::parameter() const {
    return std::visit(overloaded{
                          [](const Linear& d) { return d.slope; },
                          [](const Constant& d) { return d.level; },
                          [](const AffinePlusOne& d) { return d.slope; },
                      },
                      kind);
}

std::string DriftSpec::name() const {
    static constexpr const char* names[] = {"linear", "constant", "affine_plus_one"};
    return names[kind.index()];
}

double RateSpec::operator()(double x) const {
    return std::visit(overloaded{
                          [](const Constant& r) { return r.b; },
                          [x](const Step& r) { return r.base + (x <= r.threshold ? r.boost : 0.0); },
                          [x](const ExpDecay& r) { return r.floor + r.amplitude * std::exp(-r.scale * x); },
                      },
                      kind);
}

std::string RateSpec::name() const {
    static constexpr const char* names[] = {"constant", "step", "exp_decay"};
    return names[kind.index()];
}

RateBounds rate_bounds(const RateSpec& rate) {
    return std::visit(overloaded{
                          [](const RateSpec::Constant& r) { return RateBounds{r.b, r.b}; },
                          [](const RateSpec::Step& r) { return RateBounds{r.base, r.base + r.boost}; },
                          [](const RateSpec::ExpDecay& r) { return RateBounds{r.floor, r.floor + r.amplitude}; },
                      },
                      rate.kind);
}

double ResetSpec::mean() const {
    return std::visit(overloaded{
                          [](const Exponential& f) { return 1.0 / f.rate; },
                          [](const Uniform& f) { return 0.5 * (f.lo + f.hi); },
                          [](const Discrete& f) {
                              return std::inner_product(f.atoms.begin(), f.atoms.end(), f.probs.begin(), 0.0);
                          },
                      },
                      kind);
}

double ResetSpec::sample(double u) const {
    return std::visit(overloaded{
                          [u](const Exponential& f) { return -std::log1p(-u) / f.rate; },
                          [u](const Uniform& f) { return f.lo + u * (f.hi - f.lo); },
                          [u](const Discrete& f) {
                              double acc = 0.0;
                              for (std::size_t k = 0; k + 1 < f.atoms.size(); ++k) {
                                  acc += f.probs[k];
                                  if (u < acc) return f.atoms[k];
                              }
                              return f.atoms.back();
                          },
                      },
                      kind);
}

std::string ResetSpec::name() const {
    static constexpr const char* names[] = {"exponential", "uniform", "discrete"};
    return names[kind.index()];
}

bool WeightStructure::lattice_kind() const {
    return std::holds_alternative<NearestNeighborZ>(kind) || std::holds_alternative<Stencil>(kind);
}

std::string WeightStructure::name() const {
    static constexpr const char* names[] = {"explicit", "mean_field", "torus", "nearest_neighbor", "stencil"};
    return names[kind.index()];
}

std::size_t NetworkModel::size() const {
    if (lattice || !n) throw std::logic_error("size() is undefined on the lattice");
    return *n;
}

bool ValidationReport::has(const std::string& code) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::describe() const {
    std::ostringstream os;
    for (const auto& v : violations) os << v.code << ": " << v.message << '\n';
    return os.str();
}

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }
bool nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

void check_drift(const DriftSpec& d, std::vector<Violation>& out) {
    if (!positive(d.parameter())) out.push_back({"drift.parameter", d.name() + " drift parameter must be positive"});
}

void check_rate(const RateSpec& r, std::vector<Violation>& out) {
    const bool ok = std::visit(overloaded{
                                   [](const RateSpec::Constant& c) { return positive(c.b); },
                                   [](const RateSpec::Step& s) {
                                       return positive(s.base) && nonneg(s.boost) && positive(s.threshold);
                                   },
                                   [](const RateSpec::ExpDecay& e) {
                                       return positive(e.floor) && nonneg(e.amplitude) && positive(e.scale);
                                   },
                               },
                               r.kind);
    if (!ok) out.push_back({"rate.parameter", r.name() + " rate parameters out of range"});
}

void check_reset(const ResetSpec& f, std::vector<Violation>& out) {
    std::visit(overloaded{
                   [&](const ResetSpec::Exponential& e) {
                       if (!positive(e.rate)) out.push_back({"reset.parameter", "exponential rate must be positive"});
                   },
                   [&](const ResetSpec::Uniform& u) {
                       if (!nonneg(u.lo) || !std::isfinite(u.hi) || !(u.hi > u.lo))
                           out.push_back({"reset.parameter", "uniform reset needs 0 <= lo < hi"});
                   },
                   [&](const ResetSpec::Discrete& d) {
                       if (d.atoms.empty() || d.atoms.size() != d.probs.size()) {
                           out.push_back({"reset.parameter", "discrete reset needs matching nonempty atoms and probs"});
                           return;
                       }
                       if (!std::all_of(d.atoms.begin(), d.atoms.end(), nonneg))
                           out.push_back({"reset.parameter", "discrete atoms must be nonnegative"});
                       const bool probs_nonneg = std::all_of(d.probs.begin(), d.probs.end(), nonneg);
                       const double total = std::accumulate(d.probs.begin(), d.probs.end(), 0.0);
                       if (!probs_nonneg || std::abs(total - 1.0) > 1e-12)
                           out.push_back({"reset.simplex", "discrete probs not a simplex"});
                   },
               },
               f.kind);
}

bool same_drift(const DriftSpec& a, const DriftSpec& b) {
    return a.kind.index() == b.kind.index() && a.parameter() == b.parameter();
}

bool same_rate(const RateSpec& a, const RateSpec& b) {
    if (a.kind.index() != b.kind.index()) return false;
    return std::visit(overloaded{
                          [&](const RateSpec::Constant& x) { return x.b == std::get<RateSpec::Constant>(b.kind).b; },
                          [&](const RateSpec::Step& x) {
                              const auto& y = std::get<RateSpec::Step>(b.kind);
                              return x.base == y.base && x.boost == y.boost && x.threshold == y.threshold;
                          },
                          [&](const RateSpec::ExpDecay& x) {
                              const auto& y = std::get<RateSpec::ExpDecay>(b.kind);
                              return x.floor == y.floor && x.amplitude == y.amplitude && x.scale == y.scale;
                          },
                      },
                      a.kind);
}

bool same_reset(const ResetSpec& a, const ResetSpec& b) {
    if (a.kind.index() != b.kind.index()) return false;
    return std::visit(overloaded{
                          [&](const ResetSpec::Exponential& x) {
                              return x.rate == std::get<ResetSpec::Exponential>(b.kind).rate;
                          },
                          [&](const ResetSpec::Uniform& x) {
                              const auto& y = std::get<ResetSpec::Uniform>(b.kind);
                              return x.lo == y.lo && x.hi == y.hi;
                          },
                          [&](const ResetSpec::Discrete& x) {
                              const auto& y = std::get<ResetSpec::Discrete>(b.kind);
                              return x.atoms == y.atoms && x.probs == y.probs;
                          },
                      },
                      a.kind);
}

template <class Spec, class Eq>
bool homogeneous(const std::vector<Spec>& specs, Eq eq) {
    return std::all_of(specs.begin(), specs.end(), [&](const Spec& s) { return eq(s, specs.front()); });
}

void check_weights_finite(const NetworkModel& m, std::vector<Violation>& out) {
    const std::size_t n = *m.n;
    std::visit(overloaded{
                   [&](const WeightStructure::Explicit& e) {
                       if (e.matrix.size() != n ||
                           std::any_of(e.matrix.begin(), e.matrix.end(), [n](const auto& row) { return row.size() != n; })) {
                           out.push_back({"weights.shape", "explicit matrix must be n x n"});
                           return;
                       }
                       bool negative = false;
                       bool diagonal = false;
                       for (std::size_t i = 0; i < n; ++i) {
                           for (std::size_t j = 0; j < n; ++j) {
                               if (!nonneg(e.matrix[i][j])) negative = true;
                               if (i == j && e.matrix[i][j] != 0.0) diagonal = true;
                           }
                       }
                       if (negative) out.push_back({"weights.negative", "weights must be nonnegative"});
                       if (diagonal) out.push_back({"weights.diagonal", "diagonal weights must be zero"});
                   },
                   [&](const WeightStructure::MeanField& w) {
                       if (!nonneg(w.theta)) out.push_back({"weights.negative", "theta must be nonnegative"});
                   },
                   [&](const WeightStructure::Torus& w) {
                       if (!nonneg(w.theta)) out.push_back({"weights.negative", "theta must be nonnegative"});
                       if (n < 3) out.push_back({"weights.torus_size", "torus requires N >= 3"});
                   },
                   [&](const WeightStructure::NearestNeighborZ&) {
                       out.push_back({"weights.topology", "nearest_neighbor weights require the lattice"});
                   },
                   [&](const WeightStructure::Stencil&) {
                       out.push_back({"weights.topology", "stencil weights require the lattice"});
                   },
               },
               m.weights.kind);
}

void check_weights_lattice(const NetworkModel& m, std::vector<Violation>& out) {
    std::visit(overloaded{
                   [&](const WeightStructure::NearestNeighborZ& w) {
                       if (!nonneg(w.w)) out.push_back({"weights.negative", "w must be nonnegative"});
                   },
                   [&](const WeightStructure::Stencil& s) {
                       if (s.offsets.size() != s.weights.size() || s.offsets.empty()) {
                           out.push_back({"weights.shape", "stencil needs matching nonempty offsets and weights"});
                           return;
                       }
                       if (std::find(s.offsets.begin(), s.offsets.end(), 0) != s.offsets.end())
                           out.push_back({"weights.diagonal", "stencil offset 0 would be a self weight"});
                       if (!std::all_of(s.weights.begin(), s.weights.end(), nonneg))
                           out.push_back({"weights.negative", "weights must be nonnegative"});
                       auto sorted = s.offsets;
                       std::sort(sorted.begin(), sorted.end());
                       if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                           out.push_back({"weights.shape", "stencil offsets must be distinct"});
                   },
                   [&](const auto&) {
                       out.push_back({"lattice.weights", "the lattice needs nearest_neighbor or stencil weights"});
                   },
               },
               m.weights.kind);
}

} // namespace

ValidationReport validate(const NetworkModel& m) {
    ValidationReport report;
    auto& out = report.violations;

    if (m.lattice && m.n) out.push_back({"model.size", "give either n or lattice, not both"});
    if (!m.lattice && (!m.n || *m.n == 0)) out.push_back({"model.size", "finite model needs n >= 1"});

    if (m.drift.empty() || m.rate.empty() || m.reset.empty()) {
        out.push_back({"model.spec_count", "drift, rate and reset are required"});
        return report;
    }
    for (const auto& d : m.drift) check_drift(d, out);
    for (const auto& r : m.rate) check_rate(r, out);
    for (const auto& f : m.reset) check_reset(f, out);

    if (m.lattice) {
        if (!homogeneous(m.drift, same_drift) || !homogeneous(m.rate, same_rate) || !homogeneous(m.reset, same_reset))
            out.push_back({"lattice.heterogeneous", "the lattice requires homogeneous drift, rate and reset"});
        check_weights_lattice(m, out);
        return report;
    }
    if (!m.n || *m.n == 0) return report;

    const std::size_t n = *m.n;
    auto count_ok = [n](std::size_t c) { return c == 1 || c == n; };
    if (!count_ok(m.drift.size()) || !count_ok(m.rate.size()) || !count_ok(m.reset.size()))
        out.push_back({"model.spec_count", "per-neuron spec lists must have 1 or n entries"});
    check_weights_finite(m, out);
    if (m.initial_state.size() != n)
        out.push_back({"initial_state.length", "initial_state length must equal n"});
    if (!std::all_of(m.initial_state.begin(), m.initial_state.end(), nonneg))
        out.push_back({"initial_state.negative", "initial_state entries must be nonnegative"});
    return report;
}

double weight(const NetworkModel& m, std::int64_t from, std::int64_t to) {
    if (!m.lattice) {
        const auto n = static_cast<std::int64_t>(m.size());
        if (from < 0 || from >= n || to < 0 || to >= n) throw std::out_of_range("neuron index out of range");
    }
    if (from == to) return 0.0;
    return std::visit(overloaded{
                          [&](const WeightStructure::Explicit& e) {
                              return e.matrix[static_cast<std::size_t>(to)][static_cast<std::size_t>(from)];
                          },
                          [](const WeightStructure::MeanField& w) { return w.theta; },
                          [&](const WeightStructure::Torus& w) {
                              const auto n = static_cast<std::int64_t>(m.size());
                              const std::int64_t d = ((to - from) % n + n) % n;
                              return (d == 1 || d == n - 1) ? w.theta : 0.0;
                          },
                          [&](const WeightStructure::NearestNeighborZ& w) {
                              return (to - from == 1 || from - to == 1) ? w.w : 0.0;
                          },
                          [&](const WeightStructure::Stencil& s) {
                              for (std::size_t k = 0; k < s.offsets.size(); ++k)
                                  if (from + s.offsets[k] == to) return s.weights[k];
                              return 0.0;
                          },
                      },
                      m.weights.kind);
}

RateBounds model_rate_bounds(const NetworkModel& m) {
    RateBounds b = rate_bounds(m.rate.front());
    for (const auto& r : m.rate) {
        const auto rb = rate_bounds(r);
        b.lower = std::min(b.lower, rb.lower);
        b.upper = std::max(b.upper, rb.upper);
    }
    return b;
}

std::vector<std::pair<std::int64_t, double>> lattice_out_neighbors(const WeightStructure& w, std::int64_t site) {
    std::vector<std::pair<std::int64_t, double>> out;
    std::visit(overloaded{
                   [&](const WeightStructure::NearestNeighborZ& nn) {
                       if (nn.w > 0.0) out = {{site - 1, nn.w}, {site + 1, nn.w}};
                   },
                   [&](const WeightStructure::Stencil& s) {
                       for (std::size_t k = 0; k < s.offsets.size(); ++k)
                           if (s.weights[k] > 0.0) out.emplace_back(site + s.offsets[k], s.weights[k]);
                   },
                   [](const auto&) { throw std::logic_error("lattice neighbourhoods need lattice weights"); },
               },
               w.kind);
    return out;
}

std::vector<std::pair<std::int64_t, double>> lattice_in_neighbors(const WeightStructure& w, std::int64_t site) {
    std::vector<std::pair<std::int64_t, double>> in;
    std::visit(overloaded{
                   [&](const WeightStructure::NearestNeighborZ& nn) {
                       if (nn.w > 0.0) in = {{site - 1, nn.w}, {site + 1, nn.w}};
                   },
                   [&](const WeightStructure::Stencil& s) {
                       for (std::size_t k = 0; k < s.offsets.size(); ++k)
                           if (s.weights[k] > 0.0) in.emplace_back(site - s.offsets[k], s.weights[k]);
                   },
                   [](const auto&) { throw std::logic_error("lattice neighbourhoods need lattice weights"); },
               },
               w.kind);
    return in;
}

std::vector<double> dense_weights(const NetworkModel& m) {
    const std::size_t n = m.size();
    std::vector<double> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out[i * n + j] = weight(m, static_cast<std::int64_t>(j), static_cast<std::int64_t>(i));
    return out;
}

} // namespace inhibnet
