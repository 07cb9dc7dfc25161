#include "inhibnet/spectral.hpp"

#include "inhibnet/errors.hpp"
#include "inhibnet/overloaded.hpp"
#include "inhibnet/pdmp.hpp"
#include "inhibnet/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace inhibnet {

double gamma_sup(const FlowContext& ctx) {
    // beta is nonincreasing and alpha nondecreasing for every registered kind, so the
    // supremum sits at x -> 0+ and equals beta^* / alpha(0) when alpha(0) > 0.
    const double beta_sup = rate_bounds(ctx.rate).upper;
    return std::visit(overloaded{
                          [](const DriftSpec::Linear&) { return std::numeric_limits<double>::infinity(); },
                          [&](const DriftSpec::Constant& d) { return beta_sup / d.level; },
                          [&](const DriftSpec::AffinePlusOne& d) { return beta_sup / d.slope; },
                      },
                      ctx.drift.kind);
}

bool is_irreducible(const NetworkModel& model) {
    const std::size_t n = model.size();
    const auto w = dense_weights(model);  // w[i * n + j] = W_{j -> i}
    auto reaches_all = [&](bool forward) {
        std::vector<char> seen(n, 0);
        std::vector<std::size_t> frontier{0};
        seen[0] = 1;
        std::size_t count = 1;
        while (!frontier.empty()) {
            const std::size_t u = frontier.back();
            frontier.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                const double edge = forward ? w[v * n + u] : w[u * n + v];
                if (edge > 0.0 && !seen[v]) {
                    seen[v] = 1;
                    ++count;
                    frontier.push_back(v);
                }
            }
        }
        return count == n;
    };
    return reaches_all(true) && reaches_all(false);
}

void left_multiply(std::span<const double> h, std::size_t n, std::span<const double> v, std::span<double> y,
                   Exec exec) {
    for_each_index(
        n, exec,
        [&](std::size_t j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += v[i] * h[i * n + j];
            y[j] = acc;
        },
        Schedule::Static);
}

ReproductionMatrix build_H(const NetworkModel& model, const PowerIterationOptions& options) {
    const auto report = validate(model);
    if (!report.ok()) throw ConfigError("invalid model:\n" + report.describe());
    if (model.is_lattice()) throw ConfigError("build_H needs a finite model");

    ReproductionMatrix H;
    const std::size_t n = H.n = model.size();
    H.gamma_sup.resize(n);
    H.reset_mean.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        H.gamma_sup[i] = gamma_sup(flow_context(model, i));
        H.reset_mean[i] = model.reset_of(i).mean();
        if (!std::isfinite(H.gamma_sup[i]))
            throw SpectralError(SpectralError::Code::UnboundedGamma,
                                "gamma is unbounded for neuron index " + std::to_string(i) + " (" +
                                    model.drift_of(i).name() + " drift); spectral analysis does not apply");
    }
    if (!is_irreducible(model))
        throw SpectralError(SpectralError::Code::Reducible, "the weight matrix is reducible");

    const auto w = dense_weights(model);
    H.h.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            H.h[i * n + j] = i == j ? H.gamma_sup[i] * H.reset_mean[i] : w[i * n + j] * H.gamma_sup[i];

    // A positive shift makes the iteration matrix primitive, so periodic H still converges.
    double max_row = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        max_row = std::max(max_row, std::accumulate(H.h.begin() + static_cast<std::ptrdiff_t>(i * n),
                                                    H.h.begin() + static_cast<std::ptrdiff_t>((i + 1) * n), 0.0));
    const double shift = max_row > 0.0 ? 0.5 * max_row : 1.0;

    std::vector<double> v(n, 1.0 / static_cast<double>(n)), y(n);
    bool converged = false;
    for (H.iterations = 1; H.iterations <= options.max_iterations; ++H.iterations) {
        left_multiply(H.h, n, v, y, options.exec);
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += (y[j] += shift * v[j]);
        if (!(total > 0.0) || !std::isfinite(total))
            throw SpectralError(SpectralError::Code::NotFinite, "power iteration produced a non-finite vector");
        double diff = 0.0, scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            y[j] /= total;
            diff = std::max(diff, std::abs(y[j] - v[j]));
            scale = std::max(scale, std::abs(y[j]));
        }
        v.swap(y);
        if (diff <= options.tolerance * scale) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw SpectralError(SpectralError::Code::NotConverged, "power iteration did not converge");

    left_multiply(H.h, n, v, y, options.exec);
    H.rho = std::accumulate(y.begin(), y.end(), 0.0);
    double res = 0.0;
    for (std::size_t j = 0; j < n; ++j) res = std::max(res, std::abs(y[j] - H.rho * v[j]));
    H.residual = H.rho > 0.0 ? res / H.rho : res;
    if (H.residual > 1e-10)
        throw SpectralError(SpectralError::Code::NotConverged,
                            "left eigenvector residual " + std::to_string(H.residual) + " exceeds 1e-10");
    H.kappa = std::move(v);
    H.m.resize(n);
    for (std::size_t i = 0; i < n; ++i) H.m[i] = H.kappa[i] * H.gamma_sup[i];
    return H;
}

LyapunovDrift drift_of_lyapunov(const NetworkModel& model, const ReproductionMatrix& H, std::span<const double> x) {
    const std::size_t n = H.n;
    if (x.size() != n || model.size() != n) throw std::invalid_argument("drift_of_lyapunov: dimension mismatch");
    LyapunovDrift out{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] >= 0.0)) throw std::invalid_argument("drift_of_lyapunov: negative state");
        const double alpha = model.drift_of(i)(x[i]);
        const double beta = model.rate_of(i)(x[i]);
        double sent = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sent += weight(model, static_cast<std::int64_t>(i), static_cast<std::int64_t>(j)) * H.m[j];
        out.exact += -alpha * H.m[i] + beta * (H.m[i] * H.reset_mean[i] + sent) - beta * x[i] * H.m[i];
        // alpha_i * gamma_i(x) = beta_i(x), so the bound needs no division by alpha.
        out.bound += -(alpha * H.gamma_sup[i] * H.kappa[i] - beta * H.rho * H.kappa[i]);
    }
    return out;
}

double lyapunov_value(const ReproductionMatrix& H, std::span<const double> x) {
    return std::inner_product(H.m.begin(), H.m.end(), x.begin(), 0.0);
}

StabilityVerdict non_evanescence_verdict(const ReproductionMatrix& H) {
    return {H.rho < 1.0 - 1e-12 ? Verdict::Stable : Verdict::Inconclusive, H.rho};
}

const char* to_string(Verdict v) { return v == Verdict::Stable ? "Stable" : "Inconclusive"; }

GeneratorEstimate estimate_generator_drift(const NetworkModel& model, const ReproductionMatrix& H,
                                           std::span<const double> x, double h, std::size_t replicas,
                                           std::uint64_t seed, Exec exec) {
    if (!(h > 0.0) || replicas < 2) throw std::invalid_argument("estimate_generator_drift: need h > 0, replicas >= 2");
    const double v0 = lyapunov_value(H, x);
    std::vector<double> increments(replicas);
    for_each_index(
        replicas, exec,
        [&](std::size_t r) {
            const auto xh = state_at_horizon(model, x, h, derive_key(seed, {tag(Purpose::Replica), r}));
            increments[r] = (lyapunov_value(H, xh) - v0) / h;
        },
        Schedule::Static);
    const double mean = std::accumulate(increments.begin(), increments.end(), 0.0) / static_cast<double>(replicas);
    double ss = 0.0;
    for (double d : increments) ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / static_cast<double>(replicas - 1));
    return {mean, sd / std::sqrt(static_cast<double>(replicas)), replicas};
}

} // namespace inhibnet
