#pragma once

#include "inhibnet/flow.hpp"
#include "inhibnet/model.hpp"
#include "inhibnet/parallel.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace inhibnet {

/// sup_{x > 0} beta(x) / alpha(x), from an analytic per-kind table. +infinity when unbounded.
double gamma_sup(const FlowContext& ctx);

/// Reproduction matrix with its Perron data.
///   H_ij = W_{j -> i} * |gamma_i|_inf   (i != j)
///   H_ii = |gamma_i|_inf * E[Y^i]
struct ReproductionMatrix {
    std::size_t n = 0;
    std::vector<double> h;  // row-major
    std::vector<double> gamma_sup;
    std::vector<double> reset_mean;
    double rho = 0.0;
    std::vector<double> kappa;  // left Perron vector, sums to 1
    std::vector<double> m;      // Lyapunov weights kappa_i * |gamma_i|_inf
    std::size_t iterations = 0;
    double residual = 0.0;      // |kappa H - rho kappa|_inf / rho

    double at(std::size_t i, std::size_t j) const { return h[i * n + j]; }
};

/// Strong connectivity of the digraph j -> i with edges where W_{j -> i} > 0.
bool is_irreducible(const NetworkModel& model);

struct PowerIterationOptions {
    double tolerance = 1e-12;
    std::size_t max_iterations = 100'000;
    Exec exec = Exec::Serial;
};

/// y = v H, computed column by column.
void left_multiply(std::span<const double> h, std::size_t n, std::span<const double> v, std::span<double> y,
                   Exec exec);

/// Builds H and finds (rho, kappa) by power iteration on H^T.
/// Throws SpectralError for unbounded gamma, reducible W, or non-convergence.
ReproductionMatrix build_H(const NetworkModel& model, const PowerIterationOptions& options = {});

struct LyapunovDrift {
    double exact;  // G^N V(x) for V(x) = sum m_i x^i
    double bound;  // -sum alpha_i |gamma_i| kappa_i (1 - gamma_i(x^i) / |gamma_i| rho)
};

LyapunovDrift drift_of_lyapunov(const NetworkModel& model, const ReproductionMatrix& H, std::span<const double> x);

double lyapunov_value(const ReproductionMatrix& H, std::span<const double> x);

enum class Verdict { Stable, Inconclusive };

struct StabilityVerdict {
    Verdict verdict;
    double rho;
};

/// Stable iff rho < 1 - 1e-12.
StabilityVerdict non_evanescence_verdict(const ReproductionMatrix& H);

const char* to_string(Verdict v);

struct GeneratorEstimate {
    double mean;
    double standard_error;
    std::size_t replicas;
};

/// Short-horizon Monte Carlo estimate of (E[V(X_h)] - V(x)) / h via the thinning simulator.
GeneratorEstimate estimate_generator_drift(const NetworkModel& model, const ReproductionMatrix& H,
                                           std::span<const double> x, double h, std::size_t replicas,
                                           std::uint64_t seed, Exec exec = Exec::Parallel);

} // namespace inhibnet
