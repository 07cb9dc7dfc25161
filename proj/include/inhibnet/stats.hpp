#pragma once

#include "inhibnet/parallel.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace inhibnet {

struct Summary {
    std::size_t n;
    double mean;
    double sd;  // sample standard deviation (n - 1)
    double min;
    double max;
};

Summary summarize(std::span<const double> samples);

/// Type-7 (linear interpolation) sample quantile, 0 <= p <= 1.
double quantile(std::span<const double> samples, double p);

struct DensityEstimate {
    std::vector<double> grid;
    std::vector<double> values;
    double bandwidth;
    std::size_t n;
};

/// All samples equal: no density exists.
struct PointMass {
    double location;
    std::size_t n;
};

/// 0.9 min(sd, IQR / 1.34) n^{-1/5}; falls back to sd when the IQR vanishes.
double silverman_bandwidth(std::span<const double> samples);

/// Gaussian KDE on a uniform grid over [min - 4h, max + 4h].
std::variant<DensityEstimate, PointMass> kde(std::span<const double> samples, std::size_t grid_size = 512,
                                             Exec exec = Exec::Serial);

/// sup |F_a - F_b| between empirical CDFs.
double ks_distance(std::span<const double> a, std::span<const double> b);

/// sup |F_n - F| against a continuous reference CDF.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sided DKW half-width: P(sup |F_n - F| > eps) <= alpha.
double dkw_epsilon(std::size_t n, double alpha);

/// Band for comparing two independent empirical CDFs of sizes n and m at level alpha.
double two_sample_band(std::size_t n, std::size_t m, double alpha);

struct Histogram {
    std::vector<double> edges;  // bins + 1 values
    std::vector<std::size_t> counts;
};

Histogram histogram(std::span<const double> samples, std::size_t bins);

double trapezoid(std::span<const double> x, std::span<const double> y);

} // namespace inhibnet
