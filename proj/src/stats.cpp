#include "inhibnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace inhibnet {

namespace {
std::vector<double> sorted_copy(std::span<const double> s) {
    std::vector<double> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    return v;
}

double quantile_sorted(const std::vector<double>& v, double p) {
    const double h = (static_cast<double>(v.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}
} // namespace

Summary summarize(std::span<const double> samples) {
    if (samples.empty()) throw std::invalid_argument("summarize: empty sample");
    Summary s{samples.size(), 0.0, 0.0, samples[0], samples[0]};
    s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(s.n);
    double ss = 0.0;
    for (double x : samples) {
        ss += (x - s.mean) * (x - s.mean);
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.sd = s.n > 1 ? std::sqrt(ss / static_cast<double>(s.n - 1)) : 0.0;
    return s;
}

double quantile(std::span<const double> samples, double p) {
    if (samples.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p must lie in [0, 1]");
    return quantile_sorted(sorted_copy(samples), p);
}

double silverman_bandwidth(std::span<const double> samples) {
    if (samples.size() < 2) throw std::invalid_argument("silverman_bandwidth: need at least 2 samples");
    const double sd = summarize(samples).sd;
    const auto v = sorted_copy(samples);
    const double iqr = quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
    const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
    return 0.9 * spread * std::pow(static_cast<double>(samples.size()), -0.2);
}

std::variant<DensityEstimate, PointMass> kde(std::span<const double> samples, std::size_t grid_size, Exec exec) {
    if (samples.size() < 2) throw std::invalid_argument("kde: need at least 2 samples");
    if (grid_size < 2) throw std::invalid_argument("kde: grid_size must be at least 2");
    const Summary s = summarize(samples);
    if (!(s.sd > 0.0)) return PointMass{s.mean, s.n};

    DensityEstimate d;
    d.n = s.n;
    d.bandwidth = silverman_bandwidth(samples);
    const double h = d.bandwidth;
    const double lo = s.min - 4.0 * h, hi = s.max + 4.0 * h;
    d.grid.resize(grid_size);
    d.values.resize(grid_size);
    const double step = (hi - lo) / static_cast<double>(grid_size - 1);
    for (std::size_t g = 0; g < grid_size; ++g) d.grid[g] = g + 1 == grid_size ? hi : lo + step * static_cast<double>(g);
    const double norm = 1.0 / (static_cast<double>(s.n) * h * std::sqrt(2.0 * std::numbers::pi));
    for_each_index(
        grid_size, exec,
        [&](std::size_t g) {
            double acc = 0.0;
            for (double x : samples) {
                const double z = (d.grid[g] - x) / h;
                acc += std::exp(-0.5 * z * z);
            }
            d.values[g] = acc * norm;
        },
        Schedule::Static);
    return d;
}

double ks_distance(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    const auto x = sorted_copy(a), y = sorted_copy(b);
    const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t) ++i;
        while (j < y.size() && y[j] == t) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks_distance: empty sample");
    const auto x = sorted_copy(samples);
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

double dkw_epsilon(std::size_t n, double alpha) {
    if (n == 0 || !(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("dkw_epsilon: need n > 0, 0 < alpha < 1");
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

double two_sample_band(std::size_t n, std::size_t m, double alpha) {
    if (n == 0 || m == 0 || !(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("two_sample_band: need n, m > 0, 0 < alpha < 1");
    const double dn = static_cast<double>(n), dm = static_cast<double>(m);
    return std::sqrt(std::log(2.0 / alpha) / 2.0) * std::sqrt((dn + dm) / (dn * dm));
}

Histogram histogram(std::span<const double> samples, std::size_t bins) {
    if (samples.empty() || bins == 0) throw std::invalid_argument("histogram: need samples and bins > 0");
    const Summary s = summarize(samples);
    const double lo = s.min, hi = s.max > s.min ? s.max : s.min + 1.0;
    Histogram out;
    out.edges.resize(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k)
        out.edges[k] = k == bins ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
    out.counts.assign(bins, 0);
    for (double x : samples) {
        auto k = static_cast<std::size_t>((x - lo) / (hi - lo) * static_cast<double>(bins));
        ++out.counts[std::min(k, bins - 1)];
    }
    return out;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
    double acc = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) acc += 0.5 * (x[k] - x[k - 1]) * (y[k] + y[k - 1]);
    return acc;
}

} // namespace inhibnet
