#pragma once

#include "inhibnet/model.hpp"

#include <cstdlib>
#include <filesystem>
#include <string>

namespace test_support {

inline std::filesystem::path config_dir() {
    const char* dir = std::getenv("INHIBNET_CONFIG_DIR");
    if (dir) return dir;
#ifdef INHIBNET_DEFAULT_CONFIG_DIR
    return INHIBNET_DEFAULT_CONFIG_DIR;
#else
    return "configs";
#endif
}

inline inhibnet::RateSpec paper_rate() { return {inhibnet::RateSpec::Step{3.0, 1.0, 2.0}}; }

inline inhibnet::NetworkModel finite(std::size_t n, inhibnet::DriftSpec drift, inhibnet::RateSpec rate,
                                     inhibnet::ResetSpec reset, inhibnet::WeightStructure weights) {
    inhibnet::NetworkModel m;
    m.n = n;
    m.drift = {std::move(drift)};
    m.rate = {std::move(rate)};
    m.reset = {std::move(reset)};
    m.weights = std::move(weights);
    m.initial_state.assign(n, 0.0);
    return m;
}

inline inhibnet::NetworkModel lattice(inhibnet::RateSpec rate, inhibnet::ResetSpec reset, double w = 1.0,
                                      inhibnet::DriftSpec drift = {inhibnet::DriftSpec::Linear{1.0}}) {
    inhibnet::NetworkModel m;
    m.lattice = true;
    m.drift = {std::move(drift)};
    m.rate = {std::move(rate)};
    m.reset = {std::move(reset)};
    m.weights = {inhibnet::WeightStructure::NearestNeighborZ{w}};
    return m;
}

/// The lattice configuration used throughout: alpha(x) = x, beta = 3 + 1{x <= 2}, W = 1.
inline inhibnet::NetworkModel paper_lattice(inhibnet::ResetSpec reset = {inhibnet::ResetSpec::Exponential{1.0}}) {
    return lattice(paper_rate(), std::move(reset));
}

} // namespace test_support
