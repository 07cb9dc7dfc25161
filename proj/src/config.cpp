#include "inhibnet/config.hpp"

#include "inhibnet/errors.hpp"
#include "inhibnet/overloaded.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

namespace inhibnet {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : obj.items()) {
        if (!keys.count(item.key())) throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
}

double number(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(where + ": missing '" + key + "'");
    if (!it->is_number()) throw ConfigError(where + "." + key + ": expected a number");
    return it->get<double>();
}

std::vector<double> numbers(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(where + ": missing '" + key + "'");
    if (!it->is_array()) throw ConfigError(where + "." + key + ": expected an array");
    std::vector<double> out;
    for (const auto& v : *it) {
        if (!v.is_number()) throw ConfigError(where + "." + key + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::string kind_of(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    auto it = obj.find("kind");
    if (it == obj.end() || !it->is_string()) throw ConfigError(where + ": missing string 'kind'");
    return it->get<std::string>();
}

DriftSpec parse_drift(const json& obj, const std::string& where) {
    const auto kind = kind_of(obj, where);
    if (kind == "linear") {
        reject_unknown(obj, where, {"kind", "slope"});
        return {DriftSpec::Linear{number(obj, "slope", where)}};
    }
    if (kind == "constant") {
        reject_unknown(obj, where, {"kind", "level"});
        return {DriftSpec::Constant{number(obj, "level", where)}};
    }
    if (kind == "affine_plus_one") {
        reject_unknown(obj, where, {"kind", "slope"});
        return {DriftSpec::AffinePlusOne{number(obj, "slope", where)}};
    }
    throw ConfigError(where + ": unknown drift kind '" + kind + "'");
}

RateSpec parse_rate(const json& obj, const std::string& where) {
    const auto kind = kind_of(obj, where);
    if (kind == "constant") {
        reject_unknown(obj, where, {"kind", "b"});
        return {RateSpec::Constant{number(obj, "b", where)}};
    }
    if (kind == "step") {
        reject_unknown(obj, where, {"kind", "base", "boost", "threshold"});
        return {RateSpec::Step{number(obj, "base", where), number(obj, "boost", where), number(obj, "threshold", where)}};
    }
    if (kind == "exp_decay") {
        reject_unknown(obj, where, {"kind", "floor", "amplitude", "scale"});
        return {RateSpec::ExpDecay{number(obj, "floor", where), number(obj, "amplitude", where),
                                   number(obj, "scale", where)}};
    }
    throw ConfigError(where + ": unknown rate kind '" + kind + "'");
}

ResetSpec parse_reset(const json& obj, const std::string& where) {
    const auto kind = kind_of(obj, where);
    if (kind == "exponential") {
        reject_unknown(obj, where, {"kind", "rate"});
        return {ResetSpec::Exponential{number(obj, "rate", where)}};
    }
    if (kind == "uniform") {
        reject_unknown(obj, where, {"kind", "lo", "hi"});
        return {ResetSpec::Uniform{number(obj, "lo", where), number(obj, "hi", where)}};
    }
    if (kind == "discrete") {
        reject_unknown(obj, where, {"kind", "atoms", "probs"});
        return {ResetSpec::Discrete{numbers(obj, "atoms", where), numbers(obj, "probs", where)}};
    }
    throw ConfigError(where + ": unknown reset kind '" + kind + "'");
}

WeightStructure parse_weights(const json& obj, const std::string& where) {
    const auto kind = kind_of(obj, where);
    if (kind == "explicit") {
        reject_unknown(obj, where, {"kind", "matrix"});
        auto it = obj.find("matrix");
        if (it == obj.end() || !it->is_array()) throw ConfigError(where + ": missing array 'matrix'");
        WeightStructure::Explicit e;
        for (const auto& row : *it) {
            if (!row.is_array()) throw ConfigError(where + ".matrix: expected rows of numbers");
            std::vector<double> r;
            for (const auto& v : row) {
                if (!v.is_number()) throw ConfigError(where + ".matrix: expected rows of numbers");
                r.push_back(v.get<double>());
            }
            e.matrix.push_back(std::move(r));
        }
        return {std::move(e)};
    }
    if (kind == "mean_field") {
        reject_unknown(obj, where, {"kind", "theta"});
        return {WeightStructure::MeanField{number(obj, "theta", where)}};
    }
    if (kind == "torus") {
        reject_unknown(obj, where, {"kind", "theta"});
        return {WeightStructure::Torus{number(obj, "theta", where)}};
    }
    if (kind == "nearest_neighbor") {
        reject_unknown(obj, where, {"kind", "w"});
        return {WeightStructure::NearestNeighborZ{number(obj, "w", where)}};
    }
    if (kind == "stencil") {
        reject_unknown(obj, where, {"kind", "offsets", "weights"});
        WeightStructure::Stencil s;
        auto it = obj.find("offsets");
        if (it == obj.end() || !it->is_array()) throw ConfigError(where + ": missing array 'offsets'");
        for (const auto& v : *it) {
            if (!v.is_number_integer()) throw ConfigError(where + ".offsets: expected integers");
            s.offsets.push_back(v.get<std::int64_t>());
        }
        s.weights = numbers(obj, "weights", where);
        return {std::move(s)};
    }
    throw ConfigError(where + ": unknown weights kind '" + kind + "'");
}

template <class Spec, class Parse>
std::vector<Spec> parse_list(const json& doc, const char* key, Parse parse) {
    auto it = doc.find(key);
    if (it == doc.end()) throw ConfigError(std::string("config: missing '") + key + "'");
    std::vector<Spec> out;
    if (it->is_array()) {
        for (std::size_t k = 0; k < it->size(); ++k)
            out.push_back(parse((*it)[k], std::string(key) + "[" + std::to_string(k) + "]"));
        if (out.empty()) throw ConfigError(std::string(key) + ": empty list");
    } else {
        out.push_back(parse(*it, key));
    }
    return out;
}

} // namespace

NetworkModel parse_model(const json& doc) {
    reject_unknown(doc, "config", {"n", "lattice", "drift", "rate", "reset", "weights", "initial_state", "seed"});
    NetworkModel m;
    if (auto it = doc.find("lattice"); it != doc.end()) {
        if (!it->is_boolean()) throw ConfigError("lattice: expected a boolean");
        m.lattice = it->get<bool>();
    }
    if (auto it = doc.find("n"); it != doc.end()) {
        if (!it->is_number_integer() || (!it->is_number_unsigned() && it->get<std::int64_t>() < 0)) throw ConfigError("n: expected a nonnegative integer");
        m.n = it->get<std::size_t>();
    }
    if (!m.lattice && !m.n) throw ConfigError("config: give 'n' or \"lattice\": true");

    m.drift = parse_list<DriftSpec>(doc, "drift", parse_drift);
    m.rate = parse_list<RateSpec>(doc, "rate", parse_rate);
    m.reset = parse_list<ResetSpec>(doc, "reset", parse_reset);
    auto w = doc.find("weights");
    if (w == doc.end()) throw ConfigError("config: missing 'weights'");
    m.weights = parse_weights(*w, "weights");

    if (auto it = doc.find("initial_state"); it != doc.end()) {
        m.initial_state = numbers(doc, "initial_state", "config");
    } else if (!m.lattice && m.n) {
        m.initial_state.assign(*m.n, 0.0);
    }
    if (auto it = doc.find("seed"); it != doc.end()) {
        if (!it->is_number_integer() || (!it->is_number_unsigned() && it->get<std::int64_t>() < 0)) throw ConfigError("seed: expected a nonnegative integer");
        m.seed = it->get<std::uint64_t>();
    }
    return m;
}

json read_config_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
}

NetworkModel load_model(const std::filesystem::path& path) { return parse_model(read_config_document(path)); }

namespace {

json drift_json(const DriftSpec& d) {
    return std::visit(overloaded{
                          [](const DriftSpec::Linear& x) { return json{{"kind", "linear"}, {"slope", x.slope}}; },
                          [](const DriftSpec::Constant& x) { return json{{"kind", "constant"}, {"level", x.level}}; },
                          [](const DriftSpec::AffinePlusOne& x) {
                              return json{{"kind", "affine_plus_one"}, {"slope", x.slope}};
                          },
                      },
                      d.kind);
}

json rate_json(const RateSpec& r) {
    return std::visit(overloaded{
                          [](const RateSpec::Constant& x) { return json{{"kind", "constant"}, {"b", x.b}}; },
                          [](const RateSpec::Step& x) {
                              return json{{"kind", "step"}, {"base", x.base}, {"boost", x.boost}, {"threshold", x.threshold}};
                          },
                          [](const RateSpec::ExpDecay& x) {
                              return json{{"kind", "exp_decay"}, {"floor", x.floor}, {"amplitude", x.amplitude},
                                          {"scale", x.scale}};
                          },
                      },
                      r.kind);
}

json reset_json(const ResetSpec& f) {
    return std::visit(overloaded{
                          [](const ResetSpec::Exponential& x) { return json{{"kind", "exponential"}, {"rate", x.rate}}; },
                          [](const ResetSpec::Uniform& x) { return json{{"kind", "uniform"}, {"lo", x.lo}, {"hi", x.hi}}; },
                          [](const ResetSpec::Discrete& x) {
                              return json{{"kind", "discrete"}, {"atoms", x.atoms}, {"probs", x.probs}};
                          },
                      },
                      f.kind);
}

json weights_json(const WeightStructure& w) {
    return std::visit(overloaded{
                          [](const WeightStructure::Explicit& x) { return json{{"kind", "explicit"}, {"matrix", x.matrix}}; },
                          [](const WeightStructure::MeanField& x) { return json{{"kind", "mean_field"}, {"theta", x.theta}}; },
                          [](const WeightStructure::Torus& x) { return json{{"kind", "torus"}, {"theta", x.theta}}; },
                          [](const WeightStructure::NearestNeighborZ& x) {
                              return json{{"kind", "nearest_neighbor"}, {"w", x.w}};
                          },
                          [](const WeightStructure::Stencil& x) {
                              return json{{"kind", "stencil"}, {"offsets", x.offsets}, {"weights", x.weights}};
                          },
                      },
                      w.kind);
}

template <class Spec, class F>
json list_json(const std::vector<Spec>& specs, F f) {
    if (specs.size() == 1) return f(specs.front());
    json arr = json::array();
    for (const auto& s : specs) arr.push_back(f(s));
    return arr;
}

} // namespace

json to_json(const NetworkModel& m) {
    json doc;
    if (m.lattice) doc["lattice"] = true;
    if (m.n) doc["n"] = *m.n;
    doc["drift"] = list_json(m.drift, drift_json);
    doc["rate"] = list_json(m.rate, rate_json);
    doc["reset"] = list_json(m.reset, reset_json);
    doc["weights"] = weights_json(m.weights);
    if (!m.lattice) doc["initial_state"] = m.initial_state;
    if (m.seed) doc["seed"] = *m.seed;
    return doc;
}

} // namespace inhibnet
