#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "analysis.hpp"
#include "family.hpp"
#include "geometry.hpp"
#include "ideal.hpp"
#include "sequence.hpp"

namespace roughconv {

// Configuration problems carry the dotted path of the offending field so a
// CLI can point straight at it.
struct ConfigError : std::runtime_error {
    std::string field;

    ConfigError(std::string f, const std::string& msg)
        : std::runtime_error(f + ": " + msg), field(std::move(f)) {}
};

namespace cfgdetail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key, "missing required field");
    return *it;
}

inline double as_double(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

inline std::size_t as_count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
        throw ConfigError(path, "expected a nonnegative integer");
    return j.get<std::size_t>();
}

inline std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

inline std::vector<double> as_doubles(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> known) {
    if (!j.is_object()) return;
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) { ok = true; break; }
        if (!ok) throw ConfigError(path + "." + it.key(), "unknown field");
    }
}

inline PartitionSpec parse_partition(const json& j, const std::string& path) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "evens") return {PartitionSpec::Kind::Evens, {}};
        if (s == "odds") return {PartitionSpec::Kind::Odds, {}};
        if (s == "squares") return {PartitionSpec::Kind::Squares, {}};
        throw ConfigError(path, "unknown partition '" + s + "'");
    }
    if (j.is_object()) {
        reject_unknown(j, path, {"explicit"});
        const json& e = require(j, path, "explicit");
        if (!e.is_array()) throw ConfigError(path + ".explicit", "expected an array of indices");
        std::vector<std::size_t> idx;
        idx.reserve(e.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            idx.push_back(as_count(e[i], path + ".explicit[" + std::to_string(i) + "]"));
        return {PartitionSpec::Kind::Explicit, std::move(idx)};
    }
    throw ConfigError(path, "expected a partition name or {\"explicit\": [...]}");
}

inline json partition_json(const PartitionSpec& p) {
    switch (p.kind) {
        case PartitionSpec::Kind::Evens: return "evens";
        case PartitionSpec::Kind::Odds: return "odds";
        case PartitionSpec::Kind::Squares: return "squares";
        case PartitionSpec::Kind::Explicit: {
            json j;
            j["explicit"] = p.indices;
            return j;
        }
    }
    return "evens";
}

inline Box parse_box(const json& j, const std::string& path) {
    reject_unknown(j, path, {"lo", "hi"});
    std::vector<double> lo = as_doubles(require(j, path, "lo"), path + ".lo");
    std::vector<double> hi = as_doubles(require(j, path, "hi"), path + ".hi");
    if (lo.empty()) throw ConfigError(path + ".lo", "box needs at least one axis");
    if (lo.size() != hi.size()) throw ConfigError(path, "lo and hi lengths differ");
    for (std::size_t a = 0; a < lo.size(); ++a)
        if (!(lo[a] < hi[a]))
            throw ConfigError(path, "lo must be strictly below hi on axis " + std::to_string(a));
    return Box{std::move(lo), std::move(hi)};
}

inline json box_json(const Box& b) {
    json j;
    j["lo"] = b.lo;
    j["hi"] = b.hi;
    return j;
}

}  // namespace cfgdetail

// Declarative description of one analysis run. Parsed from JSON with
// field-level diagnostics, echoed back out in canonical form.
struct RunConfig {
    SequenceSpec sequence;
    std::size_t horizon = 100000;

    IdealSpec ideal = IdealSpec::fin();
    std::string weight_rule;  // "reciprocal" | "uniform" | "" (explicit weights)

    std::optional<RoughFamily> family;
    std::optional<Box> box;  // absent: derive from the data
    double resolution = 0.005;
    std::vector<double> eps_schedule;  // empty: cluster default
    std::string out_dir = "out";
    std::uint64_t seed = 1;

    static RunConfig from_json(const nlohmann::json& j);
    static RunConfig from_file(const std::string& path);

    // Weight-functional weights are materialized against the horizon here.
    IdealSpec make_ideal() const {
        IdealSpec s = ideal;
        if (s.kind == IdealSpec::Kind::WeightFunctional && !weight_rule.empty()) {
            s.weights.resize(horizon);
            for (std::size_t n = 0; n < horizon; ++n)
                s.weights[n] = weight_rule == "reciprocal" ? 1.0 / static_cast<double>(n + 1) : 1.0;
        }
        return s;
    }

    nlohmann::json sequence_json() const;
    nlohmann::json ideal_json() const;
    nlohmann::json family_json() const;

    // Everything that determines the analysis output given the data.
    nlohmann::json analysis_echo() const {
        nlohmann::json j;
        j["horizon"] = horizon;
        j["ideal"] = ideal_json();
        j["family"] = family ? family_json() : nlohmann::json(nullptr);
        j["box"] = box ? cfgdetail::box_json(*box) : nlohmann::json("auto");
        j["resolution"] = resolution;
        j["eps_schedule"] = eps_schedule.empty() ? nlohmann::json("default") : nlohmann::json(eps_schedule);
        return j;
    }

    nlohmann::json to_json() const {
        nlohmann::json j = analysis_echo();
        j["sequence"] = sequence_json();
        j["out_dir"] = out_dir;
        j["seed"] = seed;
        return j;
    }
};

namespace cfgdetail {

inline SequenceSpec parse_sequence(const json& j, std::uint64_t default_seed) {
    const std::string path = "sequence";
    std::string kind = as_string(require(j, path, "kind"), path + ".kind");
    reject_unknown(j, path, {"kind", "a", "b", "partition", "path", "seed", "box"});
    if (kind == "alternating") return SequenceSpec::alternating();
    if (kind == "rationals") return SequenceSpec::rationals();
    if (kind == "two_value") {
        double a = as_double(require(j, path, "a"), path + ".a");
        double b = as_double(require(j, path, "b"), path + ".b");
        PartitionSpec p{PartitionSpec::Kind::Evens, {}};
        if (j.contains("partition")) p = parse_partition(j["partition"], path + ".partition");
        return SequenceSpec::two_value(a, b - a, std::move(p));
    }
    if (kind == "perturbed_alternating") {
        PartitionSpec p{PartitionSpec::Kind::Squares, {}};
        if (j.contains("partition")) p = parse_partition(j["partition"], path + ".partition");
        return SequenceSpec::perturbed_alternating(std::move(p));
    }
    if (kind == "csv") return SequenceSpec::csv(as_string(require(j, path, "path"), path + ".path"));
    if (kind == "random_bounded") {
        std::uint64_t seed = default_seed;
        if (j.contains("seed")) seed = static_cast<std::uint64_t>(as_count(j["seed"], path + ".seed"));
        Box b = parse_box(require(j, path, "box"), path + ".box");
        return SequenceSpec::random_bounded(seed, std::move(b));
    }
    throw ConfigError(path + ".kind", "unknown sequence kind '" + kind + "'");
}

inline IdealSpec parse_ideal(const json& j, std::string& weight_rule) {
    const std::string path = "ideal";
    std::string kind = as_string(require(j, path, "kind"), path + ".kind");
    reject_unknown(j, path, {"kind", "delta", "windows", "budget", "decay_ratio", "weights"});
    WindowSchedule windows;
    if (j.contains("windows")) {
        const json& w = j["windows"];
        if (!w.is_array()) throw ConfigError(path + ".windows", "expected an array of indices");
        for (std::size_t i = 0; i < w.size(); ++i)
            windows.push_back(as_count(w[i], path + ".windows[" + std::to_string(i) + "]"));
    }
    if (kind == "fin") {
        IdealSpec s = IdealSpec::fin();
        s.windows = std::move(windows);
        return s;
    }
    if (kind == "density") {
        double delta = j.contains("delta") ? as_double(j["delta"], path + ".delta") : 0.01;
        if (!(delta > 0 && delta < 1)) throw ConfigError(path + ".delta", "must lie in (0, 1)");
        return IdealSpec::density(delta, std::move(windows));
    }
    if (kind == "summable") {
        double budget = j.contains("budget") ? as_double(j["budget"], path + ".budget") : 20.0;
        double decay = j.contains("decay_ratio") ? as_double(j["decay_ratio"], path + ".decay_ratio") : 0.9;
        if (!(budget > 0)) throw ConfigError(path + ".budget", "must be positive");
        if (!(decay > 0 && decay < 1)) throw ConfigError(path + ".decay_ratio", "must lie in (0, 1)");
        IdealSpec s = IdealSpec::summable(budget, decay);
        s.windows = std::move(windows);
        return s;
    }
    if (kind == "weight_functional") {
        double delta = j.contains("delta") ? as_double(j["delta"], path + ".delta") : 0.01;
        if (!(delta > 0 && delta < 1)) throw ConfigError(path + ".delta", "must lie in (0, 1)");
        const json& w = require(j, path, "weights");
        IdealSpec s;
        if (w.is_string()) {
            weight_rule = w.get<std::string>();
            if (weight_rule != "reciprocal" && weight_rule != "uniform")
                throw ConfigError(path + ".weights", "unknown weight rule '" + weight_rule + "'");
            s = IdealSpec::weight_functional({1.0}, delta);
        } else {
            s = IdealSpec::weight_functional(as_doubles(w, path + ".weights"), delta);
        }
        s.windows = std::move(windows);
        return s;
    }
    throw ConfigError(path + ".kind", "unknown ideal kind '" + kind + "'");
}

inline RadiusFn parse_radius(const json& j, const std::string& path) {
    std::string kind = as_string(require(j, path, "kind"), path + ".kind");
    if (kind == "constant") {
        reject_unknown(j, path, {"kind", "value"});
        double v = as_double(require(j, path, "value"), path + ".value");
        if (v < 0) throw ConfigError(path + ".value", "must be nonnegative");
        return RadiusFn::constant(v);
    }
    if (kind == "min_affine") {
        reject_unknown(j, path, {"kind", "terms"});
        const json& terms = require(j, path, "terms");
        if (!terms.is_array() || terms.empty())
            throw ConfigError(path + ".terms", "expected a nonempty array of {slope, offset}");
        std::vector<RadiusFn::Affine> ts;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const std::string tp = path + ".terms[" + std::to_string(i) + "]";
            reject_unknown(terms[i], tp, {"slope", "offset"});
            RadiusFn::Affine a;
            a.slope = as_doubles(require(terms[i], tp, "slope"), tp + ".slope");
            a.offset = as_double(require(terms[i], tp, "offset"), tp + ".offset");
            ts.push_back(std::move(a));
        }
        return RadiusFn::min_affine(std::move(ts));
    }
    if (kind == "usc_table") {
        reject_unknown(j, path, {"kind", "step", "base", "shape", "values"});
        double step = as_double(require(j, path, "step"), path + ".step");
        if (!(step > 0)) throw ConfigError(path + ".step", "must be positive");
        std::vector<long long> base;
        const json& bj = require(j, path, "base");
        if (!bj.is_array()) throw ConfigError(path + ".base", "expected an array of integers");
        for (std::size_t i = 0; i < bj.size(); ++i) {
            const json& e = bj[i];
            if (!e.is_number_integer())
                throw ConfigError(path + ".base[" + std::to_string(i) + "]", "expected an integer");
            base.push_back(e.get<long long>());
        }
        std::vector<std::size_t> shape;
        const json& sj = require(j, path, "shape");
        if (!sj.is_array()) throw ConfigError(path + ".shape", "expected an array of counts");
        for (std::size_t i = 0; i < sj.size(); ++i)
            shape.push_back(as_count(sj[i], path + ".shape[" + std::to_string(i) + "]"));
        std::vector<double> values = as_doubles(require(j, path, "values"), path + ".values");
        try {
            return RadiusFn::usc_table(step, std::move(base), std::move(shape), std::move(values));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path, e.what());
        }
    }
    throw ConfigError(path + ".kind", "unknown radius kind '" + kind + "'");
}

inline RoughFamily parse_family(const json& j) {
    const std::string path = "family";
    std::string kind = as_string(require(j, path, "kind"), path + ".kind");
    if (kind == "closed_ball" || kind == "open_ball") {
        reject_unknown(j, path, {"kind", "radius"});
        RadiusFn r = parse_radius(require(j, path, "radius"), path + ".radius");
        return kind == "closed_ball" ? RoughFamily::closed_ball(std::move(r))
                                     : RoughFamily::open_ball(std::move(r));
    }
    if (kind == "general_closed") {
        reject_unknown(j, path, {"kind", "step", "base", "shape", "mask"});
        double step = as_double(require(j, path, "step"), path + ".step");
        if (!(step > 0)) throw ConfigError(path + ".step", "must be positive");
        std::vector<long long> base;
        const json& bj = require(j, path, "base");
        if (!bj.is_array()) throw ConfigError(path + ".base", "expected an array of integers");
        for (std::size_t i = 0; i < bj.size(); ++i) {
            const json& e = bj[i];
            if (!e.is_number_integer())
                throw ConfigError(path + ".base[" + std::to_string(i) + "]", "expected an integer");
            base.push_back(e.get<long long>());
        }
        std::vector<std::size_t> shape;
        const json& sj = require(j, path, "shape");
        if (!sj.is_array()) throw ConfigError(path + ".shape", "expected an array of counts");
        for (std::size_t i = 0; i < sj.size(); ++i)
            shape.push_back(as_count(sj[i], path + ".shape[" + std::to_string(i) + "]"));
        const json& mj = require(j, path, "mask");
        if (!mj.is_array()) throw ConfigError(path + ".mask", "expected an array of 0/1 flags");
        std::vector<unsigned char> mask;
        for (std::size_t i = 0; i < mj.size(); ++i) {
            std::size_t v = as_count(mj[i], path + ".mask[" + std::to_string(i) + "]");
            if (v > 1) throw ConfigError(path + ".mask[" + std::to_string(i) + "]", "expected 0 or 1");
            mask.push_back(static_cast<unsigned char>(v));
        }
        try {
            return RoughFamily::general_closed(step, std::move(base), std::move(shape), std::move(mask));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(path, e.what());
        }
    }
    throw ConfigError(path + ".kind", "unknown family kind '" + kind + "'");
}

inline json radius_json(const RadiusFn& r) {
    json j;
    switch (r.kind) {
        case RadiusFn::Kind::Constant:
            j["kind"] = "constant";
            j["value"] = r.value;
            break;
        case RadiusFn::Kind::MinAffine: {
            j["kind"] = "min_affine";
            json terms = json::array();
            for (const auto& t : r.terms) {
                json tj;
                tj["slope"] = t.slope;
                tj["offset"] = t.offset;
                terms.push_back(std::move(tj));
            }
            j["terms"] = std::move(terms);
            break;
        }
        case RadiusFn::Kind::UscTable:
            j["kind"] = "usc_table";
            j["step"] = r.table_h;
            j["base"] = r.tbase;
            j["shape"] = r.tshape;
            j["values"] = r.tvalues;
            break;
    }
    return j;
}

}  // namespace cfgdetail

inline RunConfig RunConfig::from_json(const nlohmann::json& j) {
    using namespace cfgdetail;
    if (!j.is_object()) throw ConfigError("config", "expected a JSON object");
    reject_unknown(j, "config",
                   {"sequence", "horizon", "ideal", "family", "box", "resolution", "eps_schedule",
                    "out_dir", "seed"});
    RunConfig c;
    if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(as_count(j["seed"], "seed"));
    c.sequence = parse_sequence(require(j, "config", "sequence"), c.seed);
    if (j.contains("horizon")) {
        c.horizon = as_count(j["horizon"], "horizon");
        if (c.horizon < 1) throw ConfigError("horizon", "must be at least 1");
    }
    if (j.contains("ideal")) c.ideal = parse_ideal(j["ideal"], c.weight_rule);
    if (j.contains("family")) c.family = parse_family(j["family"]);
    if (j.contains("box")) {
        if (j["box"].is_string()) {
            if (j["box"].get<std::string>() != "auto")
                throw ConfigError("box", "expected {lo, hi} or \"auto\"");
        } else {
            c.box = parse_box(j["box"], "box");
        }
    }
    if (j.contains("resolution")) {
        c.resolution = as_double(j["resolution"], "resolution");
        if (!(c.resolution > 0)) throw ConfigError("resolution", "must be positive");
    }
    if (j.contains("eps_schedule")) {
        c.eps_schedule = as_doubles(j["eps_schedule"], "eps_schedule");
        try {
            validate_eps_schedule(c.eps_schedule, c.resolution);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("eps_schedule", e.what());
        }
    }
    if (j.contains("out_dir")) {
        c.out_dir = as_string(j["out_dir"], "out_dir");
        if (c.out_dir.empty()) throw ConfigError("out_dir", "must be nonempty");
    }
    return c;
}

inline RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config", std::string("json parse error: ") + e.what());
    }
    return from_json(j);
}

inline nlohmann::json RunConfig::sequence_json() const {
    using cfgdetail::box_json;
    using cfgdetail::partition_json;
    nlohmann::json j;
    switch (sequence.kind) {
        case SequenceSpec::Kind::Alternating:
            j["kind"] = "alternating";
            break;
        case SequenceSpec::Kind::RationalsEnumeration:
            j["kind"] = "rationals";
            break;
        case SequenceSpec::Kind::TwoValue:
            j["kind"] = "two_value";
            j["a"] = sequence.base;
            j["b"] = sequence.base + sequence.step;
            j["partition"] = partition_json(sequence.partition);
            break;
        case SequenceSpec::Kind::PerturbedAlternating:
            j["kind"] = "perturbed_alternating";
            j["partition"] = partition_json(sequence.partition);
            break;
        case SequenceSpec::Kind::Csv:
            j["kind"] = "csv";
            j["path"] = sequence.csv_path;
            break;
        case SequenceSpec::Kind::RandomBounded:
            j["kind"] = "random_bounded";
            j["seed"] = sequence.seed;
            j["box"] = box_json(sequence.random_box);
            break;
    }
    return j;
}

inline nlohmann::json RunConfig::ideal_json() const {
    nlohmann::json j;
    j["kind"] = ideal.name();
    switch (ideal.kind) {
        case IdealSpec::Kind::Fin:
            break;
        case IdealSpec::Kind::Density:
            j["delta"] = ideal.delta_small;
            break;
        case IdealSpec::Kind::Summable:
            j["budget"] = ideal.budget;
            j["decay_ratio"] = ideal.decay_ratio;
            break;
        case IdealSpec::Kind::WeightFunctional:
            j["delta"] = ideal.delta_small;
            j["weights"] = weight_rule.empty() ? nlohmann::json("explicit") : nlohmann::json(weight_rule);
            break;
    }
    if (!ideal.windows.empty()) j["windows"] = ideal.windows;
    return j;
}

inline nlohmann::json RunConfig::family_json() const {
    nlohmann::json j;
    if (!family) return nullptr;
    j["kind"] = family->kind_name();
    if (family->kind == RoughFamily::Kind::GeneralClosed) {
        j["step"] = family->shape_h;
        j["base"] = family->sbase;
        j["shape"] = family->sshape;
        nlohmann::json mask = nlohmann::json::array();
        for (unsigned char m : family->smask) mask.push_back(static_cast<int>(m));
        j["mask"] = std::move(mask);
    } else {
        j["radius"] = cfgdetail::radius_json(family->radius);
    }
    return j;
}

}  // namespace roughconv
