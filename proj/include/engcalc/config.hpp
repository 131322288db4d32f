#pragma once

// JSON scenario and model configs. Keys are the struct field names; missing
// keys keep their defaults, unknown keys are rejected.

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "engcalc/error.hpp"
#include "engcalc/linalg.hpp"
#include "engcalc/mech.hpp"
#include "engcalc/opt.hpp"

namespace engcalc::config {

using Json = nlohmann::json;

namespace detail {

inline void check_keys(const Json& j, const std::set<std::string>& allowed, const char* what) {
    if (!j.is_object()) throw DomainError(std::string(what) + " config must be a JSON object");
    for (const auto& item : j.items()) {
        if (!allowed.contains(item.key())) {
            throw DomainError(std::string(what) + " config: unknown key '" + item.key() + "'");
        }
    }
}

inline double number(const Json& j, const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_number()) throw DomainError("config key '" + key + "' must be a number");
    return v.get<double>();
}

inline Vec vec(const Json& j, const std::string& key) {
    const Json& v = j.at(key);
    if (!v.is_array()) throw DomainError("config key '" + key + "' must be an array of numbers");
    std::vector<double> xs;
    for (const Json& x : v) {
        if (!x.is_number()) throw DomainError("config key '" + key + "' must be an array of numbers");
        xs.push_back(x.get<double>());
    }
    return Vec(std::move(xs));
}

template <class T>
void read(const Json& j, const char* key, T& field) {
    if (!j.contains(key)) return;
    if constexpr (std::is_same_v<T, Vec>) {
        field = vec(j, key);
    } else if constexpr (std::is_same_v<T, bool>) {
        if (!j.at(key).is_boolean()) throw DomainError(std::string("config key '") + key + "' must be a boolean");
        field = j.at(key).get<bool>();
    } else if constexpr (std::is_same_v<T, int>) {
        const Json& v = j.at(key);
        if (!v.is_number_integer()) throw DomainError(std::string("config key '") + key + "' must be an integer");
        field = v.get<int>();
    } else {
        field = number(j, key);
    }
}

} // namespace detail

inline Json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw DomainError("config '" + path + "': " + e.what());
    }
}

inline opt::FreeThrowParams freethrow_params(const Json& j) {
    detail::check_keys(j, {"p0", "p_h", "g"}, "freethrow");
    opt::FreeThrowParams p;
    detail::read(j, "p0", p.p0);
    detail::read(j, "p_h", p.p_h);
    detail::read(j, "g", p.g);
    p.validate();
    return p;
}

inline opt::GymnastModel gymnast_model(const Json& j) {
    detail::check_keys(j, {"l", "m1", "m2", "p0", "p_land", "theta0", "theta_land", "g"}, "gymnast");
    opt::GymnastModel m;
    detail::read(j, "l", m.l);
    detail::read(j, "m1", m.m1);
    detail::read(j, "m2", m.m2);
    detail::read(j, "p0", m.p0);
    detail::read(j, "p_land", m.p_land);
    detail::read(j, "theta0", m.theta0);
    detail::read(j, "theta_land", m.theta_land);
    detail::read(j, "g", m.g);
    m.validate();
    return m;
}

inline opt::DiverModel diver_model(const Json& j) {
    detail::check_keys(j, {"platform_height", "I_open", "I_tuck", "k", "d_min", "g", "epsilon", "rigid"}, "diver");
    opt::DiverModel m;
    detail::read(j, "platform_height", m.platform_height);
    detail::read(j, "I_open", m.I_open);
    detail::read(j, "I_tuck", m.I_tuck);
    detail::read(j, "k", m.k);
    detail::read(j, "d_min", m.d_min);
    detail::read(j, "g", m.g);
    detail::read(j, "epsilon", m.epsilon);
    detail::read(j, "rigid", m.rigid);
    m.validate();
    return m;
}

// Flat object of numeric overrides; key validity is checked by the model constructor.
inline mech::Params model_params(const Json& j) {
    if (!j.is_object()) throw DomainError("model config must be a JSON object");
    mech::Params out;
    for (const auto& item : j.items()) out[item.key()] = detail::number(j, item.key());
    return out;
}

} // namespace engcalc::config
