#include "landau/model.hpp"

#include <cmath>
#include <mutex>

#include <nlohmann/json.hpp>

#include "landau/quadrature.hpp"
#include "landau/util.hpp"

namespace landau {

using nlohmann::json;

// ---------------------------------------------------------------- profiles

double RadialProfile::operator()(double rho) const {
    switch (kind) {
        case RadialKind::power_law:
            return u0 * std::pow(1.0 + rho * rho, -0.5 * alpha);
        case RadialKind::gaussian:
            return std::exp(-mu * std::pow(rho * rho, beta));
        case RadialKind::compact_step:
            return rho <= R ? height : 0.0;
    }
    return 0.0;
}

double RadialProfile::sup() const {
    switch (kind) {
        case RadialKind::power_law: return u0;
        case RadialKind::gaussian: return 1.0;
        case RadialKind::compact_step: return height;
    }
    return 0.0;
}

double RadialProfile::support_radius(double tiny) const {
    switch (kind) {
        case RadialKind::power_law:
            return std::pow(u0 / tiny, 1.0 / alpha) + 1.0;
        case RadialKind::gaussian:
            return std::pow(std::log(1.0 / tiny) / mu, 0.5 / beta) + 1.0;
        case RadialKind::compact_step:
            return R;
    }
    return 1.0;
}

double AxisProfile::operator()(double x3) const {
    switch (kind) {
        case AxisKind::gaussian:
            return std::exp(-nu * x3 * x3);
        case AxisKind::compact_bump: {
            double u = x3 / L;
            double d = 1.0 - u * u;
            if (d <= 0.0) return 0.0;
            return std::exp(1.0 - 1.0 / d);
        }
    }
    return 0.0;
}

double AxisProfile::halfwidth(double tiny) const {
    switch (kind) {
        case AxisKind::gaussian:
            return std::sqrt(std::log(1.0 / tiny) / nu);
        case AxisKind::compact_bump:
            return L;
    }
    return 1.0;
}

double AxisProfile::mass() const {
    if (kind == AxisKind::gaussian) return std::sqrt(pi / nu);
    // bump mass = L * integral of exp(1 - 1/(1-u^2)) du; integrand smooth,
    // vanishes to all orders at the endpoints
    auto f = [this](double x) { return (*this)(x); };
    return integrate_gl(f, -L, L, 1e-13, 64).value;
}

// ---------------------------------------------------------------- validation

namespace {

double get_num(const json& j, const std::string& field, double dflt, bool required = false) {
    if (!j.contains(field)) {
        if (required) throw ConfigError(field, field + " is required");
        return dflt;
    }
    if (!j.at(field).is_number())
        throw ConfigError(field, field + " must be a number");
    return j.at(field).get<double>();
}

int get_int(const json& j, const std::string& field, int dflt) {
    if (!j.contains(field)) return dflt;
    if (!j.at(field).is_number_integer())
        throw ConfigError(field, field + " must be an integer");
    return j.at(field).get<int>();
}

RadialProfile parse_radial(const json& j) {
    RadialProfile u;
    std::string type = j.value("type", "gaussian");
    if (type == "power_law") {
        u.kind = RadialKind::power_law;
        u.alpha = get_num(j, "alpha", 4.0);
        u.u0 = get_num(j, "u0", 1.0);
        if (u.alpha <= 2.0)
            throw ConfigError("potential.radial.alpha", "alpha must exceed 2");
        if (u.u0 <= 0.0)
            throw ConfigError("potential.radial.u0", "u0 must be positive");
    } else if (type == "gaussian") {
        u.kind = RadialKind::gaussian;
        u.mu = get_num(j, "mu", 1.0);
        u.beta = get_num(j, "beta", 1.0);
        if (u.mu <= 0.0) throw ConfigError("potential.radial.mu", "mu must be positive");
        if (u.beta <= 0.0) throw ConfigError("potential.radial.beta", "beta must be positive");
    } else if (type == "compact_step") {
        u.kind = RadialKind::compact_step;
        u.R = get_num(j, "R", 1.0);
        u.height = get_num(j, "height", 1.0);
        if (u.R <= 0.0) throw ConfigError("potential.radial.R", "R must be positive");
        if (u.height <= 0.0)
            throw ConfigError("potential.radial.height", "height must be positive");
    } else {
        throw ConfigError("potential.radial.type", "unknown radial type '" + type + "'");
    }
    return u;
}

AxisProfile parse_axis(const json& j) {
    AxisProfile g;
    std::string type = j.value("type", "gaussian");
    if (type == "gaussian") {
        g.kind = AxisKind::gaussian;
        g.nu = get_num(j, "nu", 1.0);
        if (g.nu <= 0.0) throw ConfigError("potential.axis.nu", "nu must be positive");
    } else if (type == "compact_bump") {
        g.kind = AxisKind::compact_bump;
        g.L = get_num(j, "L", 1.0);
        if (g.L <= 0.0) throw ConfigError("potential.axis.L", "L must be positive");
    } else {
        throw ConfigError("potential.axis.type", "unknown axis type '" + type + "'");
    }
    return g;
}

}  // namespace

ValidatedConfig validate_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
    ValidatedConfig cfg;

    const json field = doc.value("field", json::object());
    cfg.field.b = get_num(field, "b", 1.0);
    cfg.field.q = get_int(field, "q", 0);
    if (cfg.field.b <= 0.0) throw ConfigError("field.b", "b must be positive");
    if (cfg.field.q < 0) throw ConfigError("field.q", "q must be a nonnegative integer");

    const json pot = doc.value("potential", json::object());
    if (pot.contains("sign")) {
        const json& s = pot.at("sign");
        int v = 0;
        if (s.is_number_integer()) v = s.get<int>();
        else if (s.is_string()) {
            std::string t = s.get<std::string>();
            v = (t == "+1" || t == "+" || t == "plus") ? 1
                : (t == "-1" || t == "-" || t == "minus") ? -1 : 0;
        }
        if (v != 1 && v != -1)
            throw ConfigError("potential.sign", "sign must be +1 or -1");
        cfg.potential.sign_j = v;
    }
    cfg.potential.coupling = get_num(pot, "coupling", 0.0);
    if (cfg.potential.coupling < 0.0)
        throw ConfigError("potential.coupling", "coupling must be >= 0");
    cfg.potential.radial = parse_radial(pot.value("radial", json::object()));
    cfg.potential.axis = parse_axis(pot.value("axis", json::object()));

    const json tr = doc.value("truncation", json::object());
    cfg.trunc.j_max = get_int(tr, "j_max", cfg.field.q + 6);
    cfg.trunc.l_max = get_int(tr, "l_max", 48);
    cfg.trunc.n_axis = get_int(tr, "n_axis", 48);
    cfg.trunc.axis_halfwidth = get_num(tr, "axis_halfwidth", 0.0);
    cfg.trunc.det_tail_tol = get_num(tr, "det_tail_tol", 1e-10);
    if (cfg.trunc.j_max < cfg.field.q + 2)
        throw ConfigError("truncation.j_max", "j_max must be at least q + 2");
    if (cfg.trunc.l_max <= 0) throw ConfigError("truncation.l_max", "l_max must be positive");
    if (cfg.trunc.n_axis <= 0) throw ConfigError("truncation.n_axis", "n_axis must be positive");
    if (cfg.trunc.axis_halfwidth < 0.0)
        throw ConfigError("truncation.axis_halfwidth", "axis_halfwidth must be >= 0");
    if (cfg.trunc.det_tail_tol <= 0.0)
        throw ConfigError("truncation.det_tail_tol", "det_tail_tol must be positive");
    return cfg;
}

ValidatedConfig config_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError("", std::string("config parse failure: ") + e.what());
    }
    return validate_config(doc);
}

json ValidatedConfig::to_json() const {
    json doc;
    doc["field"] = {{"b", field.b}, {"q", field.q}};
    json rad;
    switch (potential.radial.kind) {
        case RadialKind::power_law:
            rad = {{"type", "power_law"}, {"alpha", potential.radial.alpha},
                   {"u0", potential.radial.u0}};
            break;
        case RadialKind::gaussian:
            rad = {{"type", "gaussian"}, {"mu", potential.radial.mu},
                   {"beta", potential.radial.beta}};
            break;
        case RadialKind::compact_step:
            rad = {{"type", "compact_step"}, {"R", potential.radial.R},
                   {"height", potential.radial.height}};
            break;
    }
    json ax;
    if (potential.axis.kind == AxisKind::gaussian)
        ax = {{"type", "gaussian"}, {"nu", potential.axis.nu}};
    else
        ax = {{"type", "compact_bump"}, {"L", potential.axis.L}};
    doc["potential"] = {{"sign", potential.sign_j}, {"coupling", potential.coupling},
                        {"radial", rad}, {"axis", ax}};
    doc["truncation"] = {{"j_max", trunc.j_max}, {"l_max", trunc.l_max},
                         {"n_axis", trunc.n_axis}, {"axis_halfwidth", trunc.axis_halfwidth},
                         {"det_tail_tol", trunc.det_tail_tol}};
    return doc;
}

std::string ValidatedConfig::canonical_string() const {
    return to_json().dump();  // nlohmann objects serialize with sorted keys
}

std::string ValidatedConfig::config_hash() const {
    return hex64(fnv1a(canonical_string()));
}

}  // namespace landau
