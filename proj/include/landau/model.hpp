#ifndef LANDAU_MODEL_HPP
#define LANDAU_MODEL_HPP

#include <stdexcept>
#include <string>

#include <nlohmann/json_fwd.hpp>

namespace landau {

// Validation failure; `field` names the offending config entry.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string f, const std::string& msg)
        : std::runtime_error(msg), field(std::move(f)) {}
};

// Magnetic field strength b > 0 and target Landau level index q.
// Landau levels are 2*b*j, j >= 0. Natural units, hbar = 2m = 1.
struct FieldConfig {
    double b = 1.0;
    int q = 0;
    double level(int j) const { return 2.0 * b * j; }
};

enum class RadialKind { power_law, gaussian, compact_step };
enum class AxisKind { gaussian, compact_bump };

// Transverse factor U(rho) >= 0.
//   power_law:    u0 * (1 + rho^2)^(-alpha/2), alpha > 2
//   gaussian:     exp(-mu * rho^(2 beta)), mu > 0, beta > 0
//   compact_step: height * 1{rho <= R}
struct RadialProfile {
    RadialKind kind = RadialKind::gaussian;
    double alpha = 4.0, u0 = 1.0;  // power_law
    double mu = 1.0, beta = 1.0;   // gaussian
    double R = 1.0, height = 1.0;  // compact_step
    double operator()(double rho) const;
    double sup() const;
    // rho beyond which U < tiny (integration cutoff; exact for compact_step).
    double support_radius(double tiny) const;
};

// Axis factor g(x3) >= 0, decaying super-exponentially.
//   gaussian:     exp(-nu * x3^2), nu > 0
//   compact_bump: exp(1 - 1/(1 - (x3/L)^2)) on |x3| < L, else 0
struct AxisProfile {
    AxisKind kind = AxisKind::gaussian;
    double nu = 1.0;
    double L = 1.0;
    double operator()(double x3) const;
    double sup() const { return 1.0; }
    double halfwidth(double tiny) const;  // g < tiny beyond this |x3|
    // Mass integral of g. Closed form sqrt(pi/nu) for the gaussian family,
    // cached quadrature for the bump.
    double mass() const;
    bool has_closed_form_mass() const { return kind == AxisKind::gaussian; }
};

// V(x) = J * eps * U(rho) * g(x3), J in {+1, -1}.
struct PotentialProfile {
    int sign_j = +1;
    double coupling = 0.0;  // eps >= 0
    RadialProfile radial;
    AxisProfile axis;

    double eval(double rho, double x3) const {
        return sign_j * coupling * radial(rho) * axis(x3);
    }
    // W(rho) = eps * U(rho) * mass(g); the Toeplitz symbol of |V|.
    double w_amplitude() const { return coupling * axis.mass(); }
};

// Discretization knobs. Defaults keep sector matrices small while resolving
// the library's stated tolerances.
struct Truncation {
    int j_max = -1;          // highest Landau level retained; default q + 6
    int l_max = 48;          // highest angular sector swept
    int n_axis = 48;         // axis quadrature nodes
    double axis_halfwidth = 0.0;  // 0 => derived from the axis profile
    double det_tail_tol = 1e-10;
};

struct ValidatedConfig {
    FieldConfig field;
    PotentialProfile potential;
    Truncation trunc;

    // Canonical serialized form; identical configs serialize identically.
    nlohmann::json to_json() const;
    std::string canonical_string() const;
    std::string config_hash() const;
};

// Parse + validate a config document; fills defaults. Throws ConfigError
// naming the offending field. Deterministic.
ValidatedConfig validate_config(const nlohmann::json& doc);
ValidatedConfig config_from_string(const std::string& text);

}  // namespace landau

#endif
