#ifndef LANDAU_SSF_BREIT_WIGNER_HPP
#define LANDAU_SSF_BREIT_WIGNER_HPP

#include <vector>

#include "landau/effective_operator.hpp"
#include "landau/resonance_search.hpp"

namespace landau {

struct SSFPoint {
    double lambda = 0;
    double xi2 = 0;
    double correction = 0;  // (1/pi) Im tr T_V(lambda + i0), level tail summed
    double xi = 0;          // xi2 + correction, anchored
};

struct SSFTrace {
    std::vector<SSFPoint> pts;   // strictly increasing lambda
    double lambda_anchor = 0;
    int path_evals = 0;
    int refinements = 0;
    int bridges = 0;             // real-axis steps lifted over a det2 zero
};

struct SSFOptions {
    double lambda_anchor = 0;    // 0 => auto: below the spectrum, |T| small
    double max_step_arg = pi / 4;
    int max_refine = 28;
    double level_margin = 1e-9;  // grid points this close to 2bj are rejected
};

// xi2(lambda) = (1/pi) * continuously unwrapped Arg det2(I + T_V(lambda+i0)),
// anchored to 0 at lambda_anchor deep below the spectrum. The unwrap path
// runs along the real axis and hops each Landau level on a quarter-arc
// through the physical upper half-plane (the epsilon -> 0+ determination).
// xi = xi2 + (1/pi) Im tr T_V(lambda+i0), whose derivative is the
// xi' = xi2' + (1/pi) Im tr dT_V/dz link on each spectral-gap component and
// which fixes the additive constants across the levels.
SSFTrace trace_ssf(const SectorBasis& basis, const std::vector<double>& lambda_grid,
                   const SSFOptions& opts = {});

// Phi(lambda) = sum over the p_q W p_q spectrum of arctan(w / (2 sqrt(lambda))),
// tail-truncated at the spectrum floor; remainder bound added to err_out.
double phi_lambda(double lambda, const ToeplitzSpectrum& w_spectrum,
                  double* tail_bound_out = nullptr);

struct SingularityRow {
    double lambda = 0;
    double xi = 0;
    double phi_term = 0;   // (J/pi) Phi(lambda)
    double deviation_normalized = 0;  // |xi - phi_term| / (sqrt(Phi) + ln^2 lambda)
    double ratio = 0;      // xi / phi_term
};

std::vector<SingularityRow> singularity_check(const SectorBasis& basis,
                                              const std::vector<double>& lambda_list,
                                              const ToeplitzSpectrum& w_spectrum,
                                              const SSFOptions& opts = {});

struct BWDecomposition {
    std::vector<double> mu;
    std::vector<double> xi_prime;       // central differences of the xi trace
    std::vector<double> lorentz_sum;    // sum Im w / (pi |mu - w|^2), Im w != 0
    std::vector<double> residual;       // xi_prime - lorentz_sum
    std::vector<Resonance> used;
    double max_abs_residual = 0;
    double smoothness = 0;              // max |second difference| / h^2
    double bound_scale = 0;             // |ln r| r^{-1/m_perp} / r
};

// Window must avoid real resonances by margin; resonances are the located
// zeros adjacent to the window (chart region mapped from a k-region).
BWDecomposition breit_wigner_residual(const SectorBasis& basis,
                                      const std::vector<double>& mu_grid,
                                      const std::vector<Resonance>& resonances,
                                      const SSFOptions& opts = {});

// Entire test function with gaussian decay: f(z) = (sum_m c_m z^m) e^{-a z^2}.
struct TestFunction {
    std::vector<double> coeffs{1.0};
    double a = 1.0;
    cplx operator()(cplx z) const;
};

struct TraceFormulaResult {
    double lhs = 0;          // -<xi', (psi f)((. - 2bq)/r)>
    double rhs = 0;          // sum over resonances in the window of f((w-2bq)/r)
    double error_bound = 0;  // M(psi) sup_outer |f| N_q(r)
    int resonances_used = 0;
};

// Smooth bump psi = 1 on [w1, w2], supported on [o1, o2] (C^inf glue).
struct BumpWindow {
    double w1 = 0, w2 = 0;  // inner window W (psi == 1)
    double o1 = 0, o2 = 0;  // outer support Omega
    double psi(double x) const;
    double dpsi(double x) const;
};

TraceFormulaResult trace_formula_check(const SectorBasis& basis, const TestFunction& f,
                                       const BumpWindow& window, double r,
                                       const std::vector<Resonance>& resonances,
                                       const ToeplitzSpectrum& w_spectrum,
                                       const SSFOptions& opts = {});

}  // namespace landau

#endif
