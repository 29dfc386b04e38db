#ifndef LANDAU_LANDAU_TOEPLITZ_HPP
#define LANDAU_LANDAU_TOEPLITZ_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "landau/model.hpp"
#include "landau/util.hpp"

namespace landau {

// Radial factor of the orthonormal symmetric-gauge eigenfunction of the
// transverse Landau Hamiltonian at level 2*b*q with angular momentum l.
//
// Convention: the full eigenfunction is radial(rho) * e^{i l theta} / sqrt(2 pi)
// with  integral_0^inf radial^2 rho d rho = 1.  Level q participates in sector
// l iff l >= -q; the radial factor is
//   sqrt(b n!/(n+|l|)!) t^{|l|/2} L_n^{(|l|)}(t) e^{-t/2},  t = b rho^2 / 2,
// with n = min(q, q+l).  Throws std::invalid_argument for l < -q.
double landau_radial(int q, int l, double b, double rho);

// Integral kernel of the projection onto the level-q eigenspace:
//   (b/2pi) L_q(b|X-X'|^2/2) exp(-(b/4)(|X-X'|^2 + 2i(x1 x2' - x1' x2))).
cplx projection_kernel(int q, double b, const std::array<double, 2>& X,
                       const std::array<double, 2>& Xp);

// Partial dyad sum  sum_{l=-q}^{l_cut} psi_{q,l}(X) conj(psi_{q,l}(X'))  which
// converges to projection_kernel as l_cut grows.
cplx projection_kernel_partial(int q, double b, const std::array<double, 2>& X,
                               const std::array<double, 2>& Xp, int l_cut);

// Sector overlap O^{(l)}_{j j'} = integral psi_{j,l} U psi_{j',l} rho d rho.
// Diagonal entries are the eigenvalues of p_j U p_j in sector l.
// Throws ConfigError-free: quadrature non-convergence reported via the
// optional out parameter (achieved error estimate).
double toeplitz_overlap(int j, int jp, int l, const RadialProfile& U, double b,
                        double* err_out = nullptr);

struct ToeplitzSpectrum {
    int q = 0;
    // (l, lambda) sorted by descending eigenvalue.
    std::vector<std::pair<int, double>> eigenvalues;
    bool floor_reached = true;  // false => truncation floor not reached by l_max
    std::uint64_t profile_hash = 0;

    std::vector<double> values() const;
    double n_plus(double s) const;  // #{lambda > s}
};

// Eigenvalues { O^{(l)}_{qq} }_{l >= -q} down to the truncation floor
// (1e-14 * lambda_max) or l = l_max, whichever first; sorted descending.
ToeplitzSpectrum toeplitz_spectrum(int q, const RadialProfile& U, double b,
                                   const Truncation& trunc);

struct CountingSample {
    double s = 0;
    double n_plus = 0;
    double sigma1 = 0, sigma2 = 0;
    double ntilde1 = 0, ntilde2 = 0;
    double law_predicted = 0;  // NaN when no law applies
};

struct CountingReport {
    std::vector<CountingSample> samples;
};

// n_plus(s) = #{lambda > s}; sigma_p(s) = sum (lambda/s)^p (1+lambda^2/s^2)^{-p/2}
// over the whole spectrum; ntilde_p(s) = sum_{lambda <= s} (lambda/s)^p.
// The sandwich 2^{-p/2} ntilde_p <= sigma_p <= ntilde_p + n_plus holds.
CountingReport counting_functions(const ToeplitzSpectrum& spec,
                                  const std::vector<double>& s_grid,
                                  const RadialProfile* law_profile = nullptr,
                                  double b = 1.0);

// Small-s eigenvalue counting law for p_q U p_q by profile family:
//   power_law:    C_alpha s^{-2/alpha},  C_alpha = (b/2) u0^{2/alpha}
//   gaussian:     phi_beta(s) with the three beta regimes
//   compact_step: phi_inf(s) = |ln s| / ln|ln s|
// Log laws require s < 1/e (std::invalid_argument otherwise).
double asymptotic_law(const RadialProfile& U, double b, double s);

struct CountingFit {
    double slope = 0;
    double prefactor = 0;
    double residual = 0;  // rms residual of the linear fit
};

// Least squares for the counting exponent/prefactor. power_law family fits
// ln n+ = slope * ln s + ln prefactor; gaussian beta=1 fits n+ = prefactor*|ln s|
// (slope reported as the |ln s| coefficient). Requires >= 8 samples spanning
// >= 2 decades of s with n+ > 0.
CountingFit fit_counting_exponent(const CountingReport& report, RadialKind family);

}  // namespace landau

#endif
