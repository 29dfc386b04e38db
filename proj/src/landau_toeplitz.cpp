#include "landau/landau_toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "landau/quadrature.hpp"
#include "landau/special.hpp"

namespace landau {

double landau_radial(int q, int l, double b, double rho) {
    if (q < 0) throw std::invalid_argument("landau_radial: q < 0");
    if (l < -q) throw std::invalid_argument("landau_radial: sector l < -q");
    if (rho < 0.0) throw std::invalid_argument("landau_radial: rho < 0");
    const int n = std::min(q, q + l);   // lower oscillator index
    const int a = std::abs(l);
    const double t = 0.5 * b * rho * rho;
    if (t == 0.0) return a == 0 ? std::sqrt(b) * laguerre(n, 0.0, 0.0) : 0.0;
    // normalization sqrt(b n!/(n+a)!) and the weight t^{a/2} e^{-t/2} combined
    // in log space; L_n^{(a)} stays in range for the retained (n, a, t)
    const double ln_norm = 0.5 * (std::log(b) + std::lgamma(n + 1.0) - std::lgamma(n + a + 1.0));
    const double ln_weight = 0.5 * a * std::log(t) - 0.5 * t;
    return std::exp(ln_norm + ln_weight) * laguerre(n, a, t);
}

cplx projection_kernel(int q, double b, const std::array<double, 2>& X,
                       const std::array<double, 2>& Xp) {
    const double dx = X[0] - Xp[0];
    const double dy = X[1] - Xp[1];
    const double d2 = dx * dx + dy * dy;
    const double cross = X[0] * Xp[1] - Xp[0] * X[1];  // x1 x2' - x1' x2
    const double lag = laguerre_plain(q, 0.5 * b * d2);
    const cplx expo = std::exp(cplx(-0.25 * b * d2, -0.5 * b * cross));
    return (b / (2.0 * pi)) * lag * expo;
}

cplx projection_kernel_partial(int q, double b, const std::array<double, 2>& X,
                               const std::array<double, 2>& Xp, int l_cut) {
    const double rho = std::hypot(X[0], X[1]);
    const double rhop = std::hypot(Xp[0], Xp[1]);
    const double th = std::atan2(X[1], X[0]);
    const double thp = std::atan2(Xp[1], Xp[0]);
    cplx acc = 0.0;
    for (int l = -q; l <= l_cut; ++l) {
        const double r1 = landau_radial(q, l, b, rho);
        const double r2 = landau_radial(q, l, b, rhop);
        acc += r1 * r2 * std::exp(cplx(0.0, l * (th - thp)));
    }
    return acc / (2.0 * pi);
}

double toeplitz_overlap(int j, int jp, int l, const RadialProfile& U, double b,
                        double* err_out) {
    if (l < -j || l < -jp)
        throw std::invalid_argument("toeplitz_overlap: level outside sector");
    // integration window: eigenfunction mass lives at t <~ a + 2n + O(sqrt)
    const int a = std::abs(l);
    const int nmax = std::max(std::min(j, j + l), std::min(jp, jp + l));
    const double t_max = a + 2.0 * nmax + 1.0 + 30.0 * std::sqrt(a + 2.0 * nmax + 1.0) + 40.0;
    double rho_max = std::sqrt(2.0 * t_max / b);
    if (U.kind == RadialKind::compact_step) rho_max = std::min(rho_max, U.R);
    auto f = [&](double rho) {
        return landau_radial(j, l, b, rho) * U(rho) * landau_radial(jp, l, b, rho) * rho;
    };
    QuadResult qr = integrate_gl(f, 0.0, rho_max, 1e-12, 64, 6);
    if (err_out) *err_out = qr.err_estimate;
    if (!qr.converged && !err_out)
        throw std::runtime_error("toeplitz_overlap: quadrature did not converge");
    return qr.value;
}

std::vector<double> ToeplitzSpectrum::values() const {
    std::vector<double> v;
    v.reserve(eigenvalues.size());
    for (const auto& p : eigenvalues) v.push_back(p.second);
    return v;
}

double ToeplitzSpectrum::n_plus(double s) const {
    double c = 0;
    for (const auto& p : eigenvalues)
        if (p.second > s) c += 1;
    return c;
}

ToeplitzSpectrum toeplitz_spectrum(int q, const RadialProfile& U, double b,
                                   const Truncation& trunc) {
    ToeplitzSpectrum spec;
    spec.q = q;
    spec.floor_reached = false;
    double lambda_max = 0.0;
    for (int l = -q; l <= trunc.l_max; ++l) {
        double lam = toeplitz_overlap(q, q, l, U, b);
        if (lam < 0 && lam > -1e-15) lam = 0.0;  // quadrature noise on U >= 0
        spec.eigenvalues.emplace_back(l, lam);
        lambda_max = std::max(lambda_max, lam);
        if (l >= 0 && lam < 1e-14 * lambda_max) {
            spec.floor_reached = true;
            break;
        }
    }
    std::stable_sort(spec.eigenvalues.begin(), spec.eigenvalues.end(),
                     [](const auto& x, const auto& y) { return x.second > y.second; });
    return spec;
}

CountingReport counting_functions(const ToeplitzSpectrum& spec,
                                  const std::vector<double>& s_grid,
                                  const RadialProfile* law_profile, double b) {
    CountingReport rep;
    rep.samples.reserve(s_grid.size());
    const auto vals = spec.values();
    for (double s : s_grid) {
        CountingSample c;
        c.s = s;
        for (double lam : vals) {
            if (lam > s) c.n_plus += 1;
            const double u = lam / s;
            const double f1 = u / std::sqrt(1.0 + u * u);
            c.sigma1 += f1;
            c.sigma2 += f1 * f1;
            if (lam <= s) {
                c.ntilde1 += u;
                c.ntilde2 += u * u;
            }
        }
        c.law_predicted = std::numeric_limits<double>::quiet_NaN();
        if (law_profile) {
            try {
                c.law_predicted = asymptotic_law(*law_profile, b, s);
            } catch (const std::invalid_argument&) {
            }
        }
        rep.samples.push_back(c);
    }
    return rep;
}

double asymptotic_law(const RadialProfile& U, double b, double s) {
    if (s <= 0.0) throw std::invalid_argument("asymptotic_law: s must be positive");
    switch (U.kind) {
        case RadialKind::power_law:
            // C_alpha = (b/4pi) * 2pi * u0^{2/alpha}: constant angular factor
            return 0.5 * b * std::pow(U.u0, 2.0 / U.alpha) * std::pow(s, -2.0 / U.alpha);
        case RadialKind::gaussian: {
            if (s >= std::exp(-1.0))
                throw std::invalid_argument("asymptotic_law: log laws need s < 1/e");
            const double ls = std::abs(std::log(s));
            if (U.beta < 1.0)
                return 0.5 * b * std::pow(U.mu, -1.0 / U.beta) * std::pow(ls, 1.0 / U.beta);
            if (U.beta == 1.0) return ls / std::log(1.0 + 2.0 * U.mu / b);
            return (U.beta / (U.beta - 1.0)) * ls / std::log(ls);
        }
        case RadialKind::compact_step: {
            if (s >= std::exp(-1.0))
                throw std::invalid_argument("asymptotic_law: log laws need s < 1/e");
            const double ls = std::abs(std::log(s));
            return ls / std::log(ls);
        }
    }
    throw std::invalid_argument("asymptotic_law: unknown profile family");
}

CountingFit fit_counting_exponent(const CountingReport& report, RadialKind family) {
    std::vector<double> xs, ys;
    double s_min = std::numeric_limits<double>::infinity(), s_max = 0.0;
    for (const auto& c : report.samples) {
        if (c.n_plus <= 0.0) continue;
        s_min = std::min(s_min, c.s);
        s_max = std::max(s_max, c.s);
        switch (family) {
            case RadialKind::power_law:
                xs.push_back(std::log(c.s));
                ys.push_back(std::log(c.n_plus));
                break;
            case RadialKind::gaussian:
                xs.push_back(std::abs(std::log(c.s)));
                ys.push_back(c.n_plus);
                break;
            case RadialKind::compact_step: {
                const double ls = std::abs(std::log(c.s));
                xs.push_back(ls / std::log(ls));
                ys.push_back(c.n_plus);
                break;
            }
        }
    }
    if (xs.size() < 8)
        throw std::invalid_argument("fit_counting_exponent: need >= 8 usable samples");
    if (s_max / s_min < 100.0)
        throw std::invalid_argument("fit_counting_exponent: need >= 2 decades of s");

    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    const double m = (n * sxy - sx * sy) / denom;
    const double c0 = (sy - m * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (m * xs[i] + c0);
        rss += r * r;
    }
    CountingFit fit;
    fit.slope = m;
    fit.prefactor = family == RadialKind::power_law ? std::exp(c0) : m;
    fit.residual = std::sqrt(rss / n);
    return fit;
}

}  // namespace landau
