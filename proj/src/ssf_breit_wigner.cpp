#include "landau/ssf_breit_wigner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace landau {

namespace {

// Continuous-argument walker along a path in the closed upper half lambda
// plane. Real-axis steps that refuse to unwrap (a determinant zero on the
// axis: a bound state or a real resonance) are lifted over a small
// rectangular detour through the zero-free open upper half-plane, which is
// exactly the epsilon -> 0+ determination of Arg det2.
class ArgWalker {
  public:
    ArgWalker(const SectorBasis& basis, const SSFOptions& opts)
        : basis_(basis), opts_(opts), jmax_(basis.cfg().trunc.j_max) {}

    LogValue eval(cplx z) {
        ++evals_;
        ChannelSet ch = z.imag() > 0.0
                            ? channels_upper(z, basis_.cfg().field, jmax_, basis_.cfg().field.q)
                            : channels_boundary(z.real(), basis_.cfg().field, jmax_,
                                                basis_.cfg().field.q);
        DetValue d = log_det2_total(basis_, ch);
        if (!d.tail_converged)
            throw std::runtime_error("ssf: determinant sector tail did not converge");
        LogValue v;
        v.log_abs = d.log_abs;
        v.arg = d.arg;
        v.singular = d.singular || d.log_abs < -60.0;
        return v;
    }

    // start the walk
    void start(cplx z0) {
        cur_z_ = z0;
        cur_v_ = eval(z0);
        if (cur_v_.singular)
            throw std::runtime_error("ssf: anchor point sits on a determinant zero");
        theta_ = cur_v_.arg;
    }

    // straight segment to z1, accumulating the continuous argument
    void advance_to(cplx z1) {
        if (z1 == cur_z_) return;
        LogValue v1 = eval(z1);
        walk_segment(cur_z_, cur_v_, z1, v1, 0, true);
        cur_z_ = z1;
        cur_v_ = v1;
    }

    // arc z(t) = center + rho^2 e^{2 i theta(t)}, theta from pi/2 to 0
    void advance_arc(double center, double rho2) {
        auto zt = [&](double t) {
            const double th = 0.5 * pi * (1.0 - t);
            return cplx(center, 0.0) + rho2 * std::exp(cplx(0.0, 2.0 * th));
        };
        // forced t-split to 1/16 guards against winding aliasing on the hop
        std::vector<std::pair<double, LogValue>> nodes;
        nodes.emplace_back(0.0, cur_v_);
        for (int i = 1; i <= 16; ++i)
            nodes.emplace_back(i / 16.0, eval(zt(i / 16.0)));
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
            walk_curve_rec(zt, nodes[i].first, nodes[i].second, nodes[i + 1].first,
                           nodes[i + 1].second, 0);
        cur_z_ = zt(1.0);
        cur_v_ = nodes.back().second;
    }

    double theta() const { return theta_; }
    int evals() const { return evals_; }
    int refinements() const { return refinements_; }
    int bridges() const { return bridges_; }

  private:
    void walk_segment(cplx a, const LogValue& va, cplx b, const LogValue& vb, int depth,
                      bool allow_bridge) {
        const double da = wrap_angle(vb.arg - va.arg);
        const bool on_axis = a.imag() == 0.0 && b.imag() == 0.0;
        // long steps are split geometrically regardless of the wrapped
        // increment (a full 2pi turn between samples would alias)
        const bool too_long = std::abs(b - a) > 0.02 * basis_.cfg().field.b;
        const bool stuck = depth >= opts_.max_refine ||
                           (on_axis && depth >= 6 && std::abs(std::abs(da) - pi) < 0.25) ||
                           vb.singular || va.singular;
        if (!too_long && !stuck && std::abs(da) < opts_.max_step_arg && !vb.singular &&
            !va.singular) {
            theta_ += da;
            return;
        }
        if (too_long && depth < opts_.max_refine) {
            ++refinements_;
            const cplx m = 0.5 * (a + b);
            LogValue vm = eval(m);
            walk_segment(a, va, m, vm, depth + 1, allow_bridge);
            walk_segment(m, vm, b, vb, depth + 1, allow_bridge);
            return;
        }
        if (stuck && allow_bridge && on_axis) {
            ++bridges_;
            const double h = std::max(std::abs(b - a), 1e-9 * (1.0 + std::abs(a)));
            const cplx a_up = a + cplx(0.0, h);
            const cplx b_up = b + cplx(0.0, h);
            LogValue vau = eval(a_up);
            LogValue vbu = eval(b_up);
            walk_segment(a, va, a_up, vau, 0, false);
            walk_segment(a_up, vau, b_up, vbu, 0, false);
            walk_segment(b_up, vbu, b, vb, 0, false);
            return;
        }
        if (depth >= opts_.max_refine) {
            if (vb.singular || va.singular)
                throw std::runtime_error(
                    "ssf: sample on a determinant zero; move the grid off the resonance");
            theta_ += da;  // best effort off the axis; arcs stay smooth
            return;
        }
        ++refinements_;
        const cplx m = 0.5 * (a + b);
        LogValue vm = eval(m);
        walk_segment(a, va, m, vm, depth + 1, allow_bridge);
        walk_segment(m, vm, b, vb, depth + 1, allow_bridge);
    }

    void walk_curve_rec(const std::function<cplx(double)>& zt, double t0, const LogValue& v0,
                        double t1, const LogValue& v1, int depth) {
        const double da = wrap_angle(v1.arg - v0.arg);
        if (std::abs(da) < opts_.max_step_arg || depth >= opts_.max_refine) {
            theta_ += da;
            return;
        }
        ++refinements_;
        const double tm = 0.5 * (t0 + t1);
        LogValue vm = eval(zt(tm));
        walk_curve_rec(zt, t0, v0, tm, vm, depth + 1);
        walk_curve_rec(zt, tm, vm, t1, v1, depth + 1);
    }

    const SectorBasis& basis_;
    SSFOptions opts_;
    int jmax_;
    cplx cur_z_;
    LogValue cur_v_;
    double theta_ = 0.0;
    int evals_ = 0, refinements_ = 0, bridges_ = 0;
};

double auto_anchor(const SectorBasis& basis, double grid_min) {
    const auto& cfg = basis.cfg();
    const double s = cfg.potential.coupling * cfg.potential.radial.sup() *
                     cfg.potential.axis.mass();
    double a = -std::max(2.0 * cfg.field.b, 4.0 * s * s);
    if (grid_min <= a) a = grid_min - 2.0 * cfg.field.b;
    return a;
}

}  // namespace

SSFTrace trace_ssf(const SectorBasis& basis, const std::vector<double>& lambda_grid,
                   const SSFOptions& opts) {
    const auto& cfg = basis.cfg();
    const double b = cfg.field.b;
    if (lambda_grid.empty()) throw std::invalid_argument("trace_ssf: empty grid");
    std::vector<double> grid = lambda_grid;
    std::sort(grid.begin(), grid.end());
    for (double lam : grid)
        for (int j = 0; 2.0 * b * j <= lam + 1.0; ++j)
            if (std::abs(lam - 2.0 * b * j) < opts.level_margin)
                throw std::invalid_argument("trace_ssf: grid point on a Landau level");

    SSFTrace out;
    out.lambda_anchor =
        opts.lambda_anchor != 0.0 ? opts.lambda_anchor : auto_anchor(basis, grid.front());
    if (out.lambda_anchor >= 0.0)
        throw std::invalid_argument("trace_ssf: anchor must sit below the spectrum");

    // hop geometry: each Landau level crossed on an arc of lambda-radius rho2
    const double rho2 = 0.9 * b;
    const int comp_of_top = static_cast<int>(std::floor(grid.back() / (2.0 * b))) + 1;

    ArgWalker walker(basis, opts);
    walker.start(cplx(out.lambda_anchor, 0.0));
    const double theta0 = walker.theta();

    std::map<double, double> theta_at;  // grid lambda -> unwrapped arg
    auto visit = [&](double lam) {
        walker.advance_to(cplx(lam, 0.0));
        auto it = theta_at.find(lam);
        if (it == theta_at.end()) theta_at.emplace(lam, walker.theta());
    };

    std::size_t gi = 0;
    for (int m = 0; m < comp_of_top; ++m) {
        // component C_m = (2b(m-1), 2bm), with C_0 = (anchor, 0)
        const double hi = 2.0 * b * m;
        while (gi < grid.size() && grid[gi] < hi) {
            visit(grid[gi]);
            ++gi;
        }
        if (gi >= grid.size()) break;
        // hop over the level at hi
        walker.advance_to(cplx(hi - rho2, 0.0));
        walker.advance_arc(hi, rho2);
    }
    while (gi < grid.size()) {
        visit(grid[gi]);
        ++gi;
    }

    out.path_evals = walker.evals();
    out.refinements = walker.refinements();
    out.bridges = walker.bridges();
    out.pts.reserve(grid.size());
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (double lam : grid) {
        if (lam == prev) continue;
        prev = lam;
        SSFPoint p;
        p.lambda = lam;
        p.xi2 = (theta_at.at(lam) - theta0) / pi;
        p.correction =
            im_trace_T_full(basis, channels_boundary(lam, cfg.field, cfg.trunc.j_max,
                                                     cfg.field.q)) /
            pi;
        p.xi = p.xi2 + p.correction;
        out.pts.push_back(p);
    }
    return out;
}

double phi_lambda(double lambda, const ToeplitzSpectrum& w_spectrum, double* tail_bound_out) {
    if (lambda <= 0.0) throw std::invalid_argument("phi_lambda: lambda must be positive");
    const double denom = 2.0 * std::sqrt(lambda);
    double acc = 0.0;
    const auto vals = w_spectrum.values();
    for (double w : vals) acc += std::atan(w / denom);
    if (tail_bound_out) {
        *tail_bound_out = 0.0;
        if (vals.size() >= 2 && vals.back() > 0.0) {
            const double r = std::min(vals.back() / vals[vals.size() - 2], 0.95);
            *tail_bound_out = (vals.back() / denom) * r / (1.0 - r);
        }
    }
    return acc;
}

std::vector<SingularityRow> singularity_check(const SectorBasis& basis,
                                              const std::vector<double>& lambda_list,
                                              const ToeplitzSpectrum& w_spectrum,
                                              const SSFOptions& opts) {
    const auto& cfg = basis.cfg();
    const double level = 2.0 * cfg.field.b * cfg.field.q;
    std::vector<double> grid;
    grid.reserve(lambda_list.size());
    for (double lam : lambda_list) grid.push_back(level + lam);
    SSFTrace tr = trace_ssf(basis, grid, opts);
    std::vector<SingularityRow> rows;
    for (const auto& p : tr.pts) {
        SingularityRow row;
        row.lambda = p.lambda - level;
        row.xi = p.xi;
        const double phi = phi_lambda(row.lambda, w_spectrum);
        row.phi_term = cfg.potential.sign_j * phi / pi;
        const double lnl = std::log(row.lambda);
        const double norm = std::sqrt(std::max(phi, 0.0)) + lnl * lnl;
        row.deviation_normalized = std::abs(row.xi - row.phi_term) / norm;
        row.ratio = row.phi_term != 0.0 ? row.xi / row.phi_term
                                        : std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
    }
    return rows;
}

BWDecomposition breit_wigner_residual(const SectorBasis& basis,
                                      const std::vector<double>& mu_grid,
                                      const std::vector<Resonance>& resonances,
                                      const SSFOptions& opts) {
    if (mu_grid.size() < 5)
        throw std::invalid_argument("breit_wigner_residual: need >= 5 window samples");
    BWDecomposition bw;
    bw.used = resonances;
    SSFTrace tr = trace_ssf(basis, mu_grid, opts);
    const auto& cfg = basis.cfg();
    const double level = 2.0 * cfg.field.b * cfg.field.q;

    const std::size_t n = tr.pts.size();
    std::vector<double> xi(n), mu(n);
    for (std::size_t i = 0; i < n; ++i) {
        mu[i] = tr.pts[i].lambda;
        xi[i] = tr.pts[i].xi;
    }
    double r_scale = 0.0;
    for (double m : mu) r_scale = std::max(r_scale, std::abs(m - level));
    double mperp_pow = 0.0;  // r^{-1/m_perp}: 1 for super-polynomial W
    if (cfg.potential.radial.kind == RadialKind::power_law)
        mperp_pow = 1.0 / cfg.potential.radial.alpha;
    bw.bound_scale =
        std::abs(std::log(r_scale)) * std::pow(r_scale, -mperp_pow) / r_scale;

    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h = 0.5 * (mu[i + 1] - mu[i - 1]);
        const double xp = (xi[i + 1] - xi[i - 1]) / (2.0 * h);
        double ls = 0.0;
        for (const auto& res : resonances) {
            const double imw = res.z.imag();
            if (imw == 0.0) continue;
            const cplx d = cplx(mu[i], 0.0) - res.z;
            ls += res.multiplicity * imw / (pi * std::norm(d));
        }
        bw.mu.push_back(mu[i]);
        bw.xi_prime.push_back(xp);
        bw.lorentz_sum.push_back(ls);
        bw.residual.push_back(xp - ls);
    }
    for (double r : bw.residual) bw.max_abs_residual = std::max(bw.max_abs_residual, std::abs(r));
    for (std::size_t i = 1; i + 1 < bw.residual.size(); ++i) {
        const double h = 0.5 * (bw.mu[i + 1] - bw.mu[i - 1]);
        const double d2 = (bw.residual[i + 1] - 2.0 * bw.residual[i] + bw.residual[i - 1]) /
                          (h * h);
        bw.smoothness = std::max(bw.smoothness, std::abs(d2));
    }
    return bw;
}

cplx TestFunction::operator()(cplx z) const {
    cplx p = 0.0;
    for (std::size_t m = coeffs.size(); m-- > 0;) p = p * z + coeffs[m];
    return p * std::exp(-a * z * z);
}

namespace {
double glue(double t) {  // 0 at t<=0, 1 at t>=1, C^inf
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double p = std::exp(-1.0 / t);
    const double q = std::exp(-1.0 / (1.0 - t));
    return p / (p + q);
}
double dglue(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double p = std::exp(-1.0 / t);
    const double q = std::exp(-1.0 / (1.0 - t));
    const double dp = p / (t * t);
    const double dq = -q / ((1.0 - t) * (1.0 - t));
    return (dp * q - p * dq) / ((p + q) * (p + q));
}
}  // namespace

double BumpWindow::psi(double x) const {
    if (x <= o1 || x >= o2) return 0.0;
    if (x < w1) return glue((x - o1) / (w1 - o1));
    if (x > w2) return glue((o2 - x) / (o2 - w2));
    return 1.0;
}

double BumpWindow::dpsi(double x) const {
    if (x <= o1 || x >= o2) return 0.0;
    if (x < w1) return dglue((x - o1) / (w1 - o1)) / (w1 - o1);
    if (x > w2) return -dglue((o2 - x) / (o2 - w2)) / (o2 - w2);
    return 0.0;
}

TraceFormulaResult trace_formula_check(const SectorBasis& basis, const TestFunction& f,
                                       const BumpWindow& window, double r,
                                       const std::vector<Resonance>& resonances,
                                       const ToeplitzSpectrum& w_spectrum,
                                       const SSFOptions& opts) {
    const auto& cfg = basis.cfg();
    const double level = 2.0 * cfg.field.b * cfg.field.q;
    TraceFormulaResult out;

    // rhs: resonances with (w - 2bq)/r inside the window box
    const double half_im = window.w2 - window.w1;
    for (const auto& res : resonances) {
        const cplx s = (res.z - level) / r;
        if (s.real() >= window.w1 && s.real() <= window.w2 && std::abs(s.imag()) <= half_im) {
            out.rhs += res.multiplicity * f(s).real();
            out.resonances_used += res.multiplicity;
        }
    }

    // lhs = -<xi', (psi f)((.-2bq)/r)> = int xi(lambda) d/dlambda[(psi f)(scaled)]
    // on a grid refined near the real resonance abscissae
    std::vector<double> grid;
    const int n_base = 600;
    for (int i = 0; i <= n_base; ++i) {
        const double s = window.o1 + (window.o2 - window.o1) * i / n_base;
        grid.push_back(level + r * s);
    }
    for (const auto& res : resonances) {
        const double re_s = (res.z.real() - level) / r;
        if (re_s <= window.o1 || re_s >= window.o2) continue;
        for (int i = 1; i <= 24; ++i) {
            const double d = 0.25 * std::pow(0.65, i);
            for (double sgn : {-1.0, 1.0}) {
                const double s = re_s + sgn * d;
                if (s > window.o1 && s < window.o2) grid.push_back(level + r * s);
            }
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    // drop grid points indistinguishable from a resonance abscissa
    std::vector<double> clean;
    for (double lam : grid) {
        bool bad = false;
        for (const auto& res : resonances)
            if (std::abs(lam - res.z.real()) < 1e-11 * std::max(1.0, std::abs(lam))) bad = true;
        if (!bad) clean.push_back(lam);
    }
    SSFTrace tr = trace_ssf(basis, clean, opts);
    auto dphi = [&](double lam) {
        const double s = (lam - level) / r;
        const cplx fp_c = f(cplx(s + 5e-7, 0.0)) - f(cplx(s - 5e-7, 0.0));
        const double fp = fp_c.real() / 1e-6;
        return (window.dpsi(s) * f(cplx(s, 0.0)).real() + window.psi(s) * fp) / r;
    };
    double lhs = 0.0;
    for (std::size_t i = 0; i + 1 < tr.pts.size(); ++i) {
        const double a = tr.pts[i].lambda, b2 = tr.pts[i + 1].lambda;
        lhs += 0.5 * (tr.pts[i].xi * dphi(a) + tr.pts[i + 1].xi * dphi(b2)) * (b2 - a);
    }
    out.lhs = lhs;

    // error bound: M(psi) * sup_{Omega \ W, Im z <= 0} |f| * N_q(r)
    const double s1 = 0.7 * std::sqrt(std::min(std::abs(window.o1), std::abs(window.o2)));
    const double s_cut = s1 * std::sqrt(r);
    const auto wv = w_spectrum.values();
    double n_plus = 0, nt1 = 0, nt2 = 0;
    for (double w : wv) {
        if (w > s_cut) n_plus += 1;
        const double bq = 0.5 * w;  // B_q eigenvalues are half the W ones
        const double s_half = 0.5 * s_cut;
        if (bq <= s_half) {
            nt1 += bq / s_half;
            nt2 += (bq / s_half) * (bq / s_half);
        }
    }
    const double nq = n_plus * std::abs(std::log(r)) + nt1 + nt2;
    double sup_f = 0.0;
    for (int i = 0; i <= 80; ++i) {
        const double sr = window.o1 + (window.o2 - window.o1) * i / 80.0;
        if (sr > window.w1 && sr < window.w2) continue;
        for (int jj = 0; jj <= 8; ++jj) {
            const double si = -half_im * jj / 8.0;
            sup_f = std::max(sup_f, std::abs(f(cplx(sr, si))));
        }
    }
    const double m_psi = 8.0;  // pinned implementation constant
    out.error_bound = m_psi * sup_f * std::max(nq, 1.0);
    return out;
}

}  // namespace landau
