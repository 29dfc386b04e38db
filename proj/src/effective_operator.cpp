#include "landau/effective_operator.hpp"

#include <cmath>

#include "landau/quadrature.hpp"

namespace landau {

// ------------------------------------------------------------- SectorBasis

SectorBasis SectorBasis::build(const ValidatedConfig& cfg) {
    SectorBasis b;
    b.cfg_ = cfg;
    b.axis_ = AxisBasis::build(cfg.potential.axis, cfg.trunc.n_axis,
                               cfg.trunc.axis_halfwidth);
    const int jmax = cfg.trunc.j_max;
    b.l_min_ = -jmax;
    b.l_max_ = cfg.trunc.l_max;
    b.level_trace_.assign(jmax + 1, 0.0);
    b.sectors_.reserve(b.l_max_ - b.l_min_ + 1);
    const auto& U = cfg.potential.radial;
    for (int l = b.l_min_; l <= b.l_max_; ++l) {
        Sector s;
        s.l = l;
        s.j_lo = std::max(0, -l);
        const int nlev = jmax + 1 - s.j_lo;
        s.overlap.resize(nlev, nlev);
        for (int j = s.j_lo; j <= jmax; ++j)
            for (int jp = s.j_lo; jp <= j; ++jp) {
                const double o = toeplitz_overlap(j, jp, l, U, cfg.field.b);
                s.overlap(j - s.j_lo, jp - s.j_lo) = o;
                s.overlap(jp - s.j_lo, j - s.j_lo) = o;
            }
        for (int j = s.j_lo; j <= jmax; ++j)
            b.level_trace_[j] += s.overlap(j - s.j_lo, j - s.j_lo);
        b.sectors_.push_back(std::move(s));
    }
    auto f = [&](double rho) { return U(rho) * rho; };
    const double rmax = U.support_radius(1e-18);
    b.transverse_trace_ = cfg.field.b * integrate_gl(f, 0.0, rmax, 1e-13, 64).value;
    return b;
}

const SectorBasis::Sector& SectorBasis::sector(int l) const {
    return sectors_[static_cast<std::size_t>(l - l_min_)];
}

// --------------------------------------------------------------- workspace

namespace {

// Full-pivot adaptive cross approximation G ~ P R. The level kernels are
// analytic, so the cross ranks stay small; the residual max-norm is driven
// below tol * max|G|.
void aca_factor(const Eigen::MatrixXcd& G, double tol, Eigen::MatrixXcd& P,
                Eigen::MatrixXcd& R, int max_rank) {
    const int n = static_cast<int>(G.rows());
    Eigen::MatrixXcd E = G;
    const double scale = E.cwiseAbs().maxCoeff();
    std::vector<Eigen::VectorXcd> us, vs;
    if (scale > 0.0) {
        while (static_cast<int>(us.size()) < max_rank) {
            int pi = 0, pj = 0;
            double best = 0.0;
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const double a = std::abs(E(i, j));
                    if (a > best) {
                        best = a;
                        pi = i;
                        pj = j;
                    }
                }
            if (best <= tol * scale) break;
            Eigen::VectorXcd u = E.col(pj);
            Eigen::VectorXcd v = E.row(pi).transpose() / E(pi, pj);
            E.noalias() -= u * v.transpose();
            us.push_back(std::move(u));
            vs.push_back(std::move(v));
        }
    }
    const int r = static_cast<int>(us.size());
    P.resize(n, r);
    R.resize(r, n);
    for (int m = 0; m < r; ++m) {
        P.col(m) = us[m];
        R.row(m) = vs[m].transpose();
    }
}

}  // namespace

ChannelWorkspace build_workspace(const SectorBasis& basis, const ChannelSet& ch,
                                 double rank_tol) {
    ChannelWorkspace ws;
    ws.ch = ch;
    const int nlev = static_cast<int>(ch.kj.size());
    ws.n_levels = nlev;
    ws.G.resize(nlev);
    ws.trG.resize(nlev);
    ws.P.resize(nlev);
    ws.R.resize(nlev);
    ws.rank.assign(nlev, 0);
    const int n = static_cast<int>(basis.axis().grid.x.size());
    for (int j = 0; j < nlev; ++j) {
        ws.G[j] = resolvent_matrix(ch.kj[j], basis.axis());
        ws.trG[j] = ws.G[j].trace();
        aca_factor(ws.G[j], rank_tol, ws.P[j], ws.R[j], n);
        ws.rank[j] = static_cast<int>(ws.P[j].cols());
    }
    ws.RP.resize(static_cast<std::size_t>(nlev) * nlev);
    for (int j = 0; j < nlev; ++j)
        for (int jp = 0; jp < nlev; ++jp)
            ws.RP[static_cast<std::size_t>(j) * nlev + jp] = ws.R[j] * ws.P[jp];
    ws.TGG.resize(static_cast<std::size_t>(nlev) * nlev);
    ws.HSG.resize(nlev);
    for (int j = 0; j < nlev; ++j) {
        ws.HSG[j] = ws.G[j].squaredNorm();
        for (int jp = 0; jp <= j; ++jp) {
            const cplx t = (ws.RP[static_cast<std::size_t>(jp) * nlev + j] *
                            ws.RP[static_cast<std::size_t>(j) * nlev + jp])
                               .trace();
            ws.TGG[static_cast<std::size_t>(j) * nlev + jp] = t;
            ws.TGG[static_cast<std::size_t>(jp) * nlev + j] = t;
        }
    }
    return ws;
}

// ------------------------------------------------------------ determinants

Eigen::MatrixXcd assemble_sector_dense(const SectorBasis& basis, int l,
                                       const ChannelWorkspace& ws) {
    const auto& sec = basis.sector(l);
    const int jmax = basis.cfg().trunc.j_max;
    const int nlev = jmax + 1 - sec.j_lo;
    const int n = static_cast<int>(basis.axis().grid.x.size());
    const double je = basis.cfg().potential.sign_j * basis.cfg().potential.coupling;
    Eigen::MatrixXcd M(nlev * n, nlev * n);
    for (int j = 0; j < nlev; ++j)
        for (int jp = 0; jp < nlev; ++jp)
            M.block(j * n, jp * n, n, n) = je * sec.overlap(j, jp) * ws.G[sec.j_lo + jp];
    return M;
}

LogValue log_det2_matrix(const Eigen::MatrixXcd& A) {
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXcd IA = Eigen::MatrixXcd::Identity(n, n) + A;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(IA);
    LogValue v;
    double log_abs = 0.0, arg = 0.0;
    const auto& U = lu.matrixLU();
    for (int i = 0; i < n; ++i) {
        const cplx piv = U(i, i);
        const double ap = std::abs(piv);
        if (ap == 0.0) {
            v.singular = true;
            v.log_abs = -std::numeric_limits<double>::infinity();
            return v;
        }
        log_abs += std::log(ap);
        arg += std::arg(piv);
    }
    // permutation sign
    if (lu.permutationP().determinant() < 0) arg += pi;
    const cplx trA = A.trace();
    v.log_abs = log_abs - trA.real();
    v.arg = arg - trA.imag();
    return v;
}

cplx det2(const Eigen::MatrixXcd& A) {
    LogValue v = log_det2_matrix(A);
    if (v.singular) return 0.0;
    return std::exp(cplx(v.log_abs, v.arg));
}

LogValue det2_sector(const SectorBasis& basis, int l, const ChannelWorkspace& ws) {
    const auto& sec = basis.sector(l);
    const int jmax = basis.cfg().trunc.j_max;
    const double je = basis.cfg().potential.sign_j * basis.cfg().potential.coupling;
    const int nlev = jmax + 1 - sec.j_lo;
    // tr M is exact (untruncated diagonal sums)
    cplx trM = 0.0;
    for (int j = 0; j < nlev; ++j)
        trM += je * sec.overlap(j, j) * ws.trG[sec.j_lo + j];
    // compressed block matrix S[(j,m),(j',m')] = je O_{jj'} (R_j P_j')_{mm'};
    // det(I + M) = det(I + S) since M = X Yhat with Yhat X = S
    std::vector<int> off(nlev + 1, 0);
    for (int j = 0; j < nlev; ++j) off[j + 1] = off[j] + ws.rank[sec.j_lo + j];
    const int dim = off[nlev];
    Eigen::MatrixXcd S(dim, dim);
    for (int j = 0; j < nlev; ++j)
        for (int jp = 0; jp < nlev; ++jp) {
            const auto& rp = ws.RP[static_cast<std::size_t>(sec.j_lo + j) * ws.n_levels +
                                   (sec.j_lo + jp)];
            S.block(off[j], off[jp], ws.rank[sec.j_lo + j], ws.rank[sec.j_lo + jp]) =
                (je * sec.overlap(j, jp)) * rp;
        }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Eigen::MatrixXcd::Identity(dim, dim) + S);
    LogValue v;
    double log_abs = 0.0, arg = 0.0;
    const auto& U = lu.matrixLU();
    for (int i = 0; i < dim; ++i) {
        const cplx piv = U(i, i);
        const double ap = std::abs(piv);
        if (ap < 1e-300) {
            v.singular = true;
            v.log_abs = -std::numeric_limits<double>::infinity();
            return v;
        }
        log_abs += std::log(ap);
        arg += std::arg(piv);
    }
    if (dim > 0 && lu.permutationP().determinant() < 0) arg += pi;
    v.log_abs = log_abs - trM.real();
    v.arg = arg - trM.imag();
    return v;
}

namespace {

// second-order log det2 for a weak sector; remainder <= h^3/(3(1-h)) with
// h the Hilbert-Schmidt norm of the sector matrix
bool sector_logdet_series(const SectorBasis& basis, int l, const ChannelWorkspace& ws,
                          double budget, LogValue& out) {
    const auto& sec = basis.sector(l);
    const int jmax = basis.cfg().trunc.j_max;
    const double je = basis.cfg().potential.sign_j * basis.cfg().potential.coupling;
    const int nlev = jmax + 1 - sec.j_lo;
    double h2 = 0.0;
    for (int j = 0; j < nlev; ++j)
        for (int jp = 0; jp < nlev; ++jp) {
            const double o = je * sec.overlap(j, jp);
            h2 += o * o * ws.HSG[sec.j_lo + jp];
        }
    const double h = std::sqrt(h2);
    if (h > 0.25 || h * h * h / (3.0 * (1.0 - h)) > budget) return false;
    cplx tr2 = 0.0;
    for (int j = 0; j < nlev; ++j)
        for (int jp = 0; jp < nlev; ++jp) {
            const double o2 = je * sec.overlap(j, jp) * je * sec.overlap(jp, j);
            tr2 += o2 * ws.TGG[static_cast<std::size_t>(sec.j_lo + j) * ws.n_levels +
                               (sec.j_lo + jp)];
        }
    out.log_abs = -0.5 * tr2.real();
    out.arg = -0.5 * tr2.imag();
    out.singular = false;
    return true;
}

}  // namespace

DetValue log_det2_total(const SectorBasis& basis, const ChannelWorkspace& ws,
                        const DetOptions& opts) {
    DetValue out;
    const double tol = opts.tail_tol.value_or(basis.cfg().trunc.det_tail_tol);
    if (basis.cfg().potential.coupling == 0.0) {
        out.l_lo = out.l_hi = 0;
        return out;
    }
    auto add_sector = [&](int l) -> double {
        LogValue v;
        if (!sector_logdet_series(basis, l, ws, 0.3 * tol, v))
            v = det2_sector(basis, l, ws);
        if (v.singular) {
            out.singular = true;
            out.log_abs = -std::numeric_limits<double>::infinity();
            return std::numeric_limits<double>::infinity();
        }
        out.log_abs += v.log_abs;
        out.arg += v.arg;
        if (opts.keep_sectors) out.per_sector.emplace_back(l, v);
        return std::abs(v.log_abs) + std::abs(v.arg);
    };
    // upward sweep from l = 0, then downward from l = -1; in each direction
    // stop after the contribution stays below the tail tolerance twice
    int small_run = 0;
    int l = 0;
    for (; l <= basis.l_max(); ++l) {
        const double c = add_sector(l);
        if (out.singular) break;
        out.tail_bound = c;
        if (c < tol) {
            if (++small_run >= 2) break;
        } else {
            small_run = 0;
        }
    }
    out.l_hi = std::min(l, basis.l_max());
    out.tail_converged = out.singular || l <= basis.l_max();
    if (!out.singular) {
        small_run = 0;
        int ld = -1;
        for (; ld >= basis.l_min(); --ld) {
            const double c = add_sector(ld);
            if (out.singular) break;
            if (c < tol) {
                if (++small_run >= 2) break;
            } else {
                small_run = 0;
            }
        }
        out.l_lo = std::max(ld, basis.l_min());
    }
    return out;
}

DetValue log_det2_total(const SectorBasis& basis, const ChannelSet& ch,
                        const DetOptions& opts) {
    if (basis.cfg().potential.coupling == 0.0) return DetValue{};
    ChannelWorkspace ws = build_workspace(basis, ch);
    return log_det2_total(basis, ws, opts);
}

cplx dlog_det2_dk(const SectorBasis& basis, int q_label, cplx k, double rel_step) {
    const double h = rel_step * std::max(std::abs(k), 1e-6);
    auto eval = [&](cplx kk) {
        return log_det2_total(basis, channels_chart(q_label, kk, basis.cfg().field,
                                                    basis.cfg().trunc.j_max));
    };
    DetValue p = eval(k + h);
    DetValue m = eval(k - h);
    const double dre = p.log_abs - m.log_abs;
    const double dim = wrap_angle(p.arg - m.arg);
    return cplx(dre, dim) / (2.0 * h);
}

// ------------------------------------------------------------------ traces

std::vector<std::pair<int, double>> bq_spectrum(const SectorBasis& basis) {
    std::vector<std::pair<int, double>> out;
    const auto& cfg = basis.cfg();
    if (cfg.potential.coupling == 0.0) return out;
    const int q = cfg.field.q;
    const double mass = basis.axis().mass_quad;
    for (int l = basis.l_min(); l <= basis.l_max(); ++l) {
        const auto& sec = basis.sector(l);
        if (q < sec.j_lo) continue;
        out.emplace_back(l, 0.5 * cfg.potential.coupling * mass *
                                sec.overlap(q - sec.j_lo, q - sec.j_lo));
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

cplx trace_dk_A_level(const SectorBasis& basis, int j, const ChannelWorkspace& ws) {
    const auto& cfg = basis.cfg();
    if (j == cfg.field.q) return 0.0;  // remainder kernel vanishes on the diagonal
    const double je = cfg.potential.sign_j * cfg.potential.coupling;
    const cplx trDG = resolvent_matrix_dk(ws.ch.kj[j], ws.ch.k, basis.axis()).trace();
    cplx acc = 0.0;
    double prev = std::numeric_limits<double>::infinity();
    int small_run = 0;
    for (int l = 0; l <= basis.l_max() || l <= -basis.l_min(); ++l) {
        double c = 0.0;
        for (int sl : {l, -l - 1}) {
            if (!basis.has_sector(sl)) continue;
            const auto& sec = basis.sector(sl);
            if (j < sec.j_lo) continue;
            const cplx term = je * sec.overlap(j - sec.j_lo, j - sec.j_lo) * trDG;
            acc += term;
            c += std::abs(term);
        }
        if (c < 1e-14 * (1.0 + std::abs(acc))) {
            if (++small_run >= 2) break;
        } else {
            small_run = 0;
        }
        prev = c;
    }
    (void)prev;
    return acc;
}

cplx trace_dk_A_closed(const SectorBasis& basis, int j, const ChannelSet& ch) {
    const auto& cfg = basis.cfg();
    const int q = cfg.field.q;
    if (j == q) return 0.0;
    const double b = cfg.field.b;
    // int V dx = J eps (2pi/b) * transverse_trace * axis mass
    const double intV = cfg.potential.sign_j * cfg.potential.coupling * (2.0 * pi / b) *
                        basis.transverse_trace() * cfg.potential.axis.mass();
    const cplx k = ch.k;
    const cplx pref = (2.0 * k * b / (8.0 * pi)) * intV;
    if (j > q) {
        const cplx base = cplx(2.0 * b * (j - q), 0.0) - k * k;
        return pref * std::pow(base, -1.5);
    }
    const cplx base = k * k + cplx(2.0 * b * (q - j), 0.0);
    return -cplx(0.0, 1.0) * pref * std::pow(base, -1.5);
}

cplx trace_dz_T(const SectorBasis& basis, const ChannelSet& ch) {
    const auto& cfg = basis.cfg();
    const double je = cfg.potential.sign_j * cfg.potential.coupling;
    const double mass = basis.axis().mass_quad;
    cplx acc = 0.0;
    for (int j = 0; j <= cfg.trunc.j_max; ++j) {
        const cplx kj = ch.kj[j];
        acc += je * basis.level_trace(j) * mass * cplx(0.0, -0.25) / (kj * kj * kj);
    }
    return acc;
}

cplx trace_T(const SectorBasis& basis, const ChannelSet& ch) {
    const auto& cfg = basis.cfg();
    const double je = cfg.potential.sign_j * cfg.potential.coupling;
    const double mass = basis.axis().mass_quad;
    cplx acc = 0.0;
    for (int j = 0; j <= cfg.trunc.j_max; ++j)
        acc += je * basis.level_trace(j) * mass * cplx(0.0, 0.5) / ch.kj[j];
    return acc;
}

double im_trace_T_full(const SectorBasis& basis, const ChannelSet& ch) {
    const auto& cfg = basis.cfg();
    const double je = cfg.potential.sign_j * cfg.potential.coupling;
    if (je == 0.0) return 0.0;
    const double mass = basis.axis().mass_quad;
    double acc = 0.0;
    for (int j = 0; j <= cfg.trunc.j_max; ++j)
        acc += je * basis.level_trace(j) * mass * (cplx(0.0, 0.5) / ch.kj[j]).imag();
    // closed-channel tail beyond j_max: exactly zero on the real boundary,
    // O(Im z * j^{-3/2}) terms on upper-half-plane arcs
    const double tt = basis.transverse_trace();
    for (int j = cfg.trunc.j_max + 1; j < cfg.trunc.j_max + 100000; ++j) {
        const cplx kj = std::sqrt(ch.z - 2.0 * cfg.field.b * j);
        const double term = je * tt * mass * (cplx(0.0, 0.5) / kj).imag();
        acc += term;
        if (std::abs(term) < 1e-15 * (1.0 + std::abs(acc))) break;
    }
    return acc;
}

}  // namespace landau
