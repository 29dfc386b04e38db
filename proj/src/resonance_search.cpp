#include "landau/resonance_search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace landau {

FieldFn det_field(const SectorBasis& basis, double tail_tol) {
    const SectorBasis* b = &basis;
    const int q = basis.cfg().field.q;
    const int jmax = basis.cfg().trunc.j_max;
    DetOptions opts;
    if (tail_tol > 0.0) opts.tail_tol = tail_tol;
    // looser determinant tails afford looser level compression
    const double rank_tol = tail_tol > 0.0 ? std::max(1e-12, 1e-3 * tail_tol) : 1e-13;
    return [b, q, jmax, opts, rank_tol](cplx k) -> LogValue {
        ChannelWorkspace ws =
            build_workspace(*b, channels_chart(q, k, b->cfg().field, jmax), rank_tol);
        DetValue d = log_det2_total(*b, ws, opts);
        LogValue v;
        v.log_abs = d.log_abs;
        v.arg = d.arg;
        v.singular = d.singular;
        return v;
    };
}

// ----------------------------------------------------------------- regions

bool Region::contains(cplx k) const {
    switch (kind) {
        case Kind::annulus: {
            const double r = std::abs(k);
            return r > r1 && r < r2;
        }
        case Kind::sector: {
            const double r = std::abs(k);
            if (r <= r1 || r >= r2) return false;
            double th = std::arg(k);
            double lo = th1, hi = th2;
            while (th < lo) th += 2.0 * pi;
            return th <= hi || (th - 2.0 * pi) >= lo;
        }
        case Kind::box:
            return k.real() > re1 && k.real() < re2 && k.imag() > im1 && k.imag() < im2;
    }
    return false;
}

double Region::outer_radius() const {
    switch (kind) {
        case Kind::annulus:
        case Kind::sector:
            return r2;
        case Kind::box:
            return std::max(std::hypot(re1, im1),
                            std::max(std::hypot(re1, im2),
                                     std::max(std::hypot(re2, im1), std::hypot(re2, im2))));
    }
    return 0;
}

double Region::inner_radius() const {
    switch (kind) {
        case Kind::annulus:
        case Kind::sector:
            return r1;
        case Kind::box: {
            if (re1 <= 0 && re2 >= 0 && im1 <= 0 && im2 >= 0) return 0.0;
            const double dx = std::max({re1, -re2, 0.0});
            const double dy = std::max({im1, -im2, 0.0});
            return std::hypot(dx, dy);
        }
    }
    return 0;
}

Region Region::annulus(double r1, double r2) {
    Region r;
    r.kind = Kind::annulus;
    r.r1 = r1;
    r.r2 = r2;
    return r;
}
Region Region::sector(double r1, double r2, double th1, double th2) {
    Region r;
    r.kind = Kind::sector;
    r.r1 = r1;
    r.r2 = r2;
    r.th1 = th1;
    r.th2 = th2;
    return r;
}
Region Region::box(double re1, double re2, double im1, double im2) {
    Region r;
    r.kind = Kind::box;
    r.re1 = re1;
    r.re2 = re2;
    r.im1 = im1;
    r.im2 = im2;
    return r;
}

std::optional<Region> Region::parse(const std::string& spec) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t c = spec.find(':', pos);
        if (c == std::string::npos) {
            parts.push_back(spec.substr(pos));
            break;
        }
        parts.push_back(spec.substr(pos, c - pos));
        pos = c + 1;
    }
    if (parts.empty()) return std::nullopt;
    try {
        if (parts[0] == "annulus" && parts.size() == 3)
            return annulus(std::stod(parts[1]), std::stod(parts[2]));
        if (parts[0] == "annulus" && parts.size() == 2) {
            const double r = std::stod(parts[1]);
            return annulus(r, 2.0 * r);
        }
        if (parts[0] == "sector" && parts.size() == 5)
            return sector(std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3]),
                          std::stod(parts[4]));
        if (parts[0] == "box" && parts.size() == 5)
            return box(std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3]),
                       std::stod(parts[4]));
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return std::nullopt;
}

// ----------------------------------------------------------- winding count

namespace {

struct CurveSample {
    double t;
    LogValue v;
};

// Adaptive sampling of the closed curve; level-synchronous refinement so the
// point batches can be evaluated in parallel deterministically.
ContourResult wind_curve(const FieldFn& f, const std::function<cplx(double)>& gamma,
                         const ContourOptions& opts) {
    ContourResult res;
    std::vector<CurveSample> s;
    const int n0 = std::max(8, opts.initial_points);
    s.resize(n0 + 1);
    std::atomic<bool> sing{false};
    parallel_for(n0 + 1, global_threads(), [&](std::size_t i) {
        const double t = static_cast<double>(i) / n0;
        s[i] = {t, f(gamma(t))};
        if (s[i].v.singular) sing = true;
    });
    res.evals = n0 + 1;
    int forced = 1;  // one unconditional halving pass validates the step control
    for (;;) {
        if (sing) {
            res.error = "determinant zero on the contour";
            return res;
        }
        std::vector<double> mids;
        for (std::size_t i = 0; i + 1 < s.size(); ++i) {
            const double da = wrap_angle(s[i + 1].v.arg - s[i].v.arg);
            if (forced > 0 || std::abs(da) >= opts.max_step_arg)
                mids.push_back(0.5 * (s[i].t + s[i + 1].t));
        }
        if (forced > 0) --forced;
        if (mids.empty()) break;
        if (res.evals + static_cast<int>(mids.size()) > opts.max_points) {
            res.error = "contour refinement exceeded the evaluation budget";
            return res;
        }
        std::vector<CurveSample> add(mids.size());
        parallel_for(mids.size(), global_threads(), [&](std::size_t i) {
            add[i] = {mids[i], f(gamma(mids[i]))};
            if (add[i].v.singular) sing = true;
        });
        res.evals += static_cast<int>(mids.size());
        std::vector<CurveSample> merged;
        merged.reserve(s.size() + add.size());
        std::merge(s.begin(), s.end(), add.begin(), add.end(), std::back_inserter(merged),
                   [](const CurveSample& a, const CurveSample& b) { return a.t < b.t; });
        s.swap(merged);
    }
    double total = 0.0;
    double min_log = s[0].v.log_abs;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        total += wrap_angle(s[i + 1].v.arg - s[i].v.arg);
        min_log = std::min(min_log, s[i].v.log_abs);
    }
    res.winding = total / (2.0 * pi);
    res.min_log_abs = min_log;
    if (min_log < std::log(opts.min_abs_floor)) {
        res.error = "contour passes too close to a zero; inflate the region";
        return res;
    }
    const double snapped = std::round(res.winding);
    if (std::abs(res.winding - snapped) > opts.snap_tol) {
        res.error = "winding number failed to snap to an integer";
        return res;
    }
    res.count = static_cast<int>(snapped);
    res.ok = true;
    return res;
}

}  // namespace

ContourResult count_zeros_curve(const FieldFn& f, const std::function<cplx(double)>& gamma,
                                const ContourOptions& opts) {
    return wind_curve(f, gamma, opts);
}

ContourResult count_zeros_contour(const FieldFn& f, const Region& region,
                                  const ContourOptions& opts) {
    switch (region.kind) {
        case Region::Kind::annulus: {
            auto outer = [&](double t) {
                return cplx(region.r2 * std::cos(2 * pi * t), region.r2 * std::sin(2 * pi * t));
            };
            auto inner = [&](double t) {
                return cplx(region.r1 * std::cos(2 * pi * t), region.r1 * std::sin(2 * pi * t));
            };
            ContourResult a = wind_curve(f, outer, opts);
            if (!a.ok) return a;
            ContourResult b = wind_curve(f, inner, opts);
            if (!b.ok) return b;
            ContourResult res = a;
            res.evals += b.evals;
            res.min_log_abs = std::min(a.min_log_abs, b.min_log_abs);
            res.winding = a.winding - b.winding;
            res.count = a.count - b.count;
            return res;
        }
        case Region::Kind::sector: {
            const double r1 = region.r1, r2 = region.r2, th1 = region.th1, th2 = region.th2;
            auto gamma = [&](double t) -> cplx {
                const double u = 4.0 * t;
                if (u <= 1.0) {
                    const double th = th1 + (th2 - th1) * u;
                    return std::polar(r2, th);
                }
                if (u <= 2.0) return std::polar(r2 + (r1 - r2) * (u - 1.0), th2);
                if (u <= 3.0) return std::polar(r1, th2 + (th1 - th2) * (u - 2.0));
                return std::polar(r1 + (r2 - r1) * (u - 3.0), th1);
            };
            return wind_curve(f, gamma, opts);
        }
        case Region::Kind::box: {
            auto gamma = [&](double t) -> cplx {
                const double u = 4.0 * t;
                if (u <= 1.0) return cplx(region.re1 + (region.re2 - region.re1) * u, region.im1);
                if (u <= 2.0)
                    return cplx(region.re2, region.im1 + (region.im2 - region.im1) * (u - 1.0));
                if (u <= 3.0)
                    return cplx(region.re2 + (region.re1 - region.re2) * (u - 2.0), region.im2);
                return cplx(region.re1, region.im2 + (region.im1 - region.im2) * (u - 3.0));
            };
            return wind_curve(f, gamma, opts);
        }
    }
    ContourResult res;
    res.error = "unknown region kind";
    return res;
}

// ------------------------------------------------------------ subdivision

namespace {

struct Cell {
    double re1, re2, im1, im2;
    double width() const { return std::max(re2 - re1, im2 - im1); }
    cplx center() const { return cplx(0.5 * (re1 + re2), 0.5 * (im1 + im2)); }
};

bool cell_intersects(const Cell& c, const Region& rg) {
    switch (rg.kind) {
        case Region::Kind::box:
            return c.re1 < rg.re2 && c.re2 > rg.re1 && c.im1 < rg.im2 && c.im2 > rg.im1;
        case Region::Kind::annulus:
        case Region::Kind::sector: {
            const double dx = std::max({0.0, c.re1, -c.re2});
            const double dy = std::max({0.0, c.im1, -c.im2});
            const double rmin = std::hypot(dx, dy);
            const double rmax = std::max(std::max(std::hypot(c.re1, c.im1), std::hypot(c.re1, c.im2)),
                                         std::max(std::hypot(c.re2, c.im1), std::hypot(c.re2, c.im2)));
            if (rmin >= rg.r2 || rmax <= rg.r1) return false;
            if (rg.kind == Region::Kind::annulus) return true;
            // conservative angular test on corners and edge midpoints
            const double mid = 0.5 * (rg.th1 + rg.th2);
            const double half = 0.5 * (rg.th2 - rg.th1);
            const double pts[8][2] = {{c.re1, c.im1}, {c.re1, c.im2}, {c.re2, c.im1},
                                      {c.re2, c.im2}, {0.5 * (c.re1 + c.re2), c.im1},
                                      {0.5 * (c.re1 + c.re2), c.im2}, {c.re1, 0.5 * (c.im1 + c.im2)},
                                      {c.re2, 0.5 * (c.im1 + c.im2)}};
            for (const auto& p : pts) {
                double d = wrap_angle(std::atan2(p[1], p[0]) - mid);
                if (std::abs(d) <= half + 0.3) return true;
            }
            // cell straddling the origin sees every angle
            if (c.re1 <= 0 && c.re2 >= 0 && c.im1 <= 0 && c.im2 >= 0) return true;
            return false;
        }
    }
    return true;
}

bool cell_admissible(const Cell& c, double r_min, double r_max) {
    const double rmax_cell = std::max(std::max(std::hypot(c.re1, c.im1), std::hypot(c.re1, c.im2)),
                                      std::max(std::hypot(c.re2, c.im1), std::hypot(c.re2, c.im2)));
    if (r_max > 0 && rmax_cell >= r_max) return false;
    if (r_min > 0) {
        const double dx = std::max({0.0, c.re1, -c.re2});
        const double dy = std::max({0.0, c.im1, -c.im2});
        if (std::hypot(dx, dy) <= r_min) return false;
    }
    return true;
}

ContourResult count_cell(const FieldFn& f, const Cell& c, const ContourOptions& opts) {
    return count_zeros_contour(f, Region::box(c.re1, c.re2, c.im1, c.im2), opts);
}

}  // namespace

namespace {

// log-deflated field: divides out already-located zeros
FieldFn deflate(const FieldFn& f, const std::vector<Resonance>* found) {
    return [&f, found](cplx k) -> LogValue {
        LogValue v = f(k);
        for (const auto& r : *found) {
            const cplx d = k - r.k;
            const double a = std::abs(d);
            if (a == 0.0) {
                v.singular = true;
                return v;
            }
            v.log_abs -= r.multiplicity * std::log(a);
            v.arg -= r.multiplicity * std::arg(d);
        }
        return v;
    };
}

std::vector<cplx> region_seeds(const Region& region) {
    std::vector<cplx> seeds;
    switch (region.kind) {
        case Region::Kind::annulus:
        case Region::Kind::sector: {
            const double rm = std::sqrt(region.r1 * region.r2);
            const double t1 = region.kind == Region::Kind::sector ? region.th1 : 0.0;
            const double t2 = region.kind == Region::Kind::sector ? region.th2 : 2.0 * pi;
            for (int i = 0; i < 12; ++i)
                seeds.push_back(std::polar(rm, t1 + (t2 - t1) * (i + 0.5) / 12.0));
            for (int i = 0; i < 6; ++i)
                seeds.push_back(std::polar(0.75 * rm + 0.5 * (region.r2 - rm),
                                           t1 + (t2 - t1) * (i + 0.25) / 6.0));
            break;
        }
        case Region::Kind::box: {
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    seeds.push_back(cplx(region.re1 + (region.re2 - region.re1) * (i + 0.5) / 4.0,
                                         region.im1 + (region.im2 - region.im1) * (j + 0.5) / 4.0));
            break;
        }
    }
    return seeds;
}

}  // namespace

std::vector<Resonance> locate_resonances(const FieldFn& f, const Region& region,
                                         const SearchOptions& opts) {
    std::vector<Resonance> found;
    const double rmin_admissible = opts.domain_r_min;
    const double rmax_admissible = opts.domain_r_max;
    auto admissible_k = [&](cplx k) {
        const double a = std::abs(k);
        if (rmin_admissible > 0 && a <= rmin_admissible * 1.0001) return false;
        if (rmax_admissible > 0 && a >= rmax_admissible * 0.9999) return false;
        return true;
    };

    // region-level census; empty regions skip everything
    int region_count = -1;
    {
        ContourResult total = count_zeros_contour(f, region, opts.contour);
        if (total.ok) {
            region_count = total.count;
            if (region_count == 0) return found;
        }
    }

    // fast path: deflated Newton sweeps from deterministic seeds, accepted
    // only when the multiplicities reproduce the region census exactly
    if (region_count > 0) {
        FieldFn fd = deflate(f, &found);
        const double basin_lo = 0.6 * region.inner_radius();
        const double basin_hi = 1.5 * region.outer_radius();
        auto newton_value = [&](cplx k) -> std::optional<cplx> {
            for (int it = 0; it < opts.newton_max_iters; ++it) {
                if (!admissible_k(k)) return std::nullopt;
                if (std::abs(k) < basin_lo || std::abs(k) > basin_hi) return std::nullopt;
                const double h = 1e-7 * std::max(std::abs(k), 1e-9);
                const LogValue vc = fd(k);
                if (vc.singular || vc.log_abs < -600.0) return k;
                if (!admissible_k(k + h) || !admissible_k(k - h)) return std::nullopt;
                const LogValue vp = fd(k + h);
                const LogValue vm = fd(k - h);
                const cplx fc = std::exp(cplx(0.0, vc.arg));
                const cplx fp = std::exp(cplx(vp.log_abs - vc.log_abs, vp.arg));
                const cplx fm = std::exp(cplx(vm.log_abs - vc.log_abs, vm.arg));
                const cplx df = (fp - fm) / (2.0 * h);
                if (std::abs(df) == 0.0 || !std::isfinite(df.real()) ||
                    !std::isfinite(df.imag()))
                    return std::nullopt;
                const cplx step = -fc / df;
                k += step;
                if (std::abs(step) < opts.newton_tol_rel * std::max(std::abs(k), 1e-12))
                    return k;
            }
            return std::nullopt;
        };
        int mult_total = 0;
        const auto seeds = region_seeds(region);
        for (std::size_t pass = 0; pass < 3 && mult_total < region_count; ++pass) {
            for (const cplx& seed : seeds) {
                if (mult_total >= region_count) break;
                if (!admissible_k(seed)) continue;
                auto k = newton_value(seed);
                if (!k || !region.contains(*k) || !admissible_k(*k)) continue;
                bool merged = false;
                for (auto& r : found)
                    if (std::abs(r.k - *k) < 1e-6 * std::max(1.0, std::abs(*k))) {
                        r.multiplicity += 1;  // deflated residue of a multiple zero
                        merged = true;
                        break;
                    }
                if (!merged) {
                    Resonance r;
                    r.k = *k;
                    r.z = opts.zq_level + (*k) * (*k);
                    r.multiplicity = 1;
                    r.residual_log_abs = f(*k).log_abs;
                    r.newton_iters = opts.newton_max_iters;
                    r.refined = true;
                    found.push_back(r);
                }
                ++mult_total;
            }
        }
        if (mult_total == region_count) {
            std::sort(found.begin(), found.end(), [](const Resonance& a, const Resonance& b) {
                const double ra = std::abs(a.k), rb = std::abs(b.k);
                if (ra != rb) return ra < rb;
                return std::arg(a.k) < std::arg(b.k);
            });
            return found;
        }
        found.clear();  // incomplete: fall through to the subdivision census
    }
    const double R = region.outer_radius();
    const double min_cell = std::max(opts.min_cell, opts.min_cell_rel * R);
    const double rmin_adm = opts.domain_r_min;
    const double rmax_adm = opts.domain_r_max;

    // initial cover: bounding square split until cells clear the admissible
    // bounds, then pruned against the region
    std::deque<Cell> work;
    std::vector<Cell> clusters_pending;
    {
        std::deque<Cell> seed;
        seed.push_back(Cell{-R, R, -R, R});
        while (!seed.empty()) {
            Cell c = seed.front();
            seed.pop_front();
            if (!cell_intersects(c, region)) continue;
            if (cell_admissible(c, rmin_adm, rmax_adm)) {
                work.push_back(c);
                continue;
            }
            if (c.width() < std::max(min_cell, 0.5 * rmin_adm)) continue;  // inadmissible sliver
            const double cx = 0.5 * (c.re1 + c.re2), cy = 0.5 * (c.im1 + c.im2);
            seed.push_back(Cell{c.re1, cx, c.im1, cy});
            seed.push_back(Cell{cx, c.re2, c.im1, cy});
            seed.push_back(Cell{c.re1, cx, cy, c.im2});
            seed.push_back(Cell{cx, c.re2, cy, c.im2});
        }
    }

    // Newton on the analytic value f rescaled by its local log magnitude:
    // fhat(x) = exp(log f(x) - log|f(k)|), step = -m fhat / fhat'. Central
    // differences of the rescaled value stay accurate arbitrarily close to
    // the zero (unlike differences of log f).
    auto newton = [&](cplx k0, int mult, const Cell& home) -> std::optional<Resonance> {
        cplx k = k0;
        int it = 0;
        for (; it < opts.newton_max_iters; ++it) {
            cplx step;
            if (opts.dlog) {
                const cplx d = opts.dlog(k);
                if (!std::isfinite(d.real()) || !std::isfinite(d.imag()) ||
                    std::abs(d) == 0.0)
                    return std::nullopt;
                step = -static_cast<double>(mult) / d;
            } else {
                const double h = 1e-7 * std::max(std::abs(k), 1e-9);
                const LogValue vc = f(k);
                if (vc.singular || vc.log_abs < -600.0) break;  // exact hit
                const LogValue vp = f(k + h);
                const LogValue vm = f(k - h);
                const cplx fc = std::exp(cplx(0.0, vc.arg));
                const cplx fp = std::exp(cplx(vp.log_abs - vc.log_abs, vp.arg));
                const cplx fm = std::exp(cplx(vm.log_abs - vc.log_abs, vm.arg));
                const cplx df = (fp - fm) / (2.0 * h);
                if (std::abs(df) == 0.0 || !std::isfinite(df.real()) ||
                    !std::isfinite(df.imag()))
                    return std::nullopt;
                step = -static_cast<double>(mult) * fc / df;
            }
            k += step;
            // keep the iterate near its cell
            const double w = home.width();
            if (k.real() < home.re1 - w || k.real() > home.re2 + w || k.imag() < home.im1 - w ||
                k.imag() > home.im2 + w)
                return std::nullopt;
            if (std::abs(step) < opts.newton_tol_rel * std::max(std::abs(k), 1e-12)) break;
        }
        if (rmin_adm > 0 && std::abs(k) <= rmin_adm) return std::nullopt;
        if (rmax_adm > 0 && std::abs(k) >= rmax_adm) return std::nullopt;
        Resonance r;
        r.k = k;
        r.z = opts.zq_level + k * k;
        r.multiplicity = mult;
        r.residual_log_abs = f(k).log_abs;
        r.newton_iters = it + 1;
        r.refined = true;
        return r;
    };

    while (!work.empty()) {
        Cell c = work.front();
        work.pop_front();
        ContourResult cr;
        bool counted = false;
        // deterministic jitter fallback when a zero sits on the cell edge
        for (double inflate : {1.0, 1.031, 0.967}) {
            Cell cc = c;
            const double ex = 0.5 * (inflate - 1.0) * (c.re2 - c.re1);
            const double ey = 0.5 * (inflate - 1.0) * (c.im2 - c.im1);
            cc.re1 -= ex;
            cc.re2 += ex;
            cc.im1 -= ey;
            cc.im2 += ey;
            if (!cell_admissible(cc, rmin_adm, rmax_adm)) continue;
            cr = count_cell(f, cc, opts.contour);
            if (cr.ok) {
                c = cc;
                counted = true;
                break;
            }
        }
        if (!counted) {
            clusters_pending.push_back(c);
            continue;
        }
        if (cr.count == 0) continue;
        if (cr.count == 1 || c.width() <= min_cell) {
            auto r = newton(c.center(), cr.count, c);
            if (r && (c.width() <= min_cell || cr.count == 1)) {
                // require the refined zero to validate: |det2| small
                found.push_back(*r);
            } else {
                Resonance cluster;
                cluster.k = c.center();
                cluster.z = opts.zq_level + cluster.k * cluster.k;
                cluster.multiplicity = cr.count;
                cluster.residual_log_abs = f(cluster.k).log_abs;
                cluster.newton_iters = 0;
                cluster.refined = false;
                found.push_back(cluster);
            }
            continue;
        }
        const double cx = 0.5 * (c.re1 + c.re2), cy = 0.5 * (c.im1 + c.im2);
        work.push_back(Cell{c.re1, cx, c.im1, cy});
        work.push_back(Cell{cx, c.re2, c.im1, cy});
        work.push_back(Cell{c.re1, cx, cy, c.im2});
        work.push_back(Cell{cx, c.re2, cy, c.im2});
    }
    for (const Cell& c : clusters_pending) {
        Resonance cluster;
        cluster.k = c.center();
        cluster.z = opts.zq_level + cluster.k * cluster.k;
        cluster.multiplicity = 1;
        cluster.residual_log_abs = f(cluster.k).log_abs;
        cluster.newton_iters = 0;
        cluster.refined = false;
        found.push_back(cluster);
    }

    // dedupe refined duplicates (a zero straddling a shared edge can be
    // reached from two cells after inflation), then filter by region
    std::vector<Resonance> out;
    for (const auto& r : found) {
        bool dup = false;
        for (auto& o : out)
            if (std::abs(o.k - r.k) < 1e-7 * std::max(1.0, std::abs(r.k))) {
                dup = true;
                break;
            }
        if (!dup && region.contains(r.k)) out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const Resonance& a, const Resonance& b) {
        const double ra = std::abs(a.k), rb = std::abs(b.k);
        if (ra != rb) return ra < rb;
        return std::arg(a.k) < std::arg(b.k);
    });
    return out;
}

std::vector<AnnulusCensusRow> annulus_census(const FieldFn& f,
                                             const std::vector<double>& r_list,
                                             const ToeplitzSpectrum& w_spectrum,
                                             const ContourOptions& opts) {
    std::vector<AnnulusCensusRow> rows;
    rows.reserve(r_list.size());
    for (double r : r_list) {
        AnnulusCensusRow row;
        row.r = r;
        ContourResult cr = count_zeros_contour(f, Region::annulus(r, 2.0 * r), opts);
        if (!cr.ok) throw std::runtime_error("annulus_census: " + cr.error);
        row.count = cr.count;
        row.n_plus = w_spectrum.n_plus(r);
        row.bound = row.n_plus * std::abs(std::log(r));
        row.band_bound = w_spectrum.n_plus(r) - w_spectrum.n_plus(8.0 * r);
        rows.push_back(row);
    }
    return rows;
}

std::pair<int, int> sector_census(const std::vector<Resonance>& res, double delta, int sign_j) {
    int inside = 0, outside = 0;
    for (const auto& r : res) {
        const double lhs = -sign_j * r.k.imag();
        const double rhs = std::abs(r.k.real()) / delta;
        if (lhs <= rhs)
            inside += r.multiplicity;
        else
            outside += r.multiplicity;
    }
    return {inside, outside};
}

}  // namespace landau
