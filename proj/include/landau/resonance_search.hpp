#ifndef LANDAU_RESONANCE_SEARCH_HPP
#define LANDAU_RESONANCE_SEARCH_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "landau/effective_operator.hpp"
#include "landau/util.hpp"

namespace landau {

// Any analytic field presented in log-polar form. The library field is
// det2(I + T_V(z_q(k))); tests inject synthetic products with known zeros.
using FieldFn = std::function<LogValue(cplx)>;

// tail_tol 0 keeps the config's det_tail_tol; searches typically run at a
// looser 1e-8 (winding and refinement only need arg stability)
FieldFn det_field(const SectorBasis& basis, double tail_tol = 0.0);

struct Region {
    enum class Kind { annulus, sector, box };
    Kind kind = Kind::box;
    // annulus/sector: radial bounds; sector adds angular bounds [th1, th2]
    double r1 = 0, r2 = 0, th1 = 0, th2 = 0;
    // box corners
    double re1 = 0, re2 = 0, im1 = 0, im2 = 0;

    bool contains(cplx k) const;
    double outer_radius() const;
    double inner_radius() const;

    static Region annulus(double r1, double r2);
    static Region sector(double r1, double r2, double th1, double th2);
    static Region box(double re1, double re2, double im1, double im2);
    static std::optional<Region> parse(const std::string& spec);  // "annulus:r1:r2", ...
};

struct ContourOptions {
    int initial_points = 64;
    int max_points = 1 << 17;
    double max_step_arg = pi / 2;      // refine while |delta arg| >= this
    double min_abs_floor = 1e-12;      // boundary |det2| floor
    double snap_tol = 0.1;             // |winding - nearest integer| guard
};

struct ContourResult {
    int count = 0;
    double winding = 0;      // raw total arg increment / 2pi
    double min_log_abs = 0;  // over boundary samples
    int evals = 0;
    bool ok = false;
    std::string error;
};

// Winding number of the field along the positively oriented boundary of the
// region (annulus counted as outer circle minus inner circle).
ContourResult count_zeros_contour(const FieldFn& f, const Region& region,
                                  const ContourOptions& opts = {});

// Winding along an explicit closed polyline-ish path given by a parameterized
// curve gamma(t), t in [0,1], gamma(0) = gamma(1).
ContourResult count_zeros_curve(const FieldFn& f, const std::function<cplx(double)>& gamma,
                                const ContourOptions& opts = {});

struct Resonance {
    cplx k;
    cplx z;              // 2bq + k^2 (synthetic fields: z = k)
    int multiplicity = 1;
    double residual_log_abs = 0;  // log|det2| at the refined location
    int newton_iters = 0;
    bool refined = true;          // false: unresolved cluster at min cell size
};

struct SearchOptions {
    double min_cell = 1e-7;        // absolute floor on cell size
    double min_cell_rel = 1e-4;    // relative to region outer radius
    int newton_max_iters = 50;
    double newton_tol_rel = 1e-12;
    ContourOptions contour;
    // optional analytic derivative d/dk log f for Newton; else FD
    std::function<cplx(cplx)> dlog = nullptr;
    double zq_level = 0.0;         // 2bq for the z field of located resonances
    double domain_r_min = 0.0;     // admissible |k| bounds (0: from region)
    double domain_r_max = 0.0;
};

// Recursive quadrisection census + Newton refinement. Unresolved clusters at
// the minimum cell size are reported unrefined with the cell count as
// multiplicity. Deterministic ordering by |k| then phase.
std::vector<Resonance> locate_resonances(const FieldFn& f, const Region& region,
                                         const SearchOptions& opts = {});

struct AnnulusCensusRow {
    double r = 0;
    int count = 0;
    double n_plus = 0;      // n+(r; p_q W p_q)
    double bound = 0;       // n_plus * |ln r|
    double band_bound = 0;  // n+(r, eps pqWpq) - n+(8r, eps pqWpq)
};

// Zero counts in the dyadic annuli r < |k| < 2r paired with the Toeplitz
// counting bound. w_spectrum must be the spectrum of p_q W p_q (coupling
// included).
std::vector<AnnulusCensusRow> annulus_census(const FieldFn& f,
                                             const std::vector<double>& r_list,
                                             const ToeplitzSpectrum& w_spectrum,
                                             const ContourOptions& opts = {});

// Split located resonances by the sector test -J Im k <= delta^{-1} |Re k|
// (inside = the resonance-free wedge pair of the small-coupling theorem).
std::pair<int, int> sector_census(const std::vector<Resonance>& res, double delta, int sign_j);

}  // namespace landau

#endif
