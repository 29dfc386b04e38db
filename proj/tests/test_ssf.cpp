#include <cmath>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "landau/ssf_breit_wigner.hpp"

using namespace landau;
using nlohmann::json;

namespace {

ValidatedConfig cfg_q0(double eps, int sign = +1) {
    json doc = {{"field", {{"b", 1.0}, {"q", 0}}},
                {"potential",
                 {{"sign", sign},
                  {"coupling", eps},
                  {"radial", {{"type", "gaussian"}, {"mu", 1.0}}},
                  {"axis", {{"type", "gaussian"}, {"nu", 1.0}}}}}};
    return validate_config(doc);
}

ToeplitzSpectrum w_spec_of(const ValidatedConfig& cfg) {
    ToeplitzSpectrum s =
        toeplitz_spectrum(cfg.field.q, cfg.potential.radial, cfg.field.b, cfg.trunc);
    for (auto& p : s.eigenvalues) p.second *= cfg.potential.w_amplitude();
    return s;
}

}  // namespace

TEST_CASE("phi closed forms and monotonicity") {
    ToeplitzSpectrum empty;
    CHECK(phi_lambda(0.5, empty) == 0.0);

    ToeplitzSpectrum one;
    one.eigenvalues = {{0, 2.0}};
    CHECK(phi_lambda(1.0, one) == doctest::Approx(M_PI / 4.0).epsilon(1e-14));
    CHECK_THROWS_AS(phi_lambda(-1.0, one), std::invalid_argument);

    // large-lambda regime: Phi ~ tr / (2 sqrt(lambda))
    ToeplitzSpectrum few;
    few.eigenvalues = {{0, 0.5}, {1, 0.25}, {2, 0.125}};
    const double tr = 0.875;
    const double lam = 1e6;
    CHECK(phi_lambda(lam, few) ==
          doctest::Approx(tr / (2.0 * std::sqrt(lam))).epsilon(1e-6));

    // strictly decreasing in lambda
    double prev = phi_lambda(0.01, few);
    for (double lam2 : {0.02, 0.05, 0.2, 1.0}) {
        const double cur = phi_lambda(lam2, few);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("ssf trace vanishes identically at zero coupling") {
    ValidatedConfig cfg = cfg_q0(0.0);
    SectorBasis basis = SectorBasis::build(cfg);
    SSFTrace tr = trace_ssf(basis, {-0.5, 0.3, 0.9, 1.4});
    for (const auto& p : tr.pts) {
        CHECK(std::abs(p.xi2) < 1e-12);
        CHECK(std::abs(p.correction) < 1e-12);
        CHECK(std::abs(p.xi) < 1e-12);
    }
}

TEST_CASE("ssf trace: anchoring and below-spectrum behavior for V >= 0") {
    ValidatedConfig cfg = cfg_q0(0.05);
    SectorBasis basis = SectorBasis::build(cfg);
    SSFTrace tr = trace_ssf(basis, {-1.5, -0.8, -0.1, 0.2, 0.7});
    // V >= 0 small: no bound states below the spectrum, xi stays near zero
    for (const auto& p : tr.pts) {
        if (p.lambda < 0) {
            CHECK(std::abs(p.xi) < 1e-3);
            CHECK(p.correction == 0.0);  // all channels closed
        } else {
            CHECK(std::isfinite(p.xi));
        }
    }
}

TEST_CASE("ssf trace: grid refinement leaves shared points unchanged") {
    ValidatedConfig cfg = cfg_q0(0.05);
    SectorBasis basis = SectorBasis::build(cfg);
    std::vector<double> coarse = {0.2, 0.5, 0.9};
    std::vector<double> fine = {0.2, 0.35, 0.5, 0.7, 0.9, 1.1};
    SSFTrace a = trace_ssf(basis, coarse);
    SSFTrace b = trace_ssf(basis, fine);
    CHECK(std::abs(a.pts[0].xi2 - b.pts[0].xi2) < 1e-8);
    CHECK(std::abs(a.pts[1].xi2 - b.pts[2].xi2) < 1e-8);
    CHECK(std::abs(a.pts[2].xi2 - b.pts[4].xi2) < 1e-8);
}

TEST_CASE("ssf trace rejects grids touching a Landau level") {
    ValidatedConfig cfg = cfg_q0(0.05);
    SectorBasis basis = SectorBasis::build(cfg);
    CHECK_THROWS_AS(trace_ssf(basis, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(trace_ssf(basis, {2.0}), std::invalid_argument);
}

TEST_CASE("correction term is smooth away from thresholds") {
    ValidatedConfig cfg = cfg_q0(0.08);
    SectorBasis basis = SectorBasis::build(cfg);
    std::vector<double> grid;
    const double h = 0.01;
    for (int i = 0; i < 24; ++i) grid.push_back(0.5 + h * i);
    SSFTrace tr = trace_ssf(basis, grid);
    double max_d2 = 0.0;
    for (std::size_t i = 1; i + 1 < tr.pts.size(); ++i) {
        const double d2 = (tr.pts[i + 1].correction - 2.0 * tr.pts[i].correction +
                           tr.pts[i - 1].correction) /
                          (h * h);
        max_d2 = std::max(max_d2, std::abs(d2));
    }
    CHECK(max_d2 < 10.0);  // grid-scale constant for this window
}

TEST_CASE("attractive coupling: xi drops by one across each bound state") {
    // V <= 0 at q=0 binds states below 0 at k = i eps lambda_l^B; xi jumps down
    const double eps = 0.35;
    ValidatedConfig cfg = cfg_q0(eps, -1);
    SectorBasis basis = SectorBasis::build(cfg);
    auto bq = bq_spectrum(basis);
    const double k0 = eps == 0 ? 0 : bq[0].second;  // deepest eigenvalue near -k0^2
    const double e0 = -k0 * k0;
    SSFTrace tr = trace_ssf(basis, {e0 * 4.0, e0 * 0.25});
    // one unit drop across the deepest bound state (the others are shallower)
    const double drop = tr.pts[0].xi - tr.pts[1].xi;
    CHECK(tr.pts[0].xi == doctest::Approx(0.0).scale(1).epsilon(2e-2));
    CHECK(drop == doctest::Approx(-1.0).epsilon(2e-2));
    CHECK(tr.bridges >= 1);  // the walker lifted over the determinant zero
}

TEST_CASE("breit-wigner residual is identically zero at zero coupling") {
    ValidatedConfig cfg = cfg_q0(0.0);
    SectorBasis basis = SectorBasis::build(cfg);
    std::vector<double> mu;
    for (int i = 0; i <= 10; ++i) mu.push_back(0.4 + 0.01 * i);
    BWDecomposition bw = breit_wigner_residual(basis, mu, {});
    for (double r : bw.residual) CHECK(std::abs(r) < 1e-10);
    CHECK(bw.max_abs_residual < 1e-10);
}

TEST_CASE("bump window partitions and differentiates cleanly") {
    BumpWindow w;
    w.w1 = -1.0;
    w.w2 = 1.0;
    w.o1 = -1.5;
    w.o2 = 1.5;
    CHECK(w.psi(0.0) == 1.0);
    CHECK(w.psi(-1.6) == 0.0);
    CHECK(w.psi(1.2) > 0.0);
    CHECK(w.psi(1.2) < 1.0);
    // derivative consistency with finite differences
    for (double x : {-1.3, -1.1, 1.05, 1.45}) {
        const double fd = (w.psi(x + 1e-6) - w.psi(x - 1e-6)) / 2e-6;
        CHECK(w.dpsi(x) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("trace formula at zero coupling is exactly trivial") {
    ValidatedConfig cfg = cfg_q0(0.0);
    SectorBasis basis = SectorBasis::build(cfg);
    BumpWindow w;
    w.w1 = -2.0;
    w.w2 = -0.5;
    w.o1 = -2.5;
    w.o2 = -0.25;
    TestFunction f;
    TraceFormulaResult r = trace_formula_check(basis, f, w, 0.05, {}, ToeplitzSpectrum{});
    CHECK(std::abs(r.lhs) < 1e-10);
    CHECK(r.rhs == 0.0);
    CHECK(r.resonances_used == 0);
}

TEST_CASE("singularity rows at zero coupling are all zero") {
    ValidatedConfig cfg = cfg_q0(0.0);
    SectorBasis basis = SectorBasis::build(cfg);
    auto rows = singularity_check(basis, {0.01, 0.005}, w_spec_of(cfg));
    for (const auto& row : rows) {
        CHECK(row.xi == doctest::Approx(0.0).scale(1).epsilon(1e-12));
        CHECK(row.phi_term == 0.0);
        CHECK(row.deviation_normalized == doctest::Approx(0.0).scale(1).epsilon(1e-12));
    }
}
