#include "landau/quadrature.hpp"

#include <cmath>

#include "landau/special.hpp"

namespace landau {

QuadResult integrate_gl(const std::function<double(double)>& f, double a, double b,
                        double tol, int n0, int max_doublings) {
    QuadResult res;
    const double jac = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double prev = 0.0;
    int n = n0;
    for (int d = 0; d <= max_doublings; ++d, n *= 2) {
        const GaussLegendre& gl = GaussLegendre::rule(n);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) acc += gl.w[i] * f(mid + jac * gl.x[i]);
        acc *= jac;
        res.nodes = n;
        if (d > 0) {
            res.err_estimate = std::abs(acc - prev);
            if (res.err_estimate <= tol * (1.0 + std::abs(acc))) {
                res.value = acc;
                res.converged = true;
                return res;
            }
        }
        prev = acc;
        res.value = acc;
    }
    res.converged = false;
    return res;
}

}  // namespace landau
