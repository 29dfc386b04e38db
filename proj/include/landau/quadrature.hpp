#ifndef LANDAU_QUADRATURE_HPP
#define LANDAU_QUADRATURE_HPP

#include <functional>

namespace landau {

struct QuadResult {
    double value = 0.0;
    double err_estimate = 0.0;  // |last - previous| under node doubling
    int nodes = 0;
    bool converged = false;
};

// Gauss-Legendre on [a, b] with node doubling until successive values agree
// to tol (absolute + relative mix). Integrand must be smooth on [a, b].
QuadResult integrate_gl(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int n0 = 32, int max_doublings = 7);

}  // namespace landau

#endif
