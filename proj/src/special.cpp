#include "landau/special.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace landau {

double laguerre(int n, double alpha, double x) {
    if (n < 0) throw std::invalid_argument("laguerre: n < 0");
    if (n == 0) return 1.0;
    double lm1 = 1.0;
    double l0 = 1.0 + alpha - x;
    for (int m = 1; m < n; ++m) {
        double lp = ((2.0 * m + 1.0 + alpha - x) * l0 - (m + alpha) * lm1) / (m + 1.0);
        lm1 = l0;
        l0 = lp;
    }
    return l0;
}

namespace {

// Nodes/weights of the n-point rule by Newton iteration on P_n, symmetric
// about 0; standard Chebyshev-based initial guess.
GaussLegendre make_rule(int n) {
    GaussLegendre r;
    r.x.resize(n);
    r.w.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

}  // namespace

const GaussLegendre& GaussLegendre::rule(int n) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

}  // namespace landau
