#ifndef LANDAU_SPECIAL_HPP
#define LANDAU_SPECIAL_HPP

#include <vector>

namespace landau {

// Generalized Laguerre polynomial L_n^{(alpha)}(x), three-term recurrence.
double laguerre(int n, double alpha, double x);

// Plain Laguerre L_n = L_n^{(0)}.
inline double laguerre_plain(int n, double x) { return laguerre(n, 0.0, x); }

// Gauss-Legendre rule on (-1, 1). Nodes by Newton iteration on P_n.
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
    static const GaussLegendre& rule(int n);  // cached per n
};

}  // namespace landau

#endif
