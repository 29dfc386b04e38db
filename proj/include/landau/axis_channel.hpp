#ifndef LANDAU_AXIS_CHANNEL_HPP
#define LANDAU_AXIS_CHANNEL_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "landau/model.hpp"
#include "landau/util.hpp"

namespace landau {

// Chart-domain violation or threshold collision (exit-code-2 class).
struct ThresholdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Gauss-Legendre grid on [-Lh, Lh]; integrates the axis profile class to
// spectral accuracy.
struct AxisGrid {
    Eigen::VectorXd x;
    Eigen::VectorXd w;
    double halfwidth = 0;
    static AxisGrid build(const AxisProfile& g, int n_axis, double halfwidth_override = 0.0);
};

// Axis grid dressed with the profile: v_a = sqrt(w_a) g^{1/2}(x_a).
struct AxisBasis {
    AxisGrid grid;
    Eigen::VectorXd sqrt_wg;   // sqrt(w_a g(x_a))
    Eigen::VectorXd g_vals;    // g(x_a)
    double mass_quad = 0;      // sum w_a g(x_a)
    static AxisBasis build(const AxisProfile& g, int n_axis, double halfwidth_override = 0.0);
};

// Channel wavenumber on the chart z = 2bq + k^2, 0 < |k| < sqrt(2b):
//   j = q:  k_j = k
//   j > q:  k_j = i sqrt(2b(j-q) - k^2)   (closed, decaying)
//   j < q:  k_j = sqrt(k^2 + 2b(q-j))     (open, outgoing)
// principal square roots; analytic on the punctured disk. Rejects |k| outside
// the chart and threshold collisions |k_j| ~ 0.
cplx channel_wavenumber(int j, int q, cplx k, double b);

struct ChannelSet {
    int q = 0;
    double b = 1.0;
    cplx k;                     // chart coordinate (levels[q] == k) when chart-built
    std::vector<cplx> kj;       // per level j = 0..j_max
    std::vector<bool> open;     // j < q or (boundary: lambda > 2bj)
    cplx z;                     // 2bq + k^2
};

// Channels from the chart coordinate.
ChannelSet channels_chart(int q, cplx k, const FieldConfig& field, int j_max);

// Channels at the physical boundary value lambda + i0, lambda real not a
// Landau level: k_j = sqrt(lambda - 2bj) open / i sqrt(2bj - lambda) closed.
ChannelSet channels_boundary(double lambda, const FieldConfig& field, int j_max, int q_label);

// Channels at z in the open upper half-plane (physical sheet):
// k_j = principal sqrt(z - 2bj).
ChannelSet channels_upper(cplx z, const FieldConfig& field, int j_max, int q_label);

// Nystrom matrix of g^{1/2} (D^2 - k_j^2)^{-1} g^{1/2}:
//   (G_j)_{aa'} = sqrt(w_a w_a') g^{1/2}(x_a) i e^{i k_j |x_a-x_a'|}/(2 k_j) g^{1/2}(x_a').
// Complex symmetric. Throws ThresholdError on k_j == 0.
Eigen::MatrixXcd resolvent_matrix(cplx kj, const AxisBasis& basis);

// Entrywise d/dk of resolvent_matrix at chart coordinate k, via dk_j/dk = k/k_j.
Eigen::MatrixXcd resolvent_matrix_dk(cplx kj, cplx k, const AxisBasis& basis);

// G_q = (i/2k) v v^T + remainder, remainder entries
// sqrt(w_a w_a') g^{1/2} g^{1/2} * i (e^{i k d} - 1)/(2k), series-evaluated for
// |k| d < 1e-4; remainder diagonal is exactly zero and the matrix is analytic
// at k = 0.
struct RankOneSplit {
    Eigen::MatrixXcd rank_one;
    Eigen::MatrixXcd remainder;
};
RankOneSplit split_rank_one(cplx k, const AxisBasis& basis);

// Kernel helper i (e^{i k d} - 1) / (2 k), series branch for small |k| d.
cplx remainder_kernel(cplx k, double d);

}  // namespace landau

#endif
