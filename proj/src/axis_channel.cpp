#include "landau/axis_channel.hpp"

#include <cmath>

#include "landau/special.hpp"

namespace landau {

AxisGrid AxisGrid::build(const AxisProfile& g, int n_axis, double halfwidth_override) {
    AxisGrid grid;
    grid.halfwidth = halfwidth_override > 0.0 ? halfwidth_override : g.halfwidth(1e-16);
    const GaussLegendre& gl = GaussLegendre::rule(n_axis);
    grid.x.resize(n_axis);
    grid.w.resize(n_axis);
    for (int i = 0; i < n_axis; ++i) {
        grid.x[i] = grid.halfwidth * gl.x[i];
        grid.w[i] = grid.halfwidth * gl.w[i];
    }
    return grid;
}

AxisBasis AxisBasis::build(const AxisProfile& g, int n_axis, double halfwidth_override) {
    AxisBasis basis;
    basis.grid = AxisGrid::build(g, n_axis, halfwidth_override);
    const int n = n_axis;
    basis.sqrt_wg.resize(n);
    basis.g_vals.resize(n);
    basis.mass_quad = 0.0;
    for (int i = 0; i < n; ++i) {
        const double gv = g(basis.grid.x[i]);
        basis.g_vals[i] = gv;
        basis.sqrt_wg[i] = std::sqrt(basis.grid.w[i] * gv);
        basis.mass_quad += basis.grid.w[i] * gv;
    }
    return basis;
}

cplx channel_wavenumber(int j, int q, cplx k, double b) {
    if (j < 0) throw std::invalid_argument("channel_wavenumber: j < 0");
    const double disk = std::sqrt(2.0 * b);
    if (!(std::abs(k) > 0.0) || std::abs(k) >= disk)
        throw ThresholdError("chart coordinate outside the punctured disk D(0, sqrt(2b))*");
    if (j == q) return k;
    cplx kj;
    if (j > q) {
        kj = cplx(0.0, 1.0) * std::sqrt(cplx(2.0 * b * (j - q), 0.0) - k * k);
    } else {
        kj = std::sqrt(k * k + cplx(2.0 * b * (q - j), 0.0));
    }
    if (std::abs(kj) < 1e-6)
        throw ThresholdError("threshold collision: k_j vanishes");
    return kj;
}

ChannelSet channels_chart(int q, cplx k, const FieldConfig& field, int j_max) {
    ChannelSet ch;
    ch.q = q;
    ch.b = field.b;
    ch.k = k;
    ch.z = 2.0 * field.b * q + k * k;
    ch.kj.resize(j_max + 1);
    ch.open.resize(j_max + 1);
    for (int j = 0; j <= j_max; ++j) {
        ch.kj[j] = channel_wavenumber(j, q, k, field.b);
        ch.open[j] = j <= q;
    }
    return ch;
}

ChannelSet channels_boundary(double lambda, const FieldConfig& field, int j_max, int q_label) {
    ChannelSet ch;
    ch.q = q_label;
    ch.b = field.b;
    ch.z = lambda;
    ch.kj.resize(j_max + 1);
    ch.open.resize(j_max + 1);
    for (int j = 0; j <= j_max; ++j) {
        const double gap = lambda - 2.0 * field.b * j;
        if (std::abs(gap) < 1e-12)
            throw ThresholdError("boundary value collides with a Landau level");
        ch.kj[j] = gap > 0 ? cplx(std::sqrt(gap), 0.0) : cplx(0.0, std::sqrt(-gap));
        ch.open[j] = gap > 0;
    }
    ch.k = ch.kj[std::min(q_label, j_max)];
    return ch;
}

ChannelSet channels_upper(cplx z, const FieldConfig& field, int j_max, int q_label) {
    if (z.imag() < 0.0)
        throw std::invalid_argument("channels_upper: Im z must be >= 0");
    if (z.imag() == 0.0) return channels_boundary(z.real(), field, j_max, q_label);
    ChannelSet ch;
    ch.q = q_label;
    ch.b = field.b;
    ch.z = z;
    ch.kj.resize(j_max + 1);
    ch.open.resize(j_max + 1);
    for (int j = 0; j <= j_max; ++j) {
        ch.kj[j] = std::sqrt(z - 2.0 * field.b * j);  // principal, Im > 0 branch
        ch.open[j] = z.real() > 2.0 * field.b * j;
    }
    ch.k = ch.kj[std::min(q_label, j_max)];
    return ch;
}

Eigen::MatrixXcd resolvent_matrix(cplx kj, const AxisBasis& basis) {
    if (std::abs(kj) == 0.0) throw ThresholdError("resolvent_matrix: k_j = 0");
    const int n = static_cast<int>(basis.grid.x.size());
    Eigen::MatrixXcd G(n, n);
    const cplx pref = cplx(0.0, 0.5) / kj;  // i/(2k)
    for (int a = 0; a < n; ++a) {
        for (int ap = 0; ap <= a; ++ap) {
            const double d = std::abs(basis.grid.x[a] - basis.grid.x[ap]);
            const cplx v = basis.sqrt_wg[a] * basis.sqrt_wg[ap] * pref *
                           std::exp(cplx(0.0, 1.0) * kj * d);
            G(a, ap) = v;
            G(ap, a) = v;
        }
    }
    return G;
}

Eigen::MatrixXcd resolvent_matrix_dk(cplx kj, cplx k, const AxisBasis& basis) {
    // d/dk [ i e^{i k_j d} / (2 k_j) ] = (dk_j/dk) e^{i k_j d} (-d/(2k_j) - i/(2k_j^2)),
    // dk_j/dk = k / k_j on the chart
    const int n = static_cast<int>(basis.grid.x.size());
    const cplx dkj = k / kj;
    Eigen::MatrixXcd D(n, n);
    for (int a = 0; a < n; ++a) {
        for (int ap = 0; ap <= a; ++ap) {
            const double d = std::abs(basis.grid.x[a] - basis.grid.x[ap]);
            const cplx e = std::exp(cplx(0.0, 1.0) * kj * d);
            const cplx v = basis.sqrt_wg[a] * basis.sqrt_wg[ap] * dkj * e *
                           (-0.5 * d / kj - cplx(0.0, 0.5) / (kj * kj));
            D(a, ap) = v;
            D(ap, a) = v;
        }
    }
    return D;
}

cplx remainder_kernel(cplx k, double d) {
    const cplx ikd = cplx(0.0, 1.0) * k * d;
    if (std::abs(ikd) < 1e-4) {
        // i (e^{ikd} - 1)/(2k) = -(d/2)(1 + ikd/2 + (ikd)^2/6 + (ikd)^3/24)
        return -0.5 * d * (1.0 + ikd * (0.5 + ikd * (1.0 / 6.0 + ikd / 24.0)));
    }
    return cplx(0.0, 0.5) * (std::exp(ikd) - 1.0) / k;
}

RankOneSplit split_rank_one(cplx k, const AxisBasis& basis) {
    const int n = static_cast<int>(basis.grid.x.size());
    RankOneSplit out;
    out.rank_one.resize(n, n);
    out.remainder.resize(n, n);
    const cplx pref = cplx(0.0, 0.5) / k;
    for (int a = 0; a < n; ++a) {
        for (int ap = 0; ap <= a; ++ap) {
            const double ww = basis.sqrt_wg[a] * basis.sqrt_wg[ap];
            const double d = std::abs(basis.grid.x[a] - basis.grid.x[ap]);
            out.rank_one(a, ap) = out.rank_one(ap, a) = ww * pref;
            const cplx rem = a == ap ? cplx(0.0, 0.0) : ww * remainder_kernel(k, d);
            out.remainder(a, ap) = out.remainder(ap, a) = rem;
        }
    }
    return out;
}

}  // namespace landau
