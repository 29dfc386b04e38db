#ifndef LANDAU_EFFECTIVE_OPERATOR_HPP
#define LANDAU_EFFECTIVE_OPERATOR_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "landau/axis_channel.hpp"
#include "landau/landau_toeplitz.hpp"
#include "landau/model.hpp"

namespace landau {

// Log-polar value of an analytic function: value = exp(log_abs + i arg).
// arg is a plain real number (not reduced); consumers unwrap differences.
struct LogValue {
    double log_abs = 0.0;
    double arg = 0.0;
    bool singular = false;  // log_abs effectively -inf (a determinant zero)
};

// Per-config immutable basis: sector overlap matrices O^{(l)} for all levels
// retained and all sectors up to l_max, plus the axis basis. Safe to share
// read-only across workers.
class SectorBasis {
  public:
    struct Sector {
        int l = 0;
        int j_lo = 0;              // max(0, -l)
        Eigen::MatrixXd overlap;   // (j_max+1-j_lo)^2, symmetric PSD
    };

    static SectorBasis build(const ValidatedConfig& cfg);

    const ValidatedConfig& cfg() const { return cfg_; }
    const AxisBasis& axis() const { return axis_; }
    int l_min() const { return l_min_; }
    int l_max() const { return l_max_; }
    const Sector& sector(int l) const;
    bool has_sector(int l) const { return l >= l_min_ && l <= l_max_; }
    // sum over sectors of O^{(l)}_{jj} (converged transverse trace of p_j U).
    double level_trace(int j) const { return level_trace_[j]; }
    // Transverse integral b * int U rho drho = (b/2pi) int_{R^2} U.
    double transverse_trace() const { return transverse_trace_; }

  private:
    ValidatedConfig cfg_;
    AxisBasis axis_;
    int l_min_ = 0, l_max_ = 0;
    std::vector<Sector> sectors_;
    std::vector<double> level_trace_;
    double transverse_trace_ = 0;
};

// Per-evaluation-point cache: channel set, resolvent matrices and their
// low-rank factorizations, shared by all sectors at this k.
struct ChannelWorkspace {
    ChannelSet ch;
    std::vector<Eigen::MatrixXcd> G;      // per level
    std::vector<cplx> trG;                // diagonal sums
    // low-rank eigenfactors G_j ~ P_j * R_j (P = V Lambda, R = V^{-1} rows)
    std::vector<Eigen::MatrixXcd> P, R;
    std::vector<int> rank;
    // R_j * P_{j'} products, indexed j * n_levels + j'
    std::vector<Eigen::MatrixXcd> RP;
    // tr(G_j G_j') and |G_j|_2^2, for the perturbative sector tail
    std::vector<cplx> TGG;
    std::vector<double> HSG;
    int n_levels = 0;
};

ChannelWorkspace build_workspace(const SectorBasis& basis, const ChannelSet& ch,
                                 double rank_tol = 1e-13);

// Dense sector matrix of T_V(z_q(k)) restricted to sector l: block (j, j') is
// J eps O^{(l)}_{jj'} G_{j'}(k). Reference path for tests and diagnostics.
Eigen::MatrixXcd assemble_sector_dense(const SectorBasis& basis, int l,
                                       const ChannelWorkspace& ws);

// det2(I + A) = det((I + A) e^{-A}) for a finite matrix, via LU of (I + A).
LogValue log_det2_matrix(const Eigen::MatrixXcd& A);
cplx det2(const Eigen::MatrixXcd& A);

// Fast sector det2 through the low-rank factors (equals the dense path to
// compression tolerance).
LogValue det2_sector(const SectorBasis& basis, int l, const ChannelWorkspace& ws);

struct DetValue {
    double log_abs = 0.0;
    double arg = 0.0;
    double tail_bound = 0.0;   // |last sector contribution|
    int l_lo = 0, l_hi = 0;    // sector range actually summed
    bool singular = false;
    bool tail_converged = true;
    std::vector<std::pair<int, LogValue>> per_sector;  // filled when requested
};

struct DetOptions {
    bool keep_sectors = false;
    std::optional<double> tail_tol;  // default: cfg.trunc.det_tail_tol
};

// log det2(I + T_V) summed over sectors, extending the range until the
// absolute sector contribution stays below the tail tolerance for two
// consecutive l on each side.
DetValue log_det2_total(const SectorBasis& basis, const ChannelWorkspace& ws,
                        const DetOptions& opts = {});
DetValue log_det2_total(const SectorBasis& basis, const ChannelSet& ch,
                        const DetOptions& opts = {});

// d/dk log det2(I + T_V(z_q(k))) by central differences in k (used by Newton
// refinement; step scaled to |k|).
cplx dlog_det2_dk(const SectorBasis& basis, int q_label, cplx k, double rel_step = 1e-6);

// Full B_q spectrum: pairs (l, eps * O^{(l)}_{qq} * mass(g) / 2), descending.
std::vector<std::pair<int, double>> bq_spectrum(const SectorBasis& basis);

// tr d/dk A(k) restricted to level j != q: numeric (assembled derivative
// matrices, summed over sectors with the adaptive tail rule) and closed form
//   (2kb/8pi) int V dx * (2b(j-q) - k^2)^{-3/2}        for j > q
//   -i (2kb/8pi) int V dx * (k^2 + 2b(q-j))^{-3/2}     for j < q.
cplx trace_dk_A_level(const SectorBasis& basis, int j, const ChannelWorkspace& ws);
cplx trace_dk_A_closed(const SectorBasis& basis, int j, const ChannelSet& ch);

// tr d/dz T_V at the given channel set (sum over retained levels, adaptive in
// l through the cached overlaps): sum_j J eps O^{(l)}_{jj} * (-i mass/(4 k_j^3)).
cplx trace_dz_T(const SectorBasis& basis, const ChannelSet& ch);

// tr T_V truncated to retained levels (complex; Im part feeds the SSF
// correction).
cplx trace_T(const SectorBasis& basis, const ChannelSet& ch);

// Im tr T_V with the level tail carried beyond j_max until convergence
// (closed channels contribute exactly 0 on the real boundary).
double im_trace_T_full(const SectorBasis& basis, const ChannelSet& ch);

}  // namespace landau

#endif
