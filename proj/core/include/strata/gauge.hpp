#pragma once

#include <optional>
#include <string>
#include <vector>

#include "strata/gap.hpp"
#include "strata/series.hpp"

namespace strata {

// Connection  -(Delta0 + B/z) dz - z dDelta0 + omega  with
//   B = Bdiag + [L, Delta0],  omega = [dDelta0, L].
template <class S>
struct FramedConnection {
    int d = 0;
    int n = 0;
    std::vector<S> center;
    int K = 0;
    std::vector<Poly<S>> fpoly;          // diagonal of Delta0, ambient coordinates
    std::vector<TruncatedSeries<S>> f;   // the same as series at the center
    std::vector<S> bdiag;
    SeriesMatrix<S> L;

    // derived
    SeriesMatrix<S> delta0;
    std::vector<SeriesMatrix<S>> d_delta0;  // one per coordinate
    SeriesMatrix<S> B;
    std::vector<SeriesMatrix<S>> omega;     // one per coordinate
};

// Delta0 is given by polynomials so that dDelta0 keeps the full jet degree.
template <class S>
FramedConnection<S> build_connection(const std::vector<Poly<S>>& f, const std::vector<S>& bdiag,
                                     const SeriesMatrix<S>& L);

// Diagonal matrix with the given series on the diagonal.
template <class S>
SeriesMatrix<S> diagonal_matrix(const std::vector<TruncatedSeries<S>>& f);

// Max coefficient magnitude per total degree for the four relations
//   [dDelta0, B] + [Delta0, w] = 0,   dB = [B, w],
//   dDelta0 ^ w + w ^ dDelta0 = 0,    dw + w ^ w = 0.
struct IntegrabilityReport {
    int order = 0;
    std::vector<double> commutator, flat_b, wedge, curvature;
    double max_abs() const;
};

template <class S>
IntegrabilityReport integrability_residual(const SeriesMatrix<S>& delta0, const SeriesMatrix<S>& B,
                                           const std::vector<SeriesMatrix<S>>& w, int order);

struct Obstruction {
    int i = 0, j = 0;  // zero-based
    std::string reason;
};

template <class S>
struct DvWitness {
    std::optional<SeriesMatrix<S>> L;
    std::vector<Obstruction> obstructions;
};

// Tries to write B'' = [L, Delta0] and w'' = [dDelta0, L].
template <class S>
DvWitness<S> dv_witness(const SeriesMatrix<S>& delta0, const SeriesMatrix<S>& B, const std::vector<SeriesMatrix<S>>& w,
                        double tol = 1e-9);

// Phi = Id + sum_{k=1..K} F_k z^-k.
template <class S>
struct GaugeSeries {
    int K = 0;
    std::vector<SeriesMatrix<S>> F;  // F[k-1] = F_k
    std::vector<std::string> warnings;
};

enum class SimplifyMode { regular, coalescent };

template <class S>
GaugeSeries<S> formal_simplify(const FramedConnection<S>& conn, int K, SimplifyMode mode, double tol = 1e-10);

// Coefficients of R = dPhi + Omega Phi - Phi (-d(z Delta0) - Bdiag dz/z).
// dz[k] is the dz-coefficient of z^-k (k = 0..K); dx[k][c] is the dx_c
// coefficient of z^(1-k) (k = 0..K). Magnitudes are taken up to the reliable
// jet degree of each term.
template <class S>
struct GaugeResidual {
    std::vector<SeriesMatrix<S>> dz;
    std::vector<std::vector<SeriesMatrix<S>>> dx;
    std::vector<double> dz_max, dx_max;
    std::vector<int> dz_degree, dx_degree;
    double max_abs() const;
    double dz_max_abs() const;
};

template <class S>
GaugeResidual<S> gauge_residual(const FramedConnection<S>& conn, const GaugeSeries<S>& phi);

// Off-diagonal relation at a coalescent center:
// (b_i - b_j + k) (F_k)_ij + sum_l (f_l - f_i) L_il (F_k)_lj, evaluated at the
// center; returns the largest magnitude over coalescent pairs and k.
template <class S>
double coalescent_center_defect(const FramedConnection<S>& conn, const GaugeSeries<S>& phi, double tol = 1e-10);

// Composition Gamma(sigma(x)) of a jet in u (centered at sigma(center)) with
// the spectrum map sigma = (f_1, ..., f_n).
template <class S>
SeriesMatrix<S> pullback_by_spectrum(const SeriesMatrix<S>& gamma, const std::vector<TruncatedSeries<S>>& f);

struct HolconReport {
    std::vector<double> t;
    std::vector<cplx> lhs;
    std::vector<cplx> ratio;
    double spread = 0;  // over the last four samples
    bool bounded = false;
};

// (b_j - b_i - 1) L_ij - sum_{l != i} (f_l - f_i) L_il L_lj against f_i - f_j
// along a path ending at a coalescence point xc.
template <class S>
HolconReport holcon_check(const FramedConnection<S>& conn, int i, int j, const std::vector<cplx>& xc, const Path& path,
                          const std::vector<double>& samples);

}  // namespace strata
