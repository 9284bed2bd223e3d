#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "strata/series.hpp"

namespace strata {

template <class S>
using ConstMatrix = std::vector<std::vector<S>>;

// omega = [A0 + K + [K, B0], dK] for a matrix jet K with K(center) = 0.
template <class S>
struct PfaffianReport {
    SeriesMatrix<S> A;                  // A0 + K + [K, B0]
    std::vector<SeriesMatrix<S>> omega; // one per coordinate
    std::vector<double> per_degree;     // max coefficient magnitude, degrees 0..order
    double max_abs() const;
};

template <class S>
PfaffianReport<S> malgrange_pfaffian_residual(const ConstMatrix<S>& A0, const ConstMatrix<S>& B0,
                                              const SeriesMatrix<S>& K, int order);

// Curves t -> (alpha0 e^(a t), beta0 e^(b t), gamma0 e^(g t)) or with t^a in
// place of e^(a t). For both shapes the three 1-forms
//   w1 = (1-c) beta d alpha - alpha d beta
//   w2 = (1+c) gamma d alpha - alpha d gamma
//   w3 = (1+c) gamma d beta - (1-c) beta d gamma
// restrict to a single term times these exact coefficients.
struct ExponentCurve {
    qcomplex alpha0, beta0, gamma0;
    qcomplex a, b, g;
};

std::array<qcomplex, 3> curve_residual_coefficients(const ExponentCurve& cv, const qcomplex& c);

struct CurveReport {
    std::vector<double> t;
    std::vector<std::array<cplx, 3>> point;
    std::vector<std::array<double, 3>> residual;  // |w_i(curve'(t))|
    std::array<qcomplex, 3> exact{};             // coefficient form, exact
    double max_residual = 0;
};

// The maximal integral curve through (alpha0, beta0, gamma0); beta_exponent
// overrides 1 - c (used to build perturbed curves).
CurveReport nonversal_curve(const qcomplex& alpha0, const qcomplex& beta0, const qcomplex& gamma0, const qcomplex& c,
                            const std::vector<double>& tgrid, std::optional<qcomplex> beta_exponent = std::nullopt);

struct MonomialFamily {
    std::string name;
    // exponent of t for alpha, beta, gamma; a zero flag means the function is 0
    std::array<mpz_class, 3> exps;
    std::array<bool, 3> zero{};
    std::array<qcomplex, 3> residual{};  // coefficients of w1, w2, w3 with unit amplitudes
    bool verified = false;
};

std::vector<MonomialFamily> rational_c_families(long p, long q);

// The three lines through the origin along the coordinate axes, with their
// residuals and the determinant of their tangent vectors at 0.
struct AxisLines {
    std::vector<MonomialFamily> lines;
    qcomplex tangent_determinant;
};
AxisLines coordinate_axis_lines(const qcomplex& c);

enum class DeformationType { TypeI, TypeII, TypeIII, NotIntegrable, Unclassified };
std::string to_string(DeformationType t);

template <class S>
struct Classification2x2 {
    DeformationType type = DeformationType::NotIntegrable;
    std::optional<S> kappa;
    std::string note;
    double identity_residual = 0;  // largest coefficient of the three identities
};

// g, h, l, m are polynomials vanishing at x0.
template <class S>
Classification2x2<S> classify_2x2(const Poly<S>& g, const Poly<S>& h, const Poly<S>& l, const Poly<S>& m,
                                  const std::vector<S>& x0, double tol = 1e-9);

// For A = [[g,0],[2k(m-g)^2,m]], C = [[dg,0],[k d(m-g)^2,dm]] and
// M = [[1,0],[2k(g-m),1]]: largest coefficient of the off-diagonal parts of
// M^-1 A M and M^-1 C M.
template <class S>
double type1_witness_defect(const Poly<S>& g, const Poly<S>& m, const S& kappa);

}  // namespace strata
