#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strata/partitions.hpp"
#include "strata/poly.hpp"

namespace strata {

// Linear subspace of C^n with an orthonormal basis stored column-wise.
struct Subspace {
    int n = 0;
    Eigen::MatrixXcd basis;

    int dim() const { return int(basis.cols()); }
    Eigen::MatrixXcd projector() const { return basis * basis.adjoint(); }

    static Subspace zero(int n);
    // Orthonormalizes the column span of v; columns below tol are dropped.
    static Subspace span(const Eigen::MatrixXcd& v, double tol = 1e-12);
};

// Operator 2-norm of the difference of the orthogonal projectors.
double gap_distance(const Subspace& a, const Subspace& b);

// Right singular vectors with singular value below tol times the largest one
// (below tol when the matrix vanishes).
Subspace kernel_subspace(const Eigen::MatrixXcd& m, double tol = 1e-8);

// Kernel of (A - lambda)^n.
Subspace generalized_eigenspace(const Eigen::MatrixXcd& a, cplx lambda, double tol = 1e-8);

// The `dim` right singular vectors of (A - lambda)^power with the smallest
// singular values. Used where the dimension is known in advance.
Subspace generalized_eigenspace_fixed(const Eigen::MatrixXcd& a, cplx lambda, int dim, int power);

// Dimension of {Theta : Theta A1 = A2 Theta}.
int intertwiner_dimension(const Eigen::MatrixXcd& a1, const Eigen::MatrixXcd& a2, double tol = 1e-8);

// Univariate polynomial matrix, entries are Poly<qcomplex> in one variable.
using ExactPolyMatrix = std::vector<std::vector<Poly<qcomplex>>>;

// Values at x0 of the holomorphic kernel vectors of T near x0, computed in
// exact arithmetic.
Subspace kernel_sheaf_value_1d(const ExactPolyMatrix& t, const qcomplex& x0);

struct Branch {
    Poly<qcomplex> lambda;
    int multiplicity = 1;
};

// Polynomial matrix family A(x) on C^d with declared eigenvalue branches.
struct MatrixFamily {
    int d = 1;
    int n = 1;
    std::vector<std::vector<Poly<qcomplex>>> entries;
    std::vector<Branch> branches;

    void validate() const;
    Eigen::MatrixXcd eval(const std::vector<cplx>& x) const;
    cplx branch_value(int i, const std::vector<cplx>& x) const;
};

// x(t) = x0 + offset(t), with offset(0) = 0; offsets are polynomials in t.
struct Path {
    std::string name;
    std::vector<Poly<qcomplex>> offset;

    std::vector<cplx> at(const std::vector<cplx>& x0, double t) const;
};

std::vector<Path> default_paths(int d);

struct LimitResult {
    std::optional<Subspace> limit;
    std::vector<double> sample_t;
    std::vector<double> consecutive_gaps;
    std::string note;
};

std::vector<double> dyadic_samples(int first, int last);

// Limit of the generalized eigenspace of branch `branch` along the path,
// extrapolated from samples t -> 0.
LimitResult limit_along_path(const MatrixFamily& fam, int branch, const std::vector<cplx>& x0, const Path& path,
                             const std::vector<double>& samples, double tol = 1e-8);

// The same limit computed exactly via kernel_sheaf_value_1d on the family
// restricted to the path. Needs rational x0.
Subspace exact_limit_along_path(const MatrixFamily& fam, int branch, const std::vector<qcomplex>& x0,
                                const Path& path);

struct ReportConfig {
    std::vector<Path> paths;          // empty: coordinate rays and the diagonal
    std::vector<double> samples;      // empty: t = 2^-1 .. 2^-8
    double tol = 1e-8;                // rank and clustering tolerance
    double limit_tol = 1e-5;          // agreement of limits along different paths
};

struct BranchReport {
    Partition segre;                  // Segre characteristic off the coalescence locus
    bool segre_constant = true;
    std::optional<Subspace> limit;    // from the first valid path
    std::vector<std::string> paths_used;
};

struct JordanizabilityReport {
    bool cond1 = false;  // Jordan type locally constant, compatible at the base point
    bool cond2 = false;  // limits independent of the path
    bool cond3 = false;  // limits form a direct sum decomposition
    bool verdict = false;
    std::vector<BranchReport> branches;
    std::vector<std::string> diagnostics;
};

JordanizabilityReport jordanizability_report(const MatrixFamily& fam, const std::vector<cplx>& x0,
                                             const ReportConfig& cfg = {});

// Segre characteristic of eigenvalue mu of A with algebraic multiplicity m.
Partition segre_at(const Eigen::MatrixXcd& a, cplx mu, int m, double tol);

}  // namespace strata
