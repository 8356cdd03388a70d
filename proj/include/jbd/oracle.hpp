#ifndef JBD_ORACLE_HPP
#define JBD_ORACLE_HPP

#include <vector>

#include "jbd/sparse.hpp"

namespace jbd {

class JbdFactorization;

/// Dense-oracle size limit on m + p. Defaults to 2000; the GSVD_DENSE_CAP
/// environment variable overrides it.
Index default_dense_cap();

/// Thin QR of the stacked operator, C = Q R with diag(R) >= 0.
struct DenseQr {
    Matrix q;  // (m+p) x n, orthonormal columns
    Matrix r;  // n x n upper triangular
    Index m = 0;
    Index p = 0;

    auto q_a() const { return q.topRows(m); }
    auto q_l() const { return q.bottomRows(p); }

    /// R^{-1} x by back substitution.
    Vector solve_r(const Vector& x) const;
    Matrix solve_r(const Matrix& x) const;
};

/// Throws DenseCapExceeded when m + p > cap (0 selects default_dense_cap()),
/// NotRegular when |R(i,i)| <= 64 eps n ||C||.
DenseQr dense_qr(const StackedPair& pair, Index cap = 0);

/// Q (Q^T u), the orthogonal projection onto range(C).
Vector exact_project(const DenseQr& qr, const Vector& u);

struct DenseGsvd {
    std::vector<double> c;  // descending
    std::vector<double> s;  // s_i = sqrt(1 - c_i^2) via ||Q_L w_i||
    Matrix x;               // n x n, X = R^{-1} W
    Matrix w;               // right singular vectors of Q_A
    Matrix pa;              // m x n; columns with c_i = 0 are left zero when m < n
    Matrix pl;              // p x n; zero-s columns get an orthonormal completion
    std::vector<bool> clustered;  // |c_i - c_neighbor| < 1e-10
};

/// Dense GSVD through the CS decomposition of the thin Q factor.
DenseGsvd dense_gsvd(const StackedPair& pair, Index cap = 0);

/// sigma_max / sigma_min of the dense stack.
double cond_number(const StackedPair& pair, Index cap = 0);

struct ProjectionResiduals {
    double qa;  // ||Q_A V_k - U_k B_k||
    double az;  // ||A Z_k - U_k B_k||, Z_k = R^{-1} V_k
    double ql;  // ||Q_L Vhat_k - Uhat_k Bhat_k||
};

/// Checks the projected JBD relations using V_k = Q^T Vtilde_k.
ProjectionResiduals check_projection_relation(const JbdFactorization& fact, const StackedPair& pair,
                                              const DenseQr& qr);

}  // namespace jbd

#endif
