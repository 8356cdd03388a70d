#include <cmath>
#include <cstdlib>
#include <string>

#include "jbd/jbd.hpp"
#include "jbd/oracle.hpp"

namespace jbd {

Index default_dense_cap() {
    if (const char* env = std::getenv("GSVD_DENSE_CAP")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<Index>(v);
    }
    return 2000;
}

namespace {

Matrix dense_stack(const StackedPair& pair, Index cap) {
    const Index limit = cap > 0 ? cap : default_dense_cap();
    if (pair.stacked_rows() > limit)
        throw Error(ErrorCode::DenseCapExceeded,
                    "m + p = " + std::to_string(pair.stacked_rows()) + " exceeds the dense cap " +
                        std::to_string(limit));
    return pair.to_dense();
}

// Unit vectors e_1, e_2, ... orthogonalized against the nonzero columns of
// basis, used to fill columns flagged in `missing`.
void complete_orthonormal(Matrix& basis, const std::vector<bool>& missing) {
    const Index dim = basis.rows();
    Index candidate = 0;
    for (Index col = 0; col < basis.cols(); ++col) {
        if (!missing[col]) continue;
        while (candidate < dim) {
            Vector v = Vector::Unit(dim, candidate++);
            for (int pass = 0; pass < 2; ++pass)
                for (Index j = 0; j < basis.cols(); ++j)
                    if (j != col && basis.col(j).squaredNorm() > 0.0) v -= basis.col(j).dot(v) * basis.col(j);
            const double nv = v.norm();
            if (nv > 0.5) {
                basis.col(col) = v / nv;
                break;
            }
        }
    }
}

}  // namespace

Vector DenseQr::solve_r(const Vector& x) const { return r.triangularView<Eigen::Upper>().solve(x); }

Matrix DenseQr::solve_r(const Matrix& x) const { return r.triangularView<Eigen::Upper>().solve(x); }

DenseQr dense_qr(const StackedPair& pair, Index cap) {
    const Matrix c = dense_stack(pair, cap);
    const Index n = c.cols();
    Eigen::HouseholderQR<Matrix> hqr(c);
    DenseQr out;
    out.m = pair.m();
    out.p = pair.p();
    out.q = hqr.householderQ() * Matrix::Identity(c.rows(), n);
    out.r = hqr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (Index i = 0; i < n; ++i) {
        if (out.r(i, i) < 0.0) {
            out.r.row(i) *= -1.0;
            out.q.col(i) *= -1.0;
        }
    }
    const double c_norm = two_norm(c);
    for (Index i = 0; i < n; ++i)
        if (out.r(i, i) <= 64.0 * kEps * static_cast<double>(n) * c_norm)
            throw Error(ErrorCode::NotRegular, "stacked matrix is rank deficient (R(" + std::to_string(i) +
                                                   "," + std::to_string(i) + ") negligible)");
    return out;
}

Vector exact_project(const DenseQr& qr, const Vector& u) {
    if (u.size() != qr.q.rows()) throw Error(ErrorCode::InvalidInput, "exact_project: length must be m + p");
    return qr.q * (qr.q.transpose() * u);
}

DenseGsvd dense_gsvd(const StackedPair& pair, Index cap) {
    const DenseQr qr = dense_qr(pair, cap);
    const Index m = qr.m;
    const Index p = qr.p;
    const Index n = qr.q.cols();

    const Matrix qa = qr.q_a();
    const Matrix ql = qr.q_l();
    Eigen::JacobiSVD<Matrix> svd(qa, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const Index r = std::min(m, n);

    DenseGsvd out;
    out.w = svd.matrixV();
    out.pa = Matrix::Zero(m, n);
    out.pl = Matrix::Zero(p, n);
    out.c.assign(n, 0.0);
    out.s.assign(n, 0.0);
    for (Index i = 0; i < r; ++i) {
        out.c[i] = svd.singularValues()(i);
        out.pa.col(i) = svd.matrixU().col(i);
    }
    std::vector<bool> missing(n, false);
    for (Index i = 0; i < n; ++i) {
        const Vector lw = ql * out.w.col(i);
        const double s = lw.norm();
        if (s > 64.0 * kEps) {
            out.s[i] = s;
            out.pl.col(i) = lw / s;
        } else {
            missing[i] = true;
        }
    }
    complete_orthonormal(out.pl, missing);
    out.x = qr.solve_r(out.w);

    out.clustered.assign(n, false);
    for (Index i = 0; i + 1 < n; ++i) {
        if (std::abs(out.c[i] - out.c[i + 1]) < 1e-10) out.clustered[i] = out.clustered[i + 1] = true;
    }
    return out;
}

double cond_number(const StackedPair& pair, Index cap) {
    const Matrix c = dense_stack(pair, cap);
    Eigen::JacobiSVD<Matrix> svd(c);
    const Vector& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 64.0 * kEps * smax)) throw Error(ErrorCode::NotRegular, "stacked matrix is numerically singular");
    return smax / smin;
}

ProjectionResiduals check_projection_relation(const JbdFactorization& fact, const StackedPair& pair,
                                              const DenseQr& qr) {
    const int k = fact.steps();
    if (k < 1) throw Error(ErrorCode::InvalidInput, "check_projection_relation needs at least one step");
    const Matrix v = qr.q.transpose() * fact.vt(k);
    const Matrix ub = fact.u(k) * fact.b(k).to_dense();

    Matrix vhat = v;
    for (int j = 1; j < k; j += 2) vhat.col(j) *= -1.0;

    ProjectionResiduals out;
    out.qa = two_norm(qr.q_a() * v - ub);
    const Matrix z = qr.solve_r(v);
    Matrix az(pair.m(), k);
    for (int j = 0; j < k; ++j) az.col(j) = spmv(pair.a(), z.col(j));
    out.az = two_norm(az - ub);
    out.ql = two_norm(qr.q_l() * vhat - fact.uh(k) * fact.bhat(k).to_dense());
    return out;
}

}  // namespace jbd
