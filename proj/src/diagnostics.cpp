#include <algorithm>
#include <cmath>
#include <limits>

#include "jbd/diagnostics.hpp"

namespace jbd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double leading_level(const Matrix& gram, Index k) {
    if (k == 0) return 0.0;
    return symmetric_two_norm(Matrix::Identity(k, k) - gram.topLeftCorner(k, k));
}

}  // namespace

double measure_g(const JbdState& state, const DenseQr& qr, int i) {
    if (i < 1 || i > state.step) throw Error(ErrorCode::InvalidInput, "measure_g: step out of range");
    if (static_cast<int>(state.inner_images.size()) < i)
        throw Error(ErrorCode::DiagnosticsUnavailable, "inner solutions were not retained");
    Vector utilde = Vector::Zero(state.m + state.p);
    utilde.head(state.m) = state.u.col(i - 1);
    return (exact_project(qr, utilde) - state.inner_images[i - 1]).norm();
}

std::vector<Vector> g_vectors(const JbdState& state, const DenseQr& qr) {
    if (static_cast<int>(state.inner_images.size()) < state.step)
        throw Error(ErrorCode::DiagnosticsUnavailable, "inner solutions were not retained");
    std::vector<Vector> out;
    out.reserve(state.step);
    Vector utilde = Vector::Zero(state.m + state.p);
    for (int i = 0; i < state.step; ++i) {
        utilde.head(state.m) = state.u.col(i);
        out.push_back(exact_project(qr, utilde) - state.inner_images[i]);
    }
    return out;
}

double orthogonality_level(const Eigen::Ref<const Matrix>& m) {
    const Index k = m.cols();
    if (k == 0) return 0.0;
    return symmetric_two_norm(Matrix::Identity(k, k) - m.transpose() * m);
}

HDeviation compute_H(const JbdFactorization& fact, int k) {
    const Matrix b = fact.b(k).to_dense();
    const Matrix bbar = fact.bbar(k).to_dense();
    HDeviation out;
    out.h = b.transpose() * b + bbar.transpose() * bbar - Matrix::Identity(b.rows(), b.cols());
    out.diag_norm = out.h.diagonal().cwiseAbs().maxCoeff();
    Matrix off = out.h;
    off.diagonal().setZero();
    out.offdiag_norm = two_norm(off);
    return out;
}

std::vector<double> theta_sequence(const std::vector<double>& hat_alphas, const std::vector<double>& hat_betas,
                                   double breakdown_tol) {
    if (hat_alphas.size() != hat_betas.size())
        throw Error(ErrorCode::InvalidInput, "theta_sequence: sequences differ in length");
    std::vector<double> out;
    out.reserve(hat_alphas.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < hat_alphas.size(); ++i) {
        if (!(hat_alphas[i] > breakdown_tol))
            throw Error(ErrorCode::LuckyBreakdown, "theta_sequence: hat_alpha_" + std::to_string(i + 1) + " vanishes");
        prev = hat_betas[i] / hat_alphas[i] * (1.0 + prev);
        out.push_back(prev);
    }
    return out;
}

std::vector<double> theta_sequence(const JbdFactorization& fact) {
    return theta_sequence(fact.state().hat_alphas, fact.state().hat_betas);
}

OrthogonalityPrediction predict_orthogonality(const JbdFactorization& fact, const std::vector<Vector>& g) {
    const JbdState& st = fact.state();
    // a closed run has no vt_{k+1}; predict through step k-1 only
    const int k = fact.vt_count() - 1;
    if (static_cast<int>(g.size()) < k)
        throw Error(ErrorCode::DiagnosticsUnavailable, "predict_orthogonality needs one g vector per step");
    const std::vector<double>& alpha = st.alphas;
    const std::vector<double>& beta = st.betas;

    // 0-based storage: mu(a, b) = u_{a+1}^T u_{b+1}, nu likewise for vt.
    OrthogonalityPrediction out;
    out.mu = Matrix::Zero(k, k);
    out.nu = Matrix::Zero(k + 1, k + 1);
    out.nu(0, 0) = 1.0;
    for (int i = 0; i < k; ++i) {
        // u-table column i from rows j < i
        for (int j = 0; j < i; ++j) {
            double rhs = beta[j] * out.nu(j + 1, i) + alpha[j] * out.nu(j, i) + st.vt.col(i).dot(g[j]);
            rhs -= beta[i - 1] * out.mu(j, i - 1);
            out.mu(j, i) = out.mu(i, j) = rhs / alpha[i];
        }
        out.mu(i, i) = 1.0;
        // vt-table column i+1 from rows j <= i
        for (int j = 0; j <= i; ++j) {
            double rhs = alpha[j] * out.mu(j, i) - alpha[i] * out.nu(j, i) - st.vt.col(j).dot(g[i]);
            if (j > 0) rhs += beta[j - 1] * out.mu(j - 1, i);
            out.nu(j, i + 1) = out.nu(i + 1, j) = rhs / beta[i];
        }
        out.nu(i + 1, i + 1) = 1.0;
    }
    return out;
}

double column_defect_norm(const JbdFactorization& fact, const DenseQr& qr, int l) {
    const int k = fact.steps();
    const Index n = fact.n();
    const Index m = fact.m();
    if (l < 1 || l > k - 1) throw Error(ErrorCode::InvalidInput, "column_defect_norm: l must be in [1, k-1]");
    if (l + 1 > n) throw Error(ErrorCode::InvalidInput, "column_defect_norm: l + 1 exceeds n");
    const JbdState& st = fact.state();

    Vector w = Vector::Zero(n + m);
    w(l - 1) = st.betas[l - 1];
    w(l) = st.alphas[l];
    for (int i = l + 1; i >= 1; --i) {
        // p_i = (-e_i; u_i), P_i x = x - (p_i^T x) p_i
        const double dot = -w(i - 1) + st.u.col(i - 1).dot(w.tail(m));
        w(i - 1) += dot;
        w.tail(m) -= dot * st.u.col(i - 1);
    }
    const Vector v = qr.q.transpose() * st.vt.col(l);
    w.tail(m) -= qr.q_a() * v;
    return w.norm();
}

double ghat_proxy(const JbdFactorization& fact, const DenseQr& qr, int k) {
    if (k == 0) k = fact.steps();
    if (k < 1 || k >= fact.vt_count()) throw Error(ErrorCode::InvalidInput, "ghat_proxy: k out of range");
    const JbdState& st = fact.state();
    Vector vhat = qr.q.transpose() * st.vt.col(k);
    if (k % 2 == 1) vhat = -vhat;
    Vector row = fact.uh(k).transpose() * (qr.q_l() * vhat);
    row(k - 1) -= st.hat_betas[k - 1];
    return row.norm();
}

RunReport build_report(const JbdFactorization& fact, const DenseQr* qr, DiagLevel level, double kappa,
                       double tau) {
    const JbdState& st = fact.state();
    const int k = st.step;
    RunReport rep;
    rep.kappa = kappa;
    rep.tau = tau;
    rep.g_bound = 3.0 * kappa * tau;
    rep.ghat = kNaN;
    rep.max_column_defect = kNaN;
    if (k == 0) {
        rep.ghat_bound = kNaN;
        return rep;
    }

    const std::vector<double> theta = theta_sequence(fact);
    rep.max_theta = *std::max_element(theta.begin(), theta.end());
    const HDeviation h = compute_H(fact);
    rep.h_diag_norm = h.diag_norm;
    rep.h_offdiag_norm = h.offdiag_norm;
    rep.ghat_bound = kappa * tau / smallest_singular_value(fact.bhat());

    Matrix gram_v, gram_u, gram_uh;
    if (level != DiagLevel::Off) {
        const auto vt = st.vt.leftCols(k);
        gram_v = vt.transpose() * vt;
        gram_u = st.u_cols().transpose() * st.u_cols();
        gram_uh = st.uh_cols().transpose() * st.uh_cols();
    }
    std::vector<Vector> g;
    const bool full = level == DiagLevel::Full && qr != nullptr &&
                      static_cast<int>(st.inner_images.size()) >= k;
    if (full) g = g_vectors(st, *qr);

    for (int i = 1; i <= k; ++i) {
        StepDiagnostics d;
        d.step = i;
        d.alpha = st.alphas[i - 1];
        d.beta = st.betas[i - 1];
        d.hat_alpha = st.hat_alphas[i - 1];
        d.hat_beta = st.hat_betas[i - 1];
        d.theta = theta[i - 1];
        d.inner_iters = st.inner_iterations[i - 1];
        d.criterion = st.inner_criteria[i - 1];
        if (level != DiagLevel::Off) {
            d.orth_v = leading_level(gram_v, i);
            d.orth_u = leading_level(gram_u, i);
            d.orth_uhat = leading_level(gram_uh, i);
        } else {
            d.orth_v = d.orth_u = d.orth_uhat = kNaN;
        }
        d.norm_g = full ? g[i - 1].norm() : kNaN;
        rep.steps.push_back(d);
    }

    if (level == DiagLevel::Full && qr != nullptr) {
        if (fact.vt_count() > 1) rep.ghat = ghat_proxy(fact, *qr, fact.vt_count() - 1);
        double worst = 0.0;
        const int last = std::min<int>(k - 1, static_cast<int>(fact.n()) - 1);
        for (int l = 1; l <= last; ++l) worst = std::max(worst, column_defect_norm(fact, *qr, l));
        if (last >= 1) rep.max_column_defect = worst;
    }
    return rep;
}

}  // namespace jbd
