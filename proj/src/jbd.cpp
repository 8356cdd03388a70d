#include <algorithm>
#include <cmath>
#include <random>

#include "jbd/jbd.hpp"

namespace jbd {

void JbdOptions::validate() const {
    if (max_steps < 1) throw Error(ErrorCode::InvalidInput, "max_steps must be >= 1");
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidInput, "tau must be positive");
    if (!(breakdown_tol > 0.0)) throw Error(ErrorCode::InvalidInput, "breakdown_tol must be positive");
    if (lsqr_max_iters < 0) throw Error(ErrorCode::InvalidInput, "lsqr_max_iters must be >= 0");
}

Vector default_start_vector(Index n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Vector s(n);
    for (Index i = 0; i < n; ++i) {
        const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        s(i) = 2.0 * unit - 1.0;
    }
    return s;
}

JbdState jbd_init(StackedPair& pair, const Vector& start, int capacity) {
    if (start.size() != pair.n()) throw Error(ErrorCode::InvalidInput, "start vector length must be n");
    if (capacity < 1) throw Error(ErrorCode::InvalidInput, "capacity must be >= 1");
    const double c_norm = estimate_two_norm(pair);
    const Vector cs = pair_apply(pair, start);
    const double cs_norm = cs.norm();
    if (!(cs_norm > 64.0 * kEps * c_norm * start.norm()))
        throw Error(ErrorCode::DegenerateStart, "C s vanishes for the given start vector");

    JbdState st;
    st.m = pair.m();
    st.p = pair.p();
    st.n = pair.n();
    st.u = Matrix::Zero(st.m, capacity);
    st.vt = Matrix::Zero(st.m + st.p, capacity + 1);
    st.uh = Matrix::Zero(st.p, capacity);
    st.vt.col(0) = cs / cs_norm;
    return st;
}

Termination jbd_step(JbdState& st, const StackedPair& pair, const JbdOptions& opts, const DenseQr* qr) {
    if (st.is_terminated()) throw Error(ErrorCode::InvalidInput, "jbd_step on a terminated state");
    if (st.step >= st.u.cols()) throw Error(ErrorCode::InvalidInput, "jbd_step beyond allocated capacity");

    const int i = st.step + 1;
    const Index j = st.step;
    const Index m = st.m;
    const Index p = st.p;

    auto stop = [&](Termination kind, std::string detail) {
        st.terminated = {kind, i, std::move(detail)};
        return kind;
    };

    // alpha_i u_i = vt_i(1:m) - beta_{i-1} u_{i-1}
    Vector a = st.vt.col(j).head(m);
    if (j > 0) a -= st.betas.back() * st.u.col(j - 1);
    const double alpha = a.norm();
    double tol = opts.breakdown_tol * std::max(1.0, st.running_max);
    if (alpha < tol) return stop(Termination::LuckyBreakdown, "alpha");
    const Vector ui = a / alpha;

    // P_Q (u_i; 0) through the inner solve
    Vector utilde = Vector::Zero(m + p);
    utilde.head(m) = ui;
    Vector image;
    int iterations = 0;
    double criterion = 0.0;
    if (opts.inner == InnerMode::ExactOracle) {
        if (qr == nullptr) throw Error(ErrorCode::InvalidInput, "exact inner mode needs a dense QR");
        image = exact_project(*qr, utilde);
    } else {
        LsqrOptions lo;
        lo.tau = opts.tau;
        lo.max_iters = opts.lsqr_max_iters;
        lo.operator_norm = pair.norm_estimate().value_or(0.0);
        LsqrResult sol = lsqr_solve(pair, utilde, lo);
        iterations = sol.iterations;
        criterion = sol.criterion;
        if (!sol.converged)
            return stop(Termination::InnerSolverStalled,
                        "criterion " + std::to_string(sol.criterion) + " after " +
                            std::to_string(sol.iterations) + " iterations");
        image = pair_apply(pair, sol.z);
    }
    if (opts.inner_hook) opts.inner_hook(i, image);

    Vector s = image - alpha * st.vt.col(j);
    Vector xi = Vector::Zero(i);
    if (opts.reorth != Reorth::None) {
        const auto variant = opts.reorth == Reorth::Classical ? GramSchmidt::Classical : GramSchmidt::Modified;
        OrthogonalizeResult r = orthogonalize(s, st.vt.leftCols(i), variant);
        xi = std::move(r.coeffs);
        s = std::move(r.residual);
    }
    const double beta = s.norm();
    tol = opts.breakdown_tol * std::max({1.0, st.running_max, alpha});

    // hat_alpha_i uh_i = (-1)^{i-1} vt_i(m+1:m+p) - hat_beta_{i-1} uh_{i-1}
    Vector ah = st.vt.col(j).tail(p);
    if ((i - 1) % 2 == 1) ah = -ah;
    if (j > 0) ah -= st.hat_betas.back() * st.uh.col(j - 1);
    const double hat_alpha = ah.norm();
    if (hat_alpha < tol) return stop(Termination::LuckyBreakdown, "hat_alpha");
    const double hat_beta = alpha * beta / hat_alpha;
    // A vanishing beta_i means span(vt_1..vt_i) is invariant. B_i and Bhat_i
    // need neither beta_i nor vt_{i+1}, so the step is kept without vt_{i+1}.
    const bool closing = beta < tol;
    if (!closing && hat_beta < tol) return stop(Termination::LuckyBreakdown, "hat_beta");

    st.u.col(j) = ui;
    if (!closing) st.vt.col(j + 1) = s / beta;
    st.uh.col(j) = ah / hat_alpha;
    st.alphas.push_back(alpha);
    st.betas.push_back(beta);
    st.hat_alphas.push_back(hat_alpha);
    st.hat_betas.push_back(hat_beta);
    st.xi.push_back(std::move(xi));
    st.inner_iterations.push_back(iterations);
    st.inner_criteria.push_back(criterion);
    if (opts.retain_inner_solutions) st.inner_images.push_back(std::move(image));
    st.running_max = std::max({st.running_max, alpha, beta});
    st.step = i;
    if (closing) {
        st.closed = true;
        return stop(Termination::LuckyBreakdown, "beta");
    }
    return Termination::None;
}

JbdFactorization jbd_run(StackedPair& pair, const JbdOptions& opts, const std::optional<Vector>& start,
                         const DenseQr* qr) {
    opts.validate();
    std::optional<DenseQr> own_qr;
    if (opts.inner == InnerMode::ExactOracle && qr == nullptr) {
        own_qr = dense_qr(pair, opts.dense_cap);
        qr = &*own_qr;
    }
    const Vector s = start ? *start : default_start_vector(pair.n(), opts.seed);
    JbdState st = jbd_init(pair, s, opts.max_steps);
    while (st.step < opts.max_steps) {
        if (jbd_step(st, pair, opts, qr) != Termination::None) break;
    }
    return JbdFactorization(std::move(st));
}

int JbdFactorization::resolve(int k) const {
    if (k == 0) k = state_.step;
    if (k < 1 || k > state_.step)
        throw Error(ErrorCode::InvalidInput, "requested steps exceed the completed factorization");
    return k;
}

UpperBidiagonal JbdFactorization::b(int k) const {
    k = resolve(k);
    return {std::vector<double>(state_.alphas.begin(), state_.alphas.begin() + k),
            std::vector<double>(state_.betas.begin(), state_.betas.begin() + (k - 1))};
}

UpperBidiagonal JbdFactorization::bhat(int k) const {
    k = resolve(k);
    return {std::vector<double>(state_.hat_alphas.begin(), state_.hat_alphas.begin() + k),
            std::vector<double>(state_.hat_betas.begin(), state_.hat_betas.begin() + (k - 1))};
}

UpperBidiagonal JbdFactorization::bbar(int k) const {
    UpperBidiagonal out = bhat(k);
    // column j (0-based) picks up (-1)^j
    for (std::size_t c = 1; c < out.diag.size(); c += 2) out.diag[c] = -out.diag[c];
    for (std::size_t r = 0; r < out.superdiag.size(); r += 2) out.superdiag[r] = -out.superdiag[r];
    return out;
}

Matrix JbdFactorization::u(int k) const { return state_.u.leftCols(resolve(k)); }
Matrix JbdFactorization::uh(int k) const { return state_.uh.leftCols(resolve(k)); }
Matrix JbdFactorization::vt(int k) const {
    if (k == 0) k = state_.step;
    if (k < 1 || k > vt_count()) throw Error(ErrorCode::InvalidInput, "vt column count out of range");
    return state_.vt.leftCols(k);
}
Matrix JbdFactorization::vt_all() const { return state_.vt.leftCols(vt_count()); }

}  // namespace jbd
