#include <cmath>

#include "jbd/lsqr.hpp"

namespace jbd {

namespace {

struct ResidualCheck {
    double criterion = 0.0;
    double residual_norm = 0.0;
    bool passed = false;
};

ResidualCheck check_residual(const StackedPair& pair, const Vector& rhs, const Vector& z,
                             double rhs_norm, double op_norm, double tau) {
    const Vector r = rhs - pair_apply(pair, z);
    ResidualCheck out;
    out.residual_norm = r.norm();
    if (out.residual_norm <= 64.0 * kEps * rhs_norm) {
        out.criterion = 0.0;
        out.passed = true;
        return out;
    }
    out.criterion = pair_apply_t(pair, r).norm() / (op_norm * out.residual_norm);
    out.passed = out.criterion <= tau;
    return out;
}

}  // namespace

LsqrResult lsqr_solve(const StackedPair& pair, const Vector& rhs, const LsqrOptions& opts) {
    if (rhs.size() != pair.stacked_rows())
        throw Error(ErrorCode::InvalidInput, "lsqr_solve: rhs length must be m + p");
    if (!(opts.tau > 0.0)) throw Error(ErrorCode::InvalidInput, "lsqr_solve: tau must be positive");

    double op_norm = opts.operator_norm;
    if (!(op_norm > 0.0)) {
        auto cached = pair.norm_estimate();
        op_norm = cached ? *cached : power_iteration_two_norm(pair);
    }
    const int max_iters = opts.max_iters > 0 ? opts.max_iters : static_cast<int>(4 * pair.n());

    LsqrResult out;
    out.z = Vector::Zero(pair.n());
    double beta = rhs.norm();
    const double rhs_norm = beta;
    if (beta == 0.0) {
        out.converged = true;
        return out;
    }

    Vector u = rhs / beta;
    Vector v = pair_apply_t(pair, u);
    double alpha = v.norm();
    out.residual_norm = beta;
    out.criterion = alpha / op_norm;
    if (out.criterion <= opts.tau) {
        out.converged = true;
        return out;
    }
    v /= alpha;
    Vector w = v;
    double phibar = beta;
    double rhobar = alpha;

    for (int it = 1; it <= max_iters; ++it) {
        u = pair_apply(pair, v) - alpha * u;
        beta = u.norm();
        if (beta > 0.0) u /= beta;

        v = pair_apply_t(pair, u) - beta * v;
        alpha = v.norm();
        if (alpha > 0.0) v /= alpha;

        const double rho = std::hypot(rhobar, beta);
        const double c = rhobar / rho;
        const double s = beta / rho;
        const double theta = s * alpha;
        rhobar = -c * alpha;
        const double phi = c * phibar;
        phibar = s * phibar;

        out.z += (phi / rho) * w;
        w = v - (theta / rho) * w;
        out.iterations = it;
        out.residual_history.push_back(phibar);

        const double est_criterion = alpha * std::abs(c) / op_norm;
        const bool candidate = phibar <= 64.0 * kEps * rhs_norm || est_criterion <= opts.tau ||
                               alpha == 0.0 || beta == 0.0;
        if (candidate || it == max_iters) {
            const ResidualCheck chk = check_residual(pair, rhs, out.z, rhs_norm, op_norm, opts.tau);
            out.criterion = chk.criterion;
            out.residual_norm = chk.residual_norm;
            if (chk.passed) {
                out.converged = true;
                return out;
            }
            if (alpha == 0.0 || beta == 0.0) break;  // Krylov space exhausted
        }
    }
    return out;
}

}  // namespace jbd
