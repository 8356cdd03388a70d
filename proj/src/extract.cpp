#include <algorithm>
#include <cmath>
#include <limits>

#include "jbd/extract.hpp"

namespace jbd {

void ExtractionOptions::validate(int steps) const {
    if (count < 1) throw Error(ErrorCode::InvalidInput, "extraction count must be >= 1");
    if (count > steps) throw Error(ErrorCode::InvalidInput, "extraction count exceeds completed steps");
    if (!(tau_bar > 0.0)) throw Error(ErrorCode::InvalidInput, "tau_bar must be positive");
    if (consistency_slack < 0.0) throw Error(ErrorCode::InvalidInput, "consistency_slack must be >= 0");
}

namespace {

// c values in descending order with matching right vectors (as columns) in
// the vt coordinates.
struct RitzSet {
    std::vector<double> c;
    std::vector<double> s;
    Matrix y;
    bool clipped_any = false;
};

RitzSet ritz_set(const JbdFactorization& fact, int k, ValueSource source, bool want_vectors) {
    RitzSet out;
    if (source == ValueSource::FromB) {
        const SmallSvd svd = svd_upper_bidiagonal(fact.b(k));
        for (Index i = 0; i < svd.values.size(); ++i) out.c.push_back(svd.values(i));
        if (want_vectors) out.y = svd.right;
        for (double c : out.c) out.s.push_back(std::sqrt(std::max(0.0, 1.0 - std::min(c, 1.0) * std::min(c, 1.0))));
    } else {
        const SmallSvd svd = svd_upper_bidiagonal(fact.bhat(k));
        // largest c pairs with the smallest s, so walk the values backwards
        const Index kk = svd.values.size();
        if (want_vectors) out.y.resize(kk, kk);
        for (Index i = 0; i < kk; ++i) {
            const double s = svd.values(kk - 1 - i);
            out.s.push_back(s);
            const double sc = std::min(s, 1.0);
            out.c.push_back(std::sqrt(std::max(0.0, 1.0 - sc * sc)));
            if (want_vectors) {
                Vector yh = svd.right.col(kk - 1 - i);
                for (Index r = 1; r < kk; r += 2) yh(r) = -yh(r);
                out.y.col(i) = yh;
            }
        }
    }
    return out;
}

// Position in the descending Ritz list of the index-th value from `side`.
Index position(int index, Side side, int k) {
    return side == Side::Largest ? index - 1 : k - index;
}

}  // namespace

std::vector<GsvdEstimate> extract_values(const JbdFactorization& fact, const ExtractionOptions& opts) {
    const int k = fact.steps();
    opts.validate(k);
    const RitzSet set = ritz_set(fact, k, opts.source, true);

    std::vector<GsvdEstimate> out;
    for (int idx = 1; idx <= opts.count; ++idx) {
        const Index pos = position(idx, opts.side, k);
        GsvdEstimate est;
        est.index = idx;
        // raw value: a singular value of B_k, or of Bhat_k for the s side
        const double raw = opts.source == ValueSource::FromB ? set.c[pos] : set.s[pos];
        if (raw > 1.0) {
            est.clipped = true;
            if (raw > 1.0 + opts.consistency_slack)
                est.warning = std::string(to_string(ErrorCode::NumericalInconsistency)) +
                              ": Ritz value exceeds 1 by " + std::to_string(raw - 1.0);
        }
        if (opts.source == ValueSource::FromB) {
            est.c = std::min(raw, 1.0);
            est.s = std::sqrt((1.0 - est.c) * (1.0 + est.c));
        } else {
            est.s = std::min(raw, 1.0);
            est.c = std::sqrt((1.0 - est.s) * (1.0 + est.s));
        }
        double gap = std::numeric_limits<double>::infinity();
        if (pos > 0) gap = std::min(gap, std::abs(set.c[pos - 1] - set.c[pos]));
        if (pos + 1 < static_cast<Index>(set.c.size())) gap = std::min(gap, std::abs(set.c[pos] - set.c[pos + 1]));
        est.gap = gap;
        est.y = set.y.col(pos);
        out.push_back(std::move(est));
    }

    const RitzHistory hist = [&] {
        std::vector<int> indices;
        for (int idx = 1; idx <= opts.count; ++idx) indices.push_back(idx);
        return track_convergence(fact, indices, opts.side, opts.source);
    }();
    for (std::size_t row = 0; row < hist.c.size(); ++row)
        for (std::size_t j = 0; j < out.size(); ++j)
            if (!std::isnan(hist.c[row][j])) out[j].history.emplace_back(static_cast<int>(row) + 1, hist.c[row][j]);
    return out;
}

void extract_right_vectors(const JbdFactorization& fact, const StackedPair& pair,
                           std::vector<GsvdEstimate>& estimates, double tau_bar) {
    if (!(tau_bar > 0.0)) throw Error(ErrorCode::InvalidInput, "tau_bar must be positive");
    LsqrOptions lo;
    lo.tau = tau_bar;
    lo.operator_norm = pair.norm_estimate().value_or(0.0);
    for (GsvdEstimate& est : estimates) {
        const int k = static_cast<int>(est.y.size());
        if (k < 1 || k > fact.steps()) throw Error(ErrorCode::InvalidInput, "estimate does not match the factorization");
        const Vector rhs = fact.vt(k) * est.y;
        LsqrResult sol = lsqr_solve(pair, rhs, lo);
        est.x_iterations = sol.iterations;
        if (!sol.converged) {
            est.x.reset();
            continue;
        }
        est.x = std::move(sol.z);
        est.residual = gsvd_residual(pair, est);
    }
}

double gsvd_residual(const StackedPair& pair, const GsvdEstimate& est) {
    if (!est.x) throw Error(ErrorCode::InvalidInput, "gsvd_residual needs a right vector");
    const Vector& x = *est.x;
    const double xn = x.norm();
    if (xn == 0.0) throw Error(ErrorCode::InvalidInput, "gsvd_residual: zero right vector");
    double c_norm = 0.0;
    if (auto cached = pair.norm_estimate()) c_norm = *cached;
    else c_norm = power_iteration_two_norm(pair);
    const Vector ata = spmv_t(pair.a(), spmv(pair.a(), x));
    const Vector ltl = spmv_t(pair.l(), spmv(pair.l(), x));
    return (est.s * est.s * ata - est.c * est.c * ltl).norm() / (c_norm * c_norm * xn);
}

RitzHistory track_convergence(const JbdFactorization& fact, const std::vector<int>& indices, Side side,
                              ValueSource source) {
    for (int idx : indices)
        if (idx < 1) throw Error(ErrorCode::InvalidInput, "Ritz indices are 1-based");
    RitzHistory out;
    out.indices = indices;
    for (int kk = 1; kk <= fact.steps(); ++kk) {
        const RitzSet set = ritz_set(fact, kk, source, false);
        std::vector<double> row;
        for (int idx : indices) {
            if (idx > kk) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            row.push_back(std::min(set.c[position(idx, side, kk)], 1.0));
        }
        out.c.push_back(std::move(row));
    }
    return out;
}

int stagnation_step(const std::vector<double>& series, double tau, int window) {
    int run = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (std::abs(series[i] - series[i - 1]) < tau / 10.0) {
            if (++run >= window) return static_cast<int>(i) + 1;
        } else {
            run = 0;
        }
    }
    return -1;
}

}  // namespace jbd
