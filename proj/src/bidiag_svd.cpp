#include <algorithm>
#include <cmath>
#include <numeric>

#include "jbd/dense.hpp"

namespace jbd {

namespace {

struct Rotation {
    double c = 1.0;
    double s = 0.0;
    double r = 0.0;
};

// c*a + s*b = r, -s*a + c*b = 0
Rotation givens(double a, double b) {
    const double r = std::hypot(a, b);
    if (r == 0.0) return {1.0, 0.0, 0.0};
    return {a / r, b / r, r};
}

// x' = c*x + s*y, y' = -s*x + c*y on two columns of m.
void rotate_columns(Matrix& m, Index x, Index y, double c, double s) {
    for (Index r = 0; r < m.rows(); ++r) {
        const double a = m(r, x);
        const double b = m(r, y);
        m(r, x) = c * a + s * b;
        m(r, y) = -s * a + c * b;
    }
}

class BidiagonalQr {
public:
    explicit BidiagonalQr(const UpperBidiagonal& b)
        : n_(static_cast<Index>(b.size())),
          d_(b.diag),
          e_(b.superdiag),
          u_(Matrix::Identity(n_, n_)),
          v_(Matrix::Identity(n_, n_)) {}

    SmallSvd run() {
        double anorm = 0.0;
        for (double x : d_) anorm = std::max(anorm, std::abs(x));
        for (double x : e_) anorm = std::max(anorm, std::abs(x));
        const double zero_tol = kEps * anorm;

        const long max_sweeps = 100L * std::max<Index>(n_, 1);
        long sweeps = 0;
        Index hi = n_ - 1;
        while (hi > 0) {
            for (Index i = 0; i < hi; ++i) {
                if (std::abs(e_[i]) <= 8.0 * kEps * (std::abs(d_[i]) + std::abs(d_[i + 1])))
                    e_[i] = 0.0;
            }
            for (Index i = 0; i <= hi; ++i) {
                if (std::abs(d_[i]) <= zero_tol) d_[i] = 0.0;
            }
            if (e_[hi - 1] == 0.0) {
                --hi;
                continue;
            }
            Index lo = hi - 1;
            while (lo > 0 && e_[lo - 1] != 0.0) --lo;

            bool chased = false;
            for (Index i = lo; i < hi; ++i) {
                if (d_[i] == 0.0) {
                    chase_row(i, hi);
                    chased = true;
                    break;
                }
            }
            if (chased) continue;
            if (d_[hi] == 0.0) {
                chase_column(lo, hi);
                continue;
            }
            if (++sweeps > max_sweeps)
                throw Error(ErrorCode::NoConvergence, "bidiagonal SVD did not converge");
            qr_sweep(lo, hi);
        }
        return finish();
    }

private:
    // d[i] == 0 with i < hi: rotate rows (i, j) from the left so the
    // superdiagonal entry of row i is pushed off the end of the block.
    void chase_row(Index i, Index hi) {
        double f = e_[i];
        e_[i] = 0.0;
        for (Index j = i + 1; j <= hi && f != 0.0; ++j) {
            const Rotation g = givens(d_[j], f);
            d_[j] = g.r;
            if (j < hi) {
                f = -g.s * e_[j];
                e_[j] = g.c * e_[j];
            }
            rotate_columns(u_, j, i, g.c, g.s);
        }
    }

    // d[hi] == 0: rotate columns (j, hi) from the right, walking upward.
    void chase_column(Index lo, Index hi) {
        double f = e_[hi - 1];
        e_[hi - 1] = 0.0;
        for (Index j = hi - 1; j >= lo && f != 0.0; --j) {
            const Rotation g = givens(d_[j], f);
            d_[j] = g.r;
            if (j > lo) {
                f = -g.s * e_[j - 1];
                e_[j - 1] = g.c * e_[j - 1];
            }
            rotate_columns(v_, j, hi, g.c, g.s);
        }
    }

    // One implicit-shift Golub-Kahan step on the unreduced block [lo, hi].
    void qr_sweep(Index lo, Index hi) {
        const double t11 = d_[hi - 1] * d_[hi - 1] + (hi - 1 > lo ? e_[hi - 2] * e_[hi - 2] : 0.0);
        const double t12 = d_[hi - 1] * e_[hi - 1];
        const double t22 = d_[hi] * d_[hi] + e_[hi - 1] * e_[hi - 1];
        double mu = t22;
        if (t12 != 0.0) {
            const double delta = 0.5 * (t11 - t22);
            const double sgn = delta >= 0.0 ? 1.0 : -1.0;
            mu = t22 - t12 * t12 / (delta + sgn * std::hypot(delta, t12));
        }

        double y = d_[lo] * d_[lo] - mu;
        double z = d_[lo] * e_[lo];
        for (Index k = lo; k < hi; ++k) {
            Rotation g = givens(y, z);
            if (k > lo) e_[k - 1] = g.r;
            y = g.c * d_[k] + g.s * e_[k];
            e_[k] = -g.s * d_[k] + g.c * e_[k];
            z = g.s * d_[k + 1];
            d_[k + 1] = g.c * d_[k + 1];
            rotate_columns(v_, k, k + 1, g.c, g.s);

            g = givens(y, z);
            d_[k] = g.r;
            y = g.c * e_[k] + g.s * d_[k + 1];
            d_[k + 1] = -g.s * e_[k] + g.c * d_[k + 1];
            if (k + 1 < hi) {
                z = g.s * e_[k + 1];
                e_[k + 1] = g.c * e_[k + 1];
            }
            rotate_columns(u_, k, k + 1, g.c, g.s);
        }
        e_[hi - 1] = y;
    }

    SmallSvd finish() {
        for (Index i = 0; i < n_; ++i) {
            if (d_[i] < 0.0) {
                d_[i] = -d_[i];
                v_.col(i) = -v_.col(i);
            }
        }
        std::vector<Index> order(static_cast<std::size_t>(n_));
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return d_[a] > d_[b]; });

        SmallSvd out;
        out.values.resize(n_);
        out.left.resize(n_, n_);
        out.right.resize(n_, n_);
        for (Index j = 0; j < n_; ++j) {
            const Index src = order[static_cast<std::size_t>(j)];
            out.values(j) = d_[src];
            out.left.col(j) = u_.col(src);
            out.right.col(j) = v_.col(src);
            for (Index r = 0; r < n_; ++r) {
                const double x = out.right(r, j);
                if (std::abs(x) > kEps) {
                    if (x < 0.0) {
                        out.right.col(j) = -out.right.col(j);
                        out.left.col(j) = -out.left.col(j);
                    }
                    break;
                }
            }
        }
        return out;
    }

    Index n_;
    std::vector<double> d_;
    std::vector<double> e_;
    Matrix u_;
    Matrix v_;
};

}  // namespace

SmallSvd svd_upper_bidiagonal(const UpperBidiagonal& b) {
    b.validate();
    return BidiagonalQr(b).run();
}

double smallest_singular_value(const UpperBidiagonal& b) {
    const SmallSvd svd = svd_upper_bidiagonal(b);
    return svd.values(svd.values.size() - 1);
}

}  // namespace jbd
