#include <algorithm>
#include <cmath>

#include "jbd/sparse.hpp"

namespace jbd {

CsrMatrix::CsrMatrix(Index nrows, Index ncols, std::vector<Index> row_starts,
                     std::vector<Index> col_indices, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_starts_(std::move(row_starts)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
    if (nrows < 0 || ncols < 0) throw Error(ErrorCode::InvalidInput, "negative matrix dimension");
    if (row_starts_.size() != static_cast<std::size_t>(nrows) + 1)
        throw Error(ErrorCode::InvalidInput, "row_starts must have nrows + 1 entries");
    if (col_indices_.size() != values_.size())
        throw Error(ErrorCode::InvalidInput, "col_indices and values differ in length");
    if (row_starts_.front() != 0 || row_starts_.back() != static_cast<Index>(values_.size()))
        throw Error(ErrorCode::InvalidInput, "row_starts must run from 0 to nnz");
    for (Index r = 0; r < nrows; ++r) {
        const Index begin = row_starts_[static_cast<std::size_t>(r)];
        const Index end = row_starts_[static_cast<std::size_t>(r) + 1];
        if (end < begin) throw Error(ErrorCode::InvalidInput, "row_starts must be nondecreasing");
        for (Index k = begin; k < end; ++k) {
            const Index c = col_indices_[static_cast<std::size_t>(k)];
            if (c < 0 || c >= ncols) throw Error(ErrorCode::InvalidInput, "column index out of range");
            if (k > begin && c <= col_indices_[static_cast<std::size_t>(k) - 1])
                throw Error(ErrorCode::InvalidInput, "column indices must strictly increase per row");
            if (!std::isfinite(values_[static_cast<std::size_t>(k)]))
                throw Error(ErrorCode::InvalidInput, "non-finite matrix value");
        }
    }
}

CsrMatrix CsrMatrix::from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries) {
    for (const auto& t : entries) {
        if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
            throw Error(ErrorCode::InvalidInput, "triplet index out of range");
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Triplet& x, const Triplet& y) {
        return x.row != y.row ? x.row < y.row : x.col < y.col;
    });
    std::vector<Index> starts(static_cast<std::size_t>(nrows) + 1, 0);
    std::vector<Index> cols;
    std::vector<double> vals;
    cols.reserve(entries.size());
    vals.reserve(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& t = entries[k];
        if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
            vals.back() += t.value;
            continue;
        }
        cols.push_back(t.col);
        vals.push_back(t.value);
        ++starts[static_cast<std::size_t>(t.row) + 1];
    }
    for (std::size_t r = 0; r < static_cast<std::size_t>(nrows); ++r) starts[r + 1] += starts[r];
    return CsrMatrix(nrows, ncols, std::move(starts), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::from_dense(const Matrix& dense, double drop_tol) {
    std::vector<Index> starts{0};
    std::vector<Index> cols;
    std::vector<double> vals;
    for (Index r = 0; r < dense.rows(); ++r) {
        for (Index c = 0; c < dense.cols(); ++c) {
            const double x = dense(r, c);
            if (std::abs(x) > drop_tol) {
                cols.push_back(c);
                vals.push_back(x);
            }
        }
        starts.push_back(static_cast<Index>(vals.size()));
    }
    return CsrMatrix(dense.rows(), dense.cols(), std::move(starts), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::identity(Index n, double scale) {
    return diagonal(Vector::Constant(n, scale));
}

CsrMatrix CsrMatrix::zero(Index nrows, Index ncols) {
    return CsrMatrix(nrows, ncols, std::vector<Index>(static_cast<std::size_t>(nrows) + 1, 0), {}, {});
}

CsrMatrix CsrMatrix::diagonal(const Vector& diag) {
    const Index n = diag.size();
    std::vector<Index> starts(static_cast<std::size_t>(n) + 1);
    std::vector<Index> cols(static_cast<std::size_t>(n));
    std::vector<double> vals(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        starts[static_cast<std::size_t>(i)] = i;
        cols[static_cast<std::size_t>(i)] = i;
        vals[static_cast<std::size_t>(i)] = diag(i);
    }
    starts.back() = n;
    return CsrMatrix(n, n, std::move(starts), std::move(cols), std::move(vals));
}

Matrix CsrMatrix::to_dense() const {
    Matrix out = Matrix::Zero(nrows_, ncols_);
    for (Index r = 0; r < nrows_; ++r) {
        for (Index k = row_starts_[static_cast<std::size_t>(r)]; k < row_starts_[static_cast<std::size_t>(r) + 1]; ++k)
            out(r, col_indices_[static_cast<std::size_t>(k)]) = values_[static_cast<std::size_t>(k)];
    }
    return out;
}

CsrMatrix CsrMatrix::scaled(double factor) const {
    std::vector<double> vals = values_;
    for (double& x : vals) x *= factor;
    return CsrMatrix(nrows_, ncols_, row_starts_, col_indices_, std::move(vals));
}

Vector spmv(const CsrMatrix& m, const Vector& x) {
    if (x.size() != m.cols()) throw Error(ErrorCode::InvalidInput, "spmv: dimension mismatch");
    const auto& starts = m.row_starts();
    const auto& cols = m.col_indices();
    const auto& vals = m.values();
    Vector y(m.rows());
    for (Index r = 0; r < m.rows(); ++r) {
        double acc = 0.0;
        for (Index k = starts[static_cast<std::size_t>(r)]; k < starts[static_cast<std::size_t>(r) + 1]; ++k)
            acc += vals[static_cast<std::size_t>(k)] * x(cols[static_cast<std::size_t>(k)]);
        y(r) = acc;
    }
    return y;
}

Vector spmv_t(const CsrMatrix& m, const Vector& y) {
    if (y.size() != m.rows()) throw Error(ErrorCode::InvalidInput, "spmv_t: dimension mismatch");
    const auto& starts = m.row_starts();
    const auto& cols = m.col_indices();
    const auto& vals = m.values();
    Vector x = Vector::Zero(m.cols());
    for (Index r = 0; r < m.rows(); ++r) {
        const double yr = y(r);
        if (yr == 0.0) continue;
        for (Index k = starts[static_cast<std::size_t>(r)]; k < starts[static_cast<std::size_t>(r) + 1]; ++k)
            x(cols[static_cast<std::size_t>(k)]) += vals[static_cast<std::size_t>(k)] * yr;
    }
    return x;
}

StackedPair::StackedPair(CsrMatrix a, CsrMatrix l) : a_(std::move(a)), l_(std::move(l)) {
    if (a_.cols() != l_.cols())
        throw Error(ErrorCode::InvalidInput, "A and L must have the same number of columns");
    if (a_.cols() == 0) throw Error(ErrorCode::InvalidInput, "matrix pair has no columns");
    if (a_.rows() + l_.rows() < a_.cols())
        throw Error(ErrorCode::InvalidInput, "m + p < n: the pair cannot be regular");
}

void StackedPair::set_norm_estimate(double value) {
    if (!(value > 0.0) || !std::isfinite(value))
        throw Error(ErrorCode::InvalidInput, "norm estimate must be positive and finite");
    norm_estimate_ = value;
}

Matrix StackedPair::to_dense() const {
    Matrix c(stacked_rows(), n());
    c.topRows(m()) = a_.to_dense();
    c.bottomRows(p()) = l_.to_dense();
    return c;
}

Vector pair_apply(const StackedPair& pair, const Vector& x) {
    if (x.size() != pair.n()) throw Error(ErrorCode::InvalidInput, "pair_apply: dimension mismatch");
    Vector y(pair.stacked_rows());
    y.head(pair.m()) = spmv(pair.a(), x);
    y.tail(pair.p()) = spmv(pair.l(), x);
    return y;
}

Vector pair_apply_t(const StackedPair& pair, const Vector& y) {
    if (y.size() != pair.stacked_rows())
        throw Error(ErrorCode::InvalidInput, "pair_apply_t: dimension mismatch");
    Vector x = spmv_t(pair.a(), y.head(pair.m()));
    x += spmv_t(pair.l(), y.tail(pair.p()));
    return x;
}

namespace {

double rayleigh_power(const StackedPair& pair, Vector x) {
    x.normalize();
    double prev = 0.0;
    double rq = 0.0;
    for (int it = 0; it < 100; ++it) {
        Vector y = pair_apply_t(pair, pair_apply(pair, x));
        rq = x.dot(y);
        const double ynorm = y.norm();
        if (ynorm == 0.0) return 0.0;
        if (it > 0 && std::abs(rq - prev) < 1e-3 * std::abs(rq)) break;
        prev = rq;
        x = y / ynorm;
    }
    return rq;
}

}  // namespace

double power_iteration_two_norm(const StackedPair& pair) {
    bool any_nonzero = false;
    for (double v : pair.a().values()) any_nonzero = any_nonzero || v != 0.0;
    for (double v : pair.l().values()) any_nonzero = any_nonzero || v != 0.0;
    if (!any_nonzero) throw Error(ErrorCode::InvalidInput, "two-norm estimate of a zero operator");

    const Index n = pair.n();
    double rq = rayleigh_power(pair, Vector::Ones(n));
    if (!(rq > 0.0)) {
        // All-ones start can sit in the null space; restart from a tilted vector.
        Vector start(n);
        for (Index i = 0; i < n; ++i) start(i) = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
        rq = rayleigh_power(pair, start);
    }
    if (!(rq > 0.0)) throw Error(ErrorCode::InvalidInput, "power iteration stagnated at zero");
    return std::sqrt(rq);
}

double estimate_two_norm(StackedPair& pair) {
    if (auto cached = pair.norm_estimate()) return *cached;
    const double value = power_iteration_two_norm(pair);
    pair.set_norm_estimate(value);
    return value;
}

}  // namespace jbd
