#ifndef JBD_SPARSE_HPP
#define JBD_SPARSE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "jbd/dense.hpp"

namespace jbd {

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    double value;
};

/// Compressed sparse row matrix. Immutable after construction.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Validating constructor: row_starts has nrows+1 nondecreasing entries
    /// ending at nnz, column indices strictly increase within each row and
    /// every value is finite.
    CsrMatrix(Index nrows, Index ncols, std::vector<Index> row_starts,
              std::vector<Index> col_indices, std::vector<double> values);

    /// Builds from unordered (row, col, value) entries, 0-based. Duplicates are
    /// summed.
    static CsrMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries);
    static CsrMatrix from_dense(const Matrix& dense, double drop_tol = 0.0);
    static CsrMatrix identity(Index n, double scale = 1.0);
    static CsrMatrix zero(Index nrows, Index ncols);
    static CsrMatrix diagonal(const Vector& diag);

    Index rows() const noexcept { return nrows_; }
    Index cols() const noexcept { return ncols_; }
    Index nnz() const noexcept { return static_cast<Index>(values_.size()); }

    const std::vector<Index>& row_starts() const noexcept { return row_starts_; }
    const std::vector<Index>& col_indices() const noexcept { return col_indices_; }
    const std::vector<double>& values() const noexcept { return values_; }

    Matrix to_dense() const;
    CsrMatrix scaled(double factor) const;

private:
    Index nrows_ = 0;
    Index ncols_ = 0;
    std::vector<Index> row_starts_{0};
    std::vector<Index> col_indices_;
    std::vector<double> values_;
};

/// y = M x, summing each row left to right.
Vector spmv(const CsrMatrix& m, const Vector& x);

/// y = M^T x.
Vector spmv_t(const CsrMatrix& m, const Vector& y);

/// The stacked operator C = [A; L] of a matrix pair.
class StackedPair {
public:
    StackedPair(CsrMatrix a, CsrMatrix l);

    const CsrMatrix& a() const noexcept { return a_; }
    const CsrMatrix& l() const noexcept { return l_; }

    Index m() const noexcept { return a_.rows(); }
    Index p() const noexcept { return l_.rows(); }
    Index n() const noexcept { return a_.cols(); }
    Index stacked_rows() const noexcept { return a_.rows() + l_.rows(); }

    /// Cached estimate of ||C||_2, if one has been computed or supplied.
    std::optional<double> norm_estimate() const noexcept { return norm_estimate_; }
    void set_norm_estimate(double value);

    Matrix to_dense() const;

private:
    CsrMatrix a_;
    CsrMatrix l_;
    std::optional<double> norm_estimate_;
};

/// C x, length m + p.
Vector pair_apply(const StackedPair& pair, const Vector& x);

/// C^T y = A^T y(1:m) + L^T y(m+1:m+p).
Vector pair_apply_t(const StackedPair& pair, const Vector& y);

/// Power iteration on C^T C from the normalized all-ones vector. Stops once the
/// Rayleigh quotient changes by less than 1e-3 relative, or after 100
/// iterations, and returns its square root. The result is cached on the pair.
double estimate_two_norm(StackedPair& pair);

/// Same iteration without touching any cache.
double power_iteration_two_norm(const StackedPair& pair);

}  // namespace jbd

#endif
