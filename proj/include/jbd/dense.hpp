#ifndef JBD_DENSE_HPP
#define JBD_DENSE_HPP

#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "jbd/error.hpp"

namespace jbd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Upper bidiagonal k x k matrix stored by its two nonzero diagonals.
struct UpperBidiagonal {
    std::vector<double> diag;
    std::vector<double> superdiag;

    UpperBidiagonal() = default;
    UpperBidiagonal(std::vector<double> d, std::vector<double> e)
        : diag(std::move(d)), superdiag(std::move(e)) {}

    std::size_t size() const noexcept { return diag.size(); }

    /// Throws InvalidInput unless diag is nonempty, superdiag has one entry
    /// fewer and every entry is finite.
    void validate() const;

    /// Leading k x k principal block.
    UpperBidiagonal leading(std::size_t k) const;

    Matrix to_dense() const;
};

/// Full SVD of a small square matrix, B = left * diag(values) * right^T.
struct SmallSvd {
    Matrix left;
    Vector values;  // descending, nonnegative
    Matrix right;
};

/// Implicit-shift QR (Golub-Kahan-Reinsch) SVD of an upper bidiagonal matrix.
///
/// Singular values come back in descending order. Each right singular vector
/// is signed so that its first entry of magnitude above eps is positive, and
/// the matching left vector carries the same flip.
SmallSvd svd_upper_bidiagonal(const UpperBidiagonal& b);

/// Last (smallest) singular value of b.
double smallest_singular_value(const UpperBidiagonal& b);

enum class GramSchmidt { Classical, Modified };

struct OrthogonalizeResult {
    Vector coeffs;    // projection coefficients against each basis column
    Vector residual;  // v - basis * coeffs
    double norm = 0.0;
};

/// One Gram-Schmidt pass of v against the columns of basis.
///
/// Classical takes every coefficient from the original v; modified takes
/// coefficient j from the partially reduced vector. Callers wanting two passes
/// apply it twice and add the coefficients.
OrthogonalizeResult orthogonalize(const Vector& v, const Eigen::Ref<const Matrix>& basis,
                                  GramSchmidt variant);

/// Spectral norm of a small dense matrix.
double two_norm(const Eigen::Ref<const Matrix>& m);

/// Spectral norm of a small symmetric matrix (largest |eigenvalue|).
double symmetric_two_norm(const Eigen::Ref<const Matrix>& m);

}  // namespace jbd

#endif
