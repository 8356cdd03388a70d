#include <cmath>

#include "jbd/dense.hpp"

namespace jbd {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::DegenerateStart: return "DegenerateStart";
        case ErrorCode::LuckyBreakdown: return "LuckyBreakdown";
        case ErrorCode::InnerSolverStalled: return "InnerSolverStalled";
        case ErrorCode::NotRegular: return "NotRegular";
        case ErrorCode::DenseCapExceeded: return "DenseCapExceeded";
        case ErrorCode::DiagnosticsUnavailable: return "DiagnosticsUnavailable";
        case ErrorCode::NumericalInconsistency: return "NumericalInconsistency";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::Unsupported: return "Unsupported";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::NoConvergence: return "NoConvergence";
    }
    return "Unknown";
}

void UpperBidiagonal::validate() const {
    if (diag.empty()) throw Error(ErrorCode::InvalidInput, "bidiagonal matrix must have k >= 1");
    if (superdiag.size() + 1 != diag.size())
        throw Error(ErrorCode::InvalidInput, "superdiagonal length must be diagonal length - 1");
    for (double x : diag)
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "non-finite diagonal entry");
    for (double x : superdiag)
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "non-finite superdiagonal entry");
}

UpperBidiagonal UpperBidiagonal::leading(std::size_t k) const {
    if (k == 0 || k > diag.size())
        throw Error(ErrorCode::InvalidInput, "leading block size out of range");
    return {std::vector<double>(diag.begin(), diag.begin() + static_cast<long>(k)),
            std::vector<double>(superdiag.begin(), superdiag.begin() + static_cast<long>(k - 1))};
}

Matrix UpperBidiagonal::to_dense() const {
    const auto k = static_cast<Index>(diag.size());
    Matrix m = Matrix::Zero(k, k);
    for (Index i = 0; i < k; ++i) {
        m(i, i) = diag[static_cast<std::size_t>(i)];
        if (i + 1 < k) m(i, i + 1) = superdiag[static_cast<std::size_t>(i)];
    }
    return m;
}

OrthogonalizeResult orthogonalize(const Vector& v, const Eigen::Ref<const Matrix>& basis,
                                  GramSchmidt variant) {
    if (basis.cols() > 0 && basis.rows() != v.size())
        throw Error(ErrorCode::InvalidInput, "orthogonalize: dimension mismatch");

    OrthogonalizeResult out;
    out.coeffs = Vector::Zero(basis.cols());
    out.residual = v;
    if (variant == GramSchmidt::Classical) {
        out.coeffs.noalias() = basis.transpose() * v;
        out.residual.noalias() -= basis * out.coeffs;
    } else {
        for (Index j = 0; j < basis.cols(); ++j) {
            const double h = basis.col(j).dot(out.residual);
            out.coeffs(j) = h;
            out.residual.noalias() -= h * basis.col(j);
        }
    }
    out.norm = out.residual.norm();
    return out;
}

double two_norm(const Eigen::Ref<const Matrix>& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double symmetric_two_norm(const Eigen::Ref<const Matrix>& m) {
    if (m.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace jbd
