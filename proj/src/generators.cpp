#include <cmath>
#include <numbers>
#include <random>

#include "jbd/harness.hpp"

namespace jbd {

namespace {

Vector linspace(double first, double last, Index count) {
    if (count == 1) return Vector::Constant(1, first);
    return Vector::LinSpaced(count, first, last);
}

GeneratedPair assemble(const Vector& c, const Matrix& right, const Vector& d, Matrix truth_x) {
    const Vector s = (1.0 - c.array().square()).sqrt().matrix();
    const Matrix rd = right * d.asDiagonal();
    GeneratedPair out{StackedPair(CsrMatrix::from_dense(c.asDiagonal() * rd), CsrMatrix::from_dense(s.asDiagonal() * rd)),
                      std::vector<double>(c.data(), c.data() + c.size()), std::move(truth_x),
                      d.maxCoeff() / d.minCoeff()};
    return out;
}

}  // namespace

GeneratedPair gen_a1l1(Index n, double kappa) {
    if (n < 2) throw Error(ErrorCode::InvalidInput, "gen_a1l1 needs n >= 2");
    if (!(kappa >= 1.0)) throw Error(ErrorCode::InvalidInput, "gen_a1l1 needs kappa >= 1");
    Vector c(n);
    for (Index i = 0; i < n; ++i) c(i) = static_cast<double>(n - i) / static_cast<double>(2 * n);
    const Vector d = linspace(1.0, kappa, n);
    const Vector s = (1.0 - c.array().square()).sqrt().matrix();
    GeneratedPair out{StackedPair(CsrMatrix::diagonal(c.cwiseProduct(d)), CsrMatrix::diagonal(s.cwiseProduct(d))),
                      std::vector<double>(c.data(), c.data() + n), Matrix(d.cwiseInverse().asDiagonal()), kappa};
    return out;
}

GeneratedPair gen_a2l2(Index n) {
    if (n < 8) throw Error(ErrorCode::InvalidInput, "gen_a2l2 needs n >= 8");
    Vector c(n);
    c.head(3) << 0.99, 0.98, 0.97;
    c.segment(3, n - 6) = linspace(0.96, 0.04, n - 6);
    c.tail(3) << 0.03, 0.02, 0.01;

    Matrix w(n, n);
    const double scale = 2.0 / std::sqrt(2.0 * n + 1.0);
    for (Index i = 1; i <= n; ++i)
        for (Index j = 1; j <= n; ++j)
            w(i - 1, j - 1) = scale * std::sin(2.0 * i * j * std::numbers::pi / (2.0 * n + 1.0));
    const Vector d = linspace(1.0, 10.0, n);
    Matrix x = d.cwiseInverse().asDiagonal() * w;
    return assemble(c, w.transpose(), d, std::move(x));
}

CsrMatrix gen_l1d(Index n) {
    if (n < 2) throw Error(ErrorCode::InvalidInput, "gen_l1d needs n >= 2");
    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(2 * (n - 1)));
    for (Index i = 0; i + 1 < n; ++i) {
        t.push_back({i, i, 1.0});
        t.push_back({i, i + 1, -1.0});
    }
    return CsrMatrix::from_triplets(n - 1, n, std::move(t));
}

Matrix uniform_matrix(Index rows, Index cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    Matrix out(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) out(i, j) = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
    return out;
}

StackedPair gen_random_pair(Index m, Index p, Index n, std::uint64_t seed) {
    if (m < 1 || p < 1 || n < 1) throw Error(ErrorCode::InvalidInput, "gen_random_pair needs positive sizes");
    const Matrix both = uniform_matrix(m + p, n, seed);
    return StackedPair(CsrMatrix::from_dense(both.topRows(m)), CsrMatrix::from_dense(both.bottomRows(p)));
}

}  // namespace jbd
