#ifndef JBD_JBD_HPP
#define JBD_JBD_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jbd/lsqr.hpp"
#include "jbd/oracle.hpp"

namespace jbd {

enum class Reorth { None, Classical, Modified };
enum class InnerMode { Lsqr, ExactOracle };

struct JbdOptions {
    int max_steps = 20;
    double tau = 1e-10;
    Reorth reorth = Reorth::Modified;
    InnerMode inner = InnerMode::Lsqr;
    /// Relative breakdown threshold: a scalar below
    /// breakdown_tol * max(1, running max of alpha, beta) stops the process.
    double breakdown_tol = 1e-10;
    std::uint64_t seed = 2022;
    int lsqr_max_iters = 0;  // 0 selects 4n
    Index dense_cap = 0;     // 0 selects default_dense_cap()
    /// Keep C zbar_i for every step so the inner-solve error can be measured.
    bool retain_inner_solutions = false;
    /// Test seam: called with (step, C zbar_i) after the inner solve and may
    /// modify it, e.g. to inject a known perturbation.
    std::function<void(int, Vector&)> inner_hook;

    void validate() const;
};

enum class Termination { None, LuckyBreakdown, InnerSolverStalled };

struct TerminationInfo {
    Termination kind = Termination::None;
    int step = 0;        // 1-based step that could not be completed
    std::string detail;  // which scalar vanished, or the stalled criterion
};

/// Everything the outer recurrence produces. Column i-1 of u / uh and the
/// alpha/beta entries i-1 belong to step i; vt has one more column than steps.
struct JbdState {
    Index m = 0;
    Index p = 0;
    Index n = 0;
    int step = 0;
    Matrix u;   // m x capacity
    Matrix vt;  // (m+p) x (capacity+1)
    Matrix uh;  // p x capacity
    std::vector<double> alphas;
    std::vector<double> betas;
    std::vector<double> hat_alphas;
    std::vector<double> hat_betas;
    /// xi[i-1] holds the reorthogonalization coefficients of step i against
    /// vt_1..vt_i (the i-th column of the upper triangular D_k).
    std::vector<Vector> xi;
    std::vector<int> inner_iterations;
    std::vector<double> inner_criteria;
    std::vector<Vector> inner_images;  // C zbar_i, when retained
    TerminationInfo terminated;
    double running_max = 1.0;
    /// Set when the last step ended with a vanishing beta: that step is kept
    /// but vt_{step+1} does not exist.
    bool closed = false;

    bool is_terminated() const noexcept { return terminated.kind != Termination::None; }

    auto u_cols() const { return u.leftCols(step); }
    auto uh_cols() const { return uh.leftCols(step); }
    /// First k columns of vt; k defaults to step.
    auto vt_cols(Index k) const { return vt.leftCols(k); }
};

/// Starts the process with vt_1 = C s / ||C s||. Throws DegenerateStart when
/// ||C s|| <= 64 eps ||C|| ||s||.
JbdState jbd_init(StackedPair& pair, const Vector& start, int capacity);

/// Advances one step. On an inner stall or a vanishing alpha, hat_alpha or
/// hat_beta the step is not committed. A vanishing beta keeps the step and
/// closes the state. Either way the state is marked terminated and the kind
/// is returned.
Termination jbd_step(JbdState& state, const StackedPair& pair, const JbdOptions& opts,
                     const DenseQr* qr = nullptr);

/// A finished run. Immutable.
class JbdFactorization {
public:
    explicit JbdFactorization(JbdState state) : state_(std::move(state)) {}

    const JbdState& state() const noexcept { return state_; }
    int steps() const noexcept { return state_.step; }
    Index m() const noexcept { return state_.m; }
    Index p() const noexcept { return state_.p; }
    Index n() const noexcept { return state_.n; }

    /// Leading k x k block of B_k, Bhat_k, Bbar_k = Bhat_k * diag(1, -1, ...).
    /// k = 0 means all completed steps.
    UpperBidiagonal b(int k = 0) const;
    UpperBidiagonal bhat(int k = 0) const;
    UpperBidiagonal bbar(int k = 0) const;

    Matrix u(int k = 0) const;
    Matrix uh(int k = 0) const;
    Matrix vt(int k = 0) const;  // k columns (vt_1..vt_k)
    Matrix vt_all() const;       // vt_count() columns

    /// steps + 1, or steps when the run closed on a vanishing beta.
    int vt_count() const noexcept { return state_.step + (state_.closed ? 0 : 1); }

private:
    int resolve(int k) const;
    JbdState state_;
};

/// Deterministic start vector: uniform entries in [-1, 1) from a seeded
/// 64-bit Mersenne twister.
Vector default_start_vector(Index n, std::uint64_t seed);

/// jbd_init followed by up to max_steps steps. An ExactOracle run computes
/// the dense QR unless one is supplied.
JbdFactorization jbd_run(StackedPair& pair, const JbdOptions& opts,
                         const std::optional<Vector>& start = std::nullopt,
                         const DenseQr* qr = nullptr);

}  // namespace jbd

#endif
