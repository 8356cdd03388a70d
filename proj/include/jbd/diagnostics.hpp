#ifndef JBD_DIAGNOSTICS_HPP
#define JBD_DIAGNOSTICS_HPP

#include <vector>

#include "jbd/jbd.hpp"

namespace jbd {

/// ||P_Q u~_i - C zbar_i|| for step i (1-based). Needs the run to have kept
/// its inner images; throws DiagnosticsUnavailable otherwise.
double measure_g(const JbdState& state, const DenseQr& qr, int i);

/// g~_1 .. g~_k.
std::vector<Vector> g_vectors(const JbdState& state, const DenseQr& qr);

/// ||I - M^T M||_2.
double orthogonality_level(const Eigen::Ref<const Matrix>& m);

struct HDeviation {
    Matrix h;  // B^T B + Bbar^T Bbar - I
    double diag_norm = 0.0;
    double offdiag_norm = 0.0;
};

HDeviation compute_H(const JbdFactorization& fact, int k = 0);

/// theta_i = (hat_beta_i / hat_alpha_i)(1 + theta_{i-1}), theta_0 = 0.
std::vector<double> theta_sequence(const std::vector<double>& hat_alphas, const std::vector<double>& hat_betas,
                                   double breakdown_tol = 0.0);
std::vector<double> theta_sequence(const JbdFactorization& fact);

/// Predicted Gram entries mu(j,i) = u_j^T u_i and nu(j,i) = vt_j^T vt_i from
/// the loss-of-orthogonality recurrences driven by the inner errors g~.
/// mu is k x k and nu is (k+1) x (k+1), both symmetric. A closed run (see
/// JbdState::closed) is predicted through step k-1.
struct OrthogonalityPrediction {
    Matrix mu;
    Matrix nu;
};

OrthogonalityPrediction predict_orthogonality(const JbdFactorization& fact, const std::vector<Vector>& g);

/// Norm of the column defect f_{l+1}: the Householder chain built from
/// u_1..u_{l+1} applied to (beta_l e_l; alpha_{l+1} e_{l+1}), minus
/// (0_n; Q_A v_{l+1}). 1 <= l <= k-1.
double column_defect_norm(const JbdFactorization& fact, const DenseQr& qr, int l);

/// ||(Q_L vhat_{k+1})^T Uh_k - hat_beta_k e_k^T|| with
/// vhat_{k+1} = (-1)^k Q^T vt_{k+1}. Needs vt_{k+1}, so k < vt_count().
double ghat_proxy(const JbdFactorization& fact, const DenseQr& qr, int k = 0);

enum class DiagLevel { Off, Basic, Full };

struct StepDiagnostics {
    int step = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double hat_alpha = 0.0;
    double hat_beta = 0.0;
    double orth_v = 0.0;  // NaN when not computed
    double orth_u = 0.0;
    double orth_uhat = 0.0;
    double norm_g = 0.0;
    double theta = 0.0;
    int inner_iters = 0;
    double criterion = 0.0;
};

struct RunReport {
    std::vector<StepDiagnostics> steps;
    double kappa = 0.0;  // NaN when unknown
    double tau = 0.0;
    double g_bound = 0.0;       // 3 kappa tau
    double ghat_bound = 0.0;    // kappa tau / sigma_min(Bhat_k)
    double h_diag_norm = 0.0;
    double h_offdiag_norm = 0.0;
    double max_theta = 0.0;
    double ghat = 0.0;          // NaN without a dense QR
    double max_column_defect = 0.0;   // NaN without a dense QR
};

/// Per-step table and summary lines. Off fills only the recurrence scalars,
/// Basic adds the orthogonality levels, Full adds the quantities that need
/// the dense QR (norm_g, the column defects and the Ghat proxy).
RunReport build_report(const JbdFactorization& fact, const DenseQr* qr, DiagLevel level, double kappa,
                       double tau);

}  // namespace jbd

#endif
