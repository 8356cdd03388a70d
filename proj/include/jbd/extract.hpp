#ifndef JBD_EXTRACT_HPP
#define JBD_EXTRACT_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jbd/jbd.hpp"

namespace jbd {

enum class Side { Largest, Smallest };
enum class ValueSource { FromB, FromBhat };

struct ExtractionOptions {
    int count = 1;
    Side side = Side::Largest;
    ValueSource source = ValueSource::FromB;
    double tau_bar = 1e-10;
    /// Values above 1 + consistency_slack carry a NumericalInconsistency
    /// warning. Callers typically pass 5 kappa tau.
    double consistency_slack = 0.0;

    void validate(int steps) const;
};

/// An approximate generalized singular triple.
struct GsvdEstimate {
    int index = 0;  // 1-based position counted from the requested side
    double c = 0.0;
    double s = 0.0;
    double gap = 0.0;     // distance to the nearest other Ritz value
    bool clipped = false;  // c or s came out above 1 and was clipped
    std::string warning;
    Vector y;                    // Ritz vector in the coordinates of vt_1..vt_k
    std::optional<Vector> x;     // right vector, once extracted
    int x_iterations = 0;
    double residual = 0.0;       // gsvd_residual, once x is known
    std::vector<std::pair<int, double>> history;  // (k', c at step k')
};

/// Ritz values of B_k (or Bhat_k) mapped to (c, s) pairs.
std::vector<GsvdEstimate> extract_values(const JbdFactorization& fact, const ExtractionOptions& opts);

/// Solves C x = Vt_k y for each estimate by LSQR at tau_bar. An estimate whose
/// solve stalls keeps x empty.
void extract_right_vectors(const JbdFactorization& fact, const StackedPair& pair,
                           std::vector<GsvdEstimate>& estimates, double tau_bar);

/// ||s^2 A^T A x - c^2 L^T L x|| / (||C||^2 ||x||). Zero for an exact triple.
double gsvd_residual(const StackedPair& pair, const GsvdEstimate& est);

/// c values of the requested Ritz indices at every leading block k' = 1..k.
/// Entries are NaN while k' is smaller than the index.
struct RitzHistory {
    std::vector<int> indices;
    std::vector<std::vector<double>> c;  // c[k'-1][j] for indices[j]
};

RitzHistory track_convergence(const JbdFactorization& fact, const std::vector<int>& indices, Side side,
                              ValueSource source = ValueSource::FromB);

/// First step k0 (1-based) after which the series has changed by less than
/// tau / 10 over `window` consecutive steps, or -1.
int stagnation_step(const std::vector<double>& series, double tau, int window = 5);

}  // namespace jbd

#endif
