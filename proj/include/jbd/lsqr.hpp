#ifndef JBD_LSQR_HPP
#define JBD_LSQR_HPP

#include <vector>

#include "jbd/sparse.hpp"

namespace jbd {

struct LsqrOptions {
    double tau = 1e-10;
    int max_iters = 0;           // 0 selects 4n
    double operator_norm = 0.0;  // ||C|| estimate; 0 takes the pair's cached estimate
};

struct LsqrResult {
    Vector z;
    int iterations = 0;
    double criterion = 0.0;      // ||C^T r|| / (||C|| ||r||) evaluated from the returned z
    double residual_norm = 0.0;  // ||rhs - C z||
    bool converged = false;
    std::vector<double> residual_history;  // LSQR's running ||r|| estimate, one per iteration
};

/// Solves min ||C z - rhs|| from z = 0 by LSQR. Terminates on
/// ||C^T r|| / (||C|| ||r||) <= tau, on ||r|| <= 64 eps ||rhs||, or after
/// max_iters iterations (converged = false). The stopping test is confirmed on
/// an explicitly recomputed residual before returning.
LsqrResult lsqr_solve(const StackedPair& pair, const Vector& rhs, const LsqrOptions& opts);

}  // namespace jbd

#endif
