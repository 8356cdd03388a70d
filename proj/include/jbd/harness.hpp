#ifndef JBD_HARNESS_HPP
#define JBD_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "jbd/diagnostics.hpp"
#include "jbd/extract.hpp"

namespace jbd {

// Matrix Market

/// Coordinate or array format; real, integer or pattern fields; general,
/// symmetric or skew-symmetric. Throws ParseError with the offending line.
CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::string& path);

/// Coordinate real general, values printed with 17 significant digits.
void write_matrix_market(std::ostream& out, const CsrMatrix& m);
void write_matrix_market(const std::string& path, const CsrMatrix& m);

// Generators

/// A test pair together with its known GSVD data.
struct GeneratedPair {
    StackedPair pair;
    std::vector<double> c;   // descending
    std::optional<Matrix> x; // right generalized singular vectors, column i for c[i]
    double kappa = 0.0;      // exact condition number of the stack
};

/// A = diag(c) D, L = diag(s) D with c_i = (n-i+1)/(2n) and D equispaced 1..kappa.
GeneratedPair gen_a1l1(Index n, double kappa);

/// A = C_A W^T D, L = S_L W^T D with the sine transform W and D equispaced 1..10.
GeneratedPair gen_a2l2(Index n);

/// (n-1) x n first difference: row i has 1 in column i and -1 in column i+1.
CsrMatrix gen_l1d(Index n);

/// Dense pair with uniform [-1, 1) entries.
StackedPair gen_random_pair(Index m, Index p, Index n, std::uint64_t seed);

/// Uniform [-1, 1) matrix from a seeded 64-bit Mersenne twister.
Matrix uniform_matrix(Index rows, Index cols, std::uint64_t seed);

// Experiments

struct RunConfig {
    std::string a_path;
    std::string generator;  // a1l1:N,KAPPA | a2l2:N | random:M,P,N[,SEED]
    std::string l_source;   // path or l1d[:SCALE]; needed with a_path
    int steps = 20;
    double tau = 1e-10;
    double tau_bar = 0.0;  // 0 selects tau
    Reorth reorth = Reorth::Modified;
    InnerMode inner = InnerMode::Lsqr;
    std::uint64_t seed = 2022;
    int extract_count = 0;  // 0 skips extraction
    Side side = Side::Largest;
    ValueSource source = ValueSource::FromB;
    std::string out_dir = ".";
    Index dense_cap = 0;
    std::optional<double> kappa;
    DiagLevel diag = DiagLevel::Basic;

    void validate() const;
};

/// Sets one field from its textual form. Keys match the long CLI flags
/// without dashes (a, gen, l, steps, tau, tau-bar, reorth, inner, extract,
/// seed, out, dense-cap, kappa, diag).
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Builds the pair a configuration refers to. Generated pairs also return
/// their ground truth.
GeneratedPair load_pair(const RunConfig& cfg);

struct ExperimentResult {
    int exit_code = 0;  // 0 success, 2 breakdown or stall with partial output, 1 error
    std::string message;
    int steps = 0;
};

inline constexpr const char* kDiagnosticsHeader =
    "step,alpha,beta,hat_alpha,hat_beta,orth_v,orth_u,orth_uhat,norm_g,theta,inner_iters,criterion";

/// Runs the process and writes diagnostics.csv, estimates.csv and report.txt
/// into cfg.out_dir. Never throws.
ExperimentResult run_experiment(const RunConfig& cfg);

/// %.17g, with "nan" for NaN.
std::string format_number(double v);

}  // namespace jbd

#endif
