#include <cstring>
#include <string>

#include "jbd/harness.hpp"
#include "jbd/jbdgsvd.h"

struct jbd_config {
    jbd::RunConfig cfg;
};

struct jbd_pair {
    jbd::StackedPair pair;
};

struct jbd_factorization {
    jbd::JbdFactorization fact;
};

namespace {

thread_local std::string last_error;

jbd_status map_code(jbd::ErrorCode code) {
    using jbd::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidInput: return JBD_ERR_INVALID_INPUT;
        case ErrorCode::DegenerateStart: return JBD_ERR_DEGENERATE_START;
        case ErrorCode::LuckyBreakdown: return JBD_ERR_LUCKY_BREAKDOWN;
        case ErrorCode::InnerSolverStalled: return JBD_ERR_INNER_STALLED;
        case ErrorCode::NotRegular: return JBD_ERR_NOT_REGULAR;
        case ErrorCode::DenseCapExceeded: return JBD_ERR_DENSE_CAP;
        case ErrorCode::DiagnosticsUnavailable: return JBD_ERR_DIAGNOSTICS_UNAVAILABLE;
        case ErrorCode::NumericalInconsistency: return JBD_ERR_NUMERICAL_INCONSISTENCY;
        case ErrorCode::ParseError: return JBD_ERR_PARSE;
        case ErrorCode::Unsupported: return JBD_ERR_UNSUPPORTED;
        case ErrorCode::IoError: return JBD_ERR_IO;
        case ErrorCode::NoConvergence: return JBD_ERR_NO_CONVERGENCE;
    }
    return JBD_ERR_INTERNAL;
}

jbd_status fail(jbd_status status, const std::string& msg) {
    last_error = msg;
    return status;
}

template <class F>
jbd_status guarded(F&& body) {
    try {
        body();
        return JBD_OK;
    } catch (const jbd::Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(JBD_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(JBD_ERR_INTERNAL, e.what());
    }
}

#define JBD_REQUIRE(cond, what) \
    do {                        \
        if (!(cond)) return fail(JBD_ERR_INVALID_INPUT, what); \
    } while (0)

std::vector<jbd::Index> to_index(const int64_t* v, std::size_t count) {
    return std::vector<jbd::Index>(v, v + count);
}

jbd::CsrMatrix csr_from(int64_t rows, int64_t cols, const int64_t* starts, const int64_t* idx, const double* vals) {
    if (rows < 0 || cols < 0) throw jbd::Error(jbd::ErrorCode::InvalidInput, "negative dimension");
    const int64_t nnz = starts[rows];
    if (nnz < 0) throw jbd::Error(jbd::ErrorCode::InvalidInput, "negative nonzero count");
    if (nnz > 0 && (idx == nullptr || vals == nullptr))
        throw jbd::Error(jbd::ErrorCode::InvalidInput, "null column or value array");
    return jbd::CsrMatrix(rows, cols, to_index(starts, static_cast<std::size_t>(rows) + 1),
                          to_index(idx, static_cast<std::size_t>(nnz)),
                          std::vector<double>(vals, vals + nnz));
}

}  // namespace

extern "C" {

const char* jbd_last_error(void) { return last_error.c_str(); }

const char* jbd_status_name(jbd_status status) {
    switch (status) {
        case JBD_OK: return "ok";
        case JBD_ERR_INVALID_INPUT: return "InvalidInput";
        case JBD_ERR_DEGENERATE_START: return "DegenerateStart";
        case JBD_ERR_LUCKY_BREAKDOWN: return "LuckyBreakdown";
        case JBD_ERR_INNER_STALLED: return "InnerSolverStalled";
        case JBD_ERR_NOT_REGULAR: return "NotRegular";
        case JBD_ERR_DENSE_CAP: return "DenseCapExceeded";
        case JBD_ERR_DIAGNOSTICS_UNAVAILABLE: return "DiagnosticsUnavailable";
        case JBD_ERR_NUMERICAL_INCONSISTENCY: return "NumericalInconsistency";
        case JBD_ERR_PARSE: return "ParseError";
        case JBD_ERR_UNSUPPORTED: return "Unsupported";
        case JBD_ERR_IO: return "IoError";
        case JBD_ERR_NO_CONVERGENCE: return "NoConvergence";
        case JBD_ERR_INTERNAL: return "Internal";
    }
    return "unknown";
}

jbd_status jbd_config_create(jbd_config** out) {
    JBD_REQUIRE(out != nullptr, "null output pointer");
    return guarded([&] { *out = new jbd_config{}; });
}

void jbd_config_destroy(jbd_config* cfg) { delete cfg; }

jbd_status jbd_config_set(jbd_config* cfg, const char* key, const char* value) {
    JBD_REQUIRE(cfg != nullptr && key != nullptr && value != nullptr, "null argument");
    return guarded([&] { jbd::apply_setting(cfg->cfg, key, value); });
}

jbd_status jbd_run_experiment(const jbd_config* cfg, int* exit_code, char* message, int message_capacity) {
    JBD_REQUIRE(cfg != nullptr && exit_code != nullptr, "null argument");
    return guarded([&] {
        const jbd::ExperimentResult r = jbd::run_experiment(cfg->cfg);
        *exit_code = r.exit_code;
        if (r.exit_code != 0) last_error = r.message;
        if (message != nullptr && message_capacity > 0) {
            const std::size_t len = std::min<std::size_t>(r.message.size(), static_cast<std::size_t>(message_capacity - 1));
            std::memcpy(message, r.message.data(), len);
            message[len] = '\0';
        }
    });
}

jbd_status jbd_pair_from_csr(int64_t m, int64_t p, int64_t n, const int64_t* a_row_starts, const int64_t* a_cols,
                             const double* a_vals, const int64_t* l_row_starts, const int64_t* l_cols,
                             const double* l_vals, jbd_pair** out) {
    JBD_REQUIRE(out != nullptr && a_row_starts != nullptr && l_row_starts != nullptr, "null argument");
    return guarded([&] {
        *out = new jbd_pair{jbd::StackedPair(csr_from(m, n, a_row_starts, a_cols, a_vals),
                                             csr_from(p, n, l_row_starts, l_cols, l_vals))};
    });
}

jbd_status jbd_pair_read(const char* a_path, const char* l_path, jbd_pair** out) {
    JBD_REQUIRE(out != nullptr && a_path != nullptr && l_path != nullptr, "null argument");
    return guarded([&] {
        jbd::RunConfig cfg;
        cfg.a_path = a_path;
        cfg.l_source = l_path;
        *out = new jbd_pair{jbd::load_pair(cfg).pair};
    });
}

jbd_status jbd_pair_generate(const char* generator, jbd_pair** out) {
    JBD_REQUIRE(out != nullptr && generator != nullptr, "null argument");
    return guarded([&] {
        jbd::RunConfig cfg;
        cfg.generator = generator;
        *out = new jbd_pair{jbd::load_pair(cfg).pair};
    });
}

jbd_status jbd_pair_dims(const jbd_pair* pair, int64_t* m, int64_t* p, int64_t* n) {
    JBD_REQUIRE(pair != nullptr, "null pair");
    if (m) *m = pair->pair.m();
    if (p) *p = pair->pair.p();
    if (n) *n = pair->pair.n();
    return JBD_OK;
}

void jbd_pair_destroy(jbd_pair* pair) { delete pair; }

jbd_status jbd_run(jbd_pair* pair, const jbd_config* cfg, jbd_factorization** out) {
    JBD_REQUIRE(pair != nullptr && out != nullptr, "null argument");
    return guarded([&] {
        const jbd::RunConfig rc = cfg ? cfg->cfg : jbd::RunConfig{};
        jbd::JbdOptions opts;
        opts.max_steps = rc.steps;
        opts.tau = rc.tau;
        opts.reorth = rc.reorth;
        opts.inner = rc.inner;
        opts.seed = rc.seed;
        opts.dense_cap = rc.dense_cap;
        *out = new jbd_factorization{jbd::jbd_run(pair->pair, opts)};
    });
}

void jbd_fact_destroy(jbd_factorization* fact) { delete fact; }

jbd_status jbd_fact_steps(const jbd_factorization* fact, int* steps) {
    JBD_REQUIRE(fact != nullptr && steps != nullptr, "null argument");
    *steps = fact->fact.steps();
    return JBD_OK;
}

jbd_status jbd_fact_termination(const jbd_factorization* fact, jbd_status* kind) {
    JBD_REQUIRE(fact != nullptr && kind != nullptr, "null argument");
    switch (fact->fact.state().terminated.kind) {
        case jbd::Termination::None: *kind = JBD_OK; break;
        case jbd::Termination::LuckyBreakdown: *kind = JBD_ERR_LUCKY_BREAKDOWN; break;
        case jbd::Termination::InnerSolverStalled: *kind = JBD_ERR_INNER_STALLED; break;
    }
    return JBD_OK;
}

jbd_status jbd_fact_bidiagonal(const jbd_factorization* fact, int which, double* diag, double* superdiag) {
    JBD_REQUIRE(fact != nullptr && diag != nullptr, "null argument");
    JBD_REQUIRE(which == 0 || which == 1, "which must be 0 or 1");
    return guarded([&] {
        const jbd::UpperBidiagonal b = which == 0 ? fact->fact.b() : fact->fact.bhat();
        std::copy(b.diag.begin(), b.diag.end(), diag);
        if (!b.superdiag.empty()) {
            if (superdiag == nullptr) throw jbd::Error(jbd::ErrorCode::InvalidInput, "null superdiagonal buffer");
            std::copy(b.superdiag.begin(), b.superdiag.end(), superdiag);
        }
    });
}

jbd_status jbd_fact_values(const jbd_factorization* fact, int count, int largest, int from_bhat, double* c,
                           double* s) {
    JBD_REQUIRE(fact != nullptr && c != nullptr && s != nullptr, "null argument");
    return guarded([&] {
        jbd::ExtractionOptions eo;
        eo.count = count;
        eo.side = largest ? jbd::Side::Largest : jbd::Side::Smallest;
        eo.source = from_bhat ? jbd::ValueSource::FromBhat : jbd::ValueSource::FromB;
        const auto est = jbd::extract_values(fact->fact, eo);
        for (std::size_t i = 0; i < est.size(); ++i) {
            c[i] = est[i].c;
            s[i] = est[i].s;
        }
    });
}

}  // extern "C"
