#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jbd/harness.hpp"

namespace jbd {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream is(s);
    while (std::getline(is, part, sep)) out.push_back(part);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(d))
        throw Error(ErrorCode::InvalidInput, key + ": expected a number, got '" + v + "'");
    return d;
}

long long to_int(const std::string& key, const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const long long d = std::strtoll(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0' || errno == ERANGE)
        throw Error(ErrorCode::InvalidInput, key + ": expected an integer, got '" + v + "'");
    return d;
}

std::uint64_t to_seed(const std::string& v) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long d = std::strtoull(v.c_str(), &end, 10);
    if (v.empty() || v[0] == '-' || *end != '\0' || errno == ERANGE)
        throw Error(ErrorCode::InvalidInput, "seed: expected a nonnegative integer, got '" + v + "'");
    return d;
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::None: return "none";
        case Termination::LuckyBreakdown: return "LuckyBreakdown";
        case Termination::InnerSolverStalled: return "InnerSolverStalled";
    }
    return "unknown";
}

void write_text(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << body;
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace

void RunConfig::validate() const {
    if (a_path.empty() == generator.empty())
        throw Error(ErrorCode::InvalidInput, "give exactly one of a matrix file or a generator");
    if (!a_path.empty() && l_source.empty()) throw Error(ErrorCode::InvalidInput, "a matrix file needs an L source");
    if (!generator.empty() && !l_source.empty())
        throw Error(ErrorCode::InvalidInput, "generators build their own L; drop the L source");
    if (steps < 1) throw Error(ErrorCode::InvalidInput, "steps must be >= 1");
    if (!(tau > 0.0)) throw Error(ErrorCode::InvalidInput, "tau must be positive");
    if (tau_bar < 0.0) throw Error(ErrorCode::InvalidInput, "tau-bar must be positive");
    if (extract_count < 0) throw Error(ErrorCode::InvalidInput, "extract count must be >= 0");
    if (dense_cap < 0) throw Error(ErrorCode::InvalidInput, "dense-cap must be >= 0");
    if (kappa && !(*kappa >= 1.0)) throw Error(ErrorCode::InvalidInput, "kappa must be >= 1");
    if (out_dir.empty()) throw Error(ErrorCode::InvalidInput, "output directory must not be empty");
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "a") cfg.a_path = value;
    else if (key == "gen") cfg.generator = value;
    else if (key == "l") cfg.l_source = value;
    else if (key == "steps") cfg.steps = static_cast<int>(to_int(key, value));
    else if (key == "tau") cfg.tau = to_double(key, value);
    else if (key == "tau-bar") cfg.tau_bar = to_double(key, value);
    else if (key == "reorth") {
        if (value == "none") cfg.reorth = Reorth::None;
        else if (value == "cgs") cfg.reorth = Reorth::Classical;
        else if (value == "mgs") cfg.reorth = Reorth::Modified;
        else throw Error(ErrorCode::InvalidInput, "reorth must be none, cgs or mgs");
    } else if (key == "inner") {
        if (value == "lsqr") cfg.inner = InnerMode::Lsqr;
        else if (value == "exact") cfg.inner = InnerMode::ExactOracle;
        else throw Error(ErrorCode::InvalidInput, "inner must be lsqr or exact");
    } else if (key == "extract") {
        const std::vector<std::string> parts = split_on(value, ':');
        if (parts.size() != 3) throw Error(ErrorCode::InvalidInput, "extract must look like COUNT:largest|smallest:b|bhat");
        cfg.extract_count = static_cast<int>(to_int(key, parts[0]));
        if (parts[1] == "largest") cfg.side = Side::Largest;
        else if (parts[1] == "smallest") cfg.side = Side::Smallest;
        else throw Error(ErrorCode::InvalidInput, "extract side must be largest or smallest");
        if (parts[2] == "b") cfg.source = ValueSource::FromB;
        else if (parts[2] == "bhat") cfg.source = ValueSource::FromBhat;
        else throw Error(ErrorCode::InvalidInput, "extract source must be b or bhat");
    } else if (key == "seed") cfg.seed = to_seed(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "dense-cap") cfg.dense_cap = static_cast<Index>(to_int(key, value));
    else if (key == "kappa") cfg.kappa = to_double(key, value);
    else if (key == "diag") {
        if (value == "off") cfg.diag = DiagLevel::Off;
        else if (value == "basic") cfg.diag = DiagLevel::Basic;
        else if (value == "full") cfg.diag = DiagLevel::Full;
        else throw Error(ErrorCode::InvalidInput, "diag must be off, basic or full");
    } else {
        throw Error(ErrorCode::InvalidInput, "unknown setting '" + key + "'");
    }
}

GeneratedPair load_pair(const RunConfig& cfg) {
    if (!cfg.generator.empty()) {
        const auto colon = cfg.generator.find(':');
        const std::string name = cfg.generator.substr(0, colon);
        const std::vector<std::string> args =
            colon == std::string::npos ? std::vector<std::string>{} : split_on(cfg.generator.substr(colon + 1), ',');
        if (name == "a1l1") {
            if (args.size() != 2) throw Error(ErrorCode::InvalidInput, "a1l1 takes N,KAPPA");
            return gen_a1l1(to_int("a1l1 n", args[0]), to_double("a1l1 kappa", args[1]));
        }
        if (name == "a2l2") {
            if (args.size() != 1) throw Error(ErrorCode::InvalidInput, "a2l2 takes N");
            return gen_a2l2(to_int("a2l2 n", args[0]));
        }
        if (name == "random") {
            if (args.size() != 3 && args.size() != 4) throw Error(ErrorCode::InvalidInput, "random takes M,P,N[,SEED]");
            const std::uint64_t seed = args.size() == 4 ? to_seed(args[3]) : cfg.seed;
            return {gen_random_pair(to_int("m", args[0]), to_int("p", args[1]), to_int("n", args[2]), seed), {}, {}, 0.0};
        }
        throw Error(ErrorCode::InvalidInput, "unknown generator '" + name + "'");
    }
    CsrMatrix a = read_matrix_market(cfg.a_path);
    CsrMatrix l;
    if (cfg.l_source.rfind("l1d", 0) == 0) {
        double scale = 1.0;
        if (cfg.l_source.size() > 3) {
            if (cfg.l_source[3] != ':') throw Error(ErrorCode::InvalidInput, "L source must be a path or l1d[:SCALE]");
            scale = to_double("l1d scale", cfg.l_source.substr(4));
        }
        l = gen_l1d(a.cols()).scaled(scale);
    } else {
        l = read_matrix_market(cfg.l_source);
    }
    return {StackedPair(std::move(a), std::move(l)), {}, {}, 0.0};
}

ExperimentResult run_experiment(const RunConfig& cfg) {
    ExperimentResult result;
    try {
        cfg.validate();
        GeneratedPair gp = load_pair(cfg);
        StackedPair& pair = gp.pair;
        estimate_two_norm(pair);

        const Index cap = cfg.dense_cap > 0 ? cfg.dense_cap : default_dense_cap();
        const bool dense_ok = pair.stacked_rows() <= cap;
        std::optional<DenseQr> qr;
        std::string notes;
        if (cfg.inner == InnerMode::ExactOracle || cfg.diag == DiagLevel::Full) {
            if (dense_ok) {
                qr = dense_qr(pair, cap);
            } else if (cfg.inner == InnerMode::ExactOracle) {
                throw Error(ErrorCode::DenseCapExceeded, "exact inner solves need m + p <= " + std::to_string(cap));
            } else {
                notes += "note: dense oracle skipped (m + p exceeds the dense cap); norm_g unavailable\n";
            }
        }
        double kappa = std::numeric_limits<double>::quiet_NaN();
        if (cfg.kappa) kappa = *cfg.kappa;
        else if (dense_ok) kappa = cond_number(pair, cap);

        JbdOptions opts;
        opts.max_steps = cfg.steps;
        opts.tau = cfg.tau;
        opts.reorth = cfg.reorth;
        opts.inner = cfg.inner;
        opts.seed = cfg.seed;
        opts.dense_cap = cap;
        opts.retain_inner_solutions = cfg.diag == DiagLevel::Full && qr.has_value();
        const JbdFactorization fact = jbd_run(pair, opts, std::nullopt, qr ? &*qr : nullptr);
        const TerminationInfo& term = fact.state().terminated;
        result.steps = fact.steps();

        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path dir(cfg.out_dir);

        const RunReport rep = build_report(fact, qr ? &*qr : nullptr, cfg.diag, kappa, cfg.tau);
        std::ostringstream diag;
        diag << kDiagnosticsHeader << '\n';
        for (const StepDiagnostics& d : rep.steps) {
            diag << d.step << ',' << format_number(d.alpha) << ',' << format_number(d.beta) << ','
                 << format_number(d.hat_alpha) << ',' << format_number(d.hat_beta) << ',' << format_number(d.orth_v)
                 << ',' << format_number(d.orth_u) << ',' << format_number(d.orth_uhat) << ','
                 << format_number(d.norm_g) << ',' << format_number(d.theta) << ',' << d.inner_iters << ','
                 << format_number(d.criterion) << '\n';
        }
        write_text(dir / "diagnostics.csv", diag.str());

        std::ostringstream est_csv;
        est_csv << "index,c,s,gap,clipped,residual,x_iterations,true_c_error\n";
        std::vector<GsvdEstimate> estimates;
        const int count = std::min(cfg.extract_count, fact.steps());
        if (count > 0) {
            ExtractionOptions eo;
            eo.count = count;
            eo.side = cfg.side;
            eo.source = cfg.source;
            eo.tau_bar = cfg.tau_bar > 0.0 ? cfg.tau_bar : cfg.tau;
            eo.consistency_slack = std::isnan(kappa) ? 0.0 : 5.0 * kappa * cfg.tau;
            estimates = extract_values(fact, eo);
            extract_right_vectors(fact, pair, estimates, eo.tau_bar);
            for (const GsvdEstimate& e : estimates) {
                double err = std::numeric_limits<double>::quiet_NaN();
                if (!gp.c.empty()) {
                    const std::size_t pos = cfg.side == Side::Largest ? e.index - 1 : gp.c.size() - e.index;
                    err = std::abs(e.c - gp.c[pos]);
                }
                est_csv << e.index << ',' << format_number(e.c) << ',' << format_number(e.s) << ','
                        << format_number(e.gap) << ',' << (e.clipped ? 1 : 0) << ','
                        << format_number(e.x ? e.residual : std::numeric_limits<double>::quiet_NaN()) << ','
                        << e.x_iterations << ',' << format_number(err) << '\n';
            }
        }
        write_text(dir / "estimates.csv", est_csv.str());

        std::ostringstream report;
        report << "m: " << pair.m() << "\np: " << pair.p() << "\nn: " << pair.n() << '\n';
        report << "norm_estimate: " << format_number(*pair.norm_estimate()) << '\n';
        report << "steps_requested: " << cfg.steps << "\nsteps_completed: " << fact.steps() << '\n';
        report << "termination: " << termination_name(term.kind);
        if (term.kind != Termination::None) report << " at step " << term.step << " (" << term.detail << ")";
        report << '\n';
        report << "kappa: " << format_number(kappa) << "\ntau: " << format_number(cfg.tau) << '\n';
        report << "bound_3_kappa_tau: " << format_number(rep.g_bound) << '\n';
        report << "bound_kappa_tau_over_sigma_min_bhat: " << format_number(rep.ghat_bound) << '\n';
        report << "h_diag_norm: " << format_number(rep.h_diag_norm) << '\n';
        report << "h_offdiag_norm: " << format_number(rep.h_offdiag_norm) << '\n';
        report << "max_theta: " << format_number(rep.max_theta) << '\n';
        report << "ghat_proxy: " << format_number(rep.ghat) << '\n';
        report << "max_column_defect: " << format_number(rep.max_column_defect) << '\n';
        for (const GsvdEstimate& e : estimates) {
            report << "estimate " << e.index << ": c=" << format_number(e.c) << " s=" << format_number(e.s);
            if (!e.warning.empty()) report << " warning=" << e.warning;
            if (!e.x) report << " x=unavailable";
            report << '\n';
        }
        report << notes;
        write_text(dir / "report.txt", report.str());

        if (term.kind != Termination::None) {
            result.exit_code = 2;
            result.message = std::string(termination_name(term.kind)) + " at step " + std::to_string(term.step) +
                             "; partial results written";
        } else {
            result.exit_code = 0;
            result.message = "completed " + std::to_string(fact.steps()) + " steps";
        }
    } catch (const Error& e) {
        result.exit_code = 1;
        result.message = std::string(to_string(e.code())) + ": " + e.what();
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.message = e.what();
    }
    return result;
}

}  // namespace jbd
