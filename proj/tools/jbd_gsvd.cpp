// Command line front end. Everything goes through the C interface.
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "jbd/jbdgsvd.h"

int main(int argc, char** argv) {
    CLI::App app{"Partial GSVD of a sparse matrix pair by joint bidiagonalization"};
    app.set_config("--config", "", "key=value file; command line flags take precedence");
    // generator specs contain commas; never read a value as a list
    app.get_config_formatter_base()->arrayDelimiter('\x1f');

    // (key, storage) for every forwarded setting
    std::vector<std::pair<std::string, std::string>> settings = {
        {"a", ""},     {"gen", ""},   {"l", ""},         {"steps", ""}, {"tau", ""},
        {"tau-bar", ""}, {"reorth", ""}, {"inner", ""},   {"extract", ""}, {"seed", ""},
        {"out", ""},   {"dense-cap", ""}, {"kappa", ""}, {"diag", ""},
    };
    const char* help[] = {
        "Matrix Market file for A",
        "generator: a1l1:N,KAPPA | a2l2:N | random:M,P,N[,SEED]",
        "Matrix Market file for L, or l1d[:SCALE]",
        "number of outer steps k",
        "inner stopping tolerance",
        "tolerance for the right-vector solves (default tau)",
        "none | cgs | mgs",
        "lsqr | exact",
        "COUNT:largest|smallest:b|bhat",
        "start vector seed",
        "output directory",
        "dense oracle limit on m + p",
        "condition number used for the bound lines",
        "off | basic | full",
    };
    std::vector<CLI::Option*> opts;
    for (std::size_t i = 0; i < settings.size(); ++i)
        opts.push_back(app.add_option("--" + settings[i].first, settings[i].second, help[i]));
    opts[0]->excludes(opts[1]);
    opts[6]->check(CLI::IsMember({"none", "cgs", "mgs"}));
    opts[7]->check(CLI::IsMember({"lsqr", "exact"}));
    opts[13]->check(CLI::IsMember({"off", "basic", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // usage errors share exit code 1 with every other failure
        return app.exit(e) == 0 ? 0 : 1;
    }

    jbd_config* cfg = nullptr;
    if (jbd_config_create(&cfg) != JBD_OK) {
        std::fprintf(stderr, "error: %s\n", jbd_last_error());
        return 1;
    }
    for (std::size_t i = 0; i < settings.size(); ++i) {
        if (opts[i]->count() == 0) continue;
        if (jbd_config_set(cfg, settings[i].first.c_str(), settings[i].second.c_str()) != JBD_OK) {
            std::fprintf(stderr, "error: --%s: %s\n", settings[i].first.c_str(), jbd_last_error());
            jbd_config_destroy(cfg);
            return 1;
        }
    }

    int exit_code = 1;
    char message[512];
    const jbd_status st = jbd_run_experiment(cfg, &exit_code, message, sizeof message);
    jbd_config_destroy(cfg);
    if (st != JBD_OK) {
        std::fprintf(stderr, "error: %s\n", jbd_last_error());
        return 1;
    }
    std::fprintf(exit_code == 0 ? stdout : stderr, "%s\n", message);
    return exit_code;
}
