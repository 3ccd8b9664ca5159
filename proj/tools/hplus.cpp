#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "hplus/errors.hpp"
#include "hplus/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"l-parts of the class number of real cyclotomic fields of conductor pq"};
    hplus::RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "key = value file; flags override it")->check(CLI::ExistingFile);
    app.add_option("--p", cfg.p, "smaller prime");
    app.add_option("--q", cfg.q, "larger prime");
    app.add_option("--l-bound", cfg.l_bound, "test odd primes below this bound");
    app.add_option("--l", cfg.only_l, "only these primes")->delimiter(',');
    app.add_option("--m-cap", cfg.m_cap, "largest power of l");
    app.add_option("--prime-budget", cfg.prime_budget, "Frobenius primes per ideal");
    app.add_option("--window", cfg.stabilization_window, "unchanged additions declaring stability");
    app.add_option("--r-start", cfg.r_start, "start of the split prime search");
    app.add_option("--r-cap", cfg.r_cap, "end of the split prime search");
    app.add_option("--precision-cap", cfg.precision_cap, "largest precision in decimal digits");
    app.add_option("--threads", cfg.threads, "worker threads, 0 for all cores");
    app.add_option("--cache", cfg.cache_path, "Frobenius record cache");
    app.add_option("--out", cfg.out_path, "write the report here instead of stdout");
    app.add_option("--format", cfg.format, "json, csv or table")->check(CLI::IsMember({"json", "csv", "table"}));

    // first pass for the config file, second pass so flags override it
    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            std::stringstream ss;
            ss << in.rdbuf();
            cfg = hplus::RunConfig::from_text(ss.str(), cfg);
            app.parse(argc, argv);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const hplus::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }

    try {
        const hplus::Report rep = hplus::run(cfg);
        const std::string text = cfg.format == "json" ? rep.to_json() : cfg.format == "csv" ? rep.to_csv() : rep.to_table();
        if (cfg.out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(cfg.out_path);
            if (!out) throw hplus::InvalidArgument("cannot write " + cfg.out_path);
            out << text;
        }
        return rep.all_resolved() ? 0 : 2;
    } catch (const hplus::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
}
