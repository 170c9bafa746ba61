#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "walg/parallel.hpp"
#include "walg/suites.hpp"

using namespace walg;

namespace {

// Exit codes: 0 all checks pass, 1 some check fails, 2 bad config or input.
int run(const std::string& cmd, const std::string& cfg_path, std::optional<int> J, const std::string& eta,
        const std::string& out, int jobs_n) {
    std::ifstream in(cfg_path);
    if (!in) throw WalgError(ErrorKind::ConfigError, "cannot open " + cfg_path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw WalgError(ErrorKind::ConfigError, std::string("invalid JSON: ") + e.what());
    }
    JobConfig cfg = JobConfig::from_json(j);
    if (J) cfg.J = *J;
    if (!eta.empty()) cfg.etas.push_back(parse_int_list(eta));
    cfg.seed = seed_from_env();
    set_jobs(jobs_n);

    Report rep(cmd + " " + cfg_path);
    if (cmd == "gradings" || cmd == "all") rep.merge(run_gradings(cfg));
    if (cmd == "walg" || cmd == "all") rep.merge(run_walg(cfg));
    if (cmd == "reduced" || cmd == "all") rep.merge(run_reduced(cfg));
    std::cout << rep.to_text();
    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw WalgError(ErrorKind::ConfigError, "cannot write " + out);
        os << rep.to_json().dump(2) << "\n";
    }
    return rep.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite W-algebras for gl_n over F_p: build, verify, report"};
    app.require_subcommand(1, 1);
    std::string cfg, out, eta;
    std::optional<int> J;
    int jobs_n = 1;
    for (const char* name : {"gradings", "walg", "reduced", "all"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", cfg, "JSON job config")->required();
        sub->add_option("--out", out, "write the JSON report here");
        sub->add_option("--jobs", jobs_n, "worker threads")->check(CLI::PositiveNumber);
        if (std::string(name) != "gradings") sub->add_option("-J", J, "truncation degree")->check(CLI::NonNegativeNumber);
        if (std::string(name) != "gradings" && std::string(name) != "walg")
            sub->add_option("--eta", eta, "extra eta as comma-separated v coordinates");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return run(app.get_subcommands().front()->get_name(), cfg, J, eta, out, jobs_n);
    } catch (const WalgError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
