// Command-line front end: verify | solve | rcd <config.json>.
#include "conecert/commands.hpp"

#include "CLI11.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Cone fixed-point hypothesis checker and multi-start solver"};
    app.require_subcommand(1);

    conecert::CommandOptions opts;
    std::string config;
    std::size_t oracle_n = 0;
    std::size_t grid_n = 0;
    std::string out_dir;
    std::string seed_list;

    auto common = [&](CLI::App* sub) {
        sub->add_option("config", config, "JSON config file")->required();
        sub->add_option("--oracle-n", oracle_n, "grid oracle lattice size per axis")->check(CLI::Range(2, 100000));
        sub->add_option("--grid-n", grid_n, "number of quadrature nodes")->check(CLI::Range(3, 100000));
        sub->add_option("--out", out_dir, "directory for report.json and CSV files");
        sub->add_flag("--timings", opts.timings, "record wall-clock timings in the report");
    };
    CLI::App* verify = app.add_subcommand("verify", "certify the theorem's hypotheses");
    CLI::App* solve = app.add_subcommand("solve", "locate fixed points by multi-start Newton");
    CLI::App* rcd = app.add_subcommand("rcd", "closed-form parameter checks for the rcd system");
    for (CLI::App* sub : {verify, solve, rcd}) {
        common(sub);
    }
    solve->add_option("--seed-list", seed_list, "comma-separated seed ids to run, e.g. S:S,B:M");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : conecert::exit_config_error;
    }

    if (oracle_n != 0) {
        opts.oracle_n = oracle_n;
    }
    if (grid_n != 0) {
        opts.grid_n = grid_n;
    }
    if (!out_dir.empty()) {
        opts.out_dir = out_dir;
    }
    for (const auto& id : CLI::detail::split(seed_list, ',')) {
        if (!id.empty()) {
            opts.seed_list.push_back(CLI::detail::trim_copy(id));
        }
    }

    conecert::CommandResult r;
    if (verify->parsed()) {
        r = conecert::cmd_verify(config, opts);
    } else if (solve->parsed()) {
        r = conecert::cmd_solve(config, opts);
    } else {
        r = conecert::cmd_rcd(config, opts);
    }
    std::cerr << r.message << "\n";
    return r.exit_code;
}
