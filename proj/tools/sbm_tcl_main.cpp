// sbm-tcl — steady states and TCL2 dynamics for the spin-boson model.

#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sbmtcl/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Second-order spin-boson steady states (TCL route vs mean-force route) and "
                 "TCL2 dynamics"};
    app.set_version_flag("--version", std::string(sbmtcl::cli::kVersion));
    app.require_subcommand(1);

    std::string config_path, out_path;
    double rel_tol = -1.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out_path, "output path (overrides [output] path)");
        sub->add_option("--rel-tol", rel_tol, "quadrature relative tolerance override");
    };

    auto* steady = app.add_subcommand("steady", "write the two-route steady-state report (JSON)");
    auto* dynamics = app.add_subcommand("dynamics", "integrate the Bloch equation (CSV)");
    auto* sweep = app.add_subcommand("sweep", "both-route corrections over a parameter grid (CSV)");
    add_common(steady);
    add_common(dynamics);
    add_common(sweep);

    CLI11_PARSE(app, argc, argv);

    const std::string cmd = app.get_subcommands().front()->get_name();
    std::optional<double> rel = rel_tol > 0 ? std::optional<double>(rel_tol) : std::nullopt;
    return sbmtcl::cli::run_command(cmd, config_path, out_path, rel);
}
