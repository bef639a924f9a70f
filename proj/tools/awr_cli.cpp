#include "awr/config.hpp"
#include "awr/error.hpp"
#include "awr/run.hpp"
#include "awr/snapshot.hpp"
#include "awr/verify.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>

namespace {

int inspect(const std::string& path) {
    const awr::Snapshot s = awr::read_snapshot(path);
    const awr::Field& f = s.field;
    const awr::Torus& t = f.torus();
    std::cout << "snapshot   " << path << "\n"
              << "version    " << awr::kSnapshotVersion << "\n"
              << "dim        " << t.dim() << "\n"
              << "N          ";
    for (int a = 0; a < t.dim(); ++a) std::cout << (a ? " x " : "") << t.size(a);
    std::cout << "\nL          ";
    for (int a = 0; a < t.dim(); ++a) std::cout << (a ? " x " : "") << t.length(a);
    std::cout << "\ncomponents " << f.components() << "\n"
              << "time       " << std::setprecision(17) << s.time << std::setprecision(6) << "\n";
    for (int c = 0; c < f.components(); ++c) {
        const awr::Field comp = f.component_field(c);
        std::cout << "component " << c << ": min " << comp.min() << "  max " << comp.max() << "  mean "
                  << awr::mean(comp) << "  integral " << awr::integral(comp) << "\n"
                  << "  sup " << comp.sup_norm() << "  H0 " << awr::sobolev_norm(comp, 0) << "  H1 "
                  << awr::sobolev_norm(comp, 1) << "  H2 " << awr::sobolev_norm(comp, 2) << "  H3 "
                  << awr::sobolev_norm(comp, 3) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verified solver for the dissipative Aw-Rascle system on the periodic torus"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "March a configuration and write diagnostics");
    run->add_option("config", config_path, "Config file")->required();

    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run a verification suite");
    verify->add_option("suite", suite, "transport, parabolic, poisson, contraction, mms or all")
        ->required()
        ->check(CLI::IsMember({"transport", "parabolic", "poisson", "contraction", "mms", "all"}));

    std::string snapshot_path;
    auto* insp = app.add_subcommand("inspect", "Print a snapshot header and norms");
    insp->add_option("snapshot", snapshot_path, "Snapshot file")->required()->check(CLI::ExistingFile);

    std::string heat_in, heat_out;
    int axis = 0, index = 0, component = 0;
    auto* heat = app.add_subcommand("export-heatmap", "Write a PGM heatmap of a 2D field or a 3D slice");
    heat->add_option("snapshot", heat_in, "Snapshot file")->required()->check(CLI::ExistingFile);
    heat->add_option("axis", axis, "Sliced axis (3D; ignored for 2D)")->required();
    heat->add_option("index", index, "Plane index along the axis (3D; ignored for 2D)")->required();
    heat->add_option("out", heat_out, "Output .pgm")->required();
    heat->add_option("--component", component, "Field component")->capture_default_str();

    app.add_subcommand("template", "Print a config with every key at its default");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) return awr::run_file(config_path, std::cout, std::cerr).status;
        if (*verify) {
            const auto checks = awr::run_suite(suite);
            awr::print_checks(std::cout, checks);
            return awr::all_passed(checks) ? 0 : 1;
        }
        if (*insp) return inspect(snapshot_path);
        if (*heat) {
            const awr::Snapshot s = awr::read_snapshot(heat_in);
            awr::write_heatmap(heat_out, s.field, component, axis, index);
            return 0;
        }
        awr::emit_config(std::cout, awr::RunConfig{});
        return 0;
    } catch (const awr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return awr::kExitConfigError;
    }
}
