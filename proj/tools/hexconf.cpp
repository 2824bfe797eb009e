#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hexconf/cli.hpp"
#include "hexconf/error.hpp"

namespace {

using hexconf::Command;
using hexconf::ExperimentConfig;

struct Leaf {
    const char* group;
    const char* name;
    Command command;
    const char* help;
    std::vector<std::string> options;
};

const std::vector<Leaf>& leaves()
{
    static const std::vector<Leaf> table{
        {"fan", "check", Command::fan_check, "Curvature, alphas and Delaunay status of a fan file", {"file", "tolerance"}},
        {"fan", "solve", Command::fan_solve, "Adjust u_j until K equals the target", {"file", "j", "target", "tolerance"}},
        {"fan", "sample", Command::fan_sample, "Draw flat Delaunay fans", {"seed", "trials", "n"}},
        {"calculus", "fdcheck", Command::calculus_fdcheck, "Compare derivatives with central differences",
         {"seed", "trials", "n"}},
        {"maxprin", "flow", Command::maxprin_flow, "Integrate sampled flow segments", {"seed", "trials", "n"}},
        {"maxprin", "verify", Command::maxprin_verify, "Check a pair of fans (upper, lower)",
         {"file", "file2", "tolerance"}},
        {"maxprin", "search", Command::maxprin_search, "Randomized counterexample search",
         {"seed", "trials", "n", "tolerance"}},
        {"harmonic", "weights", Command::harmonic_weights, "Averaging weights for six values", {"values", "eps", "M"}},
        {"harmonic", "estimate", Command::harmonic_estimate, "Empirical harmonic factors",
         {"seed", "trials", "eps-grid"}},
        {"harmonic", "window", Command::harmonic_window, "Search a uniform-gradient window",
         {"seed", "trials", "file", "eps", "radius", "M", "N"}},
        {"plane", "layout", Command::plane_layout, "Develop a field (file, random flat from seed, or constant gradient)",
         {"file", "seed", "radius", "M", "N", "svg"}},
        {"plane", "overlap", Command::plane_overlap, "Smallest overlapping radius of a constant gradient",
         {"M", "N", "rmax", "svg"}},
        {"plane", "linear", Command::plane_linear, "Curvature of linear fields along a direction",
         {"M", "N", "rmax", "tolerance"}},
        {"hyp", "lcr", Command::hyp_lcr, "Length cross ratios of interior edges", {"file", "seed", "radius", "M", "N"}},
        {"hyp", "shear", Command::hyp_shear, "Vertex shear sums", {"file", "seed", "radius", "M", "N"}},
        {"hyp", "dihedral", Command::hyp_dihedral, "Circumcircle angles against alpha",
         {"file", "seed", "radius", "M", "N"}},
        {"hyp", "reduce", Command::hyp_reduce, "Reduced Delaunay decomposition",
         {"file", "seed", "radius", "M", "N", "tolerance"}},
    };
    return table;
}

void add_options(CLI::App& sub, const std::vector<std::string>& names, ExperimentConfig& c)
{
    for (const auto& name : names) {
        if (name == "file") {
            sub.add_option("--file", c.file, "Input JSON (fan or field)");
        } else if (name == "file2") {
            sub.add_option("--file2", c.file2, "Second fan (lower)");
        } else if (name == "seed") {
            sub.add_option("--seed", c.seed, "64-bit seed");
        } else if (name == "trials") {
            sub.add_option("--trials", c.trials, "Number of trials or samples");
        } else if (name == "n") {
            sub.add_option("--n", c.n, "Fan size");
        } else if (name == "tolerance") {
            sub.add_option("--tolerance", c.tolerance, "Tolerance");
        } else if (name == "j") {
            sub.add_option("--j", c.j, "Boundary index");
        } else if (name == "target") {
            sub.add_option("--target", c.target, "Target curvature");
        } else if (name == "radius") {
            sub.add_option("--radius", c.radius, "Ball radius");
        } else if (name == "M") {
            sub.add_option("--M", c.M, "Gradient along 1");
        } else if (name == "N") {
            sub.add_option("--N", c.N, "Gradient along w");
        } else if (name == "rmax") {
            sub.add_option("--rmax", c.rmax, "Largest radius");
        } else if (name == "eps") {
            sub.add_option("--eps", c.eps, "Epsilon");
        } else if (name == "eps-grid") {
            sub.add_option("--eps-grid", c.eps_grid, "Epsilon values")->expected(1, -1);
        } else if (name == "values") {
            sub.add_option("--values", c.values, "Six values a_1..a_6")->expected(6);
        } else if (name == "svg") {
            sub.add_option("--svg", c.svg, "SVG output path");
        }
    }
    sub.add_option("--out", c.output, "JSON report path (stdout when omitted)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete conformal geometry experiments on the hexagonal lattice"};
    app.set_version_flag("--version", std::string(hexconf::kVersion));
    app.require_subcommand(1);
    ExperimentConfig config;
    std::optional<Command> chosen;

    std::map<std::string, CLI::App*> groups;
    for (const auto& leaf : leaves()) {
        auto*& group = groups[leaf.group];
        if (group == nullptr) {
            group = app.add_subcommand(leaf.group, std::string(leaf.group) + " experiments");
            group->require_subcommand(1);
        }
        auto* sub = group->add_subcommand(leaf.name, leaf.help);
        add_options(*sub, leaf.options, config);
        const Command command = leaf.command;
        sub->callback([&chosen, command] { chosen = command; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    config.command = *chosen;

    try {
        const auto result = hexconf::run(config);
        if (!config.output) {
            std::cout << hexconf::dump_report(result.report);
        }
        return result.exit_code;
    } catch (const hexconf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.kind() == hexconf::ErrorKind::invalid_config) {
            std::cerr << app.help();
        }
        return 2;
    }
}
