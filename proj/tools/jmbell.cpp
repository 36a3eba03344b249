// Command-line front end: validate, decompose, realize and check-compat.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "jmbell/cli.hpp"

namespace {

void add_common(CLI::App *cmd, jmbell::RunConfig &config, std::string &format) {
    cmd->add_option("input,--input", config.input, "structure JSON file")->required();
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Bell violations from joint measurability structures"};
    app.require_subcommand(1);

    jmbell::RunConfig config;
    std::string format = "text";
    std::string q0 = "default";
    std::string epsilon = "auto";

    auto *validate = app.add_subcommand("validate", "check a structure file");
    add_common(validate, config, format);

    auto *decompose = app.add_subcommand("decompose", "list minimal incompatible sets");
    add_common(decompose, config, format);

    auto *realize = app.add_subcommand("realize", "build the quantum realization and evaluate I_vv22");
    auto *check = app.add_subcommand("check-compat", "certify compatible edges and incompatibility witnesses");
    for (auto *cmd : {realize, check}) {
        add_common(cmd, config, format);
        cmd->add_option("--q0-squared", q0, "q0^2 for N>=3 blocks, or 'default'");
        cmd->add_option("--epsilon", epsilon, "epsilon for N>=3 blocks, or 'auto'");
        cmd->add_option("--tol", config.tol, "PSD tolerance of the feasibility solver")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-iter", config.max_iter, "feasibility iteration budget");
        cmd->add_option("--seed", config.seed, "sampling seed");
        cmd->add_option("--shots", config.shots, "shots per setting pair (0: no sampling)");
        cmd->add_option("--materialize-limit", config.materialize_limit,
                        "max D^2 for the explicit direct-sum check");
    }

    CLI11_PARSE(app, argc, argv);

    config.format = format == "json" ? jmbell::OutputFormat::Json : jmbell::OutputFormat::Text;
    try {
        if (q0 != "default")
            config.q0_squared = std::stod(q0);
        if (epsilon != "auto")
            config.epsilon = std::stod(epsilon);
    } catch (const std::exception &) {
        std::cerr << "invalid numeric option\n";
        return jmbell::exit_code::invalid;
    }

    if (validate->parsed())
        return jmbell::cmd_validate(config, std::cout, std::cerr);
    if (decompose->parsed())
        return jmbell::cmd_decompose(config, std::cout, std::cerr);
    if (realize->parsed())
        return jmbell::cmd_realize(config, std::cout, std::cerr);
    return jmbell::cmd_check_compat(config, std::cout, std::cerr);
}
