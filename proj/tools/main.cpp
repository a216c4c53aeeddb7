#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "lqtrack/commands.hpp"
#include "lqtrack/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Design, certify and simulate distributed suboptimal LQ tracking controllers"};
    app.require_subcommand(1);

    std::string design_config;
    std::string certificate_out = "certificate.json";
    auto* design = app.add_subcommand("design", "Design a gain and write its certificate");
    design->add_option("config", design_config, "problem config JSON")->required();
    design->add_option("--out", certificate_out, "certificate output path");

    lqtrack::SimulateArgs sim;
    std::string gain_path;
    auto* simulate =
        app.add_subcommand("simulate", "Simulate the network and export the trajectory CSV");
    simulate->add_option("config", sim.config_path, "problem config JSON")->required();
    auto* gain_opt = simulate->add_option("--gain", gain_path, "certificate JSON with the gain");
    auto* no_control_opt =
        simulate->add_flag("--no-control", sim.no_control, "simulate the open network with K = 0");
    gain_opt->excludes(no_control_opt);
    simulate->add_option("--t-final", sim.t_final, "simulation duration in seconds");
    simulate->add_option("--dt", sim.dt, "integration step in seconds");
    simulate->add_option("--out", sim.out_path, "trajectory CSV path");

    std::string verify_config;
    std::string verify_gain;
    auto* verify = app.add_subcommand("verify", "Re-check a stored certificate against a config");
    verify->add_option("config", verify_config, "problem config JSON")->required();
    verify->add_option("--gain", verify_gain, "certificate JSON to verify")->required();

    lqtrack::ReproduceArgs rep;
    std::string reading;
    auto* reproduce = app.add_subcommand(
        "reproduce-example", "Run the bundled ring benchmark against its reference values");
    reproduce->add_option("--c", rep.c, "override the coupling constant");
    reproduce->add_option("--epsilon", rep.epsilon, "override the design epsilon");
    reproduce->add_option("--case-b-coefficient", reading, "design equation reading for case (b)")
        ->check(CLI::IsMember({"lemma3", "theorem3"}));

    CLI11_PARSE(app, argc, argv);

    if (*design) {
        return lqtrack::cmd_design(design_config, certificate_out, std::cout);
    }
    if (*simulate) {
        if (gain_opt->count() > 0) {
            sim.gain_path = gain_path;
        }
        return lqtrack::cmd_simulate(sim, std::cout);
    }
    if (*verify) {
        return lqtrack::cmd_verify(verify_config, verify_gain, std::cout);
    }
    if (!reading.empty()) {
        rep.case_b_coefficient = lqtrack::case_b_coefficient_from_string(reading);
    }
    return lqtrack::cmd_reproduce_example(rep, std::cout);
}
