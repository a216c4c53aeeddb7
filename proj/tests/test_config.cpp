#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "lqtrack/commands.hpp"
#include "lqtrack/config.hpp"
#include "lqtrack/errors.hpp"

using lqtrack::CaseBCoefficient;
using lqtrack::CouplingCase;
using lqtrack::Matrix;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

nlohmann::json example_json() { return nlohmann::json::parse(lqtrack::example_config_text()); }

struct TempFile {
    explicit TempFile(std::string name) : path(std::move(name)) {}
    ~TempFile() { std::remove(path.c_str()); }
    std::string path;
};

} // namespace

TEST_CASE("parse_problem_config reads the bundled benchmark") {
    const auto config = lqtrack::parse_problem_config(lqtrack::example_config_text());
    CHECK(config.agent.a.rows() == 2);
    CHECK(config.agent.b.cols() == 1);
    CHECK(config.network.n_followers() == 5);
    CHECK(config.network.adjacency()(0, 1) == 1.0);
    CHECK(config.network.adjacency()(0, 4) == 1.0);
    CHECK(config.network.adjacency()(0, 3) == 0.0);
    CHECK(config.network.pinning_gains()[1] == 1.0);
    CHECK(config.cost.gamma == 20.0);
    CHECK(config.cost.radius == 1.1);
    CHECK_FALSE(config.c.has_value());
    CHECK(config.epsilon == 0.001);
    CHECK(config.case_b_coefficient == CaseBCoefficient::lemma3);
    CHECK(config.simulation.t_final == 30.0);
    CHECK(config.simulation.dt == 1e-3);
    REQUIRE(config.simulation.leader_initial.has_value());
    REQUIRE(config.simulation.follower_initials.has_value());
    CHECK((*config.simulation.leader_initial)(1, 0) == -0.5);
    CHECK(config.simulation.follower_initials->rows() == 10);
    CHECK((*config.simulation.follower_initials)(4, 0) == 0.2);

    const auto request = lqtrack::request_from_config(config);
    CHECK(request.epsilon == 0.001);
    CHECK_FALSE(request.c_override.has_value());
}

TEST_CASE("config validation names the offending field") {
    using lqtrack::ConfigError;
    auto parse = [](const nlohmann::json& doc) {
        return lqtrack::parse_problem_config(doc.dump());
    };

    CHECK_THROWS_WITH_AS(lqtrack::parse_problem_config("{ not json"),
                         doctest::Contains("not valid JSON"), ConfigError);
    CHECK_THROWS_WITH_AS(parse(nlohmann::json::object()), doctest::Contains("agent"), ConfigError);

    auto doc = example_json();
    doc["agent"]["a"] = {{0, 1}};
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("agent.a must be square"), ConfigError);

    doc = example_json();
    doc["agent"]["a"] = {{0, 1}, {1}};
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("agent.a row 2"), ConfigError);

    doc = example_json();
    doc["network"]["edges"][0] = {1, 9};
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("network.edges[1]"), ConfigError);

    doc = example_json();
    doc["network"]["edges"][2] = {3, 3};
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("itself"), ConfigError);

    doc = example_json();
    doc["cost"]["q"] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("cost.q must be 2x2"), ConfigError);

    doc = example_json();
    doc["cost"].erase("gamma");
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("cost.gamma"), ConfigError);

    doc = example_json();
    doc["design"]["case_b_coefficient"] = "fast";
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("lemma3"), ConfigError);

    doc = example_json();
    doc["simulation"]["leader_initial"] = {1, 2, 3};
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("simulation.leader_initial"), ConfigError);

    doc = example_json();
    doc["simulation"]["follower_initials"][4] = {1};
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("follower_initials[5]"), ConfigError);

    // Structural graph problems surface from the network validation.
    doc = example_json();
    doc["network"]["edges"] = {{1, 2}, {3, 4}};
    doc["network"]["pinning_gains"] = {1, 0, 0, 0};
    CHECK_THROWS_WITH_AS(parse(doc), doctest::Contains("connected"), lqtrack::NetworkError);
}

TEST_CASE("certificate documents round-trip bit-identically") {
    const auto config = lqtrack::parse_problem_config(lqtrack::example_config_text());
    const auto request = lqtrack::request_from_config(config);
    const auto spectrum = gamma_spectrum(request.network);
    const auto certificate = lqtrack::synthesize(request);
    const auto report = lqtrack::verify_certificate(certificate, request);

    const std::string doc = lqtrack::certificate_document(certificate, request, spectrum, report);
    const auto back = lqtrack::parse_certificate(doc);
    CHECK(back.c == certificate.c);
    CHECK(back.epsilon == certificate.epsilon);
    CHECK(back.case_tag == certificate.case_tag);
    CHECK(back.admissible_radius == certificate.admissible_radius);
    CHECK(back.requested_radius_ok == certificate.requested_radius_ok);
    REQUIRE(back.p.rows() == certificate.p.rows());
    REQUIRE(back.k.cols() == certificate.k.cols());
    CHECK((back.p - certificate.p).max_norm() == 0.0);
    CHECK((back.k - certificate.k).max_norm() == 0.0);

    const auto parsed = nlohmann::json::parse(doc);
    CHECK(parsed["verification"]["pass"].get<bool>());
    CHECK(parsed["spectrum"]["eigenvalues"].size() == 5);

    CHECK_THROWS_AS(lqtrack::parse_certificate("{}"), lqtrack::ConfigError);
    auto bad = parsed;
    bad["case"] = "case_c";
    CHECK_THROWS_WITH_AS(lqtrack::parse_certificate(bad.dump()), doctest::Contains("case"),
                         lqtrack::ConfigError);
}

TEST_CASE("shipped ring config matches the embedded benchmark") {
    const auto shipped = lqtrack::load_problem_config(std::string(LQTRACK_SOURCE_DIR) +
                                                      "/configs/ring5.json");
    const auto embedded = lqtrack::parse_problem_config(lqtrack::example_config_text());
    CHECK((shipped.agent.a - embedded.agent.a).max_norm() == 0.0);
    CHECK((shipped.network.adjacency() - embedded.network.adjacency()).max_norm() == 0.0);
    CHECK(shipped.cost.gamma == embedded.cost.gamma);
    CHECK(shipped.cost.radius == embedded.cost.radius);
    CHECK(shipped.epsilon == embedded.epsilon);

    const auto cert_a = lqtrack::synthesize(lqtrack::request_from_config(shipped));
    const auto cert_b = lqtrack::synthesize(lqtrack::request_from_config(embedded));
    CHECK(cert_a.c == cert_b.c);
    CHECK((cert_a.p - cert_b.p).max_norm() == 0.0);
}

TEST_CASE("cmd_design writes a passing certificate for the benchmark") {
    const TempFile cfg("cmd_design_cfg.json");
    const TempFile cert("cmd_design_cert.json");
    write_file(cfg.path, lqtrack::example_config_text());

    std::ostringstream out;
    const int code = lqtrack::cmd_design(cfg.path, cert.path, out);
    CHECK(code == lqtrack::exit_ok);
    const std::string text = out.str();
    CHECK(text.find("verification: PASS") != std::string::npos);
    CHECK(text.find("(admissible)") != std::string::npos);
    CHECK(text.find("case_a") != std::string::npos);

    const auto stored = lqtrack::parse_certificate(read_file(cert.path));
    const auto direct = lqtrack::synthesize(
        lqtrack::request_from_config(lqtrack::parse_problem_config(lqtrack::example_config_text())));
    CHECK(stored.c == direct.c);
    CHECK((stored.p - direct.p).max_norm() == 0.0);
    CHECK((stored.k - direct.k).max_norm() == 0.0);
}

TEST_CASE("cmd_design rejects an inadmissible radius with the bound") {
    auto doc = example_json();
    doc["cost"]["radius"] = 2.0;
    const TempFile cfg("cmd_design_wide_cfg.json");
    const TempFile cert("cmd_design_wide_cert.json");
    write_file(cfg.path, doc.dump());

    std::ostringstream out;
    const int code = lqtrack::cmd_design(cfg.path, cert.path, out);
    CHECK(code == lqtrack::exit_failed_check);
    CHECK(out.str().find("requested radius 2 exceeds admissible 1.1473") != std::string::npos);
    CHECK(out.str().find("verification: FAIL") != std::string::npos);
    // The certificate is still written for inspection.
    CHECK(lqtrack::parse_certificate(read_file(cert.path)).requested_radius_ok == false);
}

TEST_CASE("cmd_design reports config problems with nonzero exit") {
    std::ostringstream out;
    CHECK(lqtrack::cmd_design("no_such_config.json", "unused.json", out) == lqtrack::exit_error);
    CHECK(out.str().find("could not open") != std::string::npos);

    auto doc = example_json();
    doc["network"]["edges"] = {{1, 2}, {2, 3}};
    doc["network"]["pinning_gains"] = {0, 1, 0, 0, 0};
    const TempFile cfg("cmd_design_disconnected.json");
    write_file(cfg.path, doc.dump());
    std::ostringstream out2;
    CHECK(lqtrack::cmd_design(cfg.path, "unused.json", out2) == lqtrack::exit_error);
    CHECK(out2.str().find("connected") != std::string::npos);
}

TEST_CASE("cmd_simulate runs controlled and uncontrolled benchmarks") {
    const TempFile cfg("cmd_sim_cfg.json");
    const TempFile cert("cmd_sim_cert.json");
    const TempFile csv("cmd_sim_traj.csv");
    write_file(cfg.path, lqtrack::example_config_text());
    std::ostringstream design_out;
    REQUIRE(lqtrack::cmd_design(cfg.path, cert.path, design_out) == lqtrack::exit_ok);

    lqtrack::SimulateArgs args;
    args.config_path = cfg.path;
    args.gain_path = cert.path;
    args.out_path = csv.path;
    std::ostringstream out;
    CHECK(lqtrack::cmd_simulate(args, out) == lqtrack::exit_ok);
    const std::string text = out.str();
    CHECK(text.find("consensus (tol 0.01): reached") != std::string::npos);
    CHECK(text.find("relative gap") != std::string::npos);
    CHECK(text.find("trajectory written to") != std::string::npos);

    const auto quote = [&](const char* key) {
        const auto pos = text.find(key);
        REQUIRE(pos != std::string::npos);
        return std::stod(text.substr(pos + std::string(key).size()));
    };
    const double quadrature = quote("quadrature cost = ");
    const double exact = quote("Lyapunov cost = ");
    const double gap = quote("relative gap = ");
    CHECK(quadrature < 20.0);
    CHECK(exact < 20.0);
    CHECK(gap < 1e-3);

    std::ifstream traj(csv.path);
    REQUIRE(traj.good());
    std::string header;
    std::getline(traj, header);
    CHECK(header ==
          "t,xr_1,xr_2,x1_1,x1_2,x2_1,x2_2,x3_1,x3_2,x4_1,x4_2,x5_1,x5_2,running_cost");

    lqtrack::SimulateArgs open_loop;
    open_loop.config_path = cfg.path;
    open_loop.no_control = true;
    open_loop.out_path = csv.path;
    std::ostringstream out2;
    CHECK(lqtrack::cmd_simulate(open_loop, out2) == lqtrack::exit_ok);
    CHECK(out2.str().find("consensus (tol 0.01): not reached") != std::string::npos);
    CHECK(out2.str().find("Lyapunov cost = infinite") != std::string::npos);

    lqtrack::SimulateArgs both = args;
    both.no_control = true;
    std::ostringstream out3;
    CHECK(lqtrack::cmd_simulate(both, out3) == lqtrack::exit_error);
    CHECK(out3.str().find("exactly one") != std::string::npos);

    lqtrack::SimulateArgs neither;
    neither.config_path = cfg.path;
    std::ostringstream out4;
    CHECK(lqtrack::cmd_simulate(neither, out4) == lqtrack::exit_error);
}

TEST_CASE("cmd_simulate requires initial states and surfaces divergence") {
    auto doc = example_json();
    doc.erase("simulation");
    const TempFile cfg("cmd_sim_nostate_cfg.json");
    write_file(cfg.path, doc.dump());
    lqtrack::SimulateArgs args;
    args.config_path = cfg.path;
    args.no_control = true;
    std::ostringstream out;
    CHECK(lqtrack::cmd_simulate(args, out) == lqtrack::exit_error);
    CHECK(out.str().find("simulation.leader_initial") != std::string::npos);

    const nlohmann::json runaway = {
        {"agent", {{"a", {{5}}}, {"b", {{0}}}}},
        {"network", {{"edges", nlohmann::json::array()}, {"pinning_gains", {1}}}},
        {"cost", {{"q", {{1}}}, {"r", {{1}}}, {"gamma", 1}, {"radius", 0.5}}},
        {"simulation",
         {{"t_final", 200}, {"dt", 0.01}, {"leader_initial", {1}}, {"follower_initials", {{2}}}}},
    };
    const TempFile cfg2("cmd_sim_runaway_cfg.json");
    const TempFile csv("cmd_sim_runaway.csv");
    write_file(cfg2.path, runaway.dump());
    lqtrack::SimulateArgs args2;
    args2.config_path = cfg2.path;
    args2.no_control = true;
    args2.out_path = csv.path;
    std::ostringstream out2;
    CHECK(lqtrack::cmd_simulate(args2, out2) == lqtrack::exit_error);
    CHECK(out2.str().find("diverged") != std::string::npos);
}

TEST_CASE("cmd_verify re-checks stored certificates") {
    const TempFile cfg("cmd_verify_cfg.json");
    const TempFile cert("cmd_verify_cert.json");
    write_file(cfg.path, lqtrack::example_config_text());
    std::ostringstream design_out;
    REQUIRE(lqtrack::cmd_design(cfg.path, cert.path, design_out) == lqtrack::exit_ok);

    std::ostringstream out;
    CHECK(lqtrack::cmd_verify(cfg.path, cert.path, out) == lqtrack::exit_ok);
    CHECK(out.str().find("mode 5") != std::string::npos);
    CHECK(out.str().find("initial condition") != std::string::npos);
    CHECK(out.str().find("verification: PASS") != std::string::npos);

    auto tampered = nlohmann::json::parse(read_file(cert.path));
    tampered["k"] = {{0.0, 0.0}};
    const TempFile bad_cert("cmd_verify_tampered.json");
    write_file(bad_cert.path, tampered.dump());
    std::ostringstream out2;
    CHECK(lqtrack::cmd_verify(cfg.path, bad_cert.path, out2) == lqtrack::exit_failed_check);
    CHECK(out2.str().find("hurwitz NO") != std::string::npos);
    CHECK(out2.str().find("verification: FAIL") != std::string::npos);
}

TEST_CASE("cmd_reproduce_example matches the reference values") {
    std::ostringstream out;
    CHECK(lqtrack::cmd_reproduce_example({}, out) == lqtrack::exit_ok);
    const std::string text = out.str();
    CHECK(text.find("lambda_max(P)") != std::string::npos);
    CHECK(text.find("admissible radius") != std::string::npos);
    CHECK(text.find("per-mode verification: PASS") != std::string::npos);
    CHECK(text.find("result: PASS (11 compared rows within 1e-3)") != std::string::npos);
}

TEST_CASE("cmd_reproduce_example flags epsilon sensitivity") {
    lqtrack::ReproduceArgs args;
    args.epsilon = 0.1;
    std::ostringstream out;
    CHECK(lqtrack::cmd_reproduce_example(args, out) == lqtrack::exit_failed_check);
    const std::string text = out.str();
    CHECK(text.find("result: FAIL (outside 1e-3:") != std::string::npos);
    CHECK(text.find("P(1,1)") != std::string::npos);
    CHECK(text.find("admissible radius") != std::string::npos);
    // The spectrum itself still matches.
    CHECK(text.find("lambda_1") != std::string::npos);
    CHECK(text.find(" lambda_1") == std::string::npos);
}

TEST_CASE("cmd_reproduce_example handles case (b) overrides") {
    lqtrack::ReproduceArgs args;
    args.c = 0.3;
    std::ostringstream out;
    CHECK(lqtrack::cmd_reproduce_example(args, out) == lqtrack::exit_ok);
    const std::string text = out.str();
    CHECK(text.find("n/a") != std::string::npos);
    CHECK(text.find("per-mode verification: PASS") != std::string::npos);
    CHECK(text.find("result: PASS (2 compared rows within 1e-3)") != std::string::npos);

    lqtrack::ReproduceArgs alt;
    alt.c = 0.2;
    alt.case_b_coefficient = CaseBCoefficient::theorem3;
    std::ostringstream out2;
    CHECK(lqtrack::cmd_reproduce_example(alt, out2) == lqtrack::exit_failed_check);
    CHECK(out2.str().find("per-mode verification: FAIL") != std::string::npos);
    CHECK(out2.str().find("result: FAIL (per-mode verification failed)") != std::string::npos);
}
