#pragma once

#include <optional>
#include <string>

#include "lqtrack/design.hpp"
#include "lqtrack/graph.hpp"
#include "lqtrack/matrix.hpp"
#include "lqtrack/model.hpp"

namespace lqtrack {

struct SimulationOptions {
    double t_final = 30.0;
    double dt = 1e-3;
    std::optional<Matrix> leader_initial;
    std::optional<Matrix> follower_initials;
};

/// Problem description as read from a JSON config document. See README for
/// the schema; every validation failure names the offending field.
struct ProblemConfig {
    AgentModel agent;
    NetworkSpec network;
    CostSpec cost;
    std::optional<double> c;
    double epsilon = 0.01;
    CaseBCoefficient case_b_coefficient = CaseBCoefficient::lemma3;
    SimulationOptions simulation;
};

ProblemConfig parse_problem_config(const std::string& text);
ProblemConfig load_problem_config(const std::string& path);

DesignRequest request_from_config(const ProblemConfig& config);

/// Serializes a certificate with its context (spectrum, verification report,
/// requested radius) as JSON. Numbers keep full binary precision, so reading
/// the document back yields a bit-identical certificate.
std::string certificate_document(const DesignCertificate& certificate, const DesignRequest& request,
                                 const GammaSpectrum& spectrum, const VerificationReport& report);

DesignCertificate parse_certificate(const std::string& text);
DesignCertificate load_certificate(const std::string& path);

const char* to_string(CouplingCase c);
const char* to_string(CaseBCoefficient reading);
CaseBCoefficient case_b_coefficient_from_string(const std::string& name);

} // namespace lqtrack
