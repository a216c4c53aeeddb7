#include "lqtrack/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "lqtrack/errors.hpp"

namespace lqtrack {

namespace {

using nlohmann::json;

const json& require_field(const json& node, const std::string& path, const char* key) {
    if (!node.is_object()) {
        throw ConfigError("config field " + path + " must be an object");
    }
    const auto it = node.find(key);
    if (it == node.end()) {
        throw ConfigError("config field " + path + "." + key + " is missing");
    }
    return *it;
}

double require_number(const json& node, const std::string& field) {
    if (!node.is_number()) {
        throw ConfigError("config field " + field + " must be a number");
    }
    return node.get<double>();
}

Matrix parse_matrix(const json& node, const std::string& field) {
    if (!node.is_array() || node.empty()) {
        throw ConfigError("config field " + field + " must be a nonempty array of rows");
    }
    const std::size_t rows = node.size();
    if (!node[0].is_array() || node[0].empty()) {
        throw ConfigError("config field " + field + " must contain nonempty numeric rows");
    }
    const std::size_t cols = node[0].size();
    Matrix out(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!node[r].is_array() || node[r].size() != cols) {
            throw ConfigError("config field " + field + " row " + std::to_string(r + 1) +
                              " must have " + std::to_string(cols) + " entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            out(r, c) = require_number(node[r][c], field + "[" + std::to_string(r + 1) + "][" +
                                                       std::to_string(c + 1) + "]");
        }
    }
    return out;
}

std::vector<double> parse_vector(const json& node, const std::string& field) {
    if (!node.is_array() || node.empty()) {
        throw ConfigError("config field " + field + " must be a nonempty numeric array");
    }
    std::vector<double> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(require_number(node[i], field + "[" + std::to_string(i + 1) + "]"));
    }
    return out;
}

NetworkSpec parse_network(const json& node) {
    const auto gains = parse_vector(require_field(node, "network", "pinning_gains"),
                                    "network.pinning_gains");
    const std::size_t n_followers = gains.size();
    const auto& edges = require_field(node, "network", "edges");
    if (!edges.is_array()) {
        throw ConfigError("config field network.edges must be an array of index pairs");
    }
    Matrix adjacency(n_followers, n_followers);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::string field = "network.edges[" + std::to_string(e + 1) + "]";
        const auto& pair = edges[e];
        if (!pair.is_array() || pair.size() != 2) {
            throw ConfigError("config field " + field + " must be a pair of follower indices");
        }
        const double a = require_number(pair[0], field);
        const double b = require_number(pair[1], field);
        const auto i = static_cast<long long>(a);
        const auto j = static_cast<long long>(b);
        if (a != static_cast<double>(i) || b != static_cast<double>(j) || i < 1 || j < 1 ||
            i > static_cast<long long>(n_followers) || j > static_cast<long long>(n_followers)) {
            throw ConfigError("config field " + field + " must hold 1-based follower indices <= " +
                              std::to_string(n_followers));
        }
        if (i == j) {
            throw ConfigError("config field " + field + " connects follower " + std::to_string(i) +
                              " to itself");
        }
        adjacency(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = 1.0;
        adjacency(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1)) = 1.0;
    }
    return NetworkSpec(std::move(adjacency), gains);
}

Matrix parse_stacked_states(const json& node, const std::string& field, std::size_t n_agents,
                            std::size_t state_dim) {
    if (!node.is_array() || node.size() != n_agents) {
        throw ConfigError("config field " + field + " must list " + std::to_string(n_agents) +
                          " follower states");
    }
    Matrix out(n_agents * state_dim, 1);
    for (std::size_t i = 0; i < n_agents; ++i) {
        const std::string row_field = field + "[" + std::to_string(i + 1) + "]";
        const auto row = parse_vector(node[i], row_field);
        if (row.size() != state_dim) {
            throw ConfigError("config field " + row_field + " must have " +
                              std::to_string(state_dim) + " entries");
        }
        for (std::size_t c = 0; c < state_dim; ++c) {
            out(state_dim * i + c, 0) = row[c];
        }
    }
    return out;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

json parse_document(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(what) + " is not valid JSON: " + e.what());
    }
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError(std::string("could not open ") + what + ": " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

ProblemConfig parse_problem_config(const std::string& text) {
    const json doc = parse_document(text, "problem config");

    const auto& agent_node = require_field(doc, "config", "agent");
    AgentModel agent{parse_matrix(require_field(agent_node, "agent", "a"), "agent.a"),
                     parse_matrix(require_field(agent_node, "agent", "b"), "agent.b")};
    if (!agent.a.is_square()) {
        throw ConfigError("config field agent.a must be square");
    }
    const std::size_t n = agent.a.rows();
    const std::size_t m = agent.b.cols();
    if (agent.b.rows() != n) {
        throw ConfigError("config field agent.b must have " + std::to_string(n) +
                          " rows to match agent.a");
    }

    NetworkSpec network = parse_network(require_field(doc, "config", "network"));

    const auto& cost_node = require_field(doc, "config", "cost");
    CostSpec cost{parse_matrix(require_field(cost_node, "cost", "q"), "cost.q"),
                  parse_matrix(require_field(cost_node, "cost", "r"), "cost.r"),
                  require_number(require_field(cost_node, "cost", "gamma"), "cost.gamma"),
                  require_number(require_field(cost_node, "cost", "radius"), "cost.radius")};
    if (cost.q.rows() != n || cost.q.cols() != n) {
        throw ConfigError("config field cost.q must be " + std::to_string(n) + "x" +
                          std::to_string(n) + " to match agent.a");
    }
    if (cost.r.rows() != m || cost.r.cols() != m) {
        throw ConfigError("config field cost.r must be " + std::to_string(m) + "x" +
                          std::to_string(m) + " to match agent.b");
    }

    ProblemConfig config{std::move(agent), std::move(network), std::move(cost), {}, 0.01,
                         CaseBCoefficient::lemma3, {}};

    if (const auto design = doc.find("design"); design != doc.end()) {
        if (const auto c = design->find("c"); c != design->end()) {
            config.c = require_number(*c, "design.c");
        }
        if (const auto eps = design->find("epsilon"); eps != design->end()) {
            config.epsilon = require_number(*eps, "design.epsilon");
        }
        if (const auto reading = design->find("case_b_coefficient"); reading != design->end()) {
            if (!reading->is_string()) {
                throw ConfigError("config field design.case_b_coefficient must be a string");
            }
            config.case_b_coefficient = case_b_coefficient_from_string(reading->get<std::string>());
        }
    }

    if (const auto sim = doc.find("simulation"); sim != doc.end()) {
        if (const auto t = sim->find("t_final"); t != sim->end()) {
            config.simulation.t_final = require_number(*t, "simulation.t_final");
        }
        if (const auto dt = sim->find("dt"); dt != sim->end()) {
            config.simulation.dt = require_number(*dt, "simulation.dt");
        }
        if (const auto leader = sim->find("leader_initial"); leader != sim->end()) {
            const auto values = parse_vector(*leader, "simulation.leader_initial");
            if (values.size() != n) {
                throw ConfigError("config field simulation.leader_initial must have " +
                                  std::to_string(n) + " entries");
            }
            config.simulation.leader_initial = Matrix::column(values);
        }
        if (const auto followers = sim->find("follower_initials"); followers != sim->end()) {
            config.simulation.follower_initials = parse_stacked_states(
                *followers, "simulation.follower_initials", config.network.n_followers(), n);
        }
    }
    return config;
}

ProblemConfig load_problem_config(const std::string& path) {
    return parse_problem_config(read_file(path, "problem config"));
}

DesignRequest request_from_config(const ProblemConfig& config) {
    DesignRequest request{config.agent, config.network, config.cost};
    request.c_override = config.c;
    request.epsilon = config.epsilon;
    request.case_b_coefficient = config.case_b_coefficient;
    return request;
}

std::string certificate_document(const DesignCertificate& certificate, const DesignRequest& request,
                                 const GammaSpectrum& spectrum, const VerificationReport& report) {
    json doc;
    doc["c"] = certificate.c;
    doc["epsilon"] = certificate.epsilon;
    doc["case"] = to_string(certificate.case_tag);
    doc["case_b_coefficient"] = to_string(request.case_b_coefficient);
    doc["p"] = matrix_to_json(certificate.p);
    doc["k"] = matrix_to_json(certificate.k);
    doc["spectrum"] = {{"lambda_min", spectrum.lambda_min},
                       {"lambda_max", spectrum.lambda_max},
                       {"eigenvalues", spectrum.all_eigenvalues}};
    doc["lambda_max_p"] = sym_eigen(certificate.p).eigenvalues.back();
    doc["admissible_radius"] = certificate.admissible_radius;
    doc["requested_radius"] = request.cost.radius;
    doc["requested_radius_ok"] = certificate.requested_radius_ok;

    json modes = json::array();
    for (const auto& mode : report.modes) {
        modes.push_back({{"lambda", mode.lambda},
                         {"hurwitz", mode.hurwitz},
                         {"inequality_holds", mode.inequality_holds}});
    }
    doc["verification"] = {{"modes", std::move(modes)},
                           {"radius_condition", report.radius_ok},
                           {"pass", report.pass}};
    return doc.dump(2) + "\n";
}

DesignCertificate parse_certificate(const std::string& text) {
    const json doc = parse_document(text, "certificate");
    DesignCertificate cert{require_number(require_field(doc, "certificate", "c"), "c"),
                           require_number(require_field(doc, "certificate", "epsilon"), "epsilon"),
                           CouplingCase::case_a,
                           parse_matrix(require_field(doc, "certificate", "p"), "p"),
                           parse_matrix(require_field(doc, "certificate", "k"), "k"),
                           require_number(require_field(doc, "certificate", "admissible_radius"),
                                          "admissible_radius"),
                           false};

    const auto& case_node = require_field(doc, "certificate", "case");
    if (!case_node.is_string()) {
        throw ConfigError("certificate field case must be a string");
    }
    const std::string case_name = case_node.get<std::string>();
    if (case_name == "case_a") {
        cert.case_tag = CouplingCase::case_a;
    } else if (case_name == "case_b") {
        cert.case_tag = CouplingCase::case_b;
    } else {
        throw ConfigError("certificate field case must be case_a or case_b");
    }

    const auto& ok_node = require_field(doc, "certificate", "requested_radius_ok");
    if (!ok_node.is_boolean()) {
        throw ConfigError("certificate field requested_radius_ok must be a boolean");
    }
    cert.requested_radius_ok = ok_node.get<bool>();

    if (!cert.p.is_square() || cert.p.empty()) {
        throw ConfigError("certificate field p must be a square matrix");
    }
    if (cert.k.cols() != cert.p.rows() || cert.k.rows() == 0) {
        throw ConfigError("certificate field k must have one column per state");
    }
    return cert;
}

DesignCertificate load_certificate(const std::string& path) {
    return parse_certificate(read_file(path, "certificate"));
}

const char* to_string(CouplingCase c) {
    return c == CouplingCase::case_a ? "case_a" : "case_b";
}

const char* to_string(CaseBCoefficient reading) {
    return reading == CaseBCoefficient::lemma3 ? "lemma3" : "theorem3";
}

CaseBCoefficient case_b_coefficient_from_string(const std::string& name) {
    if (name == "lemma3") return CaseBCoefficient::lemma3;
    if (name == "theorem3") return CaseBCoefficient::theorem3;
    throw ConfigError("case_b_coefficient must be lemma3 or theorem3, got: " + name);
}

} // namespace lqtrack
