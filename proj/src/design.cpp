#include "lqtrack/design.hpp"

#include <cmath>
#include <string>

#include "lqtrack/errors.hpp"
#include "lqtrack/riccati.hpp"

namespace lqtrack {

namespace {

void validate_request(const DesignRequest& req) {
    const std::size_t n = req.agent.a.rows();
    const std::size_t m = req.agent.b.cols();
    if (!req.agent.a.is_square() || n == 0) {
        throw DimensionError("agent.a: drift matrix must be square and nonempty");
    }
    if (req.agent.b.rows() != n) {
        throw DimensionError("agent.b: input map must have " + std::to_string(n) + " rows");
    }
    if (req.cost.q.rows() != n || req.cost.q.cols() != n) {
        throw DimensionError("cost.q: expected " + std::to_string(n) + "x" + std::to_string(n));
    }
    if (req.cost.r.rows() != m || req.cost.r.cols() != m) {
        throw DimensionError("cost.r: expected " + std::to_string(m) + "x" + std::to_string(m));
    }
    if (!req.cost.q.is_symmetric() ||
        sym_eigen(req.cost.q).eigenvalues.front() < -1e-9 * (1.0 + req.cost.q.max_norm())) {
        throw ParameterError("cost.q: state weight must be symmetric positive semidefinite");
    }
    if (!req.cost.r.is_symmetric() || !is_positive_definite(req.cost.r)) {
        throw ParameterError("cost.r: input weight must be symmetric positive definite");
    }
    if (!(req.cost.gamma > 0.0)) {
        throw ParameterError("cost.gamma: the cost bound must be positive");
    }
    if (!(req.cost.radius > 0.0)) {
        throw ParameterError("cost.radius: the initial-error radius must be positive");
    }
    if (!(req.epsilon > 0.0)) {
        throw ParameterError("epsilon: the design margin must be positive");
    }
}

} // namespace

double default_c(const GammaSpectrum& spectrum) {
    return 2.0 / (spectrum.lambda_min + spectrum.lambda_max);
}

CouplingCase classify_c(double c, const GammaSpectrum& spectrum) {
    if (!(c > 0.0) || !(c < 2.0 / spectrum.lambda_max)) {
        throw ParameterError("inadmissible coupling scalar: c = " + std::to_string(c) +
                             " must lie in (0, " + std::to_string(2.0 / spectrum.lambda_max) +
                             ")");
    }
    return c >= default_c(spectrum) ? CouplingCase::case_a : CouplingCase::case_b;
}

DesignCertificate synthesize(const DesignRequest& req) {
    validate_request(req);
    const GammaSpectrum spectrum = gamma_spectrum(req.network);
    const double c = req.c_override.value_or(default_c(spectrum));
    const CouplingCase case_tag = classify_c(c, spectrum);

    double coeff = 0.0;
    if (case_tag == CouplingCase::case_a) {
        const double lam = spectrum.lambda_max;
        coeff = c * c * lam * lam - 2.0 * c * lam;
    } else {
        const double lam_quad = spectrum.lambda_min;
        const double lam_lin = req.case_b_coefficient == CaseBCoefficient::theorem3 &&
                                       spectrum.all_eigenvalues.size() > 1
                                   ? spectrum.all_eigenvalues[1]
                                   : spectrum.lambda_min;
        coeff = c * c * lam_quad * lam_quad - 2.0 * c * lam_lin;
    }
    if (!(coeff < 0.0)) {
        throw ParameterError("coupling scalar produces a nonnegative design coefficient");
    }

    AreProblem prob;
    prob.a = req.agent.a;
    prob.b = req.agent.b;
    prob.r_bar = (1.0 / -coeff) * req.cost.r;
    prob.q_bar = spectrum.lambda_max * req.cost.q +
                 req.epsilon * Matrix::identity(req.agent.a.rows());
    const AreSolution sol = solve_are(prob);

    DesignCertificate cert;
    cert.c = c;
    cert.epsilon = req.epsilon;
    cert.case_tag = case_tag;
    cert.p = sol.p;
    cert.k = -c * solve_linear(req.cost.r, req.agent.b.transpose() * sol.p);
    const double lambda_max_p = sym_eigen(sol.p).eigenvalues.back();
    cert.admissible_radius = std::sqrt(req.cost.gamma / lambda_max_p);
    cert.requested_radius_ok = req.cost.radius < cert.admissible_radius;
    return cert;
}

VerificationReport verify_certificate(const DesignCertificate& cert, const DesignRequest& req) {
    const std::size_t n = req.agent.a.rows();
    if (!cert.p.is_square() || cert.p.rows() != n) {
        throw DimensionError("certificate p must match the agent state dimension");
    }
    if (cert.k.rows() != req.agent.b.cols() || cert.k.cols() != n) {
        throw DimensionError("certificate k must be " + std::to_string(req.agent.b.cols()) +
                             "x" + std::to_string(n));
    }
    const GammaSpectrum spectrum = gamma_spectrum(req.network);

    VerificationReport report;
    bool all_modes = true;
    for (double lam : spectrum.all_eigenvalues) {
        const Matrix a_mode = req.agent.a + lam * (req.agent.b * cert.k);
        ModeCheck check;
        check.lambda = lam;
        check.hurwitz = is_hurwitz(a_mode);
        const Matrix m = (a_mode.transpose() * cert.p + cert.p * a_mode + lam * req.cost.q +
                          lam * lam * (cert.k.transpose() * req.cost.r * cert.k))
                             .symmetrized();
        check.inequality_holds = is_positive_definite(-m);
        all_modes = all_modes && check.hurwitz && check.inequality_holds;
        report.modes.push_back(check);
    }
    const double bound = req.cost.gamma / (req.cost.radius * req.cost.radius);
    report.radius_ok = is_positive_definite(bound * Matrix::identity(n) - cert.p);
    report.pass = all_modes && report.radius_ok;
    return report;
}

InitialConditionCheck check_initial_condition(const DesignCertificate& cert, const Matrix& x0,
                                              const Matrix& xr0, double gamma) {
    const std::size_t n = cert.p.rows();
    if (xr0.rows() != n || xr0.cols() != 1) {
        throw DimensionError("leader initial state must be " + std::to_string(n) + "x1");
    }
    if (x0.cols() != 1 || x0.rows() == 0 || x0.rows() % n != 0) {
        throw DimensionError("stacked follower initial state must be (n*N)x1 with n = " +
                             std::to_string(n));
    }
    const std::size_t followers = x0.rows() / n;

    InitialConditionCheck check;
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < followers; ++i) {
        Matrix e(n, 1);
        for (std::size_t j = 0; j < n; ++j) {
            e(j, 0) = x0(i * n + j, 0) - xr0(j, 0);
        }
        check.quadratic_form += (e.transpose() * cert.p * e)(0, 0);
        norm_sq += (e.transpose() * e)(0, 0);
    }
    check.error_norm = std::sqrt(norm_sq);
    check.passed = check.quadratic_form < gamma;
    check.within_radius = check.error_norm <= cert.admissible_radius;
    return check;
}

} // namespace lqtrack
