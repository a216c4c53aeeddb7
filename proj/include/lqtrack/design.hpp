#pragma once

#include <optional>
#include <vector>

#include "lqtrack/graph.hpp"
#include "lqtrack/matrix.hpp"
#include "lqtrack/model.hpp"

namespace lqtrack {

/// Region of the admissible interval (0, 2/lambda_max) the coupling scalar
/// falls in. The two cases solve differently weighted design equations.
enum class CouplingCase { case_a, case_b };

/// Which linear-term eigenvalue weight the case_b design equation uses.
/// lemma3 pairs the quadratic and linear terms at lambda_min; theorem3 is the
/// alternative printed form that weights the linear term at the second
/// smallest eigenvalue. The readings disagree and theorem3 fails per-mode
/// verification on the bundled example, so lemma3 is the default; theorem3
/// stays selectable for comparison.
enum class CaseBCoefficient { lemma3, theorem3 };

/// Everything needed to synthesize a certified gain.
struct DesignRequest {
    AgentModel agent;
    NetworkSpec network;
    CostSpec cost;
    std::optional<double> c_override;
    double epsilon = 0.01;
    CaseBCoefficient case_b_coefficient = CaseBCoefficient::lemma3;
};

/// Result of a synthesis run: the certificate that downstream verification
/// and simulation consume.
struct DesignCertificate {
    double c = 0.0;
    double epsilon = 0.0;
    CouplingCase case_tag = CouplingCase::case_a;
    /// Symmetric positive definite certificate matrix.
    Matrix p;
    /// Feedback gain k = -c r^{-1} b^T p.
    Matrix k;
    /// Largest initial-error ball radius the certificate covers,
    /// sqrt(gamma / lambda_max(p)).
    double admissible_radius = 0.0;
    /// Whether the requested radius is strictly inside the admissible one.
    bool requested_radius_ok = false;
};

/// Per-mode certificate checks: closed-loop stability and strict negativity
/// of the mode inequality matrix.
struct ModeCheck {
    double lambda = 0.0;
    bool hurwitz = false;
    bool inequality_holds = false;
};

struct VerificationReport {
    std::vector<ModeCheck> modes;
    bool radius_ok = false;
    /// True only when every mode passes both checks and the radius holds.
    bool pass = false;
};

/// Initial-condition admissibility: the quadratic-form bound that certifies
/// the cost, plus the cruder ball bound it is implied by.
struct InitialConditionCheck {
    /// sum_i e_i0^T p e_i0.
    double quadratic_form = 0.0;
    /// quadratic_form < gamma.
    bool passed = false;
    /// Stacked initial error norm ||e0||.
    double error_norm = 0.0;
    /// error_norm <= admissible_radius.
    bool within_radius = false;
};

/// Coupling scalar 2/(lambda_min + lambda_max): the lower endpoint of the
/// case_a interval, where the solution of the design equation is smallest.
double default_c(const GammaSpectrum& spectrum);

/// case_a when 2/(lambda_min+lambda_max) <= c < 2/lambda_max, case_b when
/// 0 < c < 2/(lambda_min+lambda_max). Throws ParameterError outside
/// (0, 2/lambda_max).
CouplingCase classify_c(double c, const GammaSpectrum& spectrum);

/// Full pipeline: pick c, classify, build and solve the parameterized design
/// equation, form k = -c r^{-1} b^T p, and compute the admissible radius.
DesignCertificate synthesize(const DesignRequest& req);

/// Checks the certificate against the request: per mode i, stability of
/// a + lambda_i b k and strict negativity of
/// (a + lambda_i b k)^T p + p (a + lambda_i b k) + lambda_i q
/// + lambda_i^2 k^T r k, plus the radius condition p < (gamma/radius^2) I.
VerificationReport verify_certificate(const DesignCertificate& cert, const DesignRequest& req);

/// Evaluates sum_i (x_i0 - xr0)^T p (x_i0 - xr0) < gamma for stacked follower
/// initial states x0 and leader initial state xr0, and reports the stacked
/// error norm against the admissible radius.
InitialConditionCheck check_initial_condition(const DesignCertificate& cert, const Matrix& x0,
                                              const Matrix& xr0, double gamma);

} // namespace lqtrack
