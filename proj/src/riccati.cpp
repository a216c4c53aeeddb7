#include "lqtrack/riccati.hpp"

#include <string>

#include "lqtrack/errors.hpp"

namespace lqtrack {

namespace {

void require_input_pair(const Matrix& a, const Matrix& b, const char* what) {
    if (!a.is_square()) {
        throw DimensionError(std::string(what) + ": drift matrix must be square");
    }
    if (b.rows() != a.rows()) {
        throw DimensionError(std::string(what) + ": input map has " +
                             std::to_string(b.rows()) + " rows but the drift matrix is " +
                             std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
}

bool is_positive_semidefinite(const Matrix& m) {
    const auto eig = sym_eigen(m);
    return eig.eigenvalues.front() >= -1e-9 * (1.0 + m.max_norm());
}

} // namespace

Matrix bass_initial_gain(const Matrix& a, const Matrix& b) {
    require_input_pair(a, b, "bass_initial_gain");
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    if (is_hurwitz(a)) {
        return Matrix(m, n);
    }

    const Matrix gram_rhs = 2.0 * (b * b.transpose());
    double beta = a.frobenius_norm() + 1.0;
    for (int attempt = 0; attempt < 10; ++attempt, beta *= 2.0) {
        const Matrix shifted = -(a + beta * Matrix::identity(n));
        Matrix x;
        try {
            // solve_lyapunov works on the transposed coefficient, so passing
            // shifted^T solves shifted*X + X*shifted^T + 2bb^T = 0.
            x = solve_lyapunov(shifted.transpose(), gram_rhs);
        } catch (const ResonantSpectrumError&) {
            continue;
        }
        if (!is_positive_definite(x)) {
            continue;
        }
        Matrix k0;
        try {
            k0 = -(b.transpose() * inverse(x));
        } catch (const SingularMatrixError&) {
            continue;
        }
        if (is_hurwitz(a + b * k0)) {
            return k0;
        }
    }
    throw StabilizationError(
        "bass_initial_gain: stabilization failed after 10 shift retries; "
        "the pair is likely not stabilizable");
}

AreSolution solve_are(const AreProblem& prob) {
    require_input_pair(prob.a, prob.b, "solve_are");
    const std::size_t n = prob.a.rows();
    const std::size_t m = prob.b.cols();
    if (prob.r_bar.rows() != m || prob.r_bar.cols() != m) {
        throw DimensionError("solve_are: r_bar must be " + std::to_string(m) + "x" +
                             std::to_string(m));
    }
    if (prob.q_bar.rows() != n || prob.q_bar.cols() != n) {
        throw DimensionError("solve_are: q_bar must be " + std::to_string(n) + "x" +
                             std::to_string(n));
    }
    if (!prob.r_bar.is_symmetric() || !is_positive_definite(prob.r_bar)) {
        throw ParameterError("solve_are: r_bar must be symmetric positive definite");
    }
    if (!prob.q_bar.is_symmetric() || !is_positive_semidefinite(prob.q_bar)) {
        throw ParameterError("solve_are: q_bar must be symmetric positive semidefinite");
    }

    const Matrix bt = prob.b.transpose();
    Matrix k = bass_initial_gain(prob.a, prob.b);
    Matrix p;
    bool converged = false;
    int iterations = 0;
    Matrix prev_p;
    for (int iter = 1; iter <= 200; ++iter) {
        const Matrix a_cl = prob.a + prob.b * k;
        const Matrix weight = (prob.q_bar + k.transpose() * prob.r_bar * k).symmetrized();
        try {
            p = solve_lyapunov(a_cl, weight);
        } catch (const ResonantSpectrumError&) {
            throw ConvergenceError("solve_are: iterate " + std::to_string(iter) +
                                   " lost closed-loop stability");
        }
        if (!is_positive_definite(p)) {
            throw ConvergenceError("solve_are: indefinite iterate at step " +
                                   std::to_string(iter));
        }
        iterations = iter;
        if (iter > 1 && (p - prev_p).max_norm() <= 1e-12 * (1.0 + prev_p.max_norm())) {
            converged = true;
            break;
        }
        prev_p = p;
        k = -solve_linear(prob.r_bar, bt * p);
    }
    if (!converged) {
        throw ConvergenceError("solve_are: no convergence within 200 iterations");
    }

    const Matrix gain_term = prob.b * solve_linear(prob.r_bar, bt * p);
    const Matrix residual =
        prob.a.transpose() * p + p * prob.a - p * gain_term + prob.q_bar;
    AreSolution solution{p, residual.max_norm(), iterations};
    if (solution.residual_norm > 1e-9 * (1.0 + prob.q_bar.max_norm())) {
        throw ConvergenceError("solve_are: converged iterate misses the residual bound, "
                               "residual max-norm " + std::to_string(solution.residual_norm));
    }
    if (!is_hurwitz(prob.a - gain_term)) {
        throw ConvergenceError("solve_are: solution is not stabilizing");
    }
    return solution;
}

Matrix riccati_inequality_residual(const Matrix& p, const Matrix& a, const Matrix& b,
                                   const Matrix& r, const Matrix& q, double coeff,
                                   double lambda_q) {
    require_input_pair(a, b, "riccati_inequality_residual");
    if (!p.is_square() || p.rows() != a.rows()) {
        throw DimensionError("riccati_inequality_residual: p must match the drift dimension");
    }
    if (!p.is_symmetric()) {
        throw SymmetryError("riccati_inequality_residual: p must be symmetric");
    }
    if (!q.is_square() || q.rows() != a.rows()) {
        throw DimensionError("riccati_inequality_residual: q must match the drift dimension");
    }
    if (!r.is_square() || r.rows() != b.cols()) {
        throw DimensionError("riccati_inequality_residual: r must be " +
                             std::to_string(b.cols()) + "x" + std::to_string(b.cols()));
    }
    const Matrix bt_p = b.transpose() * p;
    const Matrix quadratic = p * b * solve_linear(r, bt_p);
    const Matrix m = a.transpose() * p + p * a + coeff * quadratic + lambda_q * q;
    return m.symmetrized();
}

} // namespace lqtrack
