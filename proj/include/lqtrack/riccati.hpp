#pragma once

#include "lqtrack/matrix.hpp"

namespace lqtrack {

/// Data of the algebraic Riccati equation
///   a^T p + p a - p b r_bar^{-1} b^T p + q_bar = 0
/// with r_bar symmetric positive definite and q_bar symmetric PSD.
/// Stabilizability of (a, b) is established constructively: solve_are fails
/// with StabilizationError when no stabilizing initial gain can be built.
struct AreProblem {
    Matrix a;
    Matrix b;
    Matrix r_bar;
    Matrix q_bar;
};

/// Stabilizing Riccati solution.
struct AreSolution {
    /// Symmetric positive definite solution.
    Matrix p;
    /// Max-norm of the equation residual at p.
    double residual_norm = 0.0;
    /// Newton steps taken until stagnation.
    int iterations = 0;
};

/// Builds a gain k0 with a + b*k0 Hurwitz. Returns zero when a is already
/// Hurwitz; otherwise solves the shifted-Gramian Lyapunov equation
///   (-(a + beta*I)) X + X (-(a + beta*I))^T + 2 b b^T = 0,  beta = ||a||_F + 1,
/// and returns k0 = -b^T X^{-1}, doubling beta and retrying (up to 10 times)
/// whenever the result fails the Hurwitz check.
/// Throws StabilizationError when every retry fails, which signals a
/// non-stabilizable pair.
Matrix bass_initial_gain(const Matrix& a, const Matrix& b);

/// Newton iteration for the stabilizing solution: starting from a stabilizing
/// gain, repeatedly solves the closed-loop Lyapunov equation and refreshes
/// the gain until the iterates stagnate at 1e-12 relative (cap 200 steps).
/// The returned solution is positive definite, satisfies the equation to
/// 1e-9 relative, and makes a - b r_bar^{-1} b^T p Hurwitz; any violation
/// raises ConvergenceError.
AreSolution solve_are(const AreProblem& prob);

/// M = a^T p + p a + coeff * (p b r^{-1} b^T p) + lambda_q * q, symmetrized.
/// With gain k = -c r^{-1} b^T p and coeff = c^2 lambda^2 - 2 c lambda this
/// equals the per-mode certificate matrix
/// (a + lambda b k)^T p + p (a + lambda b k) + lambda q + lambda^2 k^T r k;
/// the caller certifies the strict inequality via is_positive_definite(-M).
Matrix riccati_inequality_residual(const Matrix& p, const Matrix& a, const Matrix& b,
                                   const Matrix& r, const Matrix& q, double coeff,
                                   double lambda_q);

} // namespace lqtrack
