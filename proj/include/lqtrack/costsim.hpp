#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lqtrack/graph.hpp"
#include "lqtrack/matrix.hpp"
#include "lqtrack/model.hpp"

namespace lqtrack {

/// Networked error dynamics and cost weight, assembled from agent, graph and
/// gain: a_cl = I_N(x)A + Gamma(x)BK, q_cl = Gamma(x)Q + Gamma^2(x)K^T R K.
struct ClosedLoop {
    Matrix a_cl;
    Matrix q_cl;
    std::size_t state_dim = 0;
    std::size_t n_agents = 0;
};

/// Fixed-step simulation output. Each sample stacks the leader state followed
/// by the follower states; running_cost accumulates the quadrature of the
/// tracking cost integrand up to that time.
struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<double> running_cost;
    std::size_t state_dim = 0;
    std::size_t n_agents = 0;
};

ClosedLoop build_closed_loop(const AgentModel& agent, const NetworkSpec& network, const Matrix& q,
                             const Matrix& r, const Matrix& k);

/// Exact infinite-horizon cost e0^T X e0 with X the Lyapunov solution for
/// (a_cl, q_cl). Throws UnstableClosedLoopError when a_cl is not Hurwitz,
/// since the integral is infinite in that case.
double exact_cost(const ClosedLoop& cl, const Matrix& e0);

/// Splits the exact cost across the decoupled spectral modes of the coupling
/// matrix. The returned costs sum to exact_cost(cl, e0).
std::vector<double> mode_decompose(const ClosedLoop& cl, const GammaSpectrum& spectrum,
                                   const Matrix& e0);

/// Stacked control vector produced by the per-agent diffusive law
/// u_i = K sum_j a_ij (x_i - x_j) + K g_i (x_i - x_r).
Matrix stacked_control(const NetworkSpec& network, const Matrix& k, const Matrix& followers,
                       const Matrix& leader);

/// Integrates leader and followers jointly with classical RK4 in original
/// coordinates, applying the per-agent control law at every stage and
/// accumulating the cost integrand on the same grid. Throws DivergenceError
/// when the state stops being finite.
Trajectory simulate(const AgentModel& agent, const NetworkSpec& network, const Matrix& q,
                    const Matrix& r, const Matrix& k, const Matrix& x0, const Matrix& xr0,
                    double t_final = 30.0, double dt = 1e-3);

/// Largest follower-to-leader error norm at one sample.
double max_follower_error(const Trajectory& traj, std::size_t sample);

/// True when every follower is within tol of the leader at the final sample
/// and the worst follower error has not grown since the midpoint.
bool consensus_reached(const Trajectory& traj, double tol);

/// CSV rendering: header t,xr_1..xr_n,x1_1..,xN_n,running_cost, one row per
/// sample, 15 significant digits.
std::string trajectory_csv(const Trajectory& traj);
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

} // namespace lqtrack
