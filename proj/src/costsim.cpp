#include "lqtrack/costsim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "lqtrack/errors.hpp"

namespace lqtrack {

namespace {

void validate_system(const AgentModel& agent, const Matrix& q, const Matrix& r, const Matrix& k) {
    if (!agent.a.is_square() || agent.a.empty()) {
        throw DimensionError("agent dynamics matrix must be square and nonempty");
    }
    const std::size_t n = agent.a.rows();
    if (agent.b.rows() != n || agent.b.cols() == 0) {
        throw DimensionError("agent input matrix must have one row per state");
    }
    const std::size_t m = agent.b.cols();
    if (k.rows() != m || k.cols() != n) {
        throw DimensionError("feedback gain must be inputs x states");
    }
    if (q.rows() != n || q.cols() != n) {
        throw DimensionError("state weight must match the agent state dimension");
    }
    if (r.rows() != m || r.cols() != m) {
        throw DimensionError("input weight must match the agent input dimension");
    }
}

double quadratic_form(const Matrix& w, const double* v, std::size_t n) {
    double acc = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            row += w(a, b) * v[b];
        }
        acc += v[a] * row;
    }
    return acc;
}

// Joint leader-follower vector field in original coordinates, with the cost
// integrand evaluated on the same state. Layout: leader first, then followers.
class JointDynamics {
public:
    JointDynamics(const AgentModel& agent, const NetworkSpec& network, const Matrix& q,
                  const Matrix& r, const Matrix& k)
        : agent_(agent),
          network_(network),
          q_(q),
          r_(r),
          k_(k),
          n_(agent.a.rows()),
          m_(agent.b.cols()),
          n_agents_(network.n_followers()),
          diff_(n_),
          u_(m_) {}

    std::size_t dim() const { return n_ * (n_agents_ + 1); }

    void operator()(const std::vector<double>& z, std::vector<double>& dz, double& dcost) const {
        const auto& a = agent_.a;
        const auto& b = agent_.b;
        const auto& adj = network_.adjacency();
        const auto& gains = network_.pinning_gains();

        for (std::size_t row = 0; row < n_; ++row) {
            double acc = 0.0;
            for (std::size_t col = 0; col < n_; ++col) {
                acc += a(row, col) * z[col];
            }
            dz[row] = acc;
        }

        dcost = 0.0;
        for (std::size_t i = 0; i < n_agents_; ++i) {
            const double* xi = z.data() + n_ * (i + 1);

            for (std::size_t c = 0; c < n_; ++c) {
                diff_[c] = gains[i] * (xi[c] - z[c]);
            }
            for (std::size_t j = 0; j < n_agents_; ++j) {
                if (adj(i, j) == 0.0) continue;
                const double* xj = z.data() + n_ * (j + 1);
                for (std::size_t c = 0; c < n_; ++c) {
                    diff_[c] += xi[c] - xj[c];
                }
            }
            for (std::size_t row = 0; row < m_; ++row) {
                double acc = 0.0;
                for (std::size_t col = 0; col < n_; ++col) {
                    acc += k_(row, col) * diff_[col];
                }
                u_[row] = acc;
            }

            double* dxi = dz.data() + n_ * (i + 1);
            for (std::size_t row = 0; row < n_; ++row) {
                double acc = 0.0;
                for (std::size_t col = 0; col < n_; ++col) {
                    acc += a(row, col) * xi[col];
                }
                for (std::size_t col = 0; col < m_; ++col) {
                    acc += b(row, col) * u_[col];
                }
                dxi[row] = acc;
            }

            dcost += quadratic_form(r_, u_.data(), m_);
            for (std::size_t c = 0; c < n_; ++c) {
                diff_[c] = xi[c] - z[c];
            }
            dcost += gains[i] * quadratic_form(q_, diff_.data(), n_);
            for (std::size_t j = i + 1; j < n_agents_; ++j) {
                if (adj(i, j) == 0.0) continue;
                const double* xj = z.data() + n_ * (j + 1);
                for (std::size_t c = 0; c < n_; ++c) {
                    diff_[c] = xi[c] - xj[c];
                }
                dcost += quadratic_form(q_, diff_.data(), n_);
            }
        }
    }

private:
    const AgentModel& agent_;
    const NetworkSpec& network_;
    const Matrix& q_;
    const Matrix& r_;
    const Matrix& k_;
    std::size_t n_;
    std::size_t m_;
    std::size_t n_agents_;
    mutable std::vector<double> diff_;
    mutable std::vector<double> u_;
};

} // namespace

ClosedLoop build_closed_loop(const AgentModel& agent, const NetworkSpec& network, const Matrix& q,
                             const Matrix& r, const Matrix& k) {
    validate_system(agent, q, r, k);
    const std::size_t n_agents = network.n_followers();
    Matrix gamma = laplacian(network);
    for (std::size_t i = 0; i < n_agents; ++i) {
        gamma(i, i) += network.pinning_gains()[i];
    }
    ClosedLoop cl;
    cl.a_cl = kron(Matrix::identity(n_agents), agent.a) + kron(gamma, agent.b * k);
    cl.q_cl = (kron(gamma, q) + kron(gamma * gamma, k.transpose() * r * k)).symmetrized();
    cl.state_dim = agent.a.rows();
    cl.n_agents = n_agents;
    return cl;
}

double exact_cost(const ClosedLoop& cl, const Matrix& e0) {
    const std::size_t dim = cl.state_dim * cl.n_agents;
    if (e0.rows() != dim || e0.cols() != 1) {
        throw DimensionError("initial error must be a column of length state_dim * n_agents");
    }
    if (!is_hurwitz(cl.a_cl)) {
        throw UnstableClosedLoopError("closed loop is not Hurwitz: the tracking cost is infinite");
    }
    const Matrix x = solve_lyapunov(cl.a_cl, cl.q_cl);
    return (e0.transpose() * x * e0)(0, 0);
}

std::vector<double> mode_decompose(const ClosedLoop& cl, const GammaSpectrum& spectrum,
                                   const Matrix& e0) {
    const std::size_t n = cl.state_dim;
    if (spectrum.all_eigenvalues.size() != cl.n_agents) {
        throw DimensionError("spectrum does not match the closed-loop agent count");
    }
    if (e0.rows() != n * cl.n_agents || e0.cols() != 1) {
        throw DimensionError("initial error must be a column of length state_dim * n_agents");
    }
    if (!is_hurwitz(cl.a_cl)) {
        throw UnstableClosedLoopError("closed loop is not Hurwitz: the tracking cost is infinite");
    }

    const Matrix t = kron(spectrum.diagonalizer, Matrix::identity(n));
    const Matrix a_bar = t.transpose() * cl.a_cl * t;
    const Matrix q_bar = t.transpose() * cl.q_cl * t;
    const Matrix e_bar = t.transpose() * e0;

    std::vector<double> costs(cl.n_agents, 0.0);
    for (std::size_t mode = 0; mode < cl.n_agents; ++mode) {
        Matrix a_mode(n, n);
        Matrix q_mode(n, n);
        Matrix e_mode(n, 1);
        const std::size_t off = n * mode;
        for (std::size_t row = 0; row < n; ++row) {
            for (std::size_t col = 0; col < n; ++col) {
                a_mode(row, col) = a_bar(off + row, off + col);
                q_mode(row, col) = q_bar(off + row, off + col);
            }
            e_mode(row, 0) = e_bar(off + row, 0);
        }
        const Matrix x_mode = solve_lyapunov(a_mode, q_mode.symmetrized());
        costs[mode] = (e_mode.transpose() * x_mode * e_mode)(0, 0);
    }
    return costs;
}

Matrix stacked_control(const NetworkSpec& network, const Matrix& k, const Matrix& followers,
                       const Matrix& leader) {
    if (leader.cols() != 1 || leader.empty()) {
        throw DimensionError("leader state must be a nonempty column");
    }
    const std::size_t n = leader.rows();
    if (k.cols() != n || k.rows() == 0) {
        throw DimensionError("feedback gain must have one column per state");
    }
    const std::size_t n_agents = network.n_followers();
    if (followers.rows() != n * n_agents || followers.cols() != 1) {
        throw DimensionError("follower states must stack n_followers columns of the leader size");
    }

    const std::size_t m = k.rows();
    const auto& adj = network.adjacency();
    const auto& gains = network.pinning_gains();
    Matrix u(m * n_agents, 1);
    Matrix diff(n, 1);
    for (std::size_t i = 0; i < n_agents; ++i) {
        for (std::size_t c = 0; c < n; ++c) {
            diff(c, 0) = gains[i] * (followers(n * i + c, 0) - leader(c, 0));
        }
        for (std::size_t j = 0; j < n_agents; ++j) {
            if (adj(i, j) == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                diff(c, 0) += followers(n * i + c, 0) - followers(n * j + c, 0);
            }
        }
        for (std::size_t row = 0; row < m; ++row) {
            double acc = 0.0;
            for (std::size_t col = 0; col < n; ++col) {
                acc += k(row, col) * diff(col, 0);
            }
            u(m * i + row, 0) = acc;
        }
    }
    return u;
}

Trajectory simulate(const AgentModel& agent, const NetworkSpec& network, const Matrix& q,
                    const Matrix& r, const Matrix& k, const Matrix& x0, const Matrix& xr0,
                    double t_final, double dt) {
    validate_system(agent, q, r, k);
    const std::size_t n = agent.a.rows();
    const std::size_t n_agents = network.n_followers();
    if (xr0.rows() != n || xr0.cols() != 1) {
        throw DimensionError("leader initial state must be a column of the agent dimension");
    }
    if (x0.rows() != n * n_agents || x0.cols() != 1) {
        throw DimensionError("follower initial states must stack n_followers agent columns");
    }
    if (!(dt > 0.0)) {
        throw ParameterError("time step must be positive");
    }
    if (!(t_final >= dt)) {
        throw ParameterError("final time must be at least one time step");
    }

    const JointDynamics rhs(agent, network, q, r, k);
    const std::size_t dim = rhs.dim();
    const std::size_t steps = static_cast<std::size_t>(std::floor(t_final / dt + 1e-9));

    Trajectory traj;
    traj.state_dim = n;
    traj.n_agents = n_agents;
    traj.times.reserve(steps + 1);
    traj.states.reserve(steps + 1);
    traj.running_cost.reserve(steps + 1);

    std::vector<double> z(dim, 0.0);
    for (std::size_t c = 0; c < n; ++c) {
        z[c] = xr0(c, 0);
    }
    for (std::size_t c = 0; c < n * n_agents; ++c) {
        z[n + c] = x0(c, 0);
    }
    double cost = 0.0;

    traj.times.push_back(0.0);
    traj.states.push_back(z);
    traj.running_cost.push_back(cost);

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), stage(dim);
    double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0;
    for (std::size_t step = 1; step <= steps; ++step) {
        rhs(z, k1, c1);
        for (std::size_t a = 0; a < dim; ++a) stage[a] = z[a] + 0.5 * dt * k1[a];
        rhs(stage, k2, c2);
        for (std::size_t a = 0; a < dim; ++a) stage[a] = z[a] + 0.5 * dt * k2[a];
        rhs(stage, k3, c3);
        for (std::size_t a = 0; a < dim; ++a) stage[a] = z[a] + dt * k3[a];
        rhs(stage, k4, c4);
        for (std::size_t a = 0; a < dim; ++a) {
            z[a] += dt / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
        }
        cost += dt / 6.0 * (c1 + 2.0 * c2 + 2.0 * c3 + c4);

        const double t = static_cast<double>(step) * dt;
        for (std::size_t a = 0; a < dim; ++a) {
            if (!std::isfinite(z[a])) {
                char when[64];
                std::snprintf(when, sizeof when, "%.6g", t);
                throw DivergenceError(std::string("simulation diverged at t = ") + when + " s");
            }
        }
        traj.times.push_back(t);
        traj.states.push_back(z);
        traj.running_cost.push_back(cost);
    }
    return traj;
}

double max_follower_error(const Trajectory& traj, std::size_t sample) {
    const std::size_t n = traj.state_dim;
    const auto& z = traj.states[sample];
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.n_agents; ++i) {
        double sq = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
            const double d = z[n * (i + 1) + a] - z[a];
            sq += d * d;
        }
        worst = std::max(worst, std::sqrt(sq));
    }
    return worst;
}

bool consensus_reached(const Trajectory& traj, double tol) {
    if (traj.times.empty() || traj.states.empty()) {
        throw ParameterError("consensus check requires a nonempty trajectory");
    }
    const std::size_t last = traj.times.size() - 1;
    const double terminal = max_follower_error(traj, last);
    const double midpoint = max_follower_error(traj, last / 2);
    return terminal <= tol && terminal <= midpoint;
}

namespace {

void append_csv_row(std::string& out, const Trajectory& traj, std::size_t sample) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", traj.times[sample]);
    out += buf;
    for (const double v : traj.states[sample]) {
        std::snprintf(buf, sizeof buf, ",%.15g", v);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.15g", traj.running_cost[sample]);
    out += buf;
    out += '\n';
}

std::string csv_header(const Trajectory& traj) {
    std::string out = "t";
    for (std::size_t c = 1; c <= traj.state_dim; ++c) {
        out += ",xr_" + std::to_string(c);
    }
    for (std::size_t i = 1; i <= traj.n_agents; ++i) {
        for (std::size_t c = 1; c <= traj.state_dim; ++c) {
            out += ",x" + std::to_string(i) + "_" + std::to_string(c);
        }
    }
    out += ",running_cost\n";
    return out;
}

} // namespace

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = csv_header(traj);
    out.reserve(out.size() + traj.times.size() * (traj.states.front().size() + 2) * 20);
    for (std::size_t sample = 0; sample < traj.times.size(); ++sample) {
        append_csv_row(out, traj, sample);
    }
    return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("could not open trajectory output file: " + path);
    }
    out << csv_header(traj);
    std::string row;
    for (std::size_t sample = 0; sample < traj.times.size(); ++sample) {
        row.clear();
        append_csv_row(row, traj, sample);
        out << row;
    }
    if (!out) {
        throw Error("failed while writing trajectory CSV: " + path);
    }
}

} // namespace lqtrack
