#include "lqtrack/graph.hpp"

#include <queue>
#include <string>
#include <utility>

#include "lqtrack/errors.hpp"

namespace lqtrack {

namespace {

void validate_adjacency(const Matrix& adj) {
    if (adj.rows() == 0) {
        throw NetworkError("adjacency: at least one follower is required");
    }
    if (!adj.is_square()) {
        throw NetworkError("adjacency: expected a square matrix, got " +
                           std::to_string(adj.rows()) + "x" + std::to_string(adj.cols()));
    }
    const std::size_t n = adj.rows();
    for (std::size_t i = 0; i < n; ++i) {
        if (adj(i, i) != 0.0) {
            throw NetworkError("adjacency: diagonal entry (" + std::to_string(i + 1) + "," +
                               std::to_string(i + 1) + ") must be 0, self-loops are not allowed");
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double v = adj(i, j);
            if (v != 0.0 && v != 1.0) {
                throw NetworkError("adjacency: entry (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ") is " + std::to_string(v) +
                                   ", only 0 and 1 are allowed");
            }
            if (v != adj(j, i)) {
                throw NetworkError("adjacency: entries (" + std::to_string(i + 1) + "," +
                                   std::to_string(j + 1) + ") and (" + std::to_string(j + 1) +
                                   "," + std::to_string(i + 1) +
                                   ") differ, the graph must be undirected");
            }
        }
    }
}

void validate_connected(const Matrix& adj) {
    const std::size_t n = adj.rows();
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const std::size_t i = frontier.front();
        frontier.pop();
        for (std::size_t j = 0; j < n; ++j) {
            if (adj(i, j) == 1.0 && !seen[j]) {
                seen[j] = true;
                ++reached;
                frontier.push(j);
            }
        }
    }
    if (reached != n) {
        throw NetworkError("adjacency: graph is not connected, only " + std::to_string(reached) +
                           " of " + std::to_string(n) + " followers are reachable from follower 1");
    }
}

void validate_gains(const std::vector<double>& gains, std::size_t n) {
    if (gains.size() != n) {
        throw NetworkError("pinning_gains: expected " + std::to_string(n) + " entries, got " +
                           std::to_string(gains.size()));
    }
    bool any_positive = false;
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (gains[i] < 0.0) {
            throw NetworkError("pinning_gains: entry " + std::to_string(i + 1) + " is " +
                               std::to_string(gains[i]) + ", gains must be nonnegative");
        }
        any_positive = any_positive || gains[i] > 0.0;
    }
    if (!any_positive) {
        throw NetworkError(
            "pinning_gains: at least one follower must be pinned with a positive gain");
    }
}

} // namespace

NetworkSpec::NetworkSpec(Matrix adjacency, std::vector<double> pinning_gains)
    : adjacency_(std::move(adjacency)), pinning_gains_(std::move(pinning_gains)) {
    validate_adjacency(adjacency_);
    validate_connected(adjacency_);
    validate_gains(pinning_gains_, adjacency_.rows());
}

Matrix laplacian(const NetworkSpec& spec) {
    const Matrix& adj = spec.adjacency();
    const std::size_t n = spec.n_followers();
    Matrix lap = -adj;
    for (std::size_t i = 0; i < n; ++i) {
        double degree = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            degree += adj(i, j);
        }
        lap(i, i) = degree;
    }
    return lap;
}

GammaSpectrum gamma_spectrum(const NetworkSpec& spec) {
    GammaSpectrum result;
    result.gamma = laplacian(spec) + Matrix::diagonal(spec.pinning_gains());
    const SymmetricEigenResult eig = sym_eigen(result.gamma);
    result.all_eigenvalues = eig.eigenvalues;
    result.diagonalizer = eig.eigenvectors;
    result.lambda_min = eig.eigenvalues.front();
    result.lambda_max = eig.eigenvalues.back();
    if (result.lambda_min <= 0.0) {
        throw Error("gamma_spectrum: coupling matrix is not positive definite "
                    "(lambda_min = " + std::to_string(result.lambda_min) +
                    "), which contradicts the network invariants");
    }
    return result;
}

} // namespace lqtrack
