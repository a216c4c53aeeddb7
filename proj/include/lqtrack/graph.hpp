#pragma once

#include <vector>

#include "lqtrack/matrix.hpp"

namespace lqtrack {

/// Follower communication graph plus leader pinning gains.
///
/// Construction validates the whole structural contract up front: the graph
/// must be simple (symmetric 0/1 adjacency, zero diagonal), connected, and
/// at least one pinning gain must be strictly positive. Everything downstream
/// relies on these properties, so an invalid network never gets past here.
class NetworkSpec {
public:
    NetworkSpec(Matrix adjacency, std::vector<double> pinning_gains);

    std::size_t n_followers() const { return adjacency_.rows(); }
    const Matrix& adjacency() const { return adjacency_; }
    const std::vector<double>& pinning_gains() const { return pinning_gains_; }

private:
    Matrix adjacency_;
    std::vector<double> pinning_gains_;
};

/// Graph Laplacian: degree matrix minus adjacency. Symmetric PSD with rows
/// summing to zero.
Matrix laplacian(const NetworkSpec& spec);

/// Coupling matrix (Laplacian plus pinning diagonal) with its eigen data.
/// Positive definite for every valid NetworkSpec, so lambda_min > 0.
struct GammaSpectrum {
    Matrix gamma;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    /// Orthogonal matrix whose columns diagonalize gamma, eigenvalue order.
    Matrix diagonalizer;
    /// Ascending eigenvalues.
    std::vector<double> all_eigenvalues;
};

/// Eigen-analyzes the coupling matrix. Throws Error if the spectrum fails to
/// be strictly positive, which would contradict the NetworkSpec invariants.
GammaSpectrum gamma_spectrum(const NetworkSpec& spec);

} // namespace lqtrack
