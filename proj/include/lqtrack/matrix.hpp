#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace lqtrack {

/// Dense real matrix with row-major storage.
///
/// All toolkit matrices are small (a few hundred rows at most), so the
/// implementation favours clarity over blocking or vectorization tricks.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& entries);
    /// Column vector from its entries.
    static Matrix column(const std::vector<double>& entries);
    static Matrix zeros(std::size_t rows, std::size_t cols);
    static Matrix ones(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }
    bool is_square() const { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix transpose() const;
    /// (M + M^T) / 2; requires a square matrix.
    Matrix symmetrized() const;

    /// Largest absolute entry; 0 for an empty matrix.
    double max_norm() const;
    double frobenius_norm() const;

    /// True when ||M - M^T||_max <= 1e-9 * (1 + ||M||_max).
    bool is_symmetric() const;
    bool all_finite() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double scalar);

    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(Matrix m, double scalar) { return m *= scalar; }
    friend Matrix operator*(double scalar, Matrix m) { return m *= scalar; }
    Matrix operator-() const;
    Matrix operator*(const Matrix& rhs) const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols).
Matrix kron(const Matrix& a, const Matrix& b);

/// Solves a x = rhs by LU factorization with partial pivoting.
/// rhs may have any number of columns. Throws SingularMatrixError when a
/// pivot falls below the scaled threshold.
Matrix solve_linear(const Matrix& a, const Matrix& rhs);

/// Matrix inverse via solve_linear against the identity.
Matrix inverse(const Matrix& a);

/// Eigen decomposition of a symmetric matrix.
struct SymmetricEigenResult {
    /// Ascending eigenvalues.
    std::vector<double> eigenvalues;
    /// Orthonormal eigenvectors, one per column, matching eigenvalue order.
    Matrix eigenvectors;
};

/// Cyclic Jacobi eigensolver for symmetric matrices. Sweeps until the
/// off-diagonal Frobenius norm drops below 1e-12 * ||M||_F.
SymmetricEigenResult sym_eigen(const Matrix& m);

/// Solves a^T x + x a + q = 0 for symmetric q by vectorizing into the
/// Kronecker-sum system (I (x) a^T + a^T (x) I) vec(x) = -vec(q).
/// Throws ResonantSpectrumError when that system is singular, which happens
/// exactly when two eigenvalues of a sum to zero.
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// Cholesky-based test: true iff every pivot exceeds 1e-12 * (1 + ||m||_max).
bool is_positive_definite(const Matrix& m);

/// Stability test via the Lyapunov criterion: a is Hurwitz iff
/// a^T x + x a + I = 0 has a positive definite solution. A resonant
/// spectrum already rules out Hurwitz, so that case returns false.
bool is_hurwitz(const Matrix& a);

} // namespace lqtrack
