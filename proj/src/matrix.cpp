#include "lqtrack/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lqtrack/errors.hpp"

namespace lqtrack {

namespace {

std::string shape_of(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const Matrix& m, const char* what) {
    if (!m.is_square()) {
        throw DimensionError(std::string(what) + " requires a square matrix, got " + shape_of(m));
    }
}

void require_symmetric(const Matrix& m, const char* what) {
    require_square(m, what);
    if (!m.is_symmetric()) {
        throw SymmetryError(std::string(what) + " requires a symmetric matrix");
    }
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) {
            throw DimensionError("matrix literal has rows of unequal length");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& entries) {
    Matrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, i) = entries[i];
    }
    return m;
}

Matrix Matrix::column(const std::vector<double>& entries) {
    Matrix m(entries.size(), 1);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        m(i, 0) = entries[i];
    }
    return m;
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols);
}

Matrix Matrix::ones(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    std::fill(m.data_.begin(), m.data_.end(), 1.0);
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix Matrix::symmetrized() const {
    require_square(*this, "symmetrized");
    Matrix s(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            s(i, j) = 0.5 * ((*this)(i, j) + (*this)(j, i));
        }
    }
    return s;
}

double Matrix::max_norm() const {
    double m = 0.0;
    for (double v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) {
        s += v * v;
    }
    return std::sqrt(s);
}

bool Matrix::is_symmetric() const {
    if (!is_square()) {
        return false;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = i + 1; j < cols_; ++j) {
            worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
        }
    }
    return worst <= 1e-9 * (1.0 + max_norm());
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("cannot add " + shape_of(*this) + " and " + shape_of(other));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw DimensionError("cannot subtract " + shape_of(other) + " from " + shape_of(*this));
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator*=(double scalar) {
    for (double& v : data_) {
        v *= scalar;
    }
    return *this;
}

Matrix Matrix::operator-() const {
    Matrix m = *this;
    return m *= -1.0;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw DimensionError("cannot multiply " + shape_of(*this) + " by " + shape_of(rhs));
    }
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double lik = (*this)(i, k);
            if (lik == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                out(i, j) += lik * rhs(k, j);
            }
        }
    }
    return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) {
                continue;
            }
            for (std::size_t p = 0; p < b.rows(); ++p) {
                for (std::size_t q = 0; q < b.cols(); ++q) {
                    out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
                }
            }
        }
    }
    return out;
}

Matrix solve_linear(const Matrix& a, const Matrix& rhs) {
    require_square(a, "solve_linear");
    if (a.rows() != rhs.rows()) {
        throw DimensionError("solve_linear: matrix is " + shape_of(a) +
                             " but right-hand side has " + std::to_string(rhs.rows()) + " rows");
    }
    const std::size_t n = a.rows();
    Matrix lu = a;
    Matrix x = rhs;
    const double pivot_tol = 1e-12 * (1.0 + a.max_norm());

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot_row = k;
        double pivot_mag = std::abs(lu(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > pivot_mag) {
                pivot_mag = std::abs(lu(i, k));
                pivot_row = i;
            }
        }
        if (pivot_mag <= pivot_tol) {
            throw SingularMatrixError("solve_linear: pivot " + std::to_string(pivot_mag) +
                                      " at column " + std::to_string(k) + " below tolerance");
        }
        if (pivot_row != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(k, j), lu(pivot_row, j));
            }
            for (std::size_t j = 0; j < x.cols(); ++j) {
                std::swap(x(k, j), x(pivot_row, j));
            }
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double factor = lu(i, k) / lu(k, k);
            lu(i, k) = 0.0;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                lu(i, j) -= factor * lu(k, j);
            }
            for (std::size_t j = 0; j < x.cols(); ++j) {
                x(i, j) -= factor * x(k, j);
            }
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double s = x(k, j);
            for (std::size_t i = k + 1; i < n; ++i) {
                s -= lu(k, i) * x(i, j);
            }
            x(k, j) = s / lu(k, k);
        }
    }
    return x;
}

Matrix inverse(const Matrix& a) {
    require_square(a, "inverse");
    return solve_linear(a, Matrix::identity(a.rows()));
}

namespace {

double off_diagonal_norm(const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (i != j) {
                s += m(i, j) * m(i, j);
            }
        }
    }
    return std::sqrt(s);
}

} // namespace

SymmetricEigenResult sym_eigen(const Matrix& m) {
    require_symmetric(m, "sym_eigen");
    const std::size_t n = m.rows();
    Matrix a = m.symmetrized();
    Matrix v = Matrix::identity(n);
    const double goal = 1e-12 * m.frobenius_norm();
    const int max_sweeps = 100;

    int sweep = 0;
    while (off_diagonal_norm(a) > goal) {
        if (++sweep > max_sweeps) {
            throw ConvergenceError("sym_eigen: no convergence after " +
                                   std::to_string(max_sweeps) + " sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r == p || r == q) {
                        continue;
                    }
                    const double arp = a(r, p);
                    const double arq = a(r, q);
                    a(r, p) = a(p, r) = arp - s * (arq + tau * arp);
                    a(r, q) = a(q, r) = arq + s * (arp - tau * arq);
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    SymmetricEigenResult result;
    result.eigenvalues.resize(n);
    result.eigenvectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        result.eigenvalues[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) {
            result.eigenvectors(i, j) = v(i, order[j]);
        }
    }
    return result;
}

namespace {

// Kronecker-vectorization solve without the accuracy gate; shared by
// solve_lyapunov and the witness-based Hurwitz test.
Matrix lyapunov_candidate(const Matrix& a, const Matrix& q) {
    const std::size_t n = a.rows();
    const Matrix at = a.transpose();
    const Matrix eye = Matrix::identity(n);
    const Matrix system = kron(eye, at) + kron(at, eye);

    // Column-major stacking so the Kronecker identities above apply directly.
    Matrix rhs(n * n, 1);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            rhs(j * n + i, 0) = -q(i, j);
        }
    }

    Matrix vec;
    try {
        vec = solve_linear(system, rhs);
    } catch (const SingularMatrixError&) {
        throw ResonantSpectrumError(
            "solve_lyapunov: singular Kronecker sum, an eigenvalue pair of the "
            "coefficient sums to zero");
    }

    Matrix x(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            x(i, j) = vec(j * n + i, 0);
        }
    }
    if (!x.all_finite()) {
        throw ResonantSpectrumError(
            "solve_lyapunov: non-finite solution, coefficient spectrum is at or "
            "near resonance");
    }
    return x.symmetrized();
}

} // namespace

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
    require_square(a, "solve_lyapunov");
    require_symmetric(q, "solve_lyapunov right-hand side");
    if (a.rows() != q.rows()) {
        throw DimensionError("solve_lyapunov: coefficient is " + shape_of(a) +
                             " but right-hand side is " + shape_of(q));
    }
    const Matrix x = lyapunov_candidate(a, q);
    const Matrix residual = a.transpose() * x + x * a + q;
    if (residual.max_norm() > 1e-9 * (1.0 + q.max_norm())) {
        throw ResonantSpectrumError(
            "solve_lyapunov: solution residual exceeds tolerance, coefficient "
            "spectrum is at or near resonance");
    }
    return x;
}

bool is_positive_definite(const Matrix& m) {
    require_symmetric(m, "is_positive_definite");
    const std::size_t n = m.rows();
    const double pivot_tol = 1e-12 * (1.0 + m.max_norm());
    Matrix chol(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= chol(j, k) * chol(j, k);
        }
        if (!(d > pivot_tol)) {
            return false;
        }
        chol(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= chol(i, k) * chol(j, k);
            }
            chol(i, j) = s / chol(j, j);
        }
    }
    return true;
}

bool is_hurwitz(const Matrix& a) {
    require_square(a, "is_hurwitz");
    // Stability is invariant under positive scaling; normalizing keeps the
    // Lyapunov solve well-conditioned for large gain matrices.
    const double scale = a.max_norm();
    if (scale == 0.0) {
        return false;
    }
    const Matrix scaled = (1.0 / scale) * a;
    Matrix x;
    try {
        x = lyapunov_candidate(scaled, Matrix::identity(a.rows()));
    } catch (const ResonantSpectrumError&) {
        // An eigenvalue pair summing to zero is impossible for a Hurwitz matrix.
        return false;
    }
    if (!is_positive_definite(x)) {
        return false;
    }
    // The computed x certifies stability on its own when it satisfies the
    // strict Lyapunov inequality, even if the equation residual is sloppy for
    // badly non-normal inputs.
    const Matrix witness = -(scaled.transpose() * x + x * scaled).symmetrized();
    return is_positive_definite(witness);
}

} // namespace lqtrack
