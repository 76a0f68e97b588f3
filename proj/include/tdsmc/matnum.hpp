#pragma once

// Small dense linear algebra kernel. Everything here targets desk-scale
// problems (n <= ~10), so algorithms favour being easy to check over speed.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace tdsmc {

using Vector = std::vector<double>;

/**
 * @brief Dense row-major matrix of doubles with value semantics.
 *
 * A column vector is either a `Vector` or an n x 1 Matrix; the free functions
 * below accept both where it makes sense.
 */
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

    static Matrix identity(std::size_t n);
    static Matrix column(std::span<const double> v);
    static Matrix row(std::span<const double> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    /// Copy of the entries as a flat vector (row-major).
    Vector flat() const { return data_; }

    Matrix transpose() const;
    bool all_finite() const noexcept;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double k) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Matrix operator*(double k, Matrix m);
Vector operator*(const Matrix& m, std::span<const double> v);

/// [top; bottom]
Matrix vstack(const Matrix& top, const Matrix& bottom);
/// [left right]
Matrix hstack(const Matrix& left, const Matrix& right);

// Vector helpers.
Vector add(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);
Vector scaled(std::span<const double> a, double k);
/// y += k * x
void axpy(double k, std::span<const double> x, std::span<double> y);
Vector concat(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v) noexcept;
double norm_inf(std::span<const double> v) noexcept;
bool all_finite(std::span<const double> v) noexcept;

double frobenius_norm(const Matrix& m) noexcept;
double max_abs(const Matrix& m) noexcept;
/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Eigenvalues of a symmetric matrix (cyclic Jacobi), ascending.
Vector symmetric_eigenvalues(const Matrix& sym);

/// Solve A X = B by Gaussian elimination with partial pivoting.
Matrix solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);
/// Numerical rank via row echelon form with relative tolerance.
std::size_t rank(const Matrix& m, double rel_tol = 1e-10);
/// Cholesky succeeds with strictly positive pivots.
bool is_positive_definite(const Matrix& sym);

/// Characteristic polynomial coefficients [1, c1, ..., cn] of det(sI - M).
Vector characteristic_polynomial(const Matrix& m);

/// e^{M t} by scaling and squaring of a truncated Taylor series.
Matrix mat_exp(const Matrix& m, double t);

/// Solves P A + A^T P = -I; throws InfeasibleError unless the solution is
/// symmetric positive definite (i.e. A is Hurwitz).
Matrix solve_lyapunov(const Matrix& abar22);

/// Left inverse (B^T B)^{-1} B^T of a full column rank matrix.
Matrix pseudo_inverse(const Matrix& b1);

/// [B, AB, ..., A^{n-1}B]
Matrix controllability_matrix(const Matrix& a, const Matrix& b);

}  // namespace tdsmc
