#include "tdsmc/matnum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "tdsmc/errors.hpp"

namespace tdsmc {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
    }
}

void require_square(const Matrix& m, const char* op) {
    if (!m.is_square()) {
        throw DimensionError(std::string(op) + ": expected square matrix, got " + shape(m));
    }
}

void require_finite(const Matrix& m, const char* op) {
    if (!m.all_finite()) {
        throw DomainError(std::string(op) + ": non-finite entry");
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw DimensionError("Matrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("Matrix: " + std::to_string(data_.size()) + " entries for " +
                             std::to_string(rows_) + "x" + std::to_string(cols_));
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::column(std::span<const double> v) {
    return Matrix(v.size(), 1, Vector(v.begin(), v.end()));
}

Matrix Matrix::row(std::span<const double> v) {
    return Matrix(1, v.size(), Vector(v.begin(), v.end()));
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += rhs.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    require_same_shape(*this, rhs, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= rhs.data_[i];
    }
    return *this;
}

Matrix& Matrix::operator*=(double k) noexcept {
    for (double& v : data_) {
        v *= k;
    }
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(double k, Matrix m) { return m *= k; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw DimensionError("operator*: inner dimension mismatch " + shape(lhs) + " * " + shape(rhs));
    }
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const double a = lhs(i, k);
            if (a == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < rhs.cols(); ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

Vector operator*(const Matrix& m, std::span<const double> v) {
    if (m.cols() != v.size()) {
        throw DimensionError("matrix-vector: " + shape(m) + " * " + std::to_string(v.size()));
    }
    Vector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            acc += m(i, j) * v[j];
        }
        out[i] = acc;
    }
    return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
    if (top.cols() != bottom.cols()) {
        throw DimensionError("vstack: column mismatch " + shape(top) + " / " + shape(bottom));
    }
    Vector data(top.data().begin(), top.data().end());
    data.insert(data.end(), bottom.data().begin(), bottom.data().end());
    return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(data));
}

Matrix hstack(const Matrix& left, const Matrix& right) {
    if (left.rows() != right.rows()) {
        throw DimensionError("hstack: row mismatch " + shape(left) + " | " + shape(right));
    }
    Matrix out(left.rows(), left.cols() + right.cols());
    for (std::size_t r = 0; r < left.rows(); ++r) {
        for (std::size_t c = 0; c < left.cols(); ++c) {
            out(r, c) = left(r, c);
        }
        for (std::size_t c = 0; c < right.cols(); ++c) {
            out(r, left.cols() + c) = right(r, c);
        }
    }
    return out;
}

Vector add(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("add: length mismatch");
    }
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] + b[i];
    }
    return out;
}

Vector sub(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("sub: length mismatch");
    }
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = a[i] - b[i];
    }
    return out;
}

Vector scaled(std::span<const double> a, double k) {
    Vector out(a.begin(), a.end());
    for (double& v : out) {
        v *= k;
    }
    return out;
}

void axpy(double k, std::span<const double> x, std::span<double> y) {
    if (x.size() != y.size()) {
        throw DimensionError("axpy: length mismatch");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] += k * x[i];
    }
}

Vector concat(std::span<const double> a, std::span<const double> b) {
    Vector out(a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

double norm2(std::span<const double> v) noexcept {
    double scale = 0.0;
    for (double x : v) {
        scale = std::max(scale, std::abs(x));
    }
    if (scale == 0.0 || !std::isfinite(scale)) {
        return scale;
    }
    double acc = 0.0;
    for (double x : v) {
        const double r = x / scale;
        acc += r * r;
    }
    return scale * std::sqrt(acc);
}

double norm_inf(std::span<const double> v) noexcept {
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

bool all_finite(std::span<const double> v) noexcept {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double frobenius_norm(const Matrix& m) noexcept { return norm2(m.data()); }

double max_abs(const Matrix& m) noexcept { return norm_inf(m.data()); }

Vector symmetric_eigenvalues(const Matrix& sym) {
    require_square(sym, "symmetric_eigenvalues");
    require_finite(sym, "symmetric_eigenvalues");
    const std::size_t n = sym.rows();
    Matrix a = sym;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = avg;
            a(j, i) = avg;
        }
    }

    // Cyclic Jacobi sweeps until the off-diagonal mass is negligible.
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                off += a(i, j) * a(i, j);
            }
        }
        if (off <= 1e-300 || std::sqrt(off) <= 1e-15 * frobenius_norm(a)) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }

    Vector eig(n);
    for (std::size_t i = 0; i < n; ++i) {
        eig[i] = a(i, i);
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

double spectral_norm(const Matrix& m) {
    if (m.empty()) {
        return 0.0;
    }
    require_finite(m, "spectral_norm");
    // Work with the smaller Gram matrix.
    const Matrix gram = m.rows() < m.cols() ? m * m.transpose() : m.transpose() * m;
    const Vector eig = symmetric_eigenvalues(gram);
    return std::sqrt(std::max(0.0, eig.back()));
}

Matrix solve(const Matrix& a, const Matrix& b) {
    require_square(a, "solve");
    if (a.rows() != b.rows()) {
        throw DimensionError("solve: rhs has " + std::to_string(b.rows()) + " rows, expected " +
                             std::to_string(a.rows()));
    }
    require_finite(a, "solve");
    require_finite(b, "solve");
    const std::size_t n = a.rows();
    const std::size_t m = b.cols();
    Matrix lu = a;
    Matrix x = b;
    const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) {
                pivot = r;
            }
        }
        if (std::abs(lu(pivot, col)) <= 1e-13 * scale) {
            throw SingularError("solve: matrix is singular to working precision");
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(lu(col, c), lu(pivot, c));
            }
            for (std::size_t c = 0; c < m; ++c) {
                std::swap(x(col, c), x(pivot, c));
            }
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = lu(r, col) / lu(col, col);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t c = col; c < n; ++c) {
                lu(r, c) -= f * lu(col, c);
            }
            for (std::size_t c = 0; c < m; ++c) {
                x(r, c) -= f * x(col, c);
            }
        }
    }

    for (std::size_t ri = n; ri-- > 0;) {
        for (std::size_t c = 0; c < m; ++c) {
            double acc = x(ri, c);
            for (std::size_t k = ri + 1; k < n; ++k) {
                acc -= lu(ri, k) * x(k, c);
            }
            x(ri, c) = acc / lu(ri, ri);
        }
    }
    return x;
}

Matrix inverse(const Matrix& a) {
    require_square(a, "inverse");
    return solve(a, Matrix::identity(a.rows()));
}

std::size_t rank(const Matrix& m, double rel_tol) {
    Matrix r = m;
    const double tol = rel_tol * std::max(max_abs(m), std::numeric_limits<double>::min());
    std::size_t rk = 0;
    for (std::size_t col = 0; col < r.cols() && rk < r.rows(); ++col) {
        std::size_t pivot = rk;
        for (std::size_t i = rk + 1; i < r.rows(); ++i) {
            if (std::abs(r(i, col)) > std::abs(r(pivot, col))) {
                pivot = i;
            }
        }
        if (std::abs(r(pivot, col)) <= tol) {
            continue;
        }
        for (std::size_t c = 0; c < r.cols(); ++c) {
            std::swap(r(rk, c), r(pivot, c));
        }
        for (std::size_t i = rk + 1; i < r.rows(); ++i) {
            const double f = r(i, col) / r(rk, col);
            for (std::size_t c = col; c < r.cols(); ++c) {
                r(i, c) -= f * r(rk, c);
            }
        }
        ++rk;
    }
    return rk;
}

bool is_positive_definite(const Matrix& sym) {
    require_square(sym, "is_positive_definite");
    const std::size_t n = sym.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = sym(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0.0)) {
            return false;
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = 0.5 * (sym(i, j) + sym(j, i));
            for (std::size_t k = 0; k < j; ++k) {
                acc -= l(i, k) * l(j, k);
            }
            l(i, j) = acc / l(j, j);
        }
    }
    return true;
}

Vector characteristic_polynomial(const Matrix& m) {
    require_square(m, "characteristic_polynomial");
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{k-1} I, c_k = -tr(A M_k) / k.
    const std::size_t n = m.rows();
    Vector coeffs(n + 1, 0.0);
    coeffs[0] = 1.0;
    Matrix mk(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk + coeffs[k - 1] * Matrix::identity(n);
        const Matrix amk = m * mk;
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            tr += amk(i, i);
        }
        coeffs[k] = -tr / static_cast<double>(k);
    }
    return coeffs;
}

Matrix mat_exp(const Matrix& m, double t) {
    require_square(m, "mat_exp");
    require_finite(m, "mat_exp");
    if (!std::isfinite(t)) {
        throw DomainError("mat_exp: non-finite time");
    }
    const std::size_t n = m.rows();
    Matrix a = t * m;

    // Scale so the series argument has norm <= 1/2.
    const double norm = frobenius_norm(a);
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
        a *= std::ldexp(1.0, -squarings);
    }

    Matrix sum = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    for (int k = 1; k < 60; ++k) {
        term = (1.0 / k) * (term * a);
        sum += term;
        if (frobenius_norm(term) <= 1e-16 * frobenius_norm(sum)) {
            break;
        }
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

Matrix solve_lyapunov(const Matrix& abar22) {
    require_square(abar22, "solve_lyapunov");
    require_finite(abar22, "solve_lyapunov");
    const std::size_t n = abar22.rows();
    const std::size_t nn = n * n;

    // Row-major vec: (P A)_{ij} = sum_k P_ik A_kj, (A^T P)_{ij} = sum_k A_ki P_kj.
    Matrix k(nn, nn);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t row = i * n + j;
            for (std::size_t q = 0; q < n; ++q) {
                k(row, i * n + q) += abar22(q, j);
                k(row, q * n + j) += abar22(q, i);
            }
        }
    }
    Matrix rhs(nn, 1);
    for (std::size_t i = 0; i < n; ++i) {
        rhs(i * n + i, 0) = -1.0;
    }

    Matrix vec_p;
    try {
        vec_p = solve(k, rhs);
    } catch (const SingularError&) {
        throw InfeasibleError("solve_lyapunov: Lyapunov operator is singular (matrix is not Hurwitz)");
    }

    Matrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            p(i, j) = 0.5 * (vec_p(i * n + j, 0) + vec_p(j * n + i, 0));
        }
    }
    if (!is_positive_definite(p)) {
        throw InfeasibleError("solve_lyapunov: solution is not positive definite (matrix is not Hurwitz)");
    }
    return p;
}

Matrix pseudo_inverse(const Matrix& b1) {
    if (b1.empty()) {
        throw DimensionError("pseudo_inverse: empty matrix");
    }
    require_finite(b1, "pseudo_inverse");
    if (rank(b1) < b1.cols()) {
        throw SingularError("pseudo_inverse: matrix " + shape(b1) + " lacks full column rank");
    }
    const Matrix bt = b1.transpose();
    return solve(bt * b1, bt);
}

Matrix controllability_matrix(const Matrix& a, const Matrix& b) {
    require_square(a, "controllability_matrix");
    if (a.rows() != b.rows()) {
        throw DimensionError("controllability_matrix: " + shape(a) + " vs " + shape(b));
    }
    Matrix out = b;
    Matrix block = b;
    for (std::size_t i = 1; i < a.rows(); ++i) {
        block = a * block;
        out = hstack(out, block);
    }
    return out;
}

}  // namespace tdsmc
