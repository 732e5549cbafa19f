#include "elastica/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "elastica/errors.hpp"

namespace elastica {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ValidationError("matrix shape mismatch: " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw ValidationError("ragged matrix initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
    Matrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) {
        m(i, i) = diag[i];
    }
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

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double Matrix::trace() const {
    if (!square()) {
        throw ValidationError("trace of a non-square matrix");
    }
    double t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ValidationError("matrix product shape mismatch");
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

double frobenius_dot(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b);
    return std::inner_product(a.data().begin(), a.data().end(), b.data().begin(), 0.0);
}

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
    if (!m_.square() || m_.rows() == 0) {
        throw ValidationError("symmetric matrix must be square with dim >= 1");
    }
    for (std::size_t i = 0; i < m_.rows(); ++i) {
        for (std::size_t j = i + 1; j < m_.cols(); ++j) {
            if (m_(i, j) != m_(j, i)) {
                throw ValidationError("matrix is not symmetric at entry [" + std::to_string(i) + "][" +
                                      std::to_string(j) + "]");
            }
        }
    }
}

SymMatrix::SymMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : SymMatrix(Matrix(rows)) {}

SymMatrix SymMatrix::symmetrize(const Matrix& m) {
    if (!m.square()) {
        throw ValidationError("cannot symmetrize a non-square matrix");
    }
    Matrix s(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        s(i, i) = m(i, i);
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double v = 0.5 * (m(i, j) + m(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return SymMatrix(std::move(s));
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.matrix() + b.matrix()); }
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) { return SymMatrix(a.matrix() - b.matrix()); }
SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.matrix()); }

EigenDecomposition sym_eigen(const SymMatrix& sym) {
    const std::size_t n = sym.dim();
    Matrix a = sym.matrix();
    Matrix v = Matrix::identity(n);

    constexpr int kMaxSweeps = 100;
    const double scale = a.max_abs();
    bool converged = (n == 1 || scale == 0.0);

    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a(p, q) * a(p, q);
            }
        }
        if (std::sqrt(off) <= std::numeric_limits<double>::epsilon() * 1e-2 * scale) {
            converged = true;
            break;
        }

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double tiny = 100.0 * std::abs(apq);
                if (std::abs(a(p, p)) + tiny == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + tiny == std::abs(a(q, q))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                // Rutishauser's stable rotation.
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
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off = std::max(off, std::abs(a(p, q)));
            }
        }
        // A residual at rounding level after the sweep budget is still usable.
        if (off > 1e-14 * scale) {
            throw EigenError("Jacobi eigensolver did not converge (dim " + std::to_string(n) +
                             ", residual off-diagonal " + std::to_string(off) + ")");
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

    EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

double condition_number(const EigenDecomposition& eig) {
    const double hi = eig.values.front();
    const double lo = eig.values.back();
    if (lo <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return hi / lo;
}

double spectral_norm(const SymMatrix& m) {
    const auto eig = sym_eigen(m);
    return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

Matrix sym_solve(const SymMatrix& m, const Matrix& rhs) {
    const std::size_t n = m.dim();
    if (rhs.rows() != n) {
        throw ValidationError("sym_solve: rhs has " + std::to_string(rhs.rows()) + " rows, expected " +
                              std::to_string(n));
    }
    const auto eig = sym_eigen(m);
    const double hi = eig.values.front();
    const double lo = eig.values.back();
    if (!(hi > 0.0) || lo <= 1e-12 * hi) {
        const double cond = condition_number(eig);
        throw SingularGramError("matrix is numerically singular (condition " + std::to_string(cond) + ")", cond);
    }

    // Cholesky factor L with m = L L^T.
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double diag = m(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            diag -= l(j, k) * l(j, k);
        }
        if (diag <= 0.0) {
            throw SingularGramError("Cholesky factorization broke down", condition_number(eig));
        }
        l(j, j) = std::sqrt(diag);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / l(j, j);
        }
    }

    Matrix x = rhs;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) {
                s -= l(i, k) * x(k, c);
            }
            x(i, c) = s / l(i, i);
        }
        for (std::size_t i = n; i-- > 0;) {
            double s = x(i, c);
            for (std::size_t k = i + 1; k < n; ++k) {
                s -= l(k, i) * x(k, c);
            }
            x(i, c) = s / l(i, i);
        }
    }
    return x;
}

}  // namespace elastica
