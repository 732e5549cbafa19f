#pragma once

// Small dense linear algebra. Dimensions here are the particle dimension d,
// which stays tiny, so everything is row-major std::vector storage and
// straightforward O(d^3) loops.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace elastica {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> diag);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    [[nodiscard]] std::span<double> data() noexcept { return data_; }

    [[nodiscard]] Matrix transpose() const;
    [[nodiscard]] double max_abs() const noexcept;
    [[nodiscard]] double trace() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s) noexcept;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);

/// Frobenius inner product sum_ij a_ij b_ij.
double frobenius_dot(const Matrix& a, const Matrix& b);

/// Square matrix that is exactly symmetric. The invariant is checked on
/// construction; use symmetrize() to build one from a general matrix.
class SymMatrix {
public:
    explicit SymMatrix(Matrix m);
    SymMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static SymMatrix symmetrize(const Matrix& m);
    static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }
    static SymMatrix zeros(std::size_t n) { return SymMatrix(Matrix(n, n)); }
    static SymMatrix diagonal(std::span<const double> diag) { return SymMatrix(Matrix::diagonal(diag)); }

    [[nodiscard]] std::size_t dim() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    Matrix m_;
};

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
SymMatrix operator*(double s, const SymMatrix& a);

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column k is the eigenvector for values[k]
};

/// Cyclic Jacobi eigensolver. Throws EigenError if the sweeps do not converge.
EigenDecomposition sym_eigen(const SymMatrix& m);

/// Solves m * X = rhs for symmetric positive definite m.
/// Throws SingularGramError when lambda_min <= 1e-12 * lambda_max.
Matrix sym_solve(const SymMatrix& m, const Matrix& rhs);

/// lambda_max / lambda_min, +inf if lambda_min <= 0.
double condition_number(const EigenDecomposition& eig);

/// Largest absolute eigenvalue.
double spectral_norm(const SymMatrix& m);

}  // namespace elastica
