#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace visolve {

/// Dense real vector of fixed length n >= 1. Entries are finite when built
/// from user data; arithmetic results are not re-validated.
class Vector {
public:
    explicit Vector(std::vector<double> entries);
    Vector(std::initializer_list<double> entries);

    static Vector zeros(std::size_t n);
    static Vector filled(std::size_t n, double value);
    /// i-th standard basis vector.
    static Vector unit(std::size_t n, std::size_t i);

    std::size_t size() const noexcept { return data_.size(); }
    double operator[](std::size_t i) const noexcept { return data_[i]; }
    double& operator[](std::size_t i) noexcept { return data_[i]; }

    std::span<const double> span() const noexcept { return data_; }
    const std::vector<double>& entries() const noexcept { return data_; }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    bool all_finite() const noexcept;

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double alpha) noexcept;

    bool operator==(const Vector& other) const noexcept = default;

private:
    struct Unchecked {};
    Vector(Unchecked, std::vector<double> entries) : data_(std::move(entries)) {}

    std::vector<double> data_;

    friend Vector operator-(const Vector& x);
};

Vector operator+(Vector x, const Vector& y);
Vector operator-(Vector x, const Vector& y);
Vector operator-(const Vector& x);
Vector operator*(double alpha, Vector x);
Vector operator*(Vector x, double alpha);

/// Euclidean inner product. Throws DimensionError on length mismatch.
double inner(const Vector& x, const Vector& y);
/// Euclidean norm.
double norm2(const Vector& x) noexcept;
/// Largest absolute entry.
double norm_inf(const Vector& x) noexcept;

/// Row-major dense matrix.
class Matrix {
public:
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix zeros(std::size_t rows, std::size_t cols);
    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vector& d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }

    Vector operator*(const Vector& x) const;
    Matrix transpose() const;
    /// Entrywise |A|.
    Matrix abs() const;
    double max_abs() const noexcept;
    double frobenius_norm() const noexcept;

    /// Symmetric to within tol * max|entry|.
    bool is_symmetric(double relative_tol) const noexcept;

    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const Matrix& other) const noexcept = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// The positive definite operator B that defines the primal norm
/// <Bx, x>^{1/2} and the dual norm <s, B^{-1} s>^{1/2}.
///
/// Validation happens once at construction: diagonal entries must be
/// strictly positive, dense matrices symmetric (1e-12 relative) with a
/// successful Cholesky factorization. The factor is cached for solves.
class NormContext {
public:
    enum class Kind { identity, diagonal, dense };

    static NormContext identity(std::size_t n);
    static NormContext diagonal(Vector d);
    static NormContext dense(Matrix b);

    Kind kind() const noexcept { return kind_; }
    std::string_view kind_name() const noexcept;
    std::size_t dimension() const noexcept { return n_; }

    /// B x
    Vector apply(const Vector& x) const;
    /// B^{-1} s
    Vector apply_inv(const Vector& s) const;
    /// <B x, y>
    double inner(const Vector& x, const Vector& y) const;
    double norm(const Vector& x) const;
    double dual_norm(const Vector& s) const;

    /// Diagonal of B (all ones for identity, the stored entries for diagonal,
    /// the matrix diagonal for dense).
    Vector diagonal_entries() const;
    /// Dense B; materialized for identity and diagonal kinds.
    Matrix matrix() const;

private:
    NormContext(Kind kind, std::size_t n) : kind_(kind), n_(n) {}

    void check_dim(const Vector& x) const;

    Kind kind_;
    std::size_t n_;
    std::vector<double> diag_;
    std::vector<double> dense_;    // row-major B
    std::vector<double> cholesky_; // row-major lower factor, B = L L^T
};

double norm_b(const NormContext& ctx, const Vector& x);
double dual_norm_b(const NormContext& ctx, const Vector& s);
Vector apply_b_inv(const NormContext& ctx, const Vector& s);

} // namespace visolve
