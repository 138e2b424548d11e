#include "visolve/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "visolve/errors.hpp"

namespace visolve {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                             " vs " + std::to_string(b) + ")");
    }
}

} // namespace

Vector::Vector(std::vector<double> entries) : data_(std::move(entries)) {
    if (data_.empty()) {
        throw DimensionError("Vector: length must be at least 1");
    }
    if (!all_finite()) {
        throw std::invalid_argument("Vector: entries must be finite");
    }
}

Vector::Vector(std::initializer_list<double> entries) : Vector(std::vector<double>(entries)) {}

Vector Vector::zeros(std::size_t n) { return filled(n, 0.0); }

Vector Vector::filled(std::size_t n, double value) { return Vector(std::vector<double>(n, value)); }

Vector Vector::unit(std::size_t n, std::size_t i) {
    if (i >= n) {
        throw DimensionError("Vector::unit: index out of range");
    }
    Vector e = zeros(n);
    e[i] = 1.0;
    return e;
}

bool Vector::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Vector& Vector::operator+=(const Vector& other) {
    require_same_size(size(), other.size(), "Vector +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    require_same_size(size(), other.size(), "Vector -=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Vector& Vector::operator*=(double alpha) noexcept {
    for (double& v : data_) v *= alpha;
    return *this;
}

Vector operator+(Vector x, const Vector& y) { return x += y; }
Vector operator-(Vector x, const Vector& y) { return x -= y; }
Vector operator*(double alpha, Vector x) { return x *= alpha; }
Vector operator*(Vector x, double alpha) { return x *= alpha; }

Vector operator-(const Vector& x) {
    std::vector<double> out(x.data_);
    for (double& v : out) v = -v;
    return Vector(Vector::Unchecked{}, std::move(out));
}

double inner(const Vector& x, const Vector& y) {
    require_same_size(x.size(), y.size(), "inner");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const Vector& x) noexcept {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double norm_inf(const Vector& x) noexcept {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// ---------------------------------------------------------------------------

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0 || data_.size() != rows * cols) {
        throw DimensionError("Matrix: data size does not match shape");
    }
    for (double v : data_) {
        if (!std::isfinite(v)) throw std::invalid_argument("Matrix: entries must be finite");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    for (const auto& r : rows) {
        if (r.size() != cols_) throw DimensionError("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    if (rows_ == 0 || cols_ == 0) throw DimensionError("Matrix: empty initializer");
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols, std::vector<double>(rows * cols, 0.0));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m = zeros(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vector& d) {
    Matrix m = zeros(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Vector Matrix::operator*(const Vector& x) const {
    require_same_size(cols_, x.size(), "Matrix * Vector");
    Vector out = Vector::zeros(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        const double* row = &data_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) s += row[j] * x[j];
        out[i] = s;
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix t = zeros(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::abs() const {
    Matrix a = *this;
    for (double& v : a.data_) v = std::abs(v);
    return a;
}

double Matrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

double Matrix::frobenius_norm() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

bool Matrix::is_symmetric(double relative_tol) const noexcept {
    if (!square()) return false;
    const double tol = relative_tol * max_abs();
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
    return true;
}

// ---------------------------------------------------------------------------

NormContext NormContext::identity(std::size_t n) {
    if (n == 0) throw DimensionError("NormContext: dimension must be at least 1");
    return NormContext(Kind::identity, n);
}

NormContext NormContext::diagonal(Vector d) {
    for (double v : d) {
        if (!(v > 0.0)) throw ConfigError("NormContext: diagonal entries must be strictly positive");
    }
    NormContext ctx(Kind::diagonal, d.size());
    ctx.diag_ = d.entries();
    return ctx;
}

NormContext NormContext::dense(Matrix b) {
    if (!b.square()) throw ConfigError("NormContext: dense B must be square");
    if (!b.is_symmetric(1e-12)) throw ConfigError("NormContext: dense B must be symmetric");
    const std::size_t n = b.rows();
    // Cholesky on the symmetrized matrix; any non-positive pivot means B is not SPD.
    std::vector<double> l(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = b(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (!(d > 0.0) || !std::isfinite(d)) {
            throw ConfigError("NormContext: dense B is not positive definite (Cholesky failed)");
        }
        const double ljj = std::sqrt(d);
        l[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = 0.5 * (b(i, j) + b(j, i));
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / ljj;
        }
    }
    NormContext ctx(Kind::dense, n);
    ctx.dense_ = b.data();
    ctx.cholesky_ = std::move(l);
    return ctx;
}

std::string_view NormContext::kind_name() const noexcept {
    switch (kind_) {
    case Kind::identity: return "identity";
    case Kind::diagonal: return "diagonal";
    case Kind::dense: return "dense";
    }
    return "unknown";
}

void NormContext::check_dim(const Vector& x) const { require_same_size(n_, x.size(), "NormContext"); }

Vector NormContext::apply(const Vector& x) const {
    check_dim(x);
    Vector out = x;
    switch (kind_) {
    case Kind::identity: break;
    case Kind::diagonal:
        for (std::size_t i = 0; i < n_; ++i) out[i] = diag_[i] * x[i];
        break;
    case Kind::dense:
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += dense_[i * n_ + j] * x[j];
            out[i] = s;
        }
        break;
    }
    return out;
}

Vector NormContext::apply_inv(const Vector& s) const {
    check_dim(s);
    Vector out = s;
    switch (kind_) {
    case Kind::identity: break;
    case Kind::diagonal:
        for (std::size_t i = 0; i < n_; ++i) out[i] = s[i] / diag_[i];
        break;
    case Kind::dense:
        // L z = s, then L^T x = z.
        for (std::size_t i = 0; i < n_; ++i) {
            double v = out[i];
            for (std::size_t k = 0; k < i; ++k) v -= cholesky_[i * n_ + k] * out[k];
            out[i] = v / cholesky_[i * n_ + i];
        }
        for (std::size_t ii = n_; ii-- > 0;) {
            double v = out[ii];
            for (std::size_t k = ii + 1; k < n_; ++k) v -= cholesky_[k * n_ + ii] * out[k];
            out[ii] = v / cholesky_[ii * n_ + ii];
        }
        break;
    }
    return out;
}

double NormContext::inner(const Vector& x, const Vector& y) const {
    check_dim(y);
    return visolve::inner(apply(x), y);
}

double NormContext::norm(const Vector& x) const { return std::sqrt(std::max(0.0, inner(x, x))); }

double NormContext::dual_norm(const Vector& s) const {
    return std::sqrt(std::max(0.0, visolve::inner(s, apply_inv(s))));
}

Vector NormContext::diagonal_entries() const {
    switch (kind_) {
    case Kind::identity: return Vector::filled(n_, 1.0);
    case Kind::diagonal: return Vector(diag_);
    case Kind::dense: {
        Vector d = Vector::zeros(n_);
        for (std::size_t i = 0; i < n_; ++i) d[i] = dense_[i * n_ + i];
        return d;
    }
    }
    return Vector::filled(n_, 1.0);
}

Matrix NormContext::matrix() const {
    if (kind_ == Kind::dense) return Matrix(n_, n_, dense_);
    return Matrix::diagonal(diagonal_entries());
}

double norm_b(const NormContext& ctx, const Vector& x) { return ctx.norm(x); }
double dual_norm_b(const NormContext& ctx, const Vector& s) { return ctx.dual_norm(s); }
Vector apply_b_inv(const NormContext& ctx, const Vector& s) { return ctx.apply_inv(s); }

} // namespace visolve
