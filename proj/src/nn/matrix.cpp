#include <rgnn/nn/matrix.hpp>

#include <rgnn/core/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace rgnn::nn {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw DimensionError("matrix data size does not match shape");
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::column(std::span<const double> values) {
    return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw DimensionError("matrix add: " + shape(*this) + " vs " + shape(other));
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw DimensionError("matmul: " + shape(a) + " * " + shape(b));
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto o = out.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            auto br = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j) o[j] += aik * br[j];
        }
    }
    return out;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) throw DimensionError("matmul_tn: " + shape(a) + "^T * " + shape(b));
    Matrix out(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        auto ar = a.row(k);
        auto br = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = ar[i];
            if (aki == 0.0) continue;
            auto o = out.row(i);
            for (std::size_t j = 0; j < b.cols(); ++j) o[j] += aki * br[j];
        }
    }
    return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw DimensionError("matmul_nt: " + shape(a) + " * " + shape(b) + "^T");
    Matrix out(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ar = a.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            auto br = b.row(j);
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += ar[k] * br[k];
            out(i, j) = s;
        }
    }
    return out;
}

void matvec_acc(const Matrix& m, std::span<const double> x, std::span<double> acc) {
    if (m.cols() != x.size() || m.rows() != acc.size())
        throw DimensionError("matvec: " + shape(m) + " * " + std::to_string(x.size()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        double s = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * x[k];
        acc[i] += s;
    }
}

void matvec_t_acc(const Matrix& m, std::span<const double> y, std::span<double> acc) {
    if (m.rows() != y.size() || m.cols() != acc.size())
        throw DimensionError("matvec_t: " + shape(m) + "^T * " + std::to_string(y.size()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double yi = y[i];
        if (yi == 0.0) continue;
        auto r = m.row(i);
        for (std::size_t k = 0; k < r.size(); ++k) acc[k] += yi * r[k];
    }
}

Vector matvec(const Matrix& m, std::span<const double> x) {
    Vector out(m.rows(), 0.0);
    matvec_acc(m, x, out);
    return out;
}

Vector matvec_t(const Matrix& m, std::span<const double> y) {
    Vector out(m.cols(), 0.0);
    matvec_t_acc(m, y, out);
    return out;
}

void add_outer(Matrix& acc, std::span<const double> y, std::span<const double> x) {
    if (acc.rows() != y.size() || acc.cols() != x.size())
        throw DimensionError("add_outer: " + shape(acc) + " vs " + std::to_string(y.size()) + "x" +
                             std::to_string(x.size()));
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double yi = y[i];
        if (yi == 0.0) continue;
        auto r = acc.row(i);
        for (std::size_t k = 0; k < x.size(); ++k) r[k] += yi * x[k];
    }
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("max_abs_diff: " + shape(a) + " vs " + shape(b));
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

bool all_finite(const Matrix& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](double v) { return std::isfinite(v); });
}

}  // namespace rgnn::nn
