#include "sieformer/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "sieformer/error.hpp"

namespace sieformer {

namespace {

[[noreturn]] void shape_error(const char* op, std::size_t ar, std::size_t ac,
                              std::size_t br, std::size_t bc) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s: incompatible shapes %zux%zu and %zux%zu",
                op, ar, ac, br, bc);
  throw DimensionError(buf);
}

}  // namespace

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

RealMatrix::RealMatrix(std::initializer_list<std::initializer_list<double>> init) {
  rows_ = init.size();
  cols_ = rows_ ? init.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& row : init) {
    if (row.size() != cols_) throw DimensionError("RealMatrix: ragged initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

RealMatrix RealMatrix::identity(std::size_t n) {
  RealMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, value_type fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = {1.0, 0.0};
  return m;
}

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  RealMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

RealMatrix transpose(const RealMatrix& a) {
  RealMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) shape_error("hadamard", a.rows(), a.cols(), b.rows(), b.cols());
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) shape_error("add", a.rows(), a.cols(), b.rows(), b.cols());
  RealMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) shape_error("sub", a.rows(), a.cols(), b.rows(), b.cols());
  RealMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

RealMatrix operator*(double s, const RealMatrix& a) {
  RealMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= s;
  return out;
}

RealMatrix& operator+=(RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) shape_error("add", a.rows(), a.cols(), b.rows(), b.cols());
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
  return a;
}

RealMatrix& operator-=(RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) shape_error("sub", a.rows(), a.cols(), b.rows(), b.cols());
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] -= b.data()[i];
  return a;
}

RealMatrix& operator*=(RealMatrix& a, double s) {
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] *= s;
  return a;
}

double frobenius_norm(const RealMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i] * a.data()[i];
  return std::sqrt(acc);
}

double max_abs(const RealMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a.data()[i]));
  return m;
}

double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  if (!a.same_shape(b)) shape_error("max_abs_diff", a.rows(), a.cols(), b.rows(), b.cols());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a.data()[i] - b.data()[i]));
  return m;
}

double sum(const RealMatrix& a) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a.data()[i];
  return acc;
}

bool all_finite(const RealMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i])) return false;
  return true;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) shape_error("matmul", a.rows(), a.cols(), b.rows(), b.cols());
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const std::complex<double> aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) shape_error("hadamard", a.rows(), a.cols(), b.rows(), b.cols());
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
  return out;
}

ComplexMatrix conjugate(const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = std::conj(out.data()[i]);
  return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) shape_error("add", a.rows(), a.cols(), b.rows(), b.cols());
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += b.data()[i];
  return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) shape_error("sub", a.rows(), a.cols(), b.rows(), b.cols());
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] -= b.data()[i];
  return out;
}

ComplexMatrix operator*(std::complex<double> s, const ComplexMatrix& a) {
  ComplexMatrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= s;
  return out;
}

ComplexMatrix& operator+=(ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) shape_error("add", a.rows(), a.cols(), b.rows(), b.cols());
  for (std::size_t i = 0; i < a.size(); ++i) a.data()[i] += b.data()[i];
  return a;
}

ComplexMatrix to_complex(const RealMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = {a.data()[i], 0.0};
  return out;
}

RealMatrix real_part(const ComplexMatrix& a) {
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i].real();
  return out;
}

RealMatrix imag_part(const ComplexMatrix& a) {
  RealMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i].imag();
  return out;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i]));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.same_shape(b)) shape_error("max_abs_diff", a.rows(), a.cols(), b.rows(), b.cols());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool all_finite(const ComplexMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!std::isfinite(a.data()[i].real()) || !std::isfinite(a.data()[i].imag()))
      return false;
  return true;
}

}  // namespace sieformer
