#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace sieformer {

// Dense row-major matrix of doubles. All routines in this library work at
// desk scale (dimensions in the tens), so no blocking or vectorization
// tricks are attempted anywhere.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  RealMatrix(std::initializer_list<std::initializer_list<double>> init);

  static RealMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const RealMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const RealMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Dense row-major complex matrix; mirrors RealMatrix.
class ComplexMatrix {
 public:
  using value_type = std::complex<double>;

  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, value_type fill = {0.0, 0.0});

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const value_type& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  value_type* data() { return data_.data(); }
  const value_type* data() const { return data_.data(); }

  bool same_shape(const ComplexMatrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const ComplexMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<value_type> data_;
};

// --- real arithmetic -------------------------------------------------------

RealMatrix matmul(const RealMatrix& a, const RealMatrix& b);
RealMatrix transpose(const RealMatrix& a);
RealMatrix hadamard(const RealMatrix& a, const RealMatrix& b);

RealMatrix operator+(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);
RealMatrix operator*(double s, const RealMatrix& a);
RealMatrix& operator+=(RealMatrix& a, const RealMatrix& b);
RealMatrix& operator-=(RealMatrix& a, const RealMatrix& b);
RealMatrix& operator*=(RealMatrix& a, double s);

double frobenius_norm(const RealMatrix& a);
double max_abs(const RealMatrix& a);
double max_abs_diff(const RealMatrix& a, const RealMatrix& b);
double sum(const RealMatrix& a);
bool all_finite(const RealMatrix& a);

// --- complex arithmetic ----------------------------------------------------

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix transpose(const ComplexMatrix& a);
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix conjugate(const ComplexMatrix& a);

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(std::complex<double> s, const ComplexMatrix& a);
ComplexMatrix& operator+=(ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix to_complex(const RealMatrix& a);
RealMatrix real_part(const ComplexMatrix& a);
RealMatrix imag_part(const ComplexMatrix& a);

double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool all_finite(const ComplexMatrix& a);

}  // namespace sieformer
