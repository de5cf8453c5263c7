#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace voltcast {

// Dense row-major array of doubles, rank 1 to 4. Small on purpose: the
// numeric kernels in this project are explicit loops over known ranks.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);

  static Tensor zeros(std::vector<std::size_t> shape) { return Tensor(std::move(shape)); }
  static Tensor full(std::vector<std::size_t> shape, double value);
  static Tensor from(std::initializer_list<double> values);

  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t k) const { return shape_[k]; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  double& operator[](std::size_t flat) { return data_[flat]; }
  double operator[](std::size_t flat) const { return data_[flat]; }

  double& operator()(std::size_t i) { return data_[i]; }
  double operator()(std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * strides_[0] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * strides_[0] + j]; }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[i * strides_[0] + j * strides_[1] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[i * strides_[0] + j * strides_[1] + k];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return data_[i * strides_[0] + j * strides_[1] + k * strides_[2] + l];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[i * strides_[0] + j * strides_[1] + k * strides_[2] + l];
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::vector<double>& vec() { return data_; }
  const std::vector<double>& vec() const { return data_; }

  void fill(double value);
  bool all_finite() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<std::size_t> strides_;  // strides_[k] = product of dims after k
  std::vector<double> data_;
};

}  // namespace voltcast
