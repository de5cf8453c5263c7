#include "tensor.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace voltcast {

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  if (shape_.empty() || shape_.size() > 4) {
    throw ValidationError("tensor rank must be between 1 and 4");
  }
  std::size_t total = 1;
  for (std::size_t d : shape_) {
    if (d == 0) throw ValidationError("tensor dimensions must be positive");
    total *= d;
  }
  strides_.assign(shape_.size(), 1);
  for (std::size_t k = shape_.size(); k-- > 1;) {
    strides_[k - 1] = strides_[k] * shape_[k];
  }
  // operator() uses strides_[0..rank-2]; the last stride is always 1
  strides_.erase(strides_.end() - 1);
  data_.assign(total, 0.0);
}

Tensor Tensor::full(std::vector<std::size_t> shape, double value) {
  Tensor t(std::move(shape));
  t.fill(value);
  return t;
}

Tensor Tensor::from(std::initializer_list<double> values) {
  Tensor t({values.size()});
  std::copy(values.begin(), values.end(), t.data_.begin());
  return t;
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace voltcast
