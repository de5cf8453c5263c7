#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "data.hpp"
#include "tensor.hpp"

namespace voltcast {

// --- ponderation --------------------------------------------------------

// Affine aggregation of I station signals into F_v "electrical weather"
// channels for one variable.
struct PonderationLayer {
  Tensor weights;  // F_v x I
  Tensor bias;     // F_v
  std::size_t variable_index = 0;

  std::size_t n_stations() const { return weights.dim(1); }
  std::size_t n_outputs() const { return weights.dim(0); }
};

struct PonderationGradients {
  Tensor weights;
  Tensor bias;
  Tensor input;
};

PonderationLayer init_ponderation(std::size_t i, std::size_t f_v, std::uint64_t seed);

// output[b,h,f] = sum_i weights[f,i] * input[b,h,i] + bias[f]
Tensor ponderation_forward(const PonderationLayer& layer, const Tensor& input);

PonderationGradients ponderation_backward(const PonderationLayer& layer, const Tensor& input,
                                          const Tensor& upstream);

// Affine parameters that reproduce, in min-max scaled space, the raw-space
// aggregation with the given simplex weights.
struct ScaledAggregation {
  Tensor weights;  // I
  double bias = 0.0;
};

ScaledAggregation scaled_aggregation_params(const Tensor& raw_weights, const ScalerParams& scaler,
                                            std::size_t v);

// --- exponential smoothing ---------------------------------------------

// Lower-triangular (n+1)x(n+1) matrix with entries alpha^(i-j) on and below
// the diagonal.
Tensor build_smoothing_matrix(double alpha, std::size_t n);

// Exponential smoothing with a sigmoid-confined coefficient per channel and a
// carry that threads the recursion across batch boundaries.
class ExpSmoothingLayer {
 public:
  ExpSmoothingLayer() = default;
  explicit ExpSmoothingLayer(std::size_t channels, double raw_alpha_init = 0.0);

  std::size_t channels() const { return raw_alpha_.size(); }
  double alpha(std::size_t c) const;          // sigmoid(raw_alpha)
  double raw_alpha(std::size_t c) const { return raw_alpha_[c]; }
  void set_raw_alpha(std::size_t c, double v) { raw_alpha_[c] = v; }
  std::vector<double>& raw_alpha_values() { return raw_alpha_; }
  const std::vector<double>& raw_alpha_values() const { return raw_alpha_; }

  double carry(std::size_t c) const { return carry_[c]; }
  void set_carry(std::size_t c, double value);
  bool carry_initialized(std::size_t c) const { return carry_init_[c]; }
  // Forgets the carry; the next forward warm-starts from its first value.
  void reset_state();

  // input B x H x C, batches in chronological order. Builds the smoothing
  // matrix for n = B*H, multiplies the augmented vector [carry | (1-a)x] and
  // drops the first output entry. Updates the carry.
  Tensor forward(const Tensor& input);

  // Gradients for the most recent forward call (same input).
  struct Gradients {
    Tensor raw_alpha;  // C
    Tensor input;      // B x H x C
  };
  Gradients backward(const Tensor& input, const Tensor& upstream) const;

 private:
  std::vector<double> raw_alpha_;
  std::vector<double> carry_;
  std::vector<bool> carry_init_;
  std::vector<double> carry_in_;  // carry used by the last forward, per channel
  bool forward_ran_ = false;
};

Tensor es_forward(ExpSmoothingLayer& layer, const Tensor& input);
ExpSmoothingLayer::Gradients es_backward(const ExpSmoothingLayer& layer, const Tensor& input,
                                         const Tensor& upstream);

// --- recurrent smoothing -----------------------------------------------

enum class CellKind { kVanilla, kLstm, kGru };
enum class Activation { kIdentity, kTanh, kRelu };

std::string to_string(CellKind kind);
CellKind cell_kind_from_string(const std::string& name);

struct EsRnnWeights {
  Tensor w1;  // H x H
  Tensor w2;  // H x H
  Tensor b1;  // H
  Tensor b2;  // H
};

// Weight matrices that make a vanilla cell with identity activation
// reproduce exponential smoothing at coefficient alpha.
EsRnnWeights construct_es_rnn_weights(double alpha, std::size_t h);

// Day-recurrent smoothing cell over H-dimensional day rows. Weights are
// shared across the C smoothed channels; hidden state is kept per channel
// and advances once per day.
class RecurrentSmoothingLayer {
 public:
  RecurrentSmoothingLayer() = default;
  RecurrentSmoothingLayer(CellKind kind, std::size_t h, std::size_t channels,
                          Activation activation, std::uint64_t seed);

  CellKind kind() const { return kind_; }
  std::size_t h() const { return h_; }
  std::size_t channels() const { return channels_; }
  std::size_t gates() const;

  Tensor& input_weights() { return w1_; }      // (gates*H) x H
  Tensor& recurrent_weights() { return w2_; }  // (gates*H) x H
  Tensor& bias1() { return b1_; }
  Tensor& bias2() { return b2_; }
  const Tensor& input_weights() const { return w1_; }
  const Tensor& recurrent_weights() const { return w2_; }
  const Tensor& bias1() const { return b1_; }
  const Tensor& bias2() const { return b2_; }

  void set_hidden(std::size_t c, const std::vector<double>& value);
  const std::vector<double>& hidden(std::size_t c) const { return hidden_[c]; }
  void reset_state();

  // input B x H x C, chronological; hidden advances once per day row.
  Tensor forward(const Tensor& input);

  struct Gradients {
    Tensor w1, w2, b1, b2;
    Tensor input;  // B x H x C
  };
  Gradients backward(const Tensor& input, const Tensor& upstream) const;

 private:
  CellKind kind_ = CellKind::kVanilla;
  Activation activation_ = Activation::kIdentity;
  std::size_t h_ = 0;
  std::size_t channels_ = 0;
  Tensor w1_, w2_, b1_, b2_;
  std::vector<std::vector<double>> hidden_;   // per channel, H
  std::vector<std::vector<double>> cell_;     // per channel, H (LSTM only)
  std::vector<std::vector<double>> hidden_in_;  // state before the last forward
  std::vector<std::vector<double>> cell_in_;
  bool forward_ran_ = false;
};

Tensor recurrent_forward(RecurrentSmoothingLayer& layer, const Tensor& input);
RecurrentSmoothingLayer::Gradients recurrent_backward(const RecurrentSmoothingLayer& layer,
                                                      const Tensor& input,
                                                      const Tensor& upstream);

double sigmoid(double x);
double apply_activation(Activation a, double x);
double activation_grad(Activation a, double pre, double post);
Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

}  // namespace voltcast
