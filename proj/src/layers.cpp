#include "layers.hpp"

#include <cmath>

#include "errors.hpp"
#include "rng.hpp"

namespace voltcast {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double apply_activation(Activation a, double x) {
  switch (a) {
    case Activation::kIdentity: return x;
    case Activation::kTanh: return std::tanh(x);
    case Activation::kRelu: return x > 0.0 ? x : 0.0;
  }
  return x;
}

double activation_grad(Activation a, double pre, double post) {
  switch (a) {
    case Activation::kIdentity: return 1.0;
    case Activation::kTanh: return 1.0 - post * post;
    case Activation::kRelu: return pre > 0.0 ? 1.0 : 0.0;
  }
  return 1.0;
}

Activation activation_from_string(const std::string& name) {
  if (name == "identity") return Activation::kIdentity;
  if (name == "tanh") return Activation::kTanh;
  if (name == "relu") return Activation::kRelu;
  throw ValidationError("unknown activation '" + name + "'");
}

std::string to_string(Activation a) {
  switch (a) {
    case Activation::kIdentity: return "identity";
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
  }
  return "identity";
}

std::string to_string(CellKind kind) {
  switch (kind) {
    case CellKind::kVanilla: return "vanilla_rnn";
    case CellKind::kLstm: return "lstm";
    case CellKind::kGru: return "gru";
  }
  return "vanilla_rnn";
}

CellKind cell_kind_from_string(const std::string& name) {
  if (name == "vanilla_rnn") return CellKind::kVanilla;
  if (name == "lstm") return CellKind::kLstm;
  if (name == "gru") return CellKind::kGru;
  throw ValidationError("unknown cell kind '" + name + "'");
}

// --- ponderation --------------------------------------------------------

PonderationLayer init_ponderation(std::size_t i, std::size_t f_v, std::uint64_t seed) {
  if (i < 1 || f_v < 1) throw ValidationError("init_ponderation: dims must be >= 1");
  PonderationLayer layer;
  layer.weights = Tensor({f_v, i});
  layer.bias = Tensor({f_v});
  Rng rng(seed);
  const double uniform = 1.0 / static_cast<double>(i);
  const double jitter = 0.01 * uniform;
  for (std::size_t f = 0; f < f_v; ++f) {
    for (std::size_t s = 0; s < i; ++s) {
      layer.weights(f, s) = uniform + rng.uniform(-jitter, jitter);
    }
  }
  return layer;
}

Tensor ponderation_forward(const PonderationLayer& layer, const Tensor& input) {
  if (input.rank() != 3 || input.dim(2) != layer.n_stations()) {
    throw ValidationError("ponderation_forward: input must be B x H x I");
  }
  const std::size_t b_n = input.dim(0), h_n = input.dim(1);
  const std::size_t i_n = layer.n_stations(), f_n = layer.n_outputs();
  Tensor out({b_n, h_n, f_n});
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      const double* x = &input(b, h, 0);
      for (std::size_t f = 0; f < f_n; ++f) {
        double acc = layer.bias(f);
        const double* w = &layer.weights(f, 0);
        for (std::size_t i = 0; i < i_n; ++i) acc += w[i] * x[i];
        out(b, h, f) = acc;
      }
    }
  }
  return out;
}

PonderationGradients ponderation_backward(const PonderationLayer& layer, const Tensor& input,
                                          const Tensor& upstream) {
  if (input.rank() != 3 || input.dim(2) != layer.n_stations()) {
    throw ValidationError("ponderation_backward: input must be B x H x I");
  }
  if (upstream.rank() != 3 || upstream.dim(0) != input.dim(0) ||
      upstream.dim(1) != input.dim(1) || upstream.dim(2) != layer.n_outputs()) {
    throw ValidationError("ponderation_backward: upstream shape mismatch");
  }
  const std::size_t b_n = input.dim(0), h_n = input.dim(1);
  const std::size_t i_n = layer.n_stations(), f_n = layer.n_outputs();
  PonderationGradients g;
  g.weights = Tensor({f_n, i_n});
  g.bias = Tensor({f_n});
  g.input = Tensor({b_n, h_n, i_n});
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      const double* x = &input(b, h, 0);
      const double* u = &upstream(b, h, 0);
      double* gx = &g.input(b, h, 0);
      for (std::size_t f = 0; f < f_n; ++f) {
        const double uf = u[f];
        g.bias(f) += uf;
        double* gw = &g.weights(f, 0);
        const double* w = &layer.weights(f, 0);
        for (std::size_t i = 0; i < i_n; ++i) {
          gw[i] += uf * x[i];
          gx[i] += uf * w[i];
        }
      }
    }
  }
  return g;
}

ScaledAggregation scaled_aggregation_params(const Tensor& raw_weights, const ScalerParams& scaler,
                                            std::size_t v) {
  if (raw_weights.rank() != 1 || raw_weights.dim(0) != scaler.mins.dim(1)) {
    throw ValidationError("scaled_aggregation_params: weights must have length I");
  }
  if (v >= scaler.mins.dim(0)) {
    throw ValidationError("scaled_aggregation_params: variable index out of range");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < raw_weights.dim(0); ++i) total += raw_weights(i);
  if (std::abs(total - 1.0) > 1e-9) {
    throw ValidationError("scaled_aggregation_params: weights must sum to 1");
  }
  const double agg_lo = scaler.aggregate_mins(v);
  const double agg_hi = scaler.aggregate_maxs(v);
  const double span = agg_hi - agg_lo;
  if (span <= 0.0) {
    throw ValidationError("scaled_aggregation_params: degenerate aggregate extremes");
  }
  ScaledAggregation out;
  out.weights = Tensor({raw_weights.dim(0)});
  double weighted_min = 0.0;
  for (std::size_t i = 0; i < raw_weights.dim(0); ++i) {
    out.weights(i) = raw_weights(i) * (scaler.maxs(v, i) - scaler.mins(v, i)) / span;
    weighted_min += raw_weights(i) * scaler.mins(v, i);
  }
  out.bias = (weighted_min - agg_lo) / span;
  return out;
}

// --- exponential smoothing ----------------------------------------------

Tensor build_smoothing_matrix(double alpha, std::size_t n) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("build_smoothing_matrix: alpha must be in (0, 1)");
  }
  Tensor m({n + 1, n + 1});
  std::vector<double> powers(n + 1);
  powers[0] = 1.0;
  for (std::size_t k = 1; k <= n; ++k) powers[k] = powers[k - 1] * alpha;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = powers[i - j];
  }
  return m;
}

ExpSmoothingLayer::ExpSmoothingLayer(std::size_t channels, double raw_alpha_init) {
  if (channels == 0) throw ValidationError("ExpSmoothingLayer: need at least one channel");
  raw_alpha_.assign(channels, raw_alpha_init);
  carry_.assign(channels, 0.0);
  carry_init_.assign(channels, false);
  carry_in_.assign(channels, 0.0);
}

double ExpSmoothingLayer::alpha(std::size_t c) const { return sigmoid(raw_alpha_[c]); }

void ExpSmoothingLayer::set_carry(std::size_t c, double value) {
  carry_[c] = value;
  carry_init_[c] = true;
}

void ExpSmoothingLayer::reset_state() {
  std::fill(carry_.begin(), carry_.end(), 0.0);
  carry_init_.assign(carry_init_.size(), false);
  forward_ran_ = false;
}

Tensor ExpSmoothingLayer::forward(const Tensor& input) {
  if (input.rank() != 3 || input.dim(2) != channels()) {
    throw ValidationError("es_forward: input must be B x H x C");
  }
  if (!input.all_finite()) throw NumericError("es_forward: non-finite input");
  const std::size_t b_n = input.dim(0), h_n = input.dim(1), c_n = channels();
  const std::size_t n = b_n * h_n;
  Tensor out({b_n, h_n, c_n});
  std::vector<double> augmented(n + 1), smoothed(n + 1);
  for (std::size_t c = 0; c < c_n; ++c) {
    const double a = alpha(c);
    if (!carry_init_[c]) set_carry(c, input(0, 0, c));
    carry_in_[c] = carry_[c];

    Tensor m = build_smoothing_matrix(a, n);
    augmented[0] = carry_[c];
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t h = 0; h < h_n; ++h) {
        augmented[1 + b * h_n + h] = (1.0 - a) * input(b, h, c);
      }
    }
    for (std::size_t i = 0; i <= n; ++i) {
      const double* row = &m(i, 0);
      double acc = 0.0;
      for (std::size_t j = 0; j <= i; ++j) acc += row[j] * augmented[j];
      smoothed[i] = acc;
    }
    // entry 0 is the carry itself; entries 1..n are the new smoothed values
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t h = 0; h < h_n; ++h) {
        out(b, h, c) = smoothed[1 + b * h_n + h];
      }
    }
    carry_[c] = smoothed[n];
  }
  forward_ran_ = true;
  return out;
}

ExpSmoothingLayer::Gradients ExpSmoothingLayer::backward(const Tensor& input,
                                                         const Tensor& upstream) const {
  if (!forward_ran_) throw ValidationError("es_backward: no preceding forward pass");
  if (!input.same_shape(upstream) || input.rank() != 3 || input.dim(2) != channels()) {
    throw ValidationError("es_backward: shape mismatch");
  }
  const std::size_t b_n = input.dim(0), h_n = input.dim(1), c_n = channels();
  const std::size_t n = b_n * h_n;
  Gradients g;
  g.raw_alpha = Tensor({c_n});
  g.input = Tensor({b_n, h_n, c_n});

  std::vector<double> x(n), up(n);
  for (std::size_t c = 0; c < c_n; ++c) {
    const double a = alpha(c);
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t h = 0; h < h_n; ++h) {
        x[b * h_n + h] = input(b, h, c);
        up[b * h_n + h] = upstream(b, h, c);
      }
    }
    // d loss / d alpha via the recursion s_k = (1-a) x_k + a s_{k-1},
    // s_0 = carry (constant w.r.t. alpha within the batch)
    double d_alpha = 0.0;
    double s_prev = carry_in_[c];
    double ds_prev = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double ds = (s_prev - x[k]) + a * ds_prev;
      const double s = (1.0 - a) * x[k] + a * s_prev;
      d_alpha += up[k] * ds;
      s_prev = s;
      ds_prev = ds;
    }
    g.raw_alpha(c) = d_alpha * a * (1.0 - a);  // chain through the sigmoid

    // d loss / d x_k = (1-a) * sum_{m >= k} a^(m-k) up_m, via a reverse scan
    double zeta = 0.0;
    for (std::size_t k = n; k-- > 0;) {
      zeta = up[k] + a * zeta;
      g.input(k / h_n, k % h_n, c) = (1.0 - a) * zeta;
    }
  }
  return g;
}

Tensor es_forward(ExpSmoothingLayer& layer, const Tensor& input) { return layer.forward(input); }

ExpSmoothingLayer::Gradients es_backward(const ExpSmoothingLayer& layer, const Tensor& input,
                                         const Tensor& upstream) {
  return layer.backward(input, upstream);
}

// --- recurrent smoothing --------------------------------------------------

EsRnnWeights construct_es_rnn_weights(double alpha, std::size_t h) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("construct_es_rnn_weights: alpha must be in (0, 1)");
  }
  if (h < 1) throw ValidationError("construct_es_rnn_weights: h must be >= 1");
  EsRnnWeights w;
  w.w1 = Tensor({h, h});
  w.w2 = Tensor({h, h});
  w.b1 = Tensor({h});
  w.b2 = Tensor({h});
  std::vector<double> powers(h + 1);
  powers[0] = 1.0;
  for (std::size_t k = 1; k <= h; ++k) powers[k] = powers[k - 1] * alpha;
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j <= i; ++j) w.w1(i, j) = powers[i - j] * (1.0 - alpha);
    w.w2(i, h - 1) = powers[i + 1];
  }
  return w;
}

std::size_t RecurrentSmoothingLayer::gates() const {
  switch (kind_) {
    case CellKind::kVanilla: return 1;
    case CellKind::kLstm: return 4;
    case CellKind::kGru: return 3;
  }
  return 1;
}

RecurrentSmoothingLayer::RecurrentSmoothingLayer(CellKind kind, std::size_t h,
                                                 std::size_t channels, Activation activation,
                                                 std::uint64_t seed)
    : kind_(kind), activation_(activation), h_(h), channels_(channels) {
  if (h == 0 || channels == 0) {
    throw ValidationError("RecurrentSmoothingLayer: h and channels must be >= 1");
  }
  const std::size_t rows = gates() * h;
  w1_ = Tensor({rows, h});
  w2_ = Tensor({rows, h});
  b1_ = Tensor({rows});
  b2_ = Tensor({rows});
  Rng rng(seed);
  const double bound = 1.0 / std::sqrt(static_cast<double>(h));
  for (double& v : w1_.vec()) v = rng.uniform(-bound, bound);
  for (double& v : w2_.vec()) v = rng.uniform(-bound, bound);
  hidden_.assign(channels, std::vector<double>(h, 0.0));
  cell_.assign(channels, std::vector<double>(h, 0.0));
}

void RecurrentSmoothingLayer::set_hidden(std::size_t c, const std::vector<double>& value) {
  if (value.size() != h_) throw ValidationError("set_hidden: wrong length");
  hidden_[c] = value;
}

void RecurrentSmoothingLayer::reset_state() {
  for (auto& h : hidden_) std::fill(h.begin(), h.end(), 0.0);
  for (auto& c : cell_) std::fill(c.begin(), c.end(), 0.0);
  forward_ran_ = false;
}

namespace {

// y += W[block] * x where W rows are stacked gate blocks of size h
void gate_matvec(const Tensor& w, std::size_t block, std::size_t h, const double* x, double* y) {
  for (std::size_t i = 0; i < h; ++i) {
    const double* row = &w(block * h + i, 0);
    double acc = 0.0;
    for (std::size_t j = 0; j < h; ++j) acc += row[j] * x[j];
    y[i] += acc;
  }
}

// accumulate outer product into gradient block: gw[block*h + i, j] += d[i] * x[j]
void gate_outer(Tensor& gw, std::size_t block, std::size_t h, const double* d, const double* x) {
  for (std::size_t i = 0; i < h; ++i) {
    double* row = &gw(block * h + i, 0);
    for (std::size_t j = 0; j < h; ++j) row[j] += d[i] * x[j];
  }
}

// x_grad += W[block]^T * d
void gate_matvec_t(const Tensor& w, std::size_t block, std::size_t h, const double* d,
                   double* x_grad) {
  for (std::size_t i = 0; i < h; ++i) {
    const double* row = &w(block * h + i, 0);
    const double di = d[i];
    for (std::size_t j = 0; j < h; ++j) x_grad[j] += di * row[j];
  }
}

}  // namespace

Tensor RecurrentSmoothingLayer::forward(const Tensor& input) {
  if (input.rank() != 3 || input.dim(1) != h_ || input.dim(2) != channels_) {
    throw ValidationError("recurrent_forward: input must be B x H x C");
  }
  if (!input.all_finite() || !w1_.all_finite() || !w2_.all_finite()) {
    throw NumericError("recurrent_forward: non-finite input or parameters");
  }
  const std::size_t b_n = input.dim(0);
  hidden_in_ = hidden_;
  cell_in_ = cell_;
  Tensor out({b_n, h_, channels_});

  std::vector<double> x(h_), pre(gates() * h_);
  for (std::size_t c = 0; c < channels_; ++c) {
    std::vector<double>& h_state = hidden_[c];
    std::vector<double>& c_state = cell_[c];
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t i = 0; i < h_; ++i) x[i] = input(b, i, c);
      std::fill(pre.begin(), pre.end(), 0.0);
      for (std::size_t gate = 0; gate < gates(); ++gate) {
        for (std::size_t i = 0; i < h_; ++i) {
          pre[gate * h_ + i] = b1_(gate * h_ + i) + b2_(gate * h_ + i);
        }
        gate_matvec(w1_, gate, h_, x.data(), &pre[gate * h_]);
        if (kind_ != CellKind::kGru || gate != 2) {
          gate_matvec(w2_, gate, h_, h_state.data(), &pre[gate * h_]);
        }
      }
      if (kind_ == CellKind::kVanilla) {
        for (std::size_t i = 0; i < h_; ++i) {
          h_state[i] = apply_activation(activation_, pre[i]);
        }
      } else if (kind_ == CellKind::kLstm) {
        for (std::size_t i = 0; i < h_; ++i) {
          const double gi = sigmoid(pre[i]);
          const double gf = sigmoid(pre[h_ + i]);
          const double gg = std::tanh(pre[2 * h_ + i]);
          const double go = sigmoid(pre[3 * h_ + i]);
          c_state[i] = gf * c_state[i] + gi * gg;
          h_state[i] = go * std::tanh(c_state[i]);
        }
      } else {  // GRU, reset gate applied to the recurrent candidate term
        std::vector<double> rec_n(h_, 0.0);
        for (std::size_t i = 0; i < h_; ++i) rec_n[i] = b2_(2 * h_ + i);
        gate_matvec(w2_, 2, h_, h_state.data(), rec_n.data());
        for (std::size_t i = 0; i < h_; ++i) {
          const double r = sigmoid(pre[i]);
          const double z = sigmoid(pre[h_ + i]);
          // candidate pre-activation: W1_n x + b1_n + r * (W2_n h + b2_n)
          const double n_pre = pre[2 * h_ + i] - b2_(2 * h_ + i) + r * rec_n[i];
          const double n = std::tanh(n_pre);
          h_state[i] = (1.0 - z) * n + z * h_state[i];
        }
      }
      for (std::size_t i = 0; i < h_; ++i) out(b, i, c) = h_state[i];
    }
  }
  if (!out.all_finite()) throw NumericError("recurrent_forward: non-finite output");
  forward_ran_ = true;
  return out;
}

RecurrentSmoothingLayer::Gradients RecurrentSmoothingLayer::backward(
    const Tensor& input, const Tensor& upstream) const {
  if (!forward_ran_) throw ValidationError("recurrent_backward: no preceding forward pass");
  if (!input.same_shape(upstream) || input.rank() != 3 || input.dim(1) != h_ ||
      input.dim(2) != channels_) {
    throw ValidationError("recurrent_backward: shape mismatch");
  }
  const std::size_t b_n = input.dim(0);
  const std::size_t g_n = gates();
  Gradients g;
  g.w1 = Tensor({g_n * h_, h_});
  g.w2 = Tensor({g_n * h_, h_});
  g.b1 = Tensor({g_n * h_});
  g.b2 = Tensor({g_n * h_});
  g.input = Tensor({b_n, h_, channels_});

  // replay the forward recurrence per channel, caching what BPTT needs
  std::vector<std::vector<double>> pre(b_n), h_out(b_n), c_out(b_n), gate_cache(b_n),
      rec_n_cache(b_n);
  std::vector<double> x(h_);
  for (std::size_t c = 0; c < channels_; ++c) {
    std::vector<double> h_prev = hidden_in_[c];
    std::vector<double> c_prev = cell_in_[c];
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t i = 0; i < h_; ++i) x[i] = input(b, i, c);
      pre[b].assign(g_n * h_, 0.0);
      for (std::size_t gate = 0; gate < g_n; ++gate) {
        for (std::size_t i = 0; i < h_; ++i) {
          pre[b][gate * h_ + i] = b1_(gate * h_ + i) + b2_(gate * h_ + i);
        }
        gate_matvec(w1_, gate, h_, x.data(), &pre[b][gate * h_]);
        if (kind_ != CellKind::kGru || gate != 2) {
          gate_matvec(w2_, gate, h_, h_prev.data(), &pre[b][gate * h_]);
        }
      }
      h_out[b].assign(h_, 0.0);
      if (kind_ == CellKind::kVanilla) {
        for (std::size_t i = 0; i < h_; ++i) {
          h_out[b][i] = apply_activation(activation_, pre[b][i]);
        }
      } else if (kind_ == CellKind::kLstm) {
        c_out[b].assign(h_, 0.0);
        gate_cache[b].assign(4 * h_, 0.0);
        for (std::size_t i = 0; i < h_; ++i) {
          const double gi = sigmoid(pre[b][i]);
          const double gf = sigmoid(pre[b][h_ + i]);
          const double gg = std::tanh(pre[b][2 * h_ + i]);
          const double go = sigmoid(pre[b][3 * h_ + i]);
          gate_cache[b][i] = gi;
          gate_cache[b][h_ + i] = gf;
          gate_cache[b][2 * h_ + i] = gg;
          gate_cache[b][3 * h_ + i] = go;
          c_out[b][i] = gf * c_prev[i] + gi * gg;
          h_out[b][i] = go * std::tanh(c_out[b][i]);
        }
        c_prev = c_out[b];
      } else {
        rec_n_cache[b].assign(h_, 0.0);
        gate_cache[b].assign(3 * h_, 0.0);
        for (std::size_t i = 0; i < h_; ++i) rec_n_cache[b][i] = b2_(2 * h_ + i);
        gate_matvec(w2_, 2, h_, h_prev.data(), rec_n_cache[b].data());
        for (std::size_t i = 0; i < h_; ++i) {
          const double r = sigmoid(pre[b][i]);
          const double z = sigmoid(pre[b][h_ + i]);
          const double n_pre = pre[b][2 * h_ + i] - b2_(2 * h_ + i) + r * rec_n_cache[b][i];
          const double n = std::tanh(n_pre);
          gate_cache[b][i] = r;
          gate_cache[b][h_ + i] = z;
          gate_cache[b][2 * h_ + i] = n;
          h_out[b][i] = (1.0 - z) * n + z * h_prev[i];
        }
      }
      h_prev = h_out[b];
    }

    // backward through time
    std::vector<double> dh_next(h_, 0.0), dc_next(h_, 0.0);
    for (std::size_t b = b_n; b-- > 0;) {
      const std::vector<double>& h_before = (b == 0) ? hidden_in_[c] : h_out[b - 1];
      const std::vector<double>& c_before = (b == 0) ? cell_in_[c] : c_out[b - 1];
      for (std::size_t i = 0; i < h_; ++i) x[i] = input(b, i, c);
      std::vector<double> dh(h_);
      for (std::size_t i = 0; i < h_; ++i) dh[i] = upstream(b, i, c) + dh_next[i];
      std::fill(dh_next.begin(), dh_next.end(), 0.0);
      std::vector<double> dx(h_, 0.0);

      if (kind_ == CellKind::kVanilla) {
        std::vector<double> dpre(h_);
        for (std::size_t i = 0; i < h_; ++i) {
          dpre[i] = dh[i] * activation_grad(activation_, pre[b][i], h_out[b][i]);
          g.b1(i) += dpre[i];
          g.b2(i) += dpre[i];
        }
        gate_outer(g.w1, 0, h_, dpre.data(), x.data());
        gate_outer(g.w2, 0, h_, dpre.data(), h_before.data());
        gate_matvec_t(w1_, 0, h_, dpre.data(), dx.data());
        gate_matvec_t(w2_, 0, h_, dpre.data(), dh_next.data());
      } else if (kind_ == CellKind::kLstm) {
        std::vector<double> dpre(4 * h_);
        for (std::size_t i = 0; i < h_; ++i) {
          const double gi = gate_cache[b][i];
          const double gf = gate_cache[b][h_ + i];
          const double gg = gate_cache[b][2 * h_ + i];
          const double go = gate_cache[b][3 * h_ + i];
          const double tc = std::tanh(c_out[b][i]);
          const double dc = dh[i] * go * (1.0 - tc * tc) + dc_next[i];
          dpre[i] = dc * gg * gi * (1.0 - gi);
          dpre[h_ + i] = dc * c_before[i] * gf * (1.0 - gf);
          dpre[2 * h_ + i] = dc * gi * (1.0 - gg * gg);
          dpre[3 * h_ + i] = dh[i] * tc * go * (1.0 - go);
          dc_next[i] = dc * gf;
        }
        for (std::size_t k = 0; k < 4 * h_; ++k) {
          g.b1(k) += dpre[k];
          g.b2(k) += dpre[k];
        }
        for (std::size_t gate = 0; gate < 4; ++gate) {
          gate_outer(g.w1, gate, h_, &dpre[gate * h_], x.data());
          gate_outer(g.w2, gate, h_, &dpre[gate * h_], h_before.data());
          gate_matvec_t(w1_, gate, h_, &dpre[gate * h_], dx.data());
          gate_matvec_t(w2_, gate, h_, &dpre[gate * h_], dh_next.data());
        }
      } else {  // GRU
        std::vector<double> dpre_r(h_), dpre_z(h_), dpre_n(h_), drec(h_);
        for (std::size_t i = 0; i < h_; ++i) {
          const double r = gate_cache[b][i];
          const double z = gate_cache[b][h_ + i];
          const double n = gate_cache[b][2 * h_ + i];
          const double dn = dh[i] * (1.0 - z) * (1.0 - n * n);
          dpre_n[i] = dn;                                     // d w.r.t. (W1_n x + b1_n) part
          drec[i] = dn * r;                                   // d w.r.t. (W2_n h + b2_n) term
          dpre_r[i] = dn * rec_n_cache[b][i] * r * (1.0 - r);
          dpre_z[i] = dh[i] * (h_before[i] - n) * z * (1.0 - z);
          dh_next[i] += dh[i] * z;
        }
        for (std::size_t i = 0; i < h_; ++i) {
          g.b1(i) += dpre_r[i];
          g.b2(i) += dpre_r[i];
          g.b1(h_ + i) += dpre_z[i];
          g.b2(h_ + i) += dpre_z[i];
          g.b1(2 * h_ + i) += dpre_n[i];
          g.b2(2 * h_ + i) += drec[i];
        }
        gate_outer(g.w1, 0, h_, dpre_r.data(), x.data());
        gate_outer(g.w2, 0, h_, dpre_r.data(), h_before.data());
        gate_outer(g.w1, 1, h_, dpre_z.data(), x.data());
        gate_outer(g.w2, 1, h_, dpre_z.data(), h_before.data());
        gate_outer(g.w1, 2, h_, dpre_n.data(), x.data());
        gate_outer(g.w2, 2, h_, drec.data(), h_before.data());
        gate_matvec_t(w1_, 0, h_, dpre_r.data(), dx.data());
        gate_matvec_t(w2_, 0, h_, dpre_r.data(), dh_next.data());
        gate_matvec_t(w1_, 1, h_, dpre_z.data(), dx.data());
        gate_matvec_t(w2_, 1, h_, dpre_z.data(), dh_next.data());
        gate_matvec_t(w1_, 2, h_, dpre_n.data(), dx.data());
        gate_matvec_t(w2_, 2, h_, drec.data(), dh_next.data());
      }
      for (std::size_t i = 0; i < h_; ++i) g.input(b, i, c) = dx[i];
    }
  }
  return g;
}

Tensor recurrent_forward(RecurrentSmoothingLayer& layer, const Tensor& input) {
  return layer.forward(input);
}

RecurrentSmoothingLayer::Gradients recurrent_backward(const RecurrentSmoothingLayer& layer,
                                                      const Tensor& input,
                                                      const Tensor& upstream) {
  return layer.backward(input, upstream);
}

}  // namespace voltcast
