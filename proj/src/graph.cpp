#include "graph.hpp"

#include <cmath>

#include "errors.hpp"

namespace voltcast {

NodeKind node_kind_from_string(const std::string& name) {
  if (name == "dense") return NodeKind::kDense;
  if (name == "conv") return NodeKind::kConv;
  if (name == "identity") return NodeKind::kIdentity;
  throw ValidationError("unknown node kind '" + name + "'");
}

std::string to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::kDense: return "dense";
    case NodeKind::kConv: return "conv";
    case NodeKind::kIdentity: return "identity";
  }
  return "identity";
}

namespace {

// per-instant output width of a node
std::size_t node_width_of(const NetworkGraph::Node& node) {
  return node.spec.kind == NodeKind::kIdentity ? node.in_width : node.spec.out_dim;
}

}  // namespace

NetworkGraph::NetworkGraph(GraphStage stage, std::size_t input_width, std::size_t instants)
    : stage_(stage), input_width_(input_width), instants_(instants) {
  if (input_width == 0 || instants == 0) {
    throw ValidationError("NetworkGraph: input width and instants must be >= 1");
  }
}

void NetworkGraph::add_node(const LayerSpec& spec, std::vector<int> preds, Rng& rng) {
  if (preds.empty()) preds.push_back(-1);
  Node node;
  node.spec = spec;
  node.preds = std::move(preds);
  node.in_width = 0;
  for (int p : node.preds) {
    if (p < -1 || p >= static_cast<int>(nodes_.size())) {
      throw ValidationError("NetworkGraph: predecessor out of range");
    }
    node.in_width += (p < 0) ? input_width_ : node_width_of(nodes_[p]);
  }
  const std::size_t in_w = node.in_width;
  switch (spec.kind) {
    case NodeKind::kIdentity:
      break;
    case NodeKind::kDense: {
      if (spec.out_dim == 0) throw ValidationError("NetworkGraph: out_dim must be >= 1");
      const bool flat = stage_ == GraphStage::kGamma2_1d;
      const std::size_t rows = (flat ? instants_ : 1) * spec.out_dim;
      const std::size_t cols = (flat ? instants_ : 1) * in_w;
      node.weights = Tensor({rows, cols});
      node.bias = Tensor({rows});
      const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
      for (double& v : node.weights.vec()) v = rng.uniform(-bound, bound);
      break;
    }
    case NodeKind::kConv: {
      if (stage_ != GraphStage::kGamma1_2d) {
        throw ValidationError("NetworkGraph: temporal convolution is only valid in the 2-d stage");
      }
      if (spec.out_dim == 0) throw ValidationError("NetworkGraph: out_dim must be >= 1");
      if (spec.kernel < 1 || spec.kernel % 2 == 0) {
        throw ValidationError("NetworkGraph: convolution kernel must be odd and >= 1");
      }
      node.weights = Tensor({spec.out_dim, in_w, spec.kernel});
      node.bias = Tensor({spec.out_dim});
      const double bound = 1.0 / std::sqrt(static_cast<double>(in_w * spec.kernel));
      for (double& v : node.weights.vec()) v = rng.uniform(-bound, bound);
      break;
    }
  }
  nodes_.push_back(std::move(node));
}

std::size_t NetworkGraph::output_width() const {
  if (nodes_.empty()) return input_width_;
  return node_width_of(nodes_.back());
}

Tensor NetworkGraph::forward(const Tensor& input, Cache& cache) const {
  if (input.rank() != 3 || input.dim(1) != instants_ || input.dim(2) != input_width_) {
    throw ValidationError("NetworkGraph: input must be B x H x W");
  }
  const std::size_t b_n = input.dim(0);
  cache.concat_in.assign(nodes_.size(), Tensor());
  cache.pre.assign(nodes_.size(), Tensor());
  cache.out.assign(nodes_.size(), Tensor());
  if (nodes_.empty()) return input;

  for (std::size_t ni = 0; ni < nodes_.size(); ++ni) {
    const Node& node = nodes_[ni];
    // concatenate predecessors along the feature axis
    Tensor concat({b_n, instants_, node.in_width});
    std::size_t offset = 0;
    for (int p : node.preds) {
      const Tensor& src = (p < 0) ? input : cache.out[p];
      const std::size_t w = src.dim(2);
      for (std::size_t b = 0; b < b_n; ++b) {
        for (std::size_t h = 0; h < instants_; ++h) {
          for (std::size_t f = 0; f < w; ++f) concat(b, h, offset + f) = src(b, h, f);
        }
      }
      offset += w;
    }

    Tensor pre;
    switch (node.spec.kind) {
      case NodeKind::kIdentity:
        pre = concat;
        break;
      case NodeKind::kDense: {
        const std::size_t out_w = node.spec.out_dim;
        pre = Tensor({b_n, instants_, out_w});
        if (stage_ == GraphStage::kGamma1_2d) {
          for (std::size_t b = 0; b < b_n; ++b) {
            for (std::size_t h = 0; h < instants_; ++h) {
              const double* x = &concat(b, h, 0);
              for (std::size_t o = 0; o < out_w; ++o) {
                const double* w = &node.weights(o, 0);
                double acc = node.bias(o);
                for (std::size_t f = 0; f < node.in_width; ++f) acc += w[f] * x[f];
                pre(b, h, o) = acc;
              }
            }
          }
        } else {
          // flat dense over the whole day: (H*in) -> (H*out)
          const std::size_t in_flat = instants_ * node.in_width;
          const std::size_t out_flat = instants_ * out_w;
          for (std::size_t b = 0; b < b_n; ++b) {
            const double* x = &concat(b, 0, 0);
            double* y = &pre(b, 0, 0);
            for (std::size_t o = 0; o < out_flat; ++o) {
              const double* w = &node.weights(o, 0);
              double acc = node.bias(o);
              for (std::size_t f = 0; f < in_flat; ++f) acc += w[f] * x[f];
              y[o] = acc;
            }
          }
        }
        break;
      }
      case NodeKind::kConv: {
        const std::size_t out_w = node.spec.out_dim;
        const int half = static_cast<int>(node.spec.kernel / 2);
        pre = Tensor({b_n, instants_, out_w});
        for (std::size_t b = 0; b < b_n; ++b) {
          for (std::size_t h = 0; h < instants_; ++h) {
            for (std::size_t o = 0; o < out_w; ++o) {
              double acc = node.bias(o);
              for (std::size_t f = 0; f < node.in_width; ++f) {
                for (std::size_t k = 0; k < node.spec.kernel; ++k) {
                  const int hh = static_cast<int>(h) + static_cast<int>(k) - half;
                  if (hh < 0 || hh >= static_cast<int>(instants_)) continue;  // zero padding
                  acc += node.weights(o, f, k) * concat(b, hh, f);
                }
              }
              pre(b, h, o) = acc;
            }
          }
        }
        break;
      }
    }

    Tensor out = pre;
    if (node.spec.activation != Activation::kIdentity) {
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = apply_activation(node.spec.activation, pre[i]);
      }
    }
    cache.concat_in[ni] = std::move(concat);
    cache.pre[ni] = std::move(pre);
    cache.out[ni] = std::move(out);
  }
  return cache.out.back();
}

Tensor NetworkGraph::backward(const Tensor& input, const Cache& cache, const Tensor& upstream,
                              const std::string& prefix,
                              std::map<std::string, std::vector<double>>& grads) const {
  const std::size_t b_n = input.dim(0);
  Tensor input_grad({b_n, instants_, input_width_});
  if (nodes_.empty()) {
    input_grad = upstream;
    return input_grad;
  }

  std::vector<Tensor> out_grad(nodes_.size());
  for (std::size_t ni = 0; ni < nodes_.size(); ++ni) {
    out_grad[ni] = Tensor({b_n, instants_, node_width_of(nodes_[ni])});
  }
  out_grad.back() = upstream;

  for (std::size_t ni = nodes_.size(); ni-- > 0;) {
    const Node& node = nodes_[ni];
    const Tensor& dout = out_grad[ni];

    // through the activation
    Tensor dpre = dout;
    if (node.spec.activation != Activation::kIdentity) {
      for (std::size_t i = 0; i < dpre.size(); ++i) {
        dpre[i] = dout[i] * activation_grad(node.spec.activation, cache.pre[ni][i],
                                            cache.out[ni][i]);
      }
    }

    Tensor dconcat({b_n, instants_, node.in_width});
    const std::string base = prefix + ".node" + std::to_string(ni);
    switch (node.spec.kind) {
      case NodeKind::kIdentity:
        dconcat = dpre;
        break;
      case NodeKind::kDense: {
        auto& gw = grads[base + ".weights"];
        auto& gb = grads[base + ".bias"];
        gw.resize(node.weights.size(), 0.0);
        gb.resize(node.bias.size(), 0.0);
        const std::size_t out_w = node.spec.out_dim;
        if (stage_ == GraphStage::kGamma1_2d) {
          for (std::size_t b = 0; b < b_n; ++b) {
            for (std::size_t h = 0; h < instants_; ++h) {
              const double* x = &cache.concat_in[ni](b, h, 0);
              double* dx = &dconcat(b, h, 0);
              for (std::size_t o = 0; o < out_w; ++o) {
                const double d = dpre(b, h, o);
                gb[o] += d;
                double* gwo = &gw[o * node.in_width];
                const double* w = &node.weights(o, 0);
                for (std::size_t f = 0; f < node.in_width; ++f) {
                  gwo[f] += d * x[f];
                  dx[f] += d * w[f];
                }
              }
            }
          }
        } else {
          const std::size_t in_flat = instants_ * node.in_width;
          const std::size_t out_flat = instants_ * out_w;
          for (std::size_t b = 0; b < b_n; ++b) {
            const double* x = &cache.concat_in[ni](b, 0, 0);
            double* dx = &dconcat(b, 0, 0);
            const double* d = &dpre(b, 0, 0);
            for (std::size_t o = 0; o < out_flat; ++o) {
              gb[o] += d[o];
              double* gwo = &gw[o * in_flat];
              const double* w = &node.weights(o, 0);
              for (std::size_t f = 0; f < in_flat; ++f) {
                gwo[f] += d[o] * x[f];
                dx[f] += d[o] * w[f];
              }
            }
          }
        }
        break;
      }
      case NodeKind::kConv: {
        auto& gw = grads[base + ".weights"];
        auto& gb = grads[base + ".bias"];
        gw.resize(node.weights.size(), 0.0);
        gb.resize(node.bias.size(), 0.0);
        const std::size_t out_w = node.spec.out_dim;
        const int half = static_cast<int>(node.spec.kernel / 2);
        for (std::size_t b = 0; b < b_n; ++b) {
          for (std::size_t h = 0; h < instants_; ++h) {
            for (std::size_t o = 0; o < out_w; ++o) {
              const double d = dpre(b, h, o);
              gb[o] += d;
              for (std::size_t f = 0; f < node.in_width; ++f) {
                for (std::size_t k = 0; k < node.spec.kernel; ++k) {
                  const int hh = static_cast<int>(h) + static_cast<int>(k) - half;
                  if (hh < 0 || hh >= static_cast<int>(instants_)) continue;
                  gw[(o * node.in_width + f) * node.spec.kernel + k] +=
                      d * cache.concat_in[ni](b, hh, f);
                  dconcat(b, hh, f) += d * node.weights(o, f, k);
                }
              }
            }
          }
        }
        break;
      }
    }

    // split the concat gradient back onto the predecessors
    std::size_t offset = 0;
    for (int p : node.preds) {
      Tensor& dst = (p < 0) ? input_grad : out_grad[p];
      const std::size_t w = dst.dim(2);
      for (std::size_t b = 0; b < b_n; ++b) {
        for (std::size_t h = 0; h < instants_; ++h) {
          for (std::size_t f = 0; f < w; ++f) dst(b, h, f) += dconcat(b, h, offset + f);
        }
      }
      offset += w;
    }
  }
  return input_grad;
}

}  // namespace voltcast
