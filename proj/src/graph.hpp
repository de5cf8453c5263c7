#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "layers.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace voltcast {

enum class NodeKind { kDense, kConv, kIdentity };

NodeKind node_kind_from_string(const std::string& name);
std::string to_string(NodeKind kind);

// One node of a forecasting graph. out_dim counts per-instant features in
// both stages; kernel applies to temporal convolutions only and must be odd.
struct LayerSpec {
  NodeKind kind = NodeKind::kIdentity;
  std::size_t out_dim = 1;
  std::size_t kernel = 1;
  Activation activation = Activation::kIdentity;
};

enum class GraphStage { kGamma1_2d, kGamma2_1d };

// DAG of layer nodes. Each node consumes the feature-axis concatenation of
// its predecessors (-1 denotes the stage input); the last node is the sink.
// An empty graph is the identity.
//
// Data flows as B x H x W tensors in both stages. Stage-1 nodes act per
// instant; stage-2 nodes act on the flattened H*W vector of each day (their
// dense weights are (H*out) x (H*in)), so out_dim stays the per-instant
// width and the sink can be viewed as H x D for the final linear head.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  NetworkGraph(GraphStage stage, std::size_t input_width, std::size_t instants);

  // Appends a node; preds entries must be -1 or a previous node index.
  void add_node(const LayerSpec& spec, std::vector<int> preds, Rng& rng);

  GraphStage stage() const { return stage_; }
  std::size_t input_width() const { return input_width_; }
  std::size_t n_nodes() const { return nodes_.size(); }
  std::size_t output_width() const;  // per-instant width of the sink

  struct Node {
    LayerSpec spec;
    std::vector<int> preds;
    std::size_t in_width = 0;  // per-instant concat width
    Tensor weights;            // dense: rows x cols (see class comment); conv: out x in x k
    Tensor bias;               // dense/conv output bias
  };
  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& nodes() { return nodes_; }

  struct Cache {
    std::vector<Tensor> concat_in;  // per node
    std::vector<Tensor> pre;        // pre-activation
    std::vector<Tensor> out;        // post-activation
  };

  Tensor forward(const Tensor& input, Cache& cache) const;

  // Returns the gradient w.r.t. the stage input; parameter gradients are
  // accumulated into `grads` under "<prefix>.node<i>.weights|bias".
  Tensor backward(const Tensor& input, const Cache& cache, const Tensor& upstream,
                  const std::string& prefix,
                  std::map<std::string, std::vector<double>>& grads) const;

 private:
  GraphStage stage_ = GraphStage::kGamma1_2d;
  std::size_t input_width_ = 0;
  std::size_t instants_ = 0;
  std::vector<Node> nodes_;
};

}  // namespace voltcast
