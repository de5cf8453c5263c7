#include "forecaster.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"
#include "logging.hpp"
#include "rng.hpp"

namespace voltcast {

using nlohmann::json;

DatasetDims DatasetDims::of(const Dataset& ds) {
  DatasetDims dims;
  dims.h = ds.instants();
  dims.v = ds.weather.n_variables();
  dims.i = ds.weather.n_stations();
  dims.f = ds.calendar.n_features();
  return dims;
}

std::size_t WeatherModelingModule::aggregated_width() const {
  std::size_t w = 0;
  for (const auto& layer : ponderation_layers) w += layer.n_outputs();
  return w;
}

std::size_t WeatherModelingModule::output_width() const {
  return aggregated_width() + temperature_channels.size();
}

void WeatherModelingModule::reset_state() {
  if (use_es) {
    es.reset_state();
  } else {
    recurrent.reset_state();
  }
}

// --- assembly ---------------------------------------------------------------

ForecastModel assemble_model(const ModelSpec& spec, const DatasetDims& dims, std::uint64_t seed) {
  if (dims.h == 0 || dims.v == 0 || dims.i == 0) {
    throw ValidationError("assemble_model: dataset dims must be positive");
  }
  if (spec.weather.f_v.size() != dims.v) {
    throw ValidationError("assemble_model: need one f_v per weather variable");
  }
  for (std::size_t f : spec.weather.f_v) {
    if (f == 0) throw ValidationError("assemble_model: f_v entries must be >= 1");
  }

  ForecastModel model;
  model.spec = spec;
  model.dims = dims;
  model.seed = seed;

  Rng master(seed);
  for (std::size_t v = 0; v < dims.v; ++v) {
    PonderationLayer layer = init_ponderation(dims.i, spec.weather.f_v[v], master.next_u64());
    layer.variable_index = v;
    model.weather.ponderation_layers.push_back(std::move(layer));
  }
  // the smoothed channels are the temperature variable's aggregated outputs,
  // which occupy the first f_v[0] slots of the concatenation
  const std::size_t f_t = spec.weather.f_v[0];
  for (std::size_t k = 0; k < f_t; ++k) model.weather.temperature_channels.push_back(k);

  model.weather.use_es = spec.weather.use_es;
  const std::uint64_t smoothing_seed = master.next_u64();
  if (spec.weather.use_es) {
    model.weather.es = ExpSmoothingLayer(f_t, 0.0);
  } else {
    model.weather.recurrent = RecurrentSmoothingLayer(
        spec.weather.smoothing_kind, dims.h, f_t, spec.weather.recurrent_activation,
        smoothing_seed);
  }

  const std::size_t merged_width = model.weather.output_width() + dims.f;
  Rng g1_rng(master.next_u64());
  model.gamma1 = NetworkGraph(GraphStage::kGamma1_2d, merged_width, dims.h);
  for (std::size_t n = 0; n < spec.gamma1.nodes.size(); ++n) {
    const GraphNodeSpec& node = spec.gamma1.nodes[n];
    std::vector<int> preds{static_cast<int>(n) - 1};
    if (node.skip_input && n > 0) preds.push_back(-1);
    model.gamma1.add_node(node.layer, std::move(preds), g1_rng);
  }

  Rng g2_rng(master.next_u64());
  model.gamma2 = NetworkGraph(GraphStage::kGamma2_1d, model.gamma1.output_width(), dims.h);
  for (std::size_t n = 0; n < spec.gamma2.nodes.size(); ++n) {
    const GraphNodeSpec& node = spec.gamma2.nodes[n];
    std::vector<int> preds{static_cast<int>(n) - 1};
    if (node.skip_input && n > 0) preds.push_back(-1);
    model.gamma2.add_node(node.layer, std::move(preds), g2_rng);
  }

  const std::size_t d = model.gamma2.output_width();
  model.final_weights = Tensor({d});
  model.final_bias = Tensor({1});
  Rng head_rng(master.next_u64());
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  for (double& w : model.final_weights.vec()) w = head_rng.uniform(-bound, bound);
  return model;
}

std::vector<ParamRef> param_refs(ForecastModel& model) {
  std::vector<ParamRef> refs;
  for (std::size_t v = 0; v < model.weather.ponderation_layers.size(); ++v) {
    auto& layer = model.weather.ponderation_layers[v];
    const std::string base = "weather.ponderation" + std::to_string(v);
    refs.push_back({base + ".weights", &layer.weights.vec()});
    refs.push_back({base + ".bias", &layer.bias.vec()});
  }
  if (model.weather.use_es) {
    refs.push_back({"weather.smoothing.raw_alpha", &model.weather.es.raw_alpha_values()});
  } else {
    auto& cell = model.weather.recurrent;
    refs.push_back({"weather.smoothing.w1", &cell.input_weights().vec()});
    refs.push_back({"weather.smoothing.w2", &cell.recurrent_weights().vec()});
    refs.push_back({"weather.smoothing.b1", &cell.bias1().vec()});
    refs.push_back({"weather.smoothing.b2", &cell.bias2().vec()});
  }
  auto add_graph = [&refs](NetworkGraph& graph, const std::string& prefix) {
    auto& nodes = graph.nodes();
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (nodes[n].spec.kind == NodeKind::kIdentity) continue;
      const std::string base = prefix + ".node" + std::to_string(n);
      refs.push_back({base + ".weights", &nodes[n].weights.vec()});
      refs.push_back({base + ".bias", &nodes[n].bias.vec()});
    }
  };
  add_graph(model.gamma1, "gamma1");
  add_graph(model.gamma2, "gamma2");
  refs.push_back({"head.weights", &model.final_weights.vec()});
  refs.push_back({"head.bias", &model.final_bias.vec()});
  return refs;
}

// --- forward -----------------------------------------------------------------

Tensor weather_module_forward(WeatherModelingModule& module, const Tensor& w_b,
                              ModelForwardCache* cache) {
  if (w_b.rank() != 4) throw ValidationError("weather_module_forward: input must be B x H x V x I");
  const std::size_t b_n = w_b.dim(0), h_n = w_b.dim(1);
  const std::size_t v_n = w_b.dim(2), i_n = w_b.dim(3);
  if (v_n != module.ponderation_layers.size()) {
    throw ValidationError("weather_module_forward: variable count mismatch");
  }
  const std::size_t f_w = module.aggregated_width();
  const std::size_t f_t = module.temperature_channels.size();

  Tensor aggregated({b_n, h_n, f_w});
  std::vector<Tensor> pond_in;
  pond_in.reserve(v_n);
  std::size_t offset = 0;
  for (std::size_t v = 0; v < v_n; ++v) {
    Tensor slice({b_n, h_n, i_n});
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t h = 0; h < h_n; ++h) {
        for (std::size_t i = 0; i < i_n; ++i) slice(b, h, i) = w_b(b, h, v, i);
      }
    }
    Tensor out = ponderation_forward(module.ponderation_layers[v], slice);
    const std::size_t width = out.dim(2);
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t h = 0; h < h_n; ++h) {
        for (std::size_t f = 0; f < width; ++f) aggregated(b, h, offset + f) = out(b, h, f);
      }
    }
    offset += width;
    pond_in.push_back(std::move(slice));
  }

  Tensor smoothing_in({b_n, h_n, f_t});
  for (std::size_t k = 0; k < f_t; ++k) {
    const std::size_t src = module.temperature_channels[k];
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t h = 0; h < h_n; ++h) smoothing_in(b, h, k) = aggregated(b, h, src);
    }
  }
  Tensor smoothed = module.use_es ? module.es.forward(smoothing_in)
                                  : module.recurrent.forward(smoothing_in);

  Tensor out({b_n, h_n, f_w + f_t});
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      for (std::size_t f = 0; f < f_w; ++f) out(b, h, f) = aggregated(b, h, f);
      for (std::size_t k = 0; k < f_t; ++k) out(b, h, f_w + k) = smoothed(b, h, k);
    }
  }
  if (cache != nullptr) {
    cache->ponderation_in = std::move(pond_in);
    cache->aggregated = std::move(aggregated);
    cache->smoothing_in = std::move(smoothing_in);
    cache->smoothed = std::move(smoothed);
  }
  return out;
}

void model_forward(ForecastModel& model, const Tensor& w_b, const Tensor& c_b,
                   ModelForwardCache& cache) {
  if (c_b.rank() != 3 || c_b.dim(0) != w_b.dim(0) || c_b.dim(1) != w_b.dim(1) ||
      c_b.dim(2) != model.dims.f) {
    throw ValidationError("model_forward: calendar input must be B x H x F");
  }
  Tensor weather_out = weather_module_forward(model.weather, w_b, &cache);
  if (!weather_out.all_finite()) {
    throw NumericError("model_forward: non-finite output of the weather module");
  }
  const std::size_t b_n = w_b.dim(0), h_n = w_b.dim(1);
  const std::size_t w_width = weather_out.dim(2), f_n = c_b.dim(2);

  cache.merged = Tensor({b_n, h_n, w_width + f_n});
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      for (std::size_t f = 0; f < w_width; ++f) cache.merged(b, h, f) = weather_out(b, h, f);
      for (std::size_t f = 0; f < f_n; ++f) cache.merged(b, h, w_width + f) = c_b(b, h, f);
    }
  }

  cache.gamma1_out = model.gamma1.forward(cache.merged, cache.gamma1);
  if (!cache.gamma1_out.all_finite()) {
    throw NumericError("model_forward: non-finite output of gamma1");
  }
  cache.hidden = model.gamma2.forward(cache.gamma1_out, cache.gamma2);
  if (!cache.hidden.all_finite()) {
    throw NumericError("model_forward: non-finite output of gamma2");
  }

  const std::size_t d_n = model.hidden_width();
  cache.y_hat = Tensor({b_n, h_n});
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      double acc = model.bias();
      const double* hd = &cache.hidden(b, h, 0);
      for (std::size_t d = 0; d < d_n; ++d) acc += model.final_weights(d) * hd[d];
      cache.y_hat(b, h) = acc;
    }
  }
  if (!cache.y_hat.all_finite()) {
    throw NumericError("model_forward: non-finite output of the final linear layer");
  }
}

// --- backward -----------------------------------------------------------------

namespace {

void accumulate(ModelGrads& grads, const std::string& name, const std::vector<double>& values) {
  auto& slot = grads[name];
  if (slot.empty()) {
    slot = values;
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) slot[i] += values[i];
  }
}

}  // namespace

ModelGrads model_backward(ForecastModel& model, const Tensor& c_b, const ModelForwardCache& cache,
                          const Tensor& upstream_y) {
  const std::size_t b_n = cache.y_hat.dim(0), h_n = cache.y_hat.dim(1);
  if (upstream_y.rank() != 2 || upstream_y.dim(0) != b_n || upstream_y.dim(1) != h_n) {
    throw ValidationError("model_backward: upstream must be B x H");
  }
  ModelGrads grads;
  const std::size_t d_n = model.hidden_width();

  // final linear head
  std::vector<double> g_head(d_n, 0.0), g_bias(1, 0.0);
  Tensor d_hidden({b_n, h_n, d_n});
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      const double g = upstream_y(b, h);
      g_bias[0] += g;
      const double* hd = &cache.hidden(b, h, 0);
      double* dh = &d_hidden(b, h, 0);
      for (std::size_t d = 0; d < d_n; ++d) {
        g_head[d] += g * hd[d];
        dh[d] = g * model.final_weights(d);
      }
    }
  }
  accumulate(grads, "head.weights", g_head);
  accumulate(grads, "head.bias", g_bias);

  Tensor d_gamma1_out = model.gamma2.backward(cache.gamma1_out, cache.gamma2, d_hidden,
                                              "gamma2", grads);
  Tensor d_merged = model.gamma1.backward(cache.merged, cache.gamma1, d_gamma1_out,
                                          "gamma1", grads);

  const std::size_t f_w = model.weather.aggregated_width();
  const std::size_t f_t = model.weather.temperature_channels.size();

  Tensor d_aggregated({b_n, h_n, f_w});
  Tensor d_smoothed({b_n, h_n, f_t});
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      for (std::size_t f = 0; f < f_w; ++f) d_aggregated(b, h, f) = d_merged(b, h, f);
      for (std::size_t k = 0; k < f_t; ++k) d_smoothed(b, h, k) = d_merged(b, h, f_w + k);
    }
  }

  // smoothing layer; its input gradient flows back onto the smoothed channels
  Tensor d_smooth_in;
  if (model.weather.use_es) {
    auto g = model.weather.es.backward(cache.smoothing_in, d_smoothed);
    accumulate(grads, "weather.smoothing.raw_alpha", g.raw_alpha.vec());
    d_smooth_in = std::move(g.input);
  } else {
    auto g = model.weather.recurrent.backward(cache.smoothing_in, d_smoothed);
    accumulate(grads, "weather.smoothing.w1", g.w1.vec());
    accumulate(grads, "weather.smoothing.w2", g.w2.vec());
    accumulate(grads, "weather.smoothing.b1", g.b1.vec());
    accumulate(grads, "weather.smoothing.b2", g.b2.vec());
    d_smooth_in = std::move(g.input);
  }
  for (std::size_t k = 0; k < f_t; ++k) {
    const std::size_t dst = model.weather.temperature_channels[k];
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t h = 0; h < h_n; ++h) d_aggregated(b, h, dst) += d_smooth_in(b, h, k);
    }
  }

  // ponderation layers
  std::size_t offset = 0;
  for (std::size_t v = 0; v < model.weather.ponderation_layers.size(); ++v) {
    auto& layer = model.weather.ponderation_layers[v];
    const std::size_t width = layer.n_outputs();
    Tensor upstream({b_n, h_n, width});
    for (std::size_t b = 0; b < b_n; ++b) {
      for (std::size_t h = 0; h < h_n; ++h) {
        for (std::size_t f = 0; f < width; ++f) upstream(b, h, f) = d_aggregated(b, h, offset + f);
      }
    }
    PonderationGradients g = ponderation_backward(layer, cache.ponderation_in[v], upstream);
    const std::string base = "weather.ponderation" + std::to_string(v);
    accumulate(grads, base + ".weights", g.weights.vec());
    accumulate(grads, base + ".bias", g.bias.vec());
    offset += width;
  }
  (void)c_b;
  return grads;
}

// --- training ------------------------------------------------------------------

namespace {

Tensor weather_slice(const Dataset& ds, const std::vector<std::size_t>& days) {
  const std::size_t h_n = ds.instants();
  const std::size_t v_n = ds.weather.n_variables(), i_n = ds.weather.n_stations();
  Tensor out({days.size(), h_n, v_n, i_n});
  for (std::size_t b = 0; b < days.size(); ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      for (std::size_t v = 0; v < v_n; ++v) {
        for (std::size_t i = 0; i < i_n; ++i) out(b, h, v, i) = ds.weather.values(days[b], h, v, i);
      }
    }
  }
  return out;
}

Tensor calendar_slice(const Dataset& ds, const std::vector<std::size_t>& days) {
  const std::size_t h_n = ds.instants(), f_n = ds.calendar.n_features();
  Tensor out({days.size(), h_n, f_n});
  for (std::size_t b = 0; b < days.size(); ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      for (std::size_t f = 0; f < f_n; ++f) out(b, h, f) = ds.calendar.values(days[b], h, f);
    }
  }
  return out;
}

Tensor scaled_load_slice(const Dataset& ds, const std::vector<std::size_t>& days) {
  const std::size_t h_n = ds.instants();
  Tensor out({days.size(), h_n});
  for (std::size_t b = 0; b < days.size(); ++b) {
    for (std::size_t h = 0; h < h_n; ++h) {
      out(b, h) = ds.scaler.scale_load(ds.load.values(days[b], h));
    }
  }
  return out;
}

void sgd_step(ForecastModel& model, const ModelGrads& grads, const TrainConfig& cfg) {
  double scale = 1.0;
  if (cfg.gradient_clip.has_value()) {
    double norm_sq = 0.0;
    for (const auto& [name, g] : grads) {
      for (double v : g) norm_sq += v * v;
    }
    const double norm = std::sqrt(norm_sq);
    if (norm > *cfg.gradient_clip && norm > 0.0) scale = *cfg.gradient_clip / norm;
  }
  for (ParamRef& ref : param_refs(model)) {
    auto it = grads.find(ref.name);
    if (it == grads.end()) continue;
    const std::vector<double>& g = it->second;
    for (std::size_t i = 0; i < g.size(); ++i) {
      (*ref.values)[i] -= cfg.learning_rate * scale * g[i];
    }
  }
}

}  // namespace

TrainResult train_model(ForecastModel& model, const Dataset& ds, const TrainConfig& cfg) {
  const DayRange train = ds.splits.train;
  if (train.empty()) throw ValidationError("train_model: empty training split");
  if (cfg.batch_size == 0) throw ValidationError("train_model: batch_size must be >= 1");

  TrainResult result;
  result.loss_curve.reserve(cfg.epochs);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    model.weather.reset_state();  // warm start rebuilt from the first batch
    double sse = 0.0;
    std::size_t count = 0;

    std::vector<std::size_t> batch;
    batch.reserve(cfg.batch_size);
    auto flush = [&]() {
      if (batch.empty()) return;
      Tensor w_b = weather_slice(ds, batch);
      Tensor c_b = calendar_slice(ds, batch);
      Tensor y = scaled_load_slice(ds, batch);
      ModelForwardCache cache;
      model_forward(model, w_b, c_b, cache);
      const std::size_t n = y.size();
      Tensor dy({y.dim(0), y.dim(1)});
      double batch_sse = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double err = cache.y_hat[i] - y[i];
        batch_sse += err * err;
        dy[i] = 2.0 * err / static_cast<double>(n);
      }
      if (!std::isfinite(batch_sse)) {
        throw NumericError("train_model: loss diverged at epoch " + std::to_string(epoch));
      }
      sse += batch_sse;
      count += n;
      ModelGrads grads = model_backward(model, c_b, cache, dy);
      sgd_step(model, grads, cfg);
      batch.clear();
    };

    for (std::size_t t = train.begin; t < train.end; ++t) {
      if (ds.load.exclusion_mask[t]) {
        // excluded days never enter a gradient batch but still advance the
        // smoothing carry
        flush();
        Tensor w_b = weather_slice(ds, {t});
        weather_module_forward(model.weather, w_b, nullptr);
        continue;
      }
      batch.push_back(t);
      if (batch.size() == cfg.batch_size) flush();
    }
    flush();
    const double epoch_mse = count > 0 ? sse / static_cast<double>(count) : 0.0;
    if (!std::isfinite(epoch_mse)) {
      throw NumericError("train_model: loss diverged at epoch " + std::to_string(epoch));
    }
    result.loss_curve.push_back(epoch_mse);
    VC_DEBUG("epoch " << epoch << " mse " << epoch_mse);
  }
  return result;
}

PredictResult predict(const ForecastModel& model, const Dataset& ds, const DayRange& range) {
  if (range.empty() || range.end > ds.days()) {
    throw ValidationError("predict: range out of bounds");
  }
  if (range.begin < ds.splits.train.begin) {
    throw ValidationError("predict: range precedes the training period, carry is undefined");
  }
  ForecastModel runner = model;  // prediction must not disturb the caller's state
  runner.weather.reset_state();

  const std::size_t h_n = ds.instants();
  const std::size_t d_n = model.hidden_width();
  PredictResult result;
  result.range = range;
  result.forecasts_mw = Tensor({range.length(), h_n});
  result.forecasts_scaled = Tensor({range.length(), h_n});
  result.hidden = Tensor({range.length(), h_n, d_n});

  constexpr std::size_t kBlock = 32;
  std::size_t t = ds.splits.train.begin;
  while (t < range.end) {
    std::vector<std::size_t> days;
    for (; t < range.end && days.size() < kBlock; ++t) days.push_back(t);
    Tensor w_b = weather_slice(ds, days);
    Tensor c_b = calendar_slice(ds, days);
    ModelForwardCache cache;
    model_forward(runner, w_b, c_b, cache);
    for (std::size_t b = 0; b < days.size(); ++b) {
      if (!range.contains(days[b])) continue;
      const std::size_t row = days[b] - range.begin;
      for (std::size_t h = 0; h < h_n; ++h) {
        result.forecasts_scaled(row, h) = cache.y_hat(b, h);
        result.forecasts_mw(row, h) = ds.scaler.unscale_load(cache.y_hat(b, h));
        for (std::size_t d = 0; d < d_n; ++d) result.hidden(row, h, d) = cache.hidden(b, h, d);
      }
    }
  }
  return result;
}

// --- serialization ---------------------------------------------------------------

namespace {

json tensor_to_nested(const Tensor& t, std::size_t axis, std::size_t offset, std::size_t span) {
  json out = json::array();
  if (axis + 1 == t.rank()) {
    for (std::size_t i = 0; i < t.dim(axis); ++i) out.push_back(t[offset + i]);
    return out;
  }
  const std::size_t inner = span / t.dim(axis);
  for (std::size_t i = 0; i < t.dim(axis); ++i) {
    out.push_back(tensor_to_nested(t, axis + 1, offset + i * inner, inner));
  }
  return out;
}

json tensor_to_json(const Tensor& t) { return tensor_to_nested(t, 0, 0, t.size()); }

void read_nested(const json& j, std::vector<double>& out) {
  if (j.is_array()) {
    for (const auto& e : j) read_nested(e, out);
  } else {
    out.push_back(j.get<double>());
  }
}

Tensor tensor_from_json(const json& j, const std::vector<std::size_t>& shape,
                        const std::string& name) {
  Tensor t(shape);
  std::vector<double> flat;
  read_nested(j, flat);
  if (flat.size() != t.size()) {
    throw ValidationError("model json: parameter '" + name + "' has wrong size");
  }
  std::copy(flat.begin(), flat.end(), t.vec().begin());
  return t;
}

json graph_spec_to_json(const GraphSpec& spec) {
  json nodes = json::array();
  for (const GraphNodeSpec& n : spec.nodes) {
    nodes.push_back({{"kind", to_string(n.layer.kind)},
                     {"out_dim", n.layer.out_dim},
                     {"kernel", n.layer.kernel},
                     {"activation", to_string(n.layer.activation)},
                     {"skip_input", n.skip_input}});
  }
  return nodes;
}

GraphSpec graph_spec_from_json(const json& j) {
  GraphSpec spec;
  for (const auto& n : j) {
    GraphNodeSpec node;
    node.layer.kind = node_kind_from_string(n.at("kind").get<std::string>());
    node.layer.out_dim = n.value("out_dim", std::size_t{1});
    node.layer.kernel = n.value("kernel", std::size_t{1});
    node.layer.activation = activation_from_string(n.value("activation", std::string("identity")));
    node.skip_input = n.value("skip_input", false);
    spec.nodes.push_back(node);
  }
  return spec;
}

json spec_to_json_obj(const ModelSpec& spec) {
  json weather = {{"f_v", spec.weather.f_v},
                  {"smoothing", spec.weather.use_es ? std::string("es")
                                                    : to_string(spec.weather.smoothing_kind)},
                  {"recurrent_activation", to_string(spec.weather.recurrent_activation)}};
  return {{"weather", weather},
          {"gamma1", graph_spec_to_json(spec.gamma1)},
          {"gamma2", graph_spec_to_json(spec.gamma2)}};
}

ModelSpec spec_from_json_obj(const json& j) {
  ModelSpec spec;
  const json& weather = j.at("weather");
  spec.weather.f_v = weather.at("f_v").get<std::vector<std::size_t>>();
  const std::string smoothing = weather.at("smoothing").get<std::string>();
  if (smoothing == "es") {
    spec.weather.use_es = true;
  } else {
    spec.weather.use_es = false;
    spec.weather.smoothing_kind = cell_kind_from_string(smoothing);
  }
  spec.weather.recurrent_activation =
      activation_from_string(weather.value("recurrent_activation", std::string("tanh")));
  spec.gamma1 = graph_spec_from_json(j.at("gamma1"));
  spec.gamma2 = graph_spec_from_json(j.at("gamma2"));
  return spec;
}

json scaler_to_json(const ScalerParams& scaler) {
  return {{"mins", tensor_to_json(scaler.mins)},
          {"maxs", tensor_to_json(scaler.maxs)},
          {"aggregate_mins", tensor_to_json(scaler.aggregate_mins)},
          {"aggregate_maxs", tensor_to_json(scaler.aggregate_maxs)},
          {"load_min", scaler.load_min},
          {"load_max", scaler.load_max}};
}

ScalerParams scaler_from_json(const json& j) {
  ScalerParams scaler;
  std::vector<double> flat;
  read_nested(j.at("mins"), flat);
  const std::size_t v = j.at("mins").size();
  const std::size_t i = flat.size() / v;
  scaler.mins = tensor_from_json(j.at("mins"), {v, i}, "scaler.mins");
  scaler.maxs = tensor_from_json(j.at("maxs"), {v, i}, "scaler.maxs");
  scaler.aggregate_mins = tensor_from_json(j.at("aggregate_mins"), {v}, "scaler.aggregate_mins");
  scaler.aggregate_maxs = tensor_from_json(j.at("aggregate_maxs"), {v}, "scaler.aggregate_maxs");
  scaler.load_min = j.at("load_min").get<double>();
  scaler.load_max = j.at("load_max").get<double>();
  return scaler;
}

}  // namespace

std::string model_spec_to_json(const ModelSpec& spec) { return spec_to_json_obj(spec).dump(2); }

ModelSpec model_spec_from_json(const std::string& text) {
  return spec_from_json_obj(json::parse(text));
}

std::string model_to_json(const ForecastModel& model, const ScalerParams& scaler) {
  json params = json::object();
  const ForecastModel& m = model;
  for (std::size_t v = 0; v < m.weather.ponderation_layers.size(); ++v) {
    const auto& layer = m.weather.ponderation_layers[v];
    const std::string base = "weather.ponderation" + std::to_string(v);
    params[base + ".weights"] = tensor_to_json(layer.weights);
    params[base + ".bias"] = tensor_to_json(layer.bias);
  }
  if (m.weather.use_es) {
    params["weather.smoothing.raw_alpha"] = m.weather.es.raw_alpha_values();
  } else {
    params["weather.smoothing.w1"] = tensor_to_json(m.weather.recurrent.input_weights());
    params["weather.smoothing.w2"] = tensor_to_json(m.weather.recurrent.recurrent_weights());
    params["weather.smoothing.b1"] = tensor_to_json(m.weather.recurrent.bias1());
    params["weather.smoothing.b2"] = tensor_to_json(m.weather.recurrent.bias2());
  }
  auto graph_params = [&params](const NetworkGraph& graph, const std::string& prefix) {
    const auto& nodes = graph.nodes();
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      if (nodes[n].spec.kind == NodeKind::kIdentity) continue;
      const std::string base = prefix + ".node" + std::to_string(n);
      params[base + ".weights"] = tensor_to_json(nodes[n].weights);
      params[base + ".bias"] = tensor_to_json(nodes[n].bias);
    }
  };
  graph_params(m.gamma1, "gamma1");
  graph_params(m.gamma2, "gamma2");
  params["head.weights"] = tensor_to_json(m.final_weights);
  params["head.bias"] = tensor_to_json(m.final_bias);

  json doc = {{"format", "voltcast-model-v1"},
              {"spec", spec_to_json_obj(model.spec)},
              {"dims", {{"h", model.dims.h}, {"v", model.dims.v}, {"i", model.dims.i},
                        {"f", model.dims.f}}},
              {"seed", model.seed},
              {"scaler", scaler_to_json(scaler)},
              {"params", params}};
  return doc.dump(2);
}

ForecastModel model_from_json(const std::string& text, ScalerParams* scaler_out) {
  json doc = json::parse(text);
  if (doc.value("format", std::string()) != "voltcast-model-v1") {
    throw ValidationError("model json: unknown format");
  }
  ModelSpec spec = spec_from_json_obj(doc.at("spec"));
  DatasetDims dims;
  dims.h = doc.at("dims").at("h").get<std::size_t>();
  dims.v = doc.at("dims").at("v").get<std::size_t>();
  dims.i = doc.at("dims").at("i").get<std::size_t>();
  dims.f = doc.at("dims").at("f").get<std::size_t>();
  ForecastModel model = assemble_model(spec, dims, doc.at("seed").get<std::uint64_t>());

  const json& params = doc.at("params");
  for (ParamRef& ref : param_refs(model)) {
    if (!params.contains(ref.name)) {
      throw ValidationError("model json: missing parameter '" + ref.name + "'");
    }
    std::vector<double> flat;
    read_nested(params.at(ref.name), flat);
    if (flat.size() != ref.values->size()) {
      throw ValidationError("model json: parameter '" + ref.name + "' has wrong size");
    }
    *ref.values = flat;
  }
  if (scaler_out != nullptr) *scaler_out = scaler_from_json(doc.at("scaler"));
  return model;
}

void save_model(const ForecastModel& model, const ScalerParams& scaler, const std::string& path) {
  write_text_file(path, model_to_json(model, scaler) + "\n");
}

ForecastModel load_model(const std::string& path, ScalerParams* scaler_out) {
  return model_from_json(read_text_file(path), scaler_out);
}

}  // namespace voltcast
