#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "data.hpp"
#include "graph.hpp"
#include "layers.hpp"
#include "tensor.hpp"

namespace voltcast {

// --- architecture description -------------------------------------------

// Chain-with-optional-input-skip encoding of a graph: node i always consumes
// node i-1 (or the stage input for i = 0) and, when skip_input is set, the
// stage input as well, concatenated on the feature axis.
struct GraphNodeSpec {
  LayerSpec layer;
  bool skip_input = false;
};

struct GraphSpec {
  std::vector<GraphNodeSpec> nodes;
};

struct WeatherSpec {
  std::vector<std::size_t> f_v;  // aggregated channels per variable
  CellKind smoothing_kind = CellKind::kVanilla;
  bool use_es = true;  // exponential smoothing layer instead of a recurrent cell
  Activation recurrent_activation = Activation::kTanh;
};

struct ModelSpec {
  WeatherSpec weather;
  GraphSpec gamma1;
  GraphSpec gamma2;
};

struct DatasetDims {
  std::size_t h = 0;  // instants per day
  std::size_t v = 0;  // weather variables
  std::size_t i = 0;  // stations
  std::size_t f = 0;  // calendar features

  static DatasetDims of(const Dataset& ds);
};

// --- model ----------------------------------------------------------------

struct WeatherModelingModule {
  std::vector<PonderationLayer> ponderation_layers;  // one per variable
  bool use_es = true;
  ExpSmoothingLayer es;
  RecurrentSmoothingLayer recurrent;
  std::vector<std::size_t> temperature_channels;  // offsets into the concatenated F_W vector

  std::size_t aggregated_width() const;  // F_W
  std::size_t output_width() const;      // F_W + F_T
  void reset_state();
};

struct ForecastModel {
  ModelSpec spec;
  DatasetDims dims;
  WeatherModelingModule weather;
  NetworkGraph gamma1;
  NetworkGraph gamma2;
  Tensor final_weights;  // D, applied per instant
  Tensor final_bias;     // single scalar
  std::uint64_t seed = 0;

  std::size_t hidden_width() const { return final_weights.dim(0); }
  double bias() const { return final_bias(0); }
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 100;
  std::size_t batch_size = 16;
  std::uint64_t seed = 0;
  std::optional<double> gradient_clip;  // global norm
};

// Named views over every trainable parameter, in a stable order.
struct ParamRef {
  std::string name;
  std::vector<double>* values;
};
std::vector<ParamRef> param_refs(ForecastModel& model);

using ModelGrads = std::map<std::string, std::vector<double>>;

ForecastModel assemble_model(const ModelSpec& spec, const DatasetDims& dims, std::uint64_t seed);

// --- forward / backward ---------------------------------------------------

struct ModelForwardCache {
  std::vector<Tensor> ponderation_in;   // per variable, B x H x I
  Tensor aggregated;                    // B x H x F_W
  Tensor smoothing_in;                  // B x H x F_T
  Tensor smoothed;                      // B x H x F_T
  Tensor merged;                        // B x H x (F_W + F_T + F)
  Tensor gamma1_out;                    // B x H x d
  NetworkGraph::Cache gamma1;
  NetworkGraph::Cache gamma2;
  Tensor hidden;                        // B x H x D
  Tensor y_hat;                         // B x H
};

// Mutates the smoothing carry; batches must arrive chronologically.
Tensor weather_module_forward(WeatherModelingModule& module, const Tensor& w_b,
                              ModelForwardCache* cache = nullptr);

// y_hat[b,h] = sum_d final_weights[d] * hidden[b,h,d] + final_bias
void model_forward(ForecastModel& model, const Tensor& w_b, const Tensor& c_b,
                   ModelForwardCache& cache);

ModelGrads model_backward(ForecastModel& model, const Tensor& c_b, const ModelForwardCache& cache,
                          const Tensor& upstream_y);

// --- training / prediction -------------------------------------------------

struct TrainResult {
  std::vector<double> loss_curve;  // per-epoch training MSE (scaled load)
};

TrainResult train_model(ForecastModel& model, const Dataset& ds, const TrainConfig& cfg);

struct PredictResult {
  DayRange range;
  Tensor forecasts_mw;   // |range| x H
  Tensor forecasts_scaled;
  Tensor hidden;         // |range| x H x D
};

// Threads the smoothing carry chronologically from the start of the training
// split through the end of the requested range.
PredictResult predict(const ForecastModel& model, const Dataset& ds, const DayRange& range);

// --- serialization ----------------------------------------------------------

std::string model_to_json(const ForecastModel& model, const ScalerParams& scaler);
ForecastModel model_from_json(const std::string& text, ScalerParams* scaler_out = nullptr);
void save_model(const ForecastModel& model, const ScalerParams& scaler, const std::string& path);
ForecastModel load_model(const std::string& path, ScalerParams* scaler_out = nullptr);

std::string model_spec_to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const std::string& text);

}  // namespace voltcast
