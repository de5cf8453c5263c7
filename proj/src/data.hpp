#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dates.hpp"
#include "tensor.hpp"

namespace voltcast {

struct StationMeta {
  std::string station_id;
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
};

// Spatio-temporal weather block: values[t, h, v, i] for day t, instant h,
// variable v, station i.
struct WeatherPanel {
  Tensor values;  // T x H x V x I
  std::vector<std::string> variable_names;
  std::vector<StationMeta> stations;
  CivilDate start_date;
  std::size_t steps_per_day = 0;

  std::size_t days() const { return values.dim(0); }
  std::size_t instants() const { return values.dim(1); }
  std::size_t n_variables() const { return values.dim(2); }
  std::size_t n_stations() const { return values.dim(3); }
};

struct LoadSeries {
  Tensor values;  // T x H, megawatts
  CivilDate start_date;
  std::vector<bool> exclusion_mask;  // true = day excluded from gradient batches

  std::size_t days() const { return values.dim(0); }
  std::size_t instants() const { return values.dim(1); }
};

struct CalendarMatrix {
  Tensor values;  // T x H x F
  std::vector<std::string> feature_names;

  std::size_t n_features() const { return values.dim(2); }
};

struct ScalerParams {
  Tensor mins;            // V x I
  Tensor maxs;            // V x I
  Tensor aggregate_mins;  // V
  Tensor aggregate_maxs;  // V
  double load_min = 0.0;  // load bounds over the same training range
  double load_max = 1.0;

  double scale_load(double mw) const { return (mw - load_min) / (load_max - load_min); }
  double unscale_load(double s) const { return s * (load_max - load_min) + load_min; }
};

// Half-open day range [begin, end).
struct DayRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - begin; }
  bool empty() const { return end <= begin; }
  bool contains(std::size_t day) const { return day >= begin && day < end; }
  friend bool operator==(const DayRange&, const DayRange&) = default;
};

struct Splits {
  DayRange train;
  DayRange valid;
  DayRange test;
};

struct Dataset {
  WeatherPanel weather;  // scaled
  CalendarMatrix calendar;
  LoadSeries load;  // megawatts
  ScalerParams scaler;
  Splits splits;
  std::vector<CivilDate> holidays;

  std::size_t days() const { return load.days(); }
  std::size_t instants() const { return load.instants(); }
};

struct SyntheticConfig {
  std::size_t t_days = 0;
  std::size_t h = 0;
  std::size_t v = 1;  // variable 0 is temperature
  std::size_t i = 1;
  double noise_sigma = 0.0;  // MW
  double true_alpha = 0.5;
  std::uint64_t seed = 0;
};

// Load response used by the synthetic generator: a piecewise-linear heating
// term on the smoothed aggregated temperature plus calendar effects.
struct SyntheticResponse {
  double base_mw = 42000.0;
  double heat_coef = 1400.0;  // MW per degree below the heating threshold
  double heat_threshold = 18.0;
  double weekend_dip = -2500.0;
  double holiday_dip = -3000.0;
  double intraday_ramp = 1500.0;  // times h/H
};

struct SyntheticTruth {
  Tensor true_weights;  // V x I, rows sum to 1
  double true_alpha = 0.5;
  std::string response_spec;
  double noise_sigma = 0.0;
  SyntheticResponse response;
  Tensor smoothed_temperature;  // T x H, true-weight aggregate smoothed at true_alpha (raw units)
  Tensor noiseless_load;        // T x H, load before noise (MW)
};

// --- ingestion ---------------------------------------------------------

std::vector<StationMeta> load_stations_csv(const std::string& path);

WeatherPanel load_weather_csv(const std::string& path, const std::string& stations_path,
                              std::size_t target_steps_per_day);

LoadSeries load_load_csv(const std::string& path);

CalendarMatrix build_calendar(const CivilDate& start_date, std::size_t t_days, std::size_t h,
                              const std::vector<CivilDate>& holidays);

// --- scaling -----------------------------------------------------------

// Extremes are fitted over the training day range only. Aggregate extremes
// come from the weights_hint aggregation when given, else from the uniform
// one. Load bounds are fitted from the paired series when provided.
ScalerParams fit_scaler(const WeatherPanel& panel, const DayRange& train_range,
                        const Tensor* weights_hint = nullptr,
                        const LoadSeries* load = nullptr);

WeatherPanel apply_scaler(const WeatherPanel& panel, const ScalerParams& scaler);

// --- dataset assembly ---------------------------------------------------

Dataset split_dataset(Dataset ds, const DayRange& train, const DayRange& valid,
                      const DayRange& test);

// Pre-scaling synthetic artifacts; the CSV writers consume these.
struct SyntheticRaw {
  WeatherPanel panel;  // raw units
  LoadSeries load;
  std::vector<CivilDate> holidays;
  Splits splits;
  SyntheticTruth truth;
};

SyntheticRaw generate_synthetic_raw(const SyntheticConfig& config, std::uint64_t seed);

std::pair<Dataset, SyntheticTruth> generate_synthetic(const SyntheticConfig& config,
                                                      std::uint64_t seed);

// Scale, build the calendar and record splits; shared by the generator and
// the dataset-directory reader.
Dataset assemble_dataset(const WeatherPanel& raw_panel, LoadSeries load,
                         std::vector<CivilDate> holidays, const Splits& splits);

// Noiseless load of the generating process at (day, instant), given the true
// smoothed aggregated temperature. Shared by the generator and test oracles.
double synthetic_response_mw(const SyntheticResponse& response, double smoothed_temp,
                             const CivilDate& date, std::size_t h, std::size_t steps_per_day,
                             const std::vector<CivilDate>& holidays);

std::vector<CivilDate> synthetic_holidays(const CivilDate& start, std::size_t t_days);

}  // namespace voltcast
