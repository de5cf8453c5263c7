#pragma once

#include <optional>
#include <string>
#include <vector>

#include "data.hpp"
#include "forecaster.hpp"
#include "search.hpp"
#include "tensor.hpp"

namespace voltcast {

double compute_mse(const std::vector<double>& y, const std::vector<double>& y_hat);

// Percent: 100 * mean(|y - y_hat| / |y|). Rejects zero ground-truth values.
double compute_mape(const std::vector<double>& y, const std::vector<double>& y_hat);

struct ForecastFrame {
  DayRange range;
  Tensor values_mw;  // |range| x H
};

struct ModelRun {
  std::string name;
  ForecastFrame static_forecast;
  std::optional<ForecastFrame> recalibrated;
};

struct MetricReport {
  std::string model_name;
  double static_mape = 0.0;                  // percent
  std::optional<double> recalibrated_mape;   // percent
  double mse_scaled = 0.0;  // recalibrated when available, else static
  DayRange period;
};

struct ReportOutput {
  std::vector<MetricReport> rows;
  std::string table;  // rendered for stdout
  std::string json;
};

ReportOutput run_report(const std::vector<ModelRun>& models, const Dataset& ds,
                        const DayRange& period);

// --- forecast CSV ---------------------------------------------------------

// `date,instant,forecast_mw` (+ `,static_forecast_mw` when with_static).
std::string forecast_to_csv(const ForecastFrame& frame, const CivilDate& day0,
                            const Tensor* static_mw = nullptr);
ForecastFrame forecast_from_csv(const std::string& path, const CivilDate& day0);

// --- figure exports ---------------------------------------------------------

struct ExportOptions {
  std::optional<Tensor> reference_weights;  // V x I, applied in scaled space; default uniform
  std::optional<KindHistory> kind_history;
  std::optional<DayRange> range;  // default: test split, else everything after train start
};

// Writes, under out_dir:
//   signals_<variable>.csv          learned aggregated channels vs reference
//   smoothed_temperature.csv        learned smoothed channels vs reference
//   ponderation_weights.csv         station_id,variable,channel,weight
//   smoothing_kind_counts.csv       when a search history is supplied
std::vector<std::string> export_plot_data(const ForecastModel& model, const Dataset& ds,
                                          const std::string& out_dir,
                                          const ExportOptions& options = {});

}  // namespace voltcast
