#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"

namespace voltcast {

using nlohmann::json;

double compute_mse(const std::vector<double>& y, const std::vector<double>& y_hat) {
  if (y.size() != y_hat.size()) throw ValidationError("compute_mse: length mismatch");
  if (y.empty()) throw ValidationError("compute_mse: empty series");
  double sse = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double err = y[i] - y_hat[i];
    sse += err * err;
  }
  return sse / static_cast<double>(y.size());
}

double compute_mape(const std::vector<double>& y, const std::vector<double>& y_hat) {
  if (y.size() != y_hat.size()) throw ValidationError("compute_mape: length mismatch");
  if (y.empty()) throw ValidationError("compute_mape: empty series");
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) {
      throw ValidationError("compute_mape: zero ground-truth value at index " +
                            std::to_string(i));
    }
    total += std::abs((y[i] - y_hat[i]) / y[i]);
  }
  return 100.0 * total / static_cast<double>(y.size());
}

namespace {

void collect_period(const ForecastFrame& frame, const Dataset& ds, const DayRange& period,
                    std::vector<double>& y_mw, std::vector<double>& yhat_mw,
                    std::vector<double>& y_scaled, std::vector<double>& yhat_scaled) {
  if (period.begin < frame.range.begin || period.end > frame.range.end) {
    throw ValidationError("report: forecasts do not cover the requested period");
  }
  const std::size_t h_n = ds.instants();
  for (std::size_t t = period.begin; t < period.end; ++t) {
    const std::size_t row = t - frame.range.begin;
    for (std::size_t h = 0; h < h_n; ++h) {
      const double y = ds.load.values(t, h);
      const double f = frame.values_mw(row, h);
      y_mw.push_back(y);
      yhat_mw.push_back(f);
      y_scaled.push_back(ds.scaler.scale_load(y));
      yhat_scaled.push_back(ds.scaler.scale_load(f));
    }
  }
}

}  // namespace

ReportOutput run_report(const std::vector<ModelRun>& models, const Dataset& ds,
                        const DayRange& period) {
  if (period.empty() || period.end > ds.days()) {
    throw ValidationError("report: period out of bounds");
  }
  ReportOutput out;
  json rows = json::array();
  std::ostringstream table;
  char line[160];
  std::snprintf(line, sizeof(line), "%-28s %14s %22s\n", "model", "static MAPE",
                "recalibrated MAPE");
  table << line;
  for (const ModelRun& run : models) {
    MetricReport row;
    row.model_name = run.name;
    row.period = period;

    std::vector<double> y_mw, yhat_mw, y_scaled, yhat_scaled;
    collect_period(run.static_forecast, ds, period, y_mw, yhat_mw, y_scaled, yhat_scaled);
    row.static_mape = compute_mape(y_mw, yhat_mw);
    row.mse_scaled = compute_mse(y_scaled, yhat_scaled);

    if (run.recalibrated.has_value()) {
      std::vector<double> ry, ryhat, rys, ryhats;
      collect_period(*run.recalibrated, ds, period, ry, ryhat, rys, ryhats);
      row.recalibrated_mape = compute_mape(ry, ryhat);
      row.mse_scaled = compute_mse(rys, ryhats);
    }

    if (row.recalibrated_mape.has_value()) {
      std::snprintf(line, sizeof(line), "%-28s %13.3f%% %21.3f%%\n", row.model_name.c_str(),
                    row.static_mape, *row.recalibrated_mape);
    } else {
      std::snprintf(line, sizeof(line), "%-28s %13.3f%% %22s\n", row.model_name.c_str(),
                    row.static_mape, "-");
    }
    table << line;

    json jrow = {{"model", row.model_name},
                 {"static_mape", row.static_mape},
                 {"mse_scaled", row.mse_scaled},
                 {"period", {period.begin, period.end}}};
    if (row.recalibrated_mape.has_value()) jrow["recalibrated_mape"] = *row.recalibrated_mape;
    rows.push_back(jrow);
    out.rows.push_back(std::move(row));
  }
  out.table = table.str();
  json doc = {{"period", {period.begin, period.end}}, {"models", rows}};
  out.json = doc.dump(2);
  return out;
}

std::string forecast_to_csv(const ForecastFrame& frame, const CivilDate& day0,
                            const Tensor* static_mw) {
  std::ostringstream os;
  os << "date,instant,forecast_mw";
  if (static_mw != nullptr) os << ",static_forecast_mw";
  os << "\n";
  const std::size_t h_n = frame.values_mw.dim(1);
  for (std::size_t t = 0; t < frame.range.length(); ++t) {
    const std::string date =
        day0.plus_days(static_cast<std::int64_t>(frame.range.begin + t)).to_string();
    for (std::size_t h = 0; h < h_n; ++h) {
      os << date << "," << h << "," << format_double(frame.values_mw(t, h));
      if (static_mw != nullptr) os << "," << format_double((*static_mw)(t, h));
      os << "\n";
    }
  }
  return os.str();
}

ForecastFrame forecast_from_csv(const std::string& path, const CivilDate& day0) {
  CsvTable table = read_csv(path);
  const int date_col = table.column("date");
  const int instant_col = table.column("instant");
  const int value_col = table.column("forecast_mw");
  if (date_col < 0 || instant_col < 0 || value_col < 0) {
    throw ValidationError("'" + path + "': need date,instant,forecast_mw columns");
  }
  if (table.rows.empty()) throw ValidationError("'" + path + "': no rows");

  std::int64_t first_day = 0, last_day = 0;
  std::size_t h_n = 0;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::int64_t day =
        CivilDate::parse(table.rows[r][date_col]).serial_day() - day0.serial_day();
    const std::size_t instant = static_cast<std::size_t>(
        parse_long(table.rows[r][instant_col], path + " instant"));
    if (r == 0) {
      first_day = last_day = day;
    } else {
      first_day = std::min(first_day, day);
      last_day = std::max(last_day, day);
    }
    h_n = std::max(h_n, instant + 1);
  }
  if (first_day < 0) throw ValidationError("'" + path + "': forecast precedes dataset start");

  ForecastFrame frame;
  frame.range = DayRange{static_cast<std::size_t>(first_day),
                         static_cast<std::size_t>(last_day) + 1};
  frame.values_mw = Tensor::full({frame.range.length(), h_n},
                                 std::numeric_limits<double>::quiet_NaN());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t day = static_cast<std::size_t>(
        CivilDate::parse(table.rows[r][date_col]).serial_day() - day0.serial_day());
    const std::size_t instant = static_cast<std::size_t>(
        parse_long(table.rows[r][instant_col], path + " instant"));
    frame.values_mw(day - frame.range.begin, instant) =
        parse_double(table.rows[r][value_col], path + " forecast_mw");
  }
  if (!frame.values_mw.all_finite()) {
    throw ValidationError("'" + path + "': coverage gaps in the forecast grid");
  }
  return frame;
}

// --- figure exports -----------------------------------------------------------

std::vector<std::string> export_plot_data(const ForecastModel& model, const Dataset& ds,
                                          const std::string& out_dir,
                                          const ExportOptions& options) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  DayRange range;
  if (options.range.has_value()) {
    range = *options.range;
  } else if (!ds.splits.test.empty()) {
    range = ds.splits.test;
  } else {
    range = DayRange{ds.splits.train.begin, ds.days()};
  }
  if (range.empty() || range.end > ds.days() || range.begin < ds.splits.train.begin) {
    throw ValidationError("export_plot_data: invalid range");
  }

  const std::size_t v_n = ds.weather.n_variables();
  const std::size_t i_n = ds.weather.n_stations();
  const std::size_t h_n = ds.instants();

  Tensor reference_weights = Tensor::full({v_n, i_n}, 1.0 / static_cast<double>(i_n));
  if (options.reference_weights.has_value()) {
    if (options.reference_weights->rank() != 2 || options.reference_weights->dim(0) != v_n ||
        options.reference_weights->dim(1) != i_n) {
      throw ValidationError("export_plot_data: reference weights must be V x I");
    }
    reference_weights = *options.reference_weights;
  }

  // thread the carry from the training start, keep rows inside `range`
  ForecastModel runner = model;
  runner.weather.reset_state();
  const std::size_t rows = range.length() * h_n;
  const std::size_t f_w = runner.weather.aggregated_width();
  const std::size_t f_t = runner.weather.temperature_channels.size();
  Tensor learned_agg({rows, f_w});
  Tensor learned_smooth({rows, f_t});

  constexpr std::size_t kBlock = 32;
  std::size_t t = ds.splits.train.begin;
  while (t < range.end) {
    std::vector<std::size_t> days;
    for (; t < range.end && days.size() < kBlock; ++t) days.push_back(t);
    Tensor w_b({days.size(), h_n, v_n, i_n});
    for (std::size_t b = 0; b < days.size(); ++b) {
      for (std::size_t h = 0; h < h_n; ++h) {
        for (std::size_t v = 0; v < v_n; ++v) {
          for (std::size_t i = 0; i < i_n; ++i) w_b(b, h, v, i) = ds.weather.values(days[b], h, v, i);
        }
      }
    }
    ModelForwardCache cache;
    weather_module_forward(runner.weather, w_b, &cache);
    for (std::size_t b = 0; b < days.size(); ++b) {
      if (!range.contains(days[b])) continue;
      const std::size_t row0 = (days[b] - range.begin) * h_n;
      for (std::size_t h = 0; h < h_n; ++h) {
        for (std::size_t f = 0; f < f_w; ++f) learned_agg(row0 + h, f) = cache.aggregated(b, h, f);
        for (std::size_t k = 0; k < f_t; ++k) {
          learned_smooth(row0 + h, k) = cache.smoothed(b, h, k);
        }
      }
    }
  }

  std::vector<std::string> written;
  auto date_of = [&](std::size_t row) {
    return ds.load.start_date.plus_days(static_cast<std::int64_t>(range.begin + row / h_n))
        .to_string();
  };

  // (a) per-variable aggregated signals vs the reference aggregation
  std::size_t offset = 0;
  for (std::size_t v = 0; v < v_n; ++v) {
    const std::size_t width = runner.weather.ponderation_layers[v].n_outputs();
    std::ostringstream os;
    os << "date,instant";
    for (std::size_t f = 0; f < width; ++f) os << ",learned_" << f;
    os << ",reference\n";
    for (std::size_t row = 0; row < rows; ++row) {
      const std::size_t day = range.begin + row / h_n;
      const std::size_t h = row % h_n;
      os << date_of(row) << "," << h;
      for (std::size_t f = 0; f < width; ++f) os << "," << format_double(learned_agg(row, offset + f));
      double reference = 0.0;
      for (std::size_t i = 0; i < i_n; ++i) {
        reference += reference_weights(v, i) * ds.weather.values(day, h, v, i);
      }
      os << "," << format_double(reference) << "\n";
    }
    const std::string path =
        (fs::path(out_dir) / ("signals_" + ds.weather.variable_names[v] + ".csv")).string();
    write_text_file(path, os.str());
    written.push_back(path);
    offset += width;
  }

  // (b) smoothed temperature channels vs a smoothed reference aggregate
  {
    std::ostringstream os;
    os << "date,instant";
    for (std::size_t k = 0; k < f_t; ++k) os << ",learned_" << k;
    os << ",reference\n";

    // reference: uniform (or supplied) aggregate of the temperature variable,
    // smoothed with the model's first coefficient when the layer is ES
    std::vector<double> reference(rows, 0.0);
    {
      std::vector<double> agg;
      agg.reserve((range.end - ds.splits.train.begin) * h_n);
      for (std::size_t day = ds.splits.train.begin; day < range.end; ++day) {
        for (std::size_t h = 0; h < h_n; ++h) {
          double a = 0.0;
          for (std::size_t i = 0; i < i_n; ++i) {
            a += reference_weights(0, i) * ds.weather.values(day, h, 0, i);
          }
          agg.push_back(a);
        }
      }
      if (model.weather.use_es) {
        const double alpha = model.weather.es.alpha(0);
        double carry = agg.empty() ? 0.0 : agg.front();
        for (std::size_t k = 0; k < agg.size(); ++k) {
          carry = (1.0 - alpha) * agg[k] + alpha * carry;
          agg[k] = carry;
        }
      }
      const std::size_t skip = (range.begin - ds.splits.train.begin) * h_n;
      for (std::size_t row = 0; row < rows; ++row) reference[row] = agg[skip + row];
    }

    for (std::size_t row = 0; row < rows; ++row) {
      os << date_of(row) << "," << row % h_n;
      for (std::size_t k = 0; k < f_t; ++k) os << "," << format_double(learned_smooth(row, k));
      os << "," << format_double(reference[row]) << "\n";
    }
    const std::string path = (fs::path(out_dir) / "smoothed_temperature.csv").string();
    write_text_file(path, os.str());
    written.push_back(path);
  }

  // (d) learned ponderation weights per station
  {
    std::ostringstream os;
    os << "station_id,variable,channel,weight\n";
    for (std::size_t v = 0; v < v_n; ++v) {
      const auto& layer = runner.weather.ponderation_layers[v];
      for (std::size_t f = 0; f < layer.n_outputs(); ++f) {
        for (std::size_t i = 0; i < i_n; ++i) {
          os << ds.weather.stations[i].station_id << "," << ds.weather.variable_names[v] << ","
             << f << "," << format_double(layer.weights(f, i)) << "\n";
        }
      }
    }
    const std::string path = (fs::path(out_dir) / "ponderation_weights.csv").string();
    write_text_file(path, os.str());
    written.push_back(path);
  }

  // (c) smoothing-kind counts, when a search history is supplied
  if (options.kind_history.has_value()) {
    const std::string path = (fs::path(out_dir) / "smoothing_kind_counts.csv").string();
    write_text_file(path, kind_history_to_csv(*options.kind_history));
    written.push_back(path);
  }
  return written;
}

}  // namespace voltcast
