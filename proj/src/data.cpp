#include "data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "csv.hpp"
#include "errors.hpp"
#include "logging.hpp"
#include "rng.hpp"

namespace voltcast {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

struct SamplePoint {
  std::int64_t ts = 0;
  double value = 0.0;
};

// Linear interpolation onto `grid`, holding the nearest value beyond the
// first/last sample.
std::vector<double> resample_linear(const std::vector<SamplePoint>& samples,
                                    const std::vector<std::int64_t>& grid) {
  std::vector<double> out(grid.size());
  std::size_t cursor = 0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const std::int64_t t = grid[g];
    while (cursor + 1 < samples.size() && samples[cursor + 1].ts <= t) ++cursor;
    if (t <= samples.front().ts) {
      out[g] = samples.front().value;
    } else if (t >= samples.back().ts) {
      out[g] = samples.back().value;
    } else {
      const SamplePoint& a = samples[cursor];
      const SamplePoint& b = samples[cursor + 1];
      const double w = double(t - a.ts) / double(b.ts - a.ts);
      out[g] = a.value + w * (b.value - a.value);
    }
  }
  return out;
}

}  // namespace

std::vector<StationMeta> load_stations_csv(const std::string& path) {
  CsvTable table = read_csv_expect(path, {"station_id", "name", "lat", "lon"});
  std::vector<StationMeta> stations;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string ctx = path + " row " + std::to_string(r + 2);
    StationMeta s;
    s.station_id = row[0];
    s.name = row[1];
    s.latitude = parse_double(row[2], ctx);
    s.longitude = parse_double(row[3], ctx);
    if (s.station_id.empty()) throw ValidationError(ctx + ": empty station_id");
    if (!seen.insert(s.station_id).second) {
      throw ValidationError(ctx + ": duplicate station_id '" + s.station_id + "'");
    }
    if (s.latitude < -90.0 || s.latitude > 90.0) {
      throw ValidationError(ctx + ": latitude out of [-90, 90]");
    }
    if (s.longitude < -180.0 || s.longitude > 180.0) {
      throw ValidationError(ctx + ": longitude out of [-180, 180]");
    }
    stations.push_back(std::move(s));
  }
  if (stations.empty()) throw ValidationError(path + ": no stations");
  return stations;
}

WeatherPanel load_weather_csv(const std::string& path, const std::string& stations_path,
                              std::size_t target_steps_per_day) {
  if (target_steps_per_day == 0 || kSecondsPerDay % target_steps_per_day != 0) {
    throw ValidationError("target_steps_per_day must divide 86400 seconds");
  }
  std::vector<StationMeta> stations = load_stations_csv(stations_path);
  std::map<std::string, std::size_t> station_index;
  for (std::size_t i = 0; i < stations.size(); ++i) station_index[stations[i].station_id] = i;

  CsvTable table = read_csv_expect(path, {"timestamp_utc", "station_id", "variable", "value"});
  if (table.rows.empty()) throw ValidationError(path + ": no data rows");

  std::vector<std::string> variable_names;
  std::map<std::string, std::size_t> variable_index;
  // series[(v, i)] in row order; timestamps validated strictly increasing
  std::map<std::pair<std::size_t, std::size_t>, std::vector<SamplePoint>> series;
  std::int64_t first_ts = 0, last_ts = 0;

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string ctx = path + " row " + std::to_string(r + 2);
    auto st = station_index.find(row[1]);
    if (st == station_index.end()) {
      throw ValidationError(ctx + ": unknown station_id '" + row[1] + "'");
    }
    auto vi = variable_index.find(row[2]);
    if (vi == variable_index.end()) {
      vi = variable_index.emplace(row[2], variable_names.size()).first;
      variable_names.push_back(row[2]);
    }
    SamplePoint p;
    p.ts = parse_timestamp_utc(row[0]);
    p.value = parse_double(row[3], ctx);
    if (!std::isfinite(p.value)) throw ValidationError(ctx + ": non-finite value");
    auto& s = series[{vi->second, st->second}];
    if (!s.empty() && p.ts <= s.back().ts) {
      throw ValidationError(ctx + ": timestamps not strictly increasing for station '" +
                            row[1] + "' variable '" + row[2] + "'");
    }
    if (r == 0) {
      first_ts = last_ts = p.ts;
    } else {
      first_ts = std::min(first_ts, p.ts);
      last_ts = std::max(last_ts, p.ts);
    }
    s.push_back(p);
  }

  for (std::size_t v = 0; v < variable_names.size(); ++v) {
    for (std::size_t i = 0; i < stations.size(); ++i) {
      if (series.find({v, i}) == series.end()) {
        throw ValidationError(path + ": no samples for station '" + stations[i].station_id +
                              "' variable '" + variable_names[v] + "'");
      }
    }
  }

  const std::int64_t first_day = first_ts / kSecondsPerDay;
  const std::int64_t last_day = last_ts / kSecondsPerDay;
  const std::size_t t_days = static_cast<std::size_t>(last_day - first_day + 1);
  const std::size_t h_steps = target_steps_per_day;
  const std::int64_t step = kSecondsPerDay / static_cast<std::int64_t>(h_steps);

  std::vector<std::int64_t> grid(t_days * h_steps);
  for (std::size_t t = 0; t < t_days; ++t) {
    for (std::size_t h = 0; h < h_steps; ++h) {
      grid[t * h_steps + h] =
          (first_day + static_cast<std::int64_t>(t)) * kSecondsPerDay +
          static_cast<std::int64_t>(h) * step;
    }
  }

  WeatherPanel panel;
  panel.values = Tensor({t_days, h_steps, variable_names.size(), stations.size()});
  panel.variable_names = variable_names;
  panel.stations = stations;
  panel.start_date = CivilDate::from_serial(first_day);
  panel.steps_per_day = h_steps;

  for (std::size_t v = 0; v < variable_names.size(); ++v) {
    for (std::size_t i = 0; i < stations.size(); ++i) {
      std::vector<double> values = resample_linear(series[{v, i}], grid);
      for (std::size_t t = 0; t < t_days; ++t) {
        for (std::size_t h = 0; h < h_steps; ++h) {
          panel.values(t, h, v, i) = values[t * h_steps + h];
        }
      }
    }
  }
  VC_DEBUG("weather panel: T=" << t_days << " H=" << h_steps << " V=" << variable_names.size()
                               << " I=" << stations.size());
  return panel;
}

LoadSeries load_load_csv(const std::string& path) {
  CsvTable table = read_csv_expect(path, {"timestamp_utc", "load_mw"});
  if (table.rows.size() < 2) throw ValidationError(path + ": need at least two rows");

  std::vector<std::int64_t> ts(table.rows.size());
  std::vector<double> mw(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string ctx = path + " row " + std::to_string(r + 2);
    ts[r] = parse_timestamp_utc(table.rows[r][0]);
    mw[r] = parse_double(table.rows[r][1], ctx);
    if (!std::isfinite(mw[r]) || mw[r] <= 0.0) {
      throw ValidationError(ctx + ": load must be finite and > 0");
    }
  }

  const std::int64_t cadence = ts[1] - ts[0];
  if (cadence <= 0) {
    if (cadence == 0) throw ValidationError(path + ": duplicated timestamp " + table.rows[1][0]);
    throw ValidationError(path + ": timestamps not increasing at row 3");
  }
  if (kSecondsPerDay % cadence != 0) {
    throw ValidationError(path + ": cadence does not divide one day");
  }
  for (std::size_t r = 1; r < ts.size(); ++r) {
    const std::int64_t expected = ts[0] + static_cast<std::int64_t>(r) * cadence;
    if (ts[r] == expected) continue;
    if (ts[r] == ts[r - 1]) {
      throw ValidationError(path + ": duplicated timestamp " + table.rows[r][0]);
    }
    throw ValidationError(path + ": gap in grid, first missing timestamp " +
                          format_timestamp_utc(expected));
  }
  if (ts[0] % kSecondsPerDay != 0) {
    throw ValidationError(path + ": series must start at midnight UTC");
  }
  const std::size_t h_steps = static_cast<std::size_t>(kSecondsPerDay / cadence);
  if (ts.size() % h_steps != 0) {
    throw ValidationError(path + ": series does not cover whole days (H=" +
                          std::to_string(h_steps) + ")");
  }
  const std::size_t t_days = ts.size() / h_steps;

  LoadSeries load;
  load.values = Tensor({t_days, h_steps});
  load.start_date = CivilDate::from_serial(ts[0] / kSecondsPerDay);
  load.exclusion_mask.assign(t_days, false);
  for (std::size_t t = 0; t < t_days; ++t) {
    for (std::size_t h = 0; h < h_steps; ++h) {
      load.values(t, h) = mw[t * h_steps + h];
    }
  }
  return load;
}

CalendarMatrix build_calendar(const CivilDate& start_date, std::size_t t_days, std::size_t h,
                              const std::vector<CivilDate>& holidays) {
  if (t_days == 0 || h == 0) throw ValidationError("build_calendar: t_days and h must be >= 1");

  static const char* kDow[] = {"mon", "tue", "wed", "thu", "fri", "sat", "sun"};
  static const char* kMonth[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                 "jul", "aug", "sep", "oct", "nov", "dec"};
  CalendarMatrix cal;
  cal.feature_names.reserve(24);
  for (const char* d : kDow) cal.feature_names.push_back(std::string("dow_") + d);
  for (const char* m : kMonth) cal.feature_names.push_back(std::string("month_") + m);
  cal.feature_names.push_back("year_scaled");
  cal.feature_names.push_back("holiday");
  cal.feature_names.push_back("day_before_holiday");
  cal.feature_names.push_back("day_after_holiday");
  cal.feature_names.push_back("intraday_position");
  const std::size_t n_features = cal.feature_names.size();
  cal.values = Tensor({t_days, h, n_features});

  std::set<std::int64_t> holiday_days;
  for (const CivilDate& d : holidays) holiday_days.insert(d.serial_day());

  const int year_first = start_date.year;
  const int year_last = start_date.plus_days(static_cast<std::int64_t>(t_days) - 1).year;
  const double year_span = std::max(1, year_last - year_first);

  for (std::size_t t = 0; t < t_days; ++t) {
    const CivilDate date = start_date.plus_days(static_cast<std::int64_t>(t));
    const std::int64_t serial = date.serial_day();
    const int dow = date.weekday_mon0();
    const double year_scaled = (date.year - year_first) / year_span;
    const bool is_holiday = holiday_days.count(serial) > 0;
    const bool before_holiday = holiday_days.count(serial + 1) > 0;
    const bool after_holiday = holiday_days.count(serial - 1) > 0;
    for (std::size_t hh = 0; hh < h; ++hh) {
      double* row = &cal.values(t, hh, 0);
      row[dow] = 1.0;
      row[7 + (date.month - 1)] = 1.0;
      row[19] = year_scaled;
      row[20] = is_holiday ? 1.0 : 0.0;
      row[21] = before_holiday ? 1.0 : 0.0;
      row[22] = after_holiday ? 1.0 : 0.0;
      row[23] = static_cast<double>(hh) / static_cast<double>(h);
    }
  }
  return cal;
}

ScalerParams fit_scaler(const WeatherPanel& panel, const DayRange& train_range,
                        const Tensor* weights_hint, const LoadSeries* load) {
  if (train_range.empty() || train_range.end > panel.days()) {
    throw ValidationError("fit_scaler: empty or out-of-bounds training range");
  }
  const std::size_t n_v = panel.n_variables();
  const std::size_t n_i = panel.n_stations();
  if (weights_hint != nullptr &&
      (weights_hint->rank() != 2 || weights_hint->dim(0) != n_v || weights_hint->dim(1) != n_i)) {
    throw ValidationError("fit_scaler: weights_hint must be V x I");
  }

  ScalerParams p;
  p.mins = Tensor::full({n_v, n_i}, std::numeric_limits<double>::infinity());
  p.maxs = Tensor::full({n_v, n_i}, -std::numeric_limits<double>::infinity());
  p.aggregate_mins = Tensor::full({n_v}, std::numeric_limits<double>::infinity());
  p.aggregate_maxs = Tensor::full({n_v}, -std::numeric_limits<double>::infinity());

  for (std::size_t t = train_range.begin; t < train_range.end; ++t) {
    for (std::size_t h = 0; h < panel.instants(); ++h) {
      for (std::size_t v = 0; v < n_v; ++v) {
        double agg = 0.0;
        for (std::size_t i = 0; i < n_i; ++i) {
          const double w = panel.values(t, h, v, i);
          p.mins(v, i) = std::min(p.mins(v, i), w);
          p.maxs(v, i) = std::max(p.maxs(v, i), w);
          agg += (weights_hint != nullptr ? (*weights_hint)(v, i) : 1.0 / n_i) * w;
        }
        p.aggregate_mins(v) = std::min(p.aggregate_mins(v), agg);
        p.aggregate_maxs(v) = std::max(p.aggregate_maxs(v), agg);
      }
    }
  }

  std::ostringstream degenerate;
  for (std::size_t v = 0; v < n_v; ++v) {
    for (std::size_t i = 0; i < n_i; ++i) {
      if (p.maxs(v, i) <= p.mins(v, i)) {
        degenerate << " (" << panel.variable_names[v] << "," << panel.stations[i].station_id
                   << ")";
      }
    }
    if (p.aggregate_maxs(v) <= p.aggregate_mins(v)) {
      degenerate << " (aggregate " << panel.variable_names[v] << ")";
    }
  }
  if (!degenerate.str().empty()) {
    throw ValidationError("fit_scaler: degenerate channels:" + degenerate.str());
  }

  if (load != nullptr) {
    if (load->days() != panel.days()) {
      throw ValidationError("fit_scaler: load/weather day counts differ");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t t = train_range.begin; t < train_range.end; ++t) {
      for (std::size_t h = 0; h < load->instants(); ++h) {
        lo = std::min(lo, load->values(t, h));
        hi = std::max(hi, load->values(t, h));
      }
    }
    if (hi <= lo) throw ValidationError("fit_scaler: degenerate load channel");
    p.load_min = lo;
    p.load_max = hi;
  }
  return p;
}

WeatherPanel apply_scaler(const WeatherPanel& panel, const ScalerParams& scaler) {
  if (scaler.mins.rank() != 2 || scaler.mins.dim(0) != panel.n_variables() ||
      scaler.mins.dim(1) != panel.n_stations() || !scaler.mins.same_shape(scaler.maxs)) {
    throw ValidationError("apply_scaler: scaler shape does not match panel");
  }
  WeatherPanel out = panel;
  for (std::size_t t = 0; t < panel.days(); ++t) {
    for (std::size_t h = 0; h < panel.instants(); ++h) {
      for (std::size_t v = 0; v < panel.n_variables(); ++v) {
        for (std::size_t i = 0; i < panel.n_stations(); ++i) {
          const double lo = scaler.mins(v, i);
          const double hi = scaler.maxs(v, i);
          out.values(t, h, v, i) = (panel.values(t, h, v, i) - lo) / (hi - lo);
        }
      }
    }
  }
  return out;
}

Dataset split_dataset(Dataset ds, const DayRange& train, const DayRange& valid,
                      const DayRange& test) {
  const std::size_t t_days = ds.days();
  auto check = [&](const DayRange& r, const char* name) {
    if (r.end < r.begin || r.end > t_days) {
      throw ValidationError(std::string("split_dataset: ") + name + " range out of bounds");
    }
  };
  check(train, "train");
  check(valid, "valid");
  check(test, "test");
  if (train.empty()) throw ValidationError("split_dataset: train range must be nonempty");
  if (valid.begin < train.end || test.begin < valid.end) {
    throw ValidationError("split_dataset: ranges must be chronological and disjoint");
  }
  ds.splits = Splits{train, valid, test};
  return ds;
}

std::vector<CivilDate> synthetic_holidays(const CivilDate& start, std::size_t t_days) {
  std::vector<CivilDate> holidays;
  const CivilDate end = start.plus_days(static_cast<std::int64_t>(t_days));
  for (int year = start.year; year <= end.year; ++year) {
    for (auto [m, d] : {std::pair{1, 1}, {5, 1}, {7, 14}, {12, 25}}) {
      CivilDate h{year, m, d};
      if (h.serial_day() >= start.serial_day() && h.serial_day() < end.serial_day()) {
        holidays.push_back(h);
      }
    }
  }
  return holidays;
}

double synthetic_response_mw(const SyntheticResponse& response, double smoothed_temp,
                             const CivilDate& date, std::size_t h, std::size_t steps_per_day,
                             const std::vector<CivilDate>& holidays) {
  double mw = response.base_mw;
  mw += response.heat_coef * std::max(response.heat_threshold - smoothed_temp, 0.0);
  if (date.weekday_mon0() >= 5) mw += response.weekend_dip;
  for (const CivilDate& hd : holidays) {
    if (hd == date) {
      mw += response.holiday_dip;
      break;
    }
  }
  mw += response.intraday_ramp * static_cast<double>(h) / static_cast<double>(steps_per_day);
  return mw;
}

SyntheticRaw generate_synthetic_raw(const SyntheticConfig& config, std::uint64_t seed) {
  if (config.t_days < 5 || config.h == 0 || config.v == 0 || config.i == 0) {
    throw ValidationError("generate_synthetic: need t_days >= 5, h/v/i >= 1");
  }
  if (!(config.true_alpha > 0.0 && config.true_alpha < 1.0)) {
    throw ValidationError("generate_synthetic: true_alpha must be in (0, 1)");
  }
  if (config.noise_sigma < 0.0) {
    throw ValidationError("generate_synthetic: noise_sigma must be >= 0");
  }

  const std::size_t t_days = config.t_days, h_steps = config.h;
  const std::size_t n_v = config.v, n_i = config.i;
  Rng rng(seed);

  WeatherPanel panel;
  panel.values = Tensor({t_days, h_steps, n_v, n_i});
  panel.start_date = CivilDate{2018, 1, 1};
  panel.steps_per_day = h_steps;
  static const char* kNames[] = {"temperature", "wind", "irradiance"};
  for (std::size_t v = 0; v < n_v; ++v) {
    panel.variable_names.push_back(v < 3 ? kNames[v] : "var" + std::to_string(v));
  }
  for (std::size_t i = 0; i < n_i; ++i) {
    StationMeta s;
    char id[8];
    std::snprintf(id, sizeof(id), "ST%02zu", i);
    s.station_id = id;
    s.name = "Station " + std::to_string(i);
    s.latitude = rng.uniform(41.0, 51.0);
    s.longitude = rng.uniform(-5.0, 8.0);
    panel.stations.push_back(std::move(s));
  }

  SyntheticTruth truth;
  truth.true_weights = Tensor({n_v, n_i});
  for (std::size_t v = 0; v < n_v; ++v) {
    double total = 0.0;
    for (std::size_t i = 0; i < n_i; ++i) {
      truth.true_weights(v, i) = 0.25 + rng.u01();
      total += truth.true_weights(v, i);
    }
    for (std::size_t i = 0; i < n_i; ++i) truth.true_weights(v, i) /= total;
  }
  truth.true_alpha = config.true_alpha;
  truth.noise_sigma = config.noise_sigma;
  truth.response = SyntheticResponse{};
  truth.response_spec =
      "base + heat_coef*max(heat_threshold - smoothed_temp, 0) + weekend/holiday dips + "
      "intraday ramp";

  const double two_pi = 2.0 * 3.14159265358979323846;
  for (std::size_t v = 0; v < n_v; ++v) {
    for (std::size_t i = 0; i < n_i; ++i) {
      const double offset = rng.uniform(-1.5, 1.5);
      const double diurnal_phase = rng.uniform(-0.4, 0.4);
      const double diurnal_amp = rng.uniform(0.8, 1.2);
      const double station_phase = rng.uniform(0.0, two_pi);
      double drift = 0.0;
      for (std::size_t t = 0; t < t_days; ++t) {
        drift = 0.88 * drift + 0.5 * rng.normal();
        for (std::size_t h = 0; h < h_steps; ++h) {
          const double day_frac = static_cast<double>(h) / static_cast<double>(h_steps);
          double value = 0.0;
          if (v == 0) {  // temperature, degrees C, kept below the heating threshold
            value = 7.0 + 5.0 * std::sin(two_pi * (static_cast<double>(t) - 105.0) / 365.25) +
                    2.0 * diurnal_amp * std::sin(two_pi * day_frac - 2.0 + diurnal_phase) +
                    offset + drift;
          } else if (v == 1) {  // wind, m/s
            value = 6.0 + 2.5 * std::sin(two_pi * static_cast<double>(t) / 28.0 + station_phase) +
                    1.2 * std::sin(2.0 * two_pi * day_frac + diurnal_phase) + offset +
                    0.8 * drift;
          } else if (v == 2) {  // irradiance-like diurnal bump, W/m^2
            value = 450.0 * std::max(0.0, std::sin(3.14159265358979323846 *
                                                   (day_frac + 0.02))) *
                        (1.0 + 0.3 * std::sin(two_pi * static_cast<double>(t) / 365.25)) +
                    20.0 * offset + 10.0 * drift;
          } else {
            value = 50.0 + 10.0 * std::sin(two_pi * (static_cast<double>(t) + 3.0 * v) / 50.0) +
                    5.0 * std::sin(two_pi * day_frac * 2.0 + station_phase) + offset + drift;
          }
          panel.values(t, h, v, i) = value;
        }
      }
    }
  }

  // true-weight aggregated temperature, smoothed at true_alpha
  truth.smoothed_temperature = Tensor({t_days, h_steps});
  {
    const double alpha = config.true_alpha;
    double carry = 0.0;
    bool first = true;
    for (std::size_t t = 0; t < t_days; ++t) {
      for (std::size_t h = 0; h < h_steps; ++h) {
        double agg = 0.0;
        for (std::size_t i = 0; i < n_i; ++i) {
          agg += truth.true_weights(0, i) * panel.values(t, h, 0, i);
        }
        if (first) {
          carry = agg;
          first = false;
        }
        carry = (1.0 - alpha) * agg + alpha * carry;
        truth.smoothed_temperature(t, h) = carry;
      }
    }
  }

  std::vector<CivilDate> holidays = synthetic_holidays(panel.start_date, t_days);

  LoadSeries load;
  load.values = Tensor({t_days, h_steps});
  load.start_date = panel.start_date;
  load.exclusion_mask.assign(t_days, false);
  truth.noiseless_load = Tensor({t_days, h_steps});
  for (std::size_t t = 0; t < t_days; ++t) {
    const CivilDate date = panel.start_date.plus_days(static_cast<std::int64_t>(t));
    for (std::size_t h = 0; h < h_steps; ++h) {
      const double clean = synthetic_response_mw(truth.response, truth.smoothed_temperature(t, h),
                                                 date, h, h_steps, holidays);
      truth.noiseless_load(t, h) = clean;
      load.values(t, h) = clean + config.noise_sigma * rng.normal();
    }
  }

  // default contiguous 60/20/20 split
  const std::size_t train_end = (t_days * 3) / 5;
  const std::size_t valid_end = (t_days * 4) / 5;

  SyntheticRaw raw;
  raw.panel = std::move(panel);
  raw.load = std::move(load);
  raw.holidays = std::move(holidays);
  raw.splits = Splits{{0, train_end}, {train_end, valid_end}, {valid_end, t_days}};
  raw.truth = std::move(truth);
  return raw;
}

Dataset assemble_dataset(const WeatherPanel& raw_panel, LoadSeries load,
                         std::vector<CivilDate> holidays, const Splits& splits) {
  if (load.days() != raw_panel.days() || load.instants() != raw_panel.instants()) {
    throw ValidationError("assemble_dataset: load and weather shapes differ");
  }
  Dataset ds;
  ds.calendar = build_calendar(raw_panel.start_date, raw_panel.days(), raw_panel.instants(),
                               holidays);
  ds.scaler = fit_scaler(raw_panel, splits.train, nullptr, &load);
  ds.weather = apply_scaler(raw_panel, ds.scaler);
  ds.load = std::move(load);
  ds.holidays = std::move(holidays);
  return split_dataset(std::move(ds), splits.train, splits.valid, splits.test);
}

std::pair<Dataset, SyntheticTruth> generate_synthetic(const SyntheticConfig& config,
                                                      std::uint64_t seed) {
  SyntheticRaw raw = generate_synthetic_raw(config, seed);
  Dataset ds = assemble_dataset(raw.panel, std::move(raw.load), std::move(raw.holidays),
                                raw.splits);
  return {std::move(ds), std::move(raw.truth)};
}

}  // namespace voltcast
