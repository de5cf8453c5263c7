#include "dataset_io.hpp"

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"
#include "logging.hpp"
#include "tensor.hpp"

namespace voltcast {

namespace fs = std::filesystem;
using nlohmann::json;

SyntheticConfig synthetic_config_from_json(const std::string& text) {
  json doc = json::parse(text);
  SyntheticConfig config;
  config.t_days = doc.at("t_days").get<std::size_t>();
  config.h = doc.at("h").get<std::size_t>();
  config.v = doc.at("v").get<std::size_t>();
  config.i = doc.at("i").get<std::size_t>();
  config.noise_sigma = doc.at("noise_sigma").get<double>();
  config.true_alpha = doc.at("true_alpha").get<double>();
  config.seed = doc.at("seed").get<std::uint64_t>();
  return config;
}

std::string synthetic_config_to_json(const SyntheticConfig& config) {
  json doc = {{"t_days", config.t_days},         {"h", config.h},
              {"v", config.v},                   {"i", config.i},
              {"noise_sigma", config.noise_sigma}, {"true_alpha", config.true_alpha},
              {"seed", config.seed}};
  return doc.dump(2);
}

std::string stations_csv_text(const std::vector<StationMeta>& stations) {
  std::ostringstream os;
  os << "station_id,name,lat,lon\n";
  for (const StationMeta& s : stations) {
    os << s.station_id << "," << s.name << "," << format_double(s.latitude) << ","
       << format_double(s.longitude) << "\n";
  }
  return os.str();
}

std::string weather_csv_text(const WeatherPanel& panel) {
  const std::int64_t step = 86400 / static_cast<std::int64_t>(panel.steps_per_day);
  const std::int64_t day0 = panel.start_date.serial_day();
  std::ostringstream os;
  os << "timestamp_utc,station_id,variable,value\n";
  for (std::size_t v = 0; v < panel.n_variables(); ++v) {
    for (std::size_t i = 0; i < panel.n_stations(); ++i) {
      for (std::size_t t = 0; t < panel.days(); ++t) {
        for (std::size_t h = 0; h < panel.instants(); ++h) {
          const std::int64_t ts =
              (day0 + static_cast<std::int64_t>(t)) * 86400 + static_cast<std::int64_t>(h) * step;
          os << format_timestamp_utc(ts) << "," << panel.stations[i].station_id << ","
             << panel.variable_names[v] << "," << format_double(panel.values(t, h, v, i)) << "\n";
        }
      }
    }
  }
  return os.str();
}

std::string load_csv_text(const LoadSeries& load) {
  const std::int64_t step = 86400 / static_cast<std::int64_t>(load.instants());
  const std::int64_t day0 = load.start_date.serial_day();
  std::ostringstream os;
  os << "timestamp_utc,load_mw\n";
  for (std::size_t t = 0; t < load.days(); ++t) {
    for (std::size_t h = 0; h < load.instants(); ++h) {
      const std::int64_t ts =
          (day0 + static_cast<std::int64_t>(t)) * 86400 + static_cast<std::int64_t>(h) * step;
      os << format_timestamp_utc(ts) << "," << format_double(load.values(t, h)) << "\n";
    }
  }
  return os.str();
}

namespace {

json tensor2d_to_json(const Tensor& t) {
  json out = json::array();
  for (std::size_t r = 0; r < t.dim(0); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < t.dim(1); ++c) row.push_back(t(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Tensor tensor2d_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ValidationError("truth json: '" + name + "' must be a 2-d array");
  }
  Tensor t({j.size(), j[0].size()});
  for (std::size_t r = 0; r < j.size(); ++r) {
    for (std::size_t c = 0; c < j[r].size(); ++c) t(r, c) = j[r][c].get<double>();
  }
  return t;
}

}  // namespace

void write_synthetic_dataset(const SyntheticConfig& config, const std::string& dir) {
  SyntheticRaw raw = generate_synthetic_raw(config, config.seed);
  fs::create_directories(dir);
  write_text_file((fs::path(dir) / "stations.csv").string(), stations_csv_text(raw.panel.stations));
  write_text_file((fs::path(dir) / "weather.csv").string(), weather_csv_text(raw.panel));
  write_text_file((fs::path(dir) / "load.csv").string(), load_csv_text(raw.load));

  json holidays = json::array();
  for (const CivilDate& d : raw.holidays) holidays.push_back(d.to_string());
  json meta = {{"steps_per_day", raw.panel.steps_per_day},
               {"holidays", holidays},
               {"splits",
                {{"train", {raw.splits.train.begin, raw.splits.train.end}},
                 {"valid", {raw.splits.valid.begin, raw.splits.valid.end}},
                 {"test", {raw.splits.test.begin, raw.splits.test.end}}}},
               {"exclusions", json::array()}};
  write_text_file((fs::path(dir) / "meta.json").string(), meta.dump(2) + "\n");

  const SyntheticTruth& truth = raw.truth;
  json response = {{"base_mw", truth.response.base_mw},
                   {"heat_coef", truth.response.heat_coef},
                   {"heat_threshold", truth.response.heat_threshold},
                   {"weekend_dip", truth.response.weekend_dip},
                   {"holiday_dip", truth.response.holiday_dip},
                   {"intraday_ramp", truth.response.intraday_ramp}};
  json truth_doc = {{"true_weights", tensor2d_to_json(truth.true_weights)},
                    {"true_alpha", truth.true_alpha},
                    {"noise_sigma", truth.noise_sigma},
                    {"response_spec", truth.response_spec},
                    {"response", response},
                    {"smoothed_temperature", tensor2d_to_json(truth.smoothed_temperature)},
                    {"noiseless_load", tensor2d_to_json(truth.noiseless_load)}};
  write_text_file((fs::path(dir) / "truth.json").string(), truth_doc.dump() + "\n");
  VC_INFO("wrote synthetic dataset to " << dir);
}

Dataset open_dataset_dir(const std::string& dir) {
  const std::string meta_path = (fs::path(dir) / "meta.json").string();
  json meta = json::parse(read_text_file(meta_path));
  const std::size_t steps = meta.at("steps_per_day").get<std::size_t>();

  WeatherPanel panel = load_weather_csv((fs::path(dir) / "weather.csv").string(),
                                        (fs::path(dir) / "stations.csv").string(), steps);
  LoadSeries load = load_load_csv((fs::path(dir) / "load.csv").string());
  if (load.days() != panel.days() || load.instants() != panel.instants()) {
    throw ValidationError("dataset dir: load and weather grids disagree");
  }
  if (!(load.start_date == panel.start_date)) {
    throw ValidationError("dataset dir: load and weather start dates disagree");
  }

  std::vector<CivilDate> holidays;
  for (const auto& d : meta.value("holidays", json::array())) {
    holidays.push_back(CivilDate::parse(d.get<std::string>()));
  }
  for (const auto& day : meta.value("exclusions", json::array())) {
    const std::size_t t = day.get<std::size_t>();
    if (t >= load.days()) throw ValidationError("dataset dir: exclusion day out of range");
    load.exclusion_mask[t] = true;
  }
  const json& splits = meta.at("splits");
  Splits s;
  s.train = DayRange{splits.at("train")[0].get<std::size_t>(),
                     splits.at("train")[1].get<std::size_t>()};
  s.valid = DayRange{splits.at("valid")[0].get<std::size_t>(),
                     splits.at("valid")[1].get<std::size_t>()};
  s.test = DayRange{splits.at("test")[0].get<std::size_t>(),
                    splits.at("test")[1].get<std::size_t>()};
  return assemble_dataset(panel, std::move(load), std::move(holidays), s);
}

std::optional<SyntheticTruth> load_truth(const std::string& dir) {
  const fs::path path = fs::path(dir) / "truth.json";
  if (!fs::exists(path)) return std::nullopt;
  json doc = json::parse(read_text_file(path.string()));
  SyntheticTruth truth;
  truth.true_weights = tensor2d_from_json(doc.at("true_weights"), "true_weights");
  truth.true_alpha = doc.at("true_alpha").get<double>();
  truth.noise_sigma = doc.at("noise_sigma").get<double>();
  truth.response_spec = doc.at("response_spec").get<std::string>();
  const json& r = doc.at("response");
  truth.response.base_mw = r.at("base_mw").get<double>();
  truth.response.heat_coef = r.at("heat_coef").get<double>();
  truth.response.heat_threshold = r.at("heat_threshold").get<double>();
  truth.response.weekend_dip = r.at("weekend_dip").get<double>();
  truth.response.holiday_dip = r.at("holiday_dip").get<double>();
  truth.response.intraday_ramp = r.at("intraday_ramp").get<double>();
  truth.smoothed_temperature =
      tensor2d_from_json(doc.at("smoothed_temperature"), "smoothed_temperature");
  truth.noiseless_load = tensor2d_from_json(doc.at("noiseless_load"), "noiseless_load");
  return truth;
}

}  // namespace voltcast
