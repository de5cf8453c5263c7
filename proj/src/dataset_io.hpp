#pragma once

#include <optional>
#include <string>

#include "data.hpp"

namespace voltcast {

// A dataset directory holds weather.csv, stations.csv, load.csv and meta.json
// (steps_per_day, holidays, splits, exclusions); synthetic ones add
// truth.json.

SyntheticConfig synthetic_config_from_json(const std::string& text);
std::string synthetic_config_to_json(const SyntheticConfig& config);

// Generates a synthetic dataset and writes the directory.
void write_synthetic_dataset(const SyntheticConfig& config, const std::string& dir);

std::string weather_csv_text(const WeatherPanel& panel);
std::string load_csv_text(const LoadSeries& load);
std::string stations_csv_text(const std::vector<StationMeta>& stations);

Dataset open_dataset_dir(const std::string& dir);

std::optional<SyntheticTruth> load_truth(const std::string& dir);

}  // namespace voltcast
