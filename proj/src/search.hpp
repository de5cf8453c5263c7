#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "data.hpp"
#include "forecaster.hpp"
#include "kalman.hpp"
#include "rng.hpp"

namespace voltcast {

// One graph slot of the genome. Inactive slots contribute no node; keeping
// them in the genome gives every candidate the same gene count, which keeps
// uniform crossover and per-gene mutation simple.
struct GraphSlotGenes {
  bool active = false;
  std::string kind = "identity";
  std::size_t out_dim = 1;
  std::size_t kernel = 1;
  std::string activation = "identity";
  bool skip_input = false;
};

struct Candidate {
  std::uint64_t id = 0;
  std::vector<std::uint64_t> lineage;
  std::vector<std::size_t> f_v;  // per variable
  std::string smoothing_kind = "es";
  std::vector<GraphSlotGenes> gamma1_slots;
  std::vector<GraphSlotGenes> gamma2_slots;
  double lr = 0.1;
  std::size_t epochs = 100;
  double sigma2 = 1e-2;
  double q_scale = 1e-4;
  // space-level constants carried along so a candidate file is self-contained
  std::size_t batch_size = 16;
  std::optional<double> gradient_clip;
  double p0 = 10.0;
  int delay_days = 2;

  ModelSpec to_model_spec() const;
  TrainConfig to_train_config() const;
};

struct GraphMenu {
  std::size_t max_depth = 0;
  std::vector<std::string> kinds{"identity"};
  std::vector<std::size_t> out_dims{1};
  std::vector<std::size_t> kernels{1};
  std::vector<std::string> activations{"identity"};
  bool allow_skip = false;
};

struct SearchSpace {
  std::vector<std::vector<std::size_t>> f_v_choices;  // per variable
  std::vector<std::string> smoothing_kinds{"es"};
  GraphMenu gamma1;
  GraphMenu gamma2;
  std::vector<double> lr_choices{0.1};
  std::vector<std::size_t> epoch_choices{100};
  std::pair<double, double> sigma2_range{1e-2, 1e-2};   // log-uniform
  std::pair<double, double> q_scale_range{1e-4, 1e-4};  // log-uniform
  double p0 = 10.0;
  std::size_t batch_size = 16;
  int delay_days = 2;
  std::optional<double> gradient_clip;

  void validate() const;
};

struct EvalResult {
  std::uint64_t candidate_id = 0;
  double validation_mse = 0.0;      // scaled space, Kalman-recalibrated
  double validation_mape_mw = 0.0;  // percent
  double train_seconds = 0.0;       // informational; never serialized
  std::string smoothing_kind;
  bool failed = false;
  std::string failure_reason;
  Candidate candidate;

  double objective() const;  // +inf when failed
};

struct EAConfig {
  std::size_t population_size = 16;
  std::size_t tournament_size = 2;
  double mutation_rate = 0.25;
  std::size_t budget_evaluations = 64;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

// --- operators -----------------------------------------------------------

Candidate sample_candidate(const SearchSpace& space, Rng& rng, std::uint64_t id = 0);

// Resamples each gene independently with probability `rate`; forces at least
// one change when the space allows any. Returns the number of changed genes.
std::size_t mutate_genes(Candidate& candidate, const SearchSpace& space, double rate, Rng& rng);

Candidate mutate(const Candidate& parent, const SearchSpace& space, double rate, Rng& rng,
                 std::uint64_t new_id);

Candidate crossover(const Candidate& a, const Candidate& b, const SearchSpace& space, Rng& rng,
                    std::uint64_t new_id);

std::size_t gene_count(const SearchSpace& space);

// --- evaluation ------------------------------------------------------------

// Train on the train split, recalibrate over the validation split with the
// candidate's Kalman noise, score by recalibrated validation MSE. Failures
// are contained in the result with a +inf objective.
EvalResult evaluate_candidate(const Candidate& candidate, const Dataset& ds);

struct SearchResult {
  Candidate best;
  EvalResult best_result;
  std::vector<EvalResult> history;  // creation order (candidate id order)
};

// Steady-state loop: after the initial population, children are created and
// merged in deterministic rounds of kSearchRoundSize, so the history does not
// depend on the worker count.
inline constexpr std::size_t kSearchRoundSize = 4;

SearchResult run_search(const SearchSpace& space, const EAConfig& cfg, const Dataset& ds);

// --- telemetry ----------------------------------------------------------------

struct KindHistory {
  std::vector<std::string> kinds;
  std::vector<std::vector<std::size_t>> cumulative;  // [creation index][kind]
  std::vector<std::vector<std::size_t>> windowed;    // trailing window of `window`
  std::size_t window = 16;
};

KindHistory smoothing_kind_history(const std::vector<EvalResult>& history,
                                   std::size_t window = 16);

const std::vector<std::string>& canonical_smoothing_kinds();

// --- serialization ---------------------------------------------------------------

std::string candidate_to_json(const Candidate& candidate);
Candidate candidate_from_json(const std::string& text);

SearchSpace search_space_from_json(const std::string& text);
std::string search_space_to_json(const SearchSpace& space);

// JSONL, one result per line, deterministic fields only.
std::string history_to_jsonl(const std::vector<EvalResult>& history);
std::vector<EvalResult> history_from_jsonl(const std::string& text);

std::string kind_history_to_csv(const KindHistory& history);
KindHistory kind_history_from_csv(const std::string& text);

}  // namespace voltcast
