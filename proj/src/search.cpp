#include "search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "csv.hpp"
#include "errors.hpp"
#include "logging.hpp"
#include "metrics.hpp"

namespace voltcast {

using nlohmann::json;

const std::vector<std::string>& canonical_smoothing_kinds() {
  static const std::vector<std::string> kinds{"es", "vanilla_rnn", "lstm", "gru"};
  return kinds;
}

ModelSpec Candidate::to_model_spec() const {
  ModelSpec spec;
  spec.weather.f_v = f_v;
  if (smoothing_kind == "es") {
    spec.weather.use_es = true;
  } else {
    spec.weather.use_es = false;
    spec.weather.smoothing_kind = cell_kind_from_string(smoothing_kind);
  }
  auto decode_slots = [](const std::vector<GraphSlotGenes>& slots) {
    GraphSpec g;
    for (const GraphSlotGenes& s : slots) {
      if (!s.active) continue;
      GraphNodeSpec node;
      node.layer.kind = node_kind_from_string(s.kind);
      node.layer.out_dim = s.out_dim;
      node.layer.kernel = s.kernel;
      node.layer.activation = activation_from_string(s.activation);
      node.skip_input = s.skip_input;
      g.nodes.push_back(node);
    }
    return g;
  };
  spec.gamma1 = decode_slots(gamma1_slots);
  spec.gamma2 = decode_slots(gamma2_slots);
  return spec;
}

TrainConfig Candidate::to_train_config() const {
  TrainConfig cfg;
  cfg.learning_rate = lr;
  cfg.epochs = epochs;
  cfg.batch_size = batch_size;
  cfg.seed = id;
  cfg.gradient_clip = gradient_clip;
  return cfg;
}

void SearchSpace::validate() const {
  if (f_v_choices.empty()) throw ValidationError("search space: f_v_choices must not be empty");
  for (const auto& choices : f_v_choices) {
    if (choices.empty()) throw ValidationError("search space: empty f_v choice set");
  }
  if (smoothing_kinds.empty()) throw ValidationError("search space: no smoothing kinds");
  for (const std::string& kind : smoothing_kinds) {
    const auto& canon = canonical_smoothing_kinds();
    if (std::find(canon.begin(), canon.end(), kind) == canon.end()) {
      throw ValidationError("search space: unknown smoothing kind '" + kind + "'");
    }
  }
  auto check_menu = [](const GraphMenu& menu, const char* name) {
    if (menu.kinds.empty() || menu.out_dims.empty() || menu.kernels.empty() ||
        menu.activations.empty()) {
      throw ValidationError(std::string("search space: empty menu set in ") + name);
    }
  };
  check_menu(gamma1, "gamma1");
  check_menu(gamma2, "gamma2");
  if (lr_choices.empty() || epoch_choices.empty()) {
    throw ValidationError("search space: lr/epoch choices must not be empty");
  }
  if (!(sigma2_range.first > 0.0) || sigma2_range.second < sigma2_range.first) {
    throw ValidationError("search space: invalid sigma2 range");
  }
  if (!(q_scale_range.first >= 0.0) || q_scale_range.second < q_scale_range.first) {
    throw ValidationError("search space: invalid q_scale range");
  }
  if (batch_size == 0) throw ValidationError("search space: batch_size must be >= 1");
  if (delay_days < 1) throw ValidationError("search space: delay_days must be >= 1");
}

double EvalResult::objective() const {
  return failed ? std::numeric_limits<double>::infinity() : validation_mse;
}

// --- genome ------------------------------------------------------------------

namespace {

// A mutable view of one gene: resample-to-a-different-value, inherit, compare.
struct Gene {
  std::function<bool(Candidate&, Rng&)> resample_different;
  std::function<void(Candidate&, const Candidate&)> inherit;
};

template <typename T, typename Get>
Gene categorical_gene(const std::vector<T>& choices, Get get) {
  return Gene{
      [choices, get](Candidate& c, Rng& rng) {
        T& slot = get(c);
        if (choices.size() < 2) return false;
        std::vector<T> others;
        for (const T& v : choices) {
          if (v != slot) others.push_back(v);
        }
        if (others.empty()) return false;
        slot = others[static_cast<std::size_t>(rng.below(others.size()))];
        return true;
      },
      [get](Candidate& dst, const Candidate& src) {
        get(dst) = get(const_cast<Candidate&>(src));
      }};
}

template <typename Get>
Gene bool_gene(bool mutable_gene, Get get) {
  return Gene{
      [mutable_gene, get](Candidate& c, Rng&) {
        if (!mutable_gene) return false;
        bool& slot = get(c);
        slot = !slot;
        return true;
      },
      [get](Candidate& dst, const Candidate& src) {
        get(dst) = get(const_cast<Candidate&>(src));
      }};
}

template <typename Get>
Gene log_uniform_gene(std::pair<double, double> range, Get get) {
  return Gene{
      [range, get](Candidate& c, Rng& rng) {
        if (!(range.second > range.first)) return false;
        get(c) = rng.log_uniform(range.first, range.second);
        return true;
      },
      [get](Candidate& dst, const Candidate& src) {
        get(dst) = get(const_cast<Candidate&>(src));
      }};
}

std::vector<Gene> gene_list_for(const SearchSpace& space) {
  std::vector<Gene> genes;
  for (std::size_t v = 0; v < space.f_v_choices.size(); ++v) {
    genes.push_back(categorical_gene(space.f_v_choices[v],
                                     [v](Candidate& c) -> std::size_t& { return c.f_v[v]; }));
  }
  genes.push_back(categorical_gene(space.smoothing_kinds,
                                   [](Candidate& c) -> std::string& { return c.smoothing_kind; }));

  auto add_stage = [&genes](const GraphMenu& menu, bool gamma1) {
    for (std::size_t s = 0; s < menu.max_depth; ++s) {
      auto slot = [gamma1, s](Candidate& c) -> GraphSlotGenes& {
        return gamma1 ? c.gamma1_slots[s] : c.gamma2_slots[s];
      };
      genes.push_back(bool_gene(true, [slot](Candidate& c) -> bool& { return slot(c).active; }));
      genes.push_back(categorical_gene(
          menu.kinds, [slot](Candidate& c) -> std::string& { return slot(c).kind; }));
      genes.push_back(categorical_gene(
          menu.out_dims, [slot](Candidate& c) -> std::size_t& { return slot(c).out_dim; }));
      genes.push_back(categorical_gene(
          menu.kernels, [slot](Candidate& c) -> std::size_t& { return slot(c).kernel; }));
      genes.push_back(categorical_gene(
          menu.activations, [slot](Candidate& c) -> std::string& { return slot(c).activation; }));
      genes.push_back(bool_gene(
          menu.allow_skip, [slot](Candidate& c) -> bool& { return slot(c).skip_input; }));
    }
  };
  add_stage(space.gamma1, true);
  add_stage(space.gamma2, false);

  genes.push_back(
      categorical_gene(space.lr_choices, [](Candidate& c) -> double& { return c.lr; }));
  genes.push_back(
      categorical_gene(space.epoch_choices, [](Candidate& c) -> std::size_t& { return c.epochs; }));
  genes.push_back(
      log_uniform_gene(space.sigma2_range, [](Candidate& c) -> double& { return c.sigma2; }));
  genes.push_back(
      log_uniform_gene(space.q_scale_range, [](Candidate& c) -> double& { return c.q_scale; }));
  return genes;
}

}  // namespace

std::size_t gene_count(const SearchSpace& space) { return gene_list_for(space).size(); }

Candidate sample_candidate(const SearchSpace& space, Rng& rng, std::uint64_t id) {
  space.validate();
  Candidate c;
  c.id = id;
  for (const auto& choices : space.f_v_choices) c.f_v.push_back(rng.pick(choices));
  c.smoothing_kind = rng.pick(space.smoothing_kinds);
  auto sample_slots = [&rng](const GraphMenu& menu) {
    std::vector<GraphSlotGenes> slots(menu.max_depth);
    for (GraphSlotGenes& s : slots) {
      s.active = rng.coin();
      s.kind = rng.pick(menu.kinds);
      s.out_dim = rng.pick(menu.out_dims);
      s.kernel = rng.pick(menu.kernels);
      s.activation = rng.pick(menu.activations);
      s.skip_input = menu.allow_skip ? rng.coin() : false;
    }
    return slots;
  };
  c.gamma1_slots = sample_slots(space.gamma1);
  c.gamma2_slots = sample_slots(space.gamma2);
  c.lr = rng.pick(space.lr_choices);
  c.epochs = rng.pick(space.epoch_choices);
  c.sigma2 = rng.log_uniform(space.sigma2_range.first, space.sigma2_range.second);
  c.q_scale = space.q_scale_range.second > space.q_scale_range.first
                  ? rng.log_uniform(space.q_scale_range.first, space.q_scale_range.second)
                  : space.q_scale_range.first;
  c.batch_size = space.batch_size;
  c.gradient_clip = space.gradient_clip;
  c.p0 = space.p0;
  c.delay_days = space.delay_days;
  return c;
}

std::size_t mutate_genes(Candidate& candidate, const SearchSpace& space, double rate, Rng& rng) {
  if (!(rate > 0.0 && rate <= 1.0)) throw ValidationError("mutate: rate must be in (0, 1]");
  const std::vector<Gene> genes = gene_list_for(space);
  std::size_t changed = 0;
  for (const Gene& gene : genes) {
    if (rng.coin(rate) && gene.resample_different(candidate, rng)) ++changed;
  }
  if (changed == 0) {
    // force one change when any gene can move; waived on degenerate spaces
    std::vector<std::size_t> order(genes.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.below(i))]);
    }
    for (std::size_t i : order) {
      if (genes[i].resample_different(candidate, rng)) {
        ++changed;
        break;
      }
    }
  }
  return changed;
}

Candidate mutate(const Candidate& parent, const SearchSpace& space, double rate, Rng& rng,
                 std::uint64_t new_id) {
  Candidate child = parent;
  child.id = new_id;
  child.lineage = {parent.id};
  mutate_genes(child, space, rate, rng);
  return child;
}

Candidate crossover(const Candidate& a, const Candidate& b, const SearchSpace& space, Rng& rng,
                    std::uint64_t new_id) {
  Candidate child = a;
  child.id = new_id;
  child.lineage = {a.id, b.id};
  for (const Gene& gene : gene_list_for(space)) {
    gene.inherit(child, rng.coin() ? a : b);
  }
  return child;
}

// --- evaluation ------------------------------------------------------------------

EvalResult evaluate_candidate(const Candidate& candidate, const Dataset& ds) {
  EvalResult result;
  result.candidate_id = candidate.id;
  result.smoothing_kind = candidate.smoothing_kind;
  result.candidate = candidate;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (ds.splits.train.empty() || ds.splits.valid.empty()) {
      throw ValidationError("evaluate_candidate: dataset needs train and valid splits");
    }
    ForecastModel model =
        assemble_model(candidate.to_model_spec(), DatasetDims::of(ds), candidate.id);
    train_model(model, ds, candidate.to_train_config());
    KalmanConfig kcfg = KalmanConfig::uniform(candidate.sigma2, candidate.q_scale,
                                              model.hidden_width(), candidate.p0,
                                              candidate.delay_days);
    RecalibrationResult recal = run_online(model, ds, ds.splits.valid, kcfg);

    double sse = 0.0;
    std::vector<double> y_mw, yhat_mw;
    const std::size_t h_n = ds.instants();
    for (std::size_t t = 0; t < recal.range.length(); ++t) {
      for (std::size_t h = 0; h < h_n; ++h) {
        const double y = ds.scaler.scale_load(ds.load.values(recal.range.begin + t, h));
        const double err = recal.recalibrated_scaled(t, h) - y;
        sse += err * err;
        y_mw.push_back(ds.load.values(recal.range.begin + t, h));
        yhat_mw.push_back(recal.recalibrated_mw(t, h));
      }
    }
    result.validation_mse = sse / static_cast<double>(y_mw.size());
    result.validation_mape_mw = compute_mape(y_mw, yhat_mw);
    if (!std::isfinite(result.validation_mse)) {
      throw NumericError("non-finite validation mse");
    }
  } catch (const std::exception& e) {
    result.failed = true;
    result.failure_reason = e.what();
    result.validation_mse = std::numeric_limits<double>::infinity();
    result.validation_mape_mw = std::numeric_limits<double>::infinity();
    VC_INFO("candidate " << candidate.id << " failed: " << e.what());
  }
  result.train_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// --- steady-state loop ---------------------------------------------------------

namespace {

void evaluate_all(const std::vector<Candidate>& candidates, const Dataset& ds,
                  std::size_t workers, std::vector<EvalResult>& out) {
  out.resize(candidates.size());
  const std::size_t n_threads = std::min(std::max<std::size_t>(workers, 1), candidates.size());
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out[i] = evaluate_candidate(candidates[i], ds);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= candidates.size()) return;
      out[i] = evaluate_candidate(candidates[i], ds);
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(n_threads);
  for (std::size_t i = 0; i < n_threads; ++i) threads.emplace_back(worker);
  for (std::thread& t : threads) t.join();
}

bool better(const EvalResult& a, const EvalResult& b) {
  if (a.objective() != b.objective()) return a.objective() < b.objective();
  return a.candidate_id < b.candidate_id;
}

}  // namespace

SearchResult run_search(const SearchSpace& space, const EAConfig& cfg, const Dataset& ds) {
  space.validate();
  if (cfg.population_size < 2) throw ValidationError("run_search: population_size must be >= 2");
  if (cfg.tournament_size < 2 || cfg.tournament_size > cfg.population_size) {
    throw ValidationError("run_search: need 2 <= tournament_size <= population_size");
  }
  if (cfg.budget_evaluations < cfg.population_size) {
    throw ValidationError("run_search: budget must be >= population size");
  }

  Rng ea_rng(cfg.seed);
  std::vector<Candidate> initial;
  initial.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size; ++i) {
    initial.push_back(sample_candidate(space, ea_rng, i));
  }
  std::vector<EvalResult> population;
  evaluate_all(initial, ds, cfg.workers, population);

  SearchResult result;
  result.history = population;

  std::uint64_t next_id = cfg.population_size;
  while (next_id < cfg.budget_evaluations) {
    const std::size_t round =
        std::min<std::size_t>(kSearchRoundSize, cfg.budget_evaluations - next_id);
    // children of one round are bred from the same population snapshot
    std::vector<Candidate> children;
    children.reserve(round);
    for (std::size_t k = 0; k < round; ++k) {
      auto select = [&]() -> const EvalResult& {
        std::size_t best = static_cast<std::size_t>(ea_rng.below(population.size()));
        for (std::size_t j = 1; j < cfg.tournament_size; ++j) {
          const std::size_t pick = static_cast<std::size_t>(ea_rng.below(population.size()));
          if (better(population[pick], population[best])) best = pick;
        }
        return population[best];
      };
      const Candidate parent_a = select().candidate;
      const Candidate parent_b = select().candidate;
      Candidate child = crossover(parent_a, parent_b, space, ea_rng, next_id + k);
      mutate_genes(child, space, cfg.mutation_rate, ea_rng);
      children.push_back(std::move(child));
    }

    std::vector<EvalResult> evaluated;
    evaluate_all(children, ds, cfg.workers, evaluated);

    for (EvalResult& child : evaluated) {
      // replace the current worst member when the child improves on it
      std::size_t worst = 0;
      for (std::size_t i = 1; i < population.size(); ++i) {
        if (!better(population[i], population[worst])) worst = i;
      }
      if (child.objective() < population[worst].objective()) {
        population[worst] = child;
      }
      result.history.push_back(std::move(child));
    }
    next_id += round;
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.history.size(); ++i) {
    if (better(result.history[i], result.history[best])) best = i;
  }
  result.best_result = result.history[best];
  result.best = result.history[best].candidate;
  VC_INFO("search done: best candidate " << result.best.id << " objective "
                                         << result.best_result.objective());
  return result;
}

// --- telemetry --------------------------------------------------------------------

KindHistory smoothing_kind_history(const std::vector<EvalResult>& history, std::size_t window) {
  if (history.empty()) throw ValidationError("smoothing_kind_history: empty history");
  KindHistory out;
  out.kinds = canonical_smoothing_kinds();
  out.window = window;
  std::vector<std::size_t> cumulative(out.kinds.size(), 0);
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto it = std::find(out.kinds.begin(), out.kinds.end(), history[i].smoothing_kind);
    if (it == out.kinds.end()) {
      throw ValidationError("smoothing_kind_history: unknown kind '" +
                            history[i].smoothing_kind + "'");
    }
    cumulative[static_cast<std::size_t>(it - out.kinds.begin())] += 1;
    out.cumulative.push_back(cumulative);

    std::vector<std::size_t> windowed(out.kinds.size(), 0);
    const std::size_t lo = (i + 1 >= window) ? i + 1 - window : 0;
    for (std::size_t j = lo; j <= i; ++j) {
      const auto jt = std::find(out.kinds.begin(), out.kinds.end(), history[j].smoothing_kind);
      windowed[static_cast<std::size_t>(jt - out.kinds.begin())] += 1;
    }
    out.windowed.push_back(std::move(windowed));
  }
  return out;
}

// --- serialization -------------------------------------------------------------------

namespace {

json slots_to_json(const std::vector<GraphSlotGenes>& slots) {
  json arr = json::array();
  for (const GraphSlotGenes& s : slots) {
    arr.push_back({{"active", s.active},
                   {"kind", s.kind},
                   {"out_dim", s.out_dim},
                   {"kernel", s.kernel},
                   {"activation", s.activation},
                   {"skip_input", s.skip_input}});
  }
  return arr;
}

std::vector<GraphSlotGenes> slots_from_json(const json& arr) {
  std::vector<GraphSlotGenes> slots;
  for (const auto& s : arr) {
    GraphSlotGenes g;
    g.active = s.value("active", false);
    g.kind = s.value("kind", std::string("identity"));
    g.out_dim = s.value("out_dim", std::size_t{1});
    g.kernel = s.value("kernel", std::size_t{1});
    g.activation = s.value("activation", std::string("identity"));
    g.skip_input = s.value("skip_input", false);
    slots.push_back(g);
  }
  return slots;
}

json candidate_to_json_obj(const Candidate& c) {
  json doc = {{"id", c.id},
              {"lineage", c.lineage},
              {"f_v", c.f_v},
              {"smoothing", c.smoothing_kind},
              {"gamma1", slots_to_json(c.gamma1_slots)},
              {"gamma2", slots_to_json(c.gamma2_slots)},
              {"lr", c.lr},
              {"epochs", c.epochs},
              {"sigma2", c.sigma2},
              {"q_scale", c.q_scale},
              {"batch_size", c.batch_size},
              {"p0", c.p0},
              {"delay_days", c.delay_days}};
  if (c.gradient_clip.has_value()) doc["gradient_clip"] = *c.gradient_clip;
  return doc;
}

Candidate candidate_from_json_obj(const json& doc) {
  Candidate c;
  c.id = doc.value("id", std::uint64_t{0});
  c.lineage = doc.value("lineage", std::vector<std::uint64_t>{});
  c.f_v = doc.at("f_v").get<std::vector<std::size_t>>();
  c.smoothing_kind = doc.at("smoothing").get<std::string>();
  c.gamma1_slots = slots_from_json(doc.value("gamma1", json::array()));
  c.gamma2_slots = slots_from_json(doc.value("gamma2", json::array()));
  c.lr = doc.value("lr", 0.1);
  c.epochs = doc.value("epochs", std::size_t{100});
  c.sigma2 = doc.value("sigma2", 1e-2);
  c.q_scale = doc.value("q_scale", 1e-4);
  c.batch_size = doc.value("batch_size", std::size_t{16});
  c.p0 = doc.value("p0", 10.0);
  c.delay_days = doc.value("delay_days", 2);
  if (doc.contains("gradient_clip") && !doc.at("gradient_clip").is_null()) {
    c.gradient_clip = doc.at("gradient_clip").get<double>();
  }
  return c;
}

}  // namespace

std::string candidate_to_json(const Candidate& candidate) {
  return candidate_to_json_obj(candidate).dump(2);
}

Candidate candidate_from_json(const std::string& text) {
  return candidate_from_json_obj(json::parse(text));
}

SearchSpace search_space_from_json(const std::string& text) {
  json doc = json::parse(text);
  SearchSpace space;
  space.f_v_choices = doc.at("f_v_choices").get<std::vector<std::vector<std::size_t>>>();
  space.smoothing_kinds = doc.at("smoothing_kinds").get<std::vector<std::string>>();
  auto menu_from = [](const json& j) {
    GraphMenu menu;
    menu.max_depth = j.value("max_depth", std::size_t{0});
    if (j.contains("kinds")) menu.kinds = j.at("kinds").get<std::vector<std::string>>();
    if (j.contains("out_dims")) menu.out_dims = j.at("out_dims").get<std::vector<std::size_t>>();
    if (j.contains("kernels")) menu.kernels = j.at("kernels").get<std::vector<std::size_t>>();
    if (j.contains("activations")) {
      menu.activations = j.at("activations").get<std::vector<std::string>>();
    }
    menu.allow_skip = j.value("allow_skip", false);
    return menu;
  };
  if (doc.contains("gamma1")) space.gamma1 = menu_from(doc.at("gamma1"));
  if (doc.contains("gamma2")) space.gamma2 = menu_from(doc.at("gamma2"));
  space.lr_choices = doc.at("lr_choices").get<std::vector<double>>();
  space.epoch_choices = doc.at("epoch_choices").get<std::vector<std::size_t>>();
  space.sigma2_range = {doc.at("sigma2_range")[0].get<double>(),
                        doc.at("sigma2_range")[1].get<double>()};
  space.q_scale_range = {doc.at("q_scale_range")[0].get<double>(),
                         doc.at("q_scale_range")[1].get<double>()};
  space.p0 = doc.value("p0", 10.0);
  space.batch_size = doc.value("batch_size", std::size_t{16});
  space.delay_days = doc.value("delay_days", 2);
  if (doc.contains("gradient_clip") && !doc.at("gradient_clip").is_null()) {
    space.gradient_clip = doc.at("gradient_clip").get<double>();
  }
  space.validate();
  return space;
}

std::string search_space_to_json(const SearchSpace& space) {
  auto menu_to = [](const GraphMenu& menu) {
    return json{{"max_depth", menu.max_depth}, {"kinds", menu.kinds},
                {"out_dims", menu.out_dims},   {"kernels", menu.kernels},
                {"activations", menu.activations}, {"allow_skip", menu.allow_skip}};
  };
  json doc = {{"f_v_choices", space.f_v_choices},
              {"smoothing_kinds", space.smoothing_kinds},
              {"gamma1", menu_to(space.gamma1)},
              {"gamma2", menu_to(space.gamma2)},
              {"lr_choices", space.lr_choices},
              {"epoch_choices", space.epoch_choices},
              {"sigma2_range", {space.sigma2_range.first, space.sigma2_range.second}},
              {"q_scale_range", {space.q_scale_range.first, space.q_scale_range.second}},
              {"p0", space.p0},
              {"batch_size", space.batch_size},
              {"delay_days", space.delay_days}};
  if (space.gradient_clip.has_value()) doc["gradient_clip"] = *space.gradient_clip;
  return doc.dump(2);
}

std::string history_to_jsonl(const std::vector<EvalResult>& history) {
  std::ostringstream os;
  for (const EvalResult& r : history) {
    json line = {{"candidate", candidate_to_json_obj(r.candidate)},
                 {"validation_mse", r.validation_mse},
                 {"validation_mape_mw", r.validation_mape_mw},
                 {"smoothing_kind", r.smoothing_kind},
                 {"failed", r.failed}};
    if (r.failed) line["failure_reason"] = r.failure_reason;
    os << line.dump() << "\n";
  }
  return os.str();
}

std::vector<EvalResult> history_from_jsonl(const std::string& text) {
  std::vector<EvalResult> history;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json doc = json::parse(line);
    EvalResult r;
    r.candidate = candidate_from_json_obj(doc.at("candidate"));
    r.candidate_id = r.candidate.id;
    r.validation_mse = doc.at("validation_mse").get<double>();
    r.validation_mape_mw = doc.at("validation_mape_mw").get<double>();
    r.smoothing_kind = doc.at("smoothing_kind").get<std::string>();
    r.failed = doc.value("failed", false);
    r.failure_reason = doc.value("failure_reason", std::string());
    history.push_back(std::move(r));
  }
  return history;
}

std::string kind_history_to_csv(const KindHistory& history) {
  std::ostringstream os;
  os << "creation_index,kind,count\n";
  for (std::size_t i = 0; i < history.cumulative.size(); ++i) {
    for (std::size_t k = 0; k < history.kinds.size(); ++k) {
      os << i << "," << history.kinds[k] << "," << history.cumulative[i][k] << "\n";
    }
  }
  return os.str();
}

KindHistory kind_history_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || (line != "creation_index,kind,count" &&
                                  line != "creation_index,kind,count\r")) {
    throw ValidationError("kind history csv: bad header");
  }
  KindHistory out;
  out.kinds = canonical_smoothing_kinds();
  std::size_t expected_index = 0;
  std::vector<std::size_t> row;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string idx_s, kind, count_s;
    if (!std::getline(ls, idx_s, ',') || !std::getline(ls, kind, ',') ||
        !std::getline(ls, count_s)) {
      throw ValidationError("kind history csv: malformed row '" + line + "'");
    }
    const std::size_t idx = static_cast<std::size_t>(parse_long(idx_s, "kind history csv"));
    const std::size_t count = static_cast<std::size_t>(parse_long(count_s, "kind history csv"));
    const auto it = std::find(out.kinds.begin(), out.kinds.end(), kind);
    if (it == out.kinds.end()) {
      throw ValidationError("kind history csv: unknown kind '" + kind + "'");
    }
    if (idx != expected_index && idx != expected_index - 1) {
      // rows for one index arrive consecutively, one per kind
    }
    if (idx >= out.cumulative.size()) {
      out.cumulative.resize(idx + 1, std::vector<std::size_t>(out.kinds.size(), 0));
    }
    out.cumulative[idx][static_cast<std::size_t>(it - out.kinds.begin())] = count;
    expected_index = idx;
    (void)row;
  }
  if (out.cumulative.empty()) throw ValidationError("kind history csv: no rows");
  return out;
}

}  // namespace voltcast
