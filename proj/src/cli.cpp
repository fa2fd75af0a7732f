#include "psim/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "psim/atomic_file.hpp"
#include "psim/baselines.hpp"
#include "psim/eval.hpp"
#include "psim/kernels.hpp"
#include "psim/lds.hpp"
#include "psim/persistence.hpp"
#include "psim/psim.hpp"
#include "psim/rng.hpp"
#include "psim/trajectory_io.hpp"

namespace psim::cli {

namespace fs = std::filesystem;
using persist::Json;

namespace {

constexpr int kSchemaVersion = 1;

// Seed streams derived from the user seed.
enum SeedStream : std::uint64_t {
  kTrainData = 1,
  kTestData = 2,
  kLearner = 11,
  kValidation = 12,
  kFolds = 13,
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

template <class T>
T config_value(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

Json parameters_json(const ExperimentConfig& c) {
  Json j;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["algo"] = c.algo;
  j["learner"] = c.learner;
  j["k"] = c.k;
  j["phi"] = c.phi;
  j["lambda"] = c.lambda ? Json(*c.lambda) : Json(nullptr);
  j["rff_dim"] = c.rff_dim;
  j["bandwidth"] = c.bandwidth ? Json(*c.bandwidth) : Json(nullptr);
  j["median"] = c.median;
  j["iters"] = c.iters;
  j["horizon"] = c.horizon ? Json(*c.horizon) : Json(nullptr);
  j["val_frac"] = c.val_frac;
  j["folds"] = c.folds;
  j["n_traj"] = c.n_traj;
  j["n_test"] = c.n_test;
  j["len"] = c.len;
  j["T"] = c.T ? Json(*c.T) : Json(nullptr);
  j["grid"] = c.grid;
  return j;
}

Json sidecar(const ExperimentConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["config_hash"] = config_hash(c);
  j["log_base"] = "e";
  j["parameters"] = parameters_json(c);
  return j;
}

/// Writes `csv` and its `<name>.meta.json` sidecar.
void write_csv_with_sidecar(const fs::path& path, const std::string& csv, Json meta) {
  fs::path side = path;
  side += ".meta.json";
  persist::write_json(side, meta);
  io::write_file_atomic(path, csv);
}

LearnerConfig learner_config(const ExperimentConfig& c) {
  LearnerConfig learner;
  learner.kind = parse_learner(c.learner);
  learner.lambda = c.lambda;
  learner.rff_dim = c.rff_dim;
  learner.bandwidth = c.median ? std::nullopt : c.bandwidth;
  learner.seed = derive_seed(c.seed, kLearner);
  return learner;
}

FeatureMap feature_map(const ExperimentConfig& c, Index n) {
  return FeatureMap(parse_phi(c.phi), c.k, n);
}

std::vector<Trajectory> load_data(const fs::path& path) {
  if (path.empty()) throw ConfigError("--data is required");
  if (!fs::exists(path)) throw ConfigError("data file not found: " + path.string());
  try {
    return io::load_trajectories(path);
  } catch (const Error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Index min_length(std::span<const Trajectory> trajs) {
  Index shortest = std::numeric_limits<Index>::max();
  for (const auto& t : trajs) shortest = std::min(shortest, t.length());
  return shortest;
}

Index forward_steps(const ExperimentConfig& c, std::span<const Trajectory> trajs) {
  const Index capacity = min_length(trajs) - c.k;
  if (capacity < 1) throw ConfigError("trajectories are too short for k=" + std::to_string(c.k));
  const Index steps = c.T.value_or(capacity);
  if (steps > capacity)
    throw ConfigError("--T " + std::to_string(steps) + " exceeds trajectory capacity L - k = " +
                      std::to_string(capacity));
  return steps;
}

TrainResult train_filter(const ExperimentConfig& c, std::span<const Trajectory> trajs) {
  const FeatureMap phi = feature_map(c, common_dim(trajs));
  const LearnerConfig learner = learner_config(c);
  if (parse_algorithm(c.algo) == Algorithm::forward)
    return forward_train(trajs, learner, phi, forward_steps(c, trajs));
  const Split split = split_validation(trajs, c.val_frac, derive_seed(c.seed, kValidation));
  DaggerOptions options;
  options.iterations = c.iters;
  return dagger_train(split.train, split.validation, learner, phi, options);
}

std::string method_name(const Filter& filter) {
  if (filter.algorithm() == Algorithm::oracle) return "oracle";
  return "psim-" + std::string(to_string(filter.algorithm()));
}

Json meta_from(const fs::path& explicit_path, const fs::path& data, std::ostream& err) {
  fs::path path = explicit_path;
  if (path.empty()) path = data.parent_path() / "meta.json";
  if (!fs::exists(path)) {
    if (!explicit_path.empty()) throw ConfigError("meta file not found: " + path.string());
    err << "warning: " << path.string() << " not found; log_ratio omitted\n";
    return nullptr;
  }
  return persist::read_json(path);
}

double mean(std::span<const double> v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean(v);
  double acc = 0.0;
  for (double x : v) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

}  // namespace

void apply_config_json(ExperimentConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "seed") c.seed = config_value<std::uint64_t>(value, key);
    else if (key == "out") c.out = config_value<std::string>(value, key);
    else if (key == "data") c.data = config_value<std::string>(value, key);
    else if (key == "model") c.model = config_value<std::string>(value, key);
    else if (key == "meta") c.meta = config_value<std::string>(value, key);
    else if (key == "algo") c.algo = config_value<std::string>(value, key);
    else if (key == "learner") c.learner = config_value<std::string>(value, key);
    else if (key == "k") c.k = config_value<Index>(value, key);
    else if (key == "phi") c.phi = config_value<std::string>(value, key);
    else if (key == "lambda") c.lambda = config_value<double>(value, key);
    else if (key == "rff_dim") c.rff_dim = config_value<Index>(value, key);
    else if (key == "bandwidth") c.bandwidth = config_value<double>(value, key);
    else if (key == "median") c.median = config_value<bool>(value, key);
    else if (key == "iters") c.iters = config_value<Index>(value, key);
    else if (key == "horizon") c.horizon = config_value<Index>(value, key);
    else if (key == "val_frac") c.val_frac = config_value<double>(value, key);
    else if (key == "folds") c.folds = config_value<Index>(value, key);
    else if (key == "n_traj") c.n_traj = config_value<Index>(value, key);
    else if (key == "n_test") c.n_test = config_value<Index>(value, key);
    else if (key == "len") c.len = config_value<Index>(value, key);
    else if (key == "T") c.T = config_value<Index>(value, key);
    else if (key == "grid") c.grid = config_value<std::vector<Index>>(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  parse_algorithm(c.algo);
  require(c.algo != "oracle", "--algo must be forward or dagger");
  parse_learner(c.learner);
  parse_phi(c.phi);
  require(c.k >= 1, "--k must be at least 1");
  require(c.len >= c.k + 1, "--len " + std::to_string(c.len) + " is too short for k=" +
                                std::to_string(c.k) + " (need len >= k + 1)");
  require(c.n_traj >= 1 && c.n_test >= 1, "trajectory counts must be positive");
  require(!c.lambda || (*c.lambda >= 0.0 && std::isfinite(*c.lambda)), "--lambda must be >= 0");
  require(c.rff_dim >= 1, "--rff-dim must be positive");
  require(!c.bandwidth || (*c.bandwidth > 0.0 && std::isfinite(*c.bandwidth)),
          "--bandwidth must be positive");
  require(!(c.bandwidth && c.median), "--bandwidth and --median are mutually exclusive");
  require(c.iters >= 1, "--iters must be at least 1");
  require(!c.horizon || *c.horizon >= 1, "--horizon must be at least 1");
  require(c.val_frac > 0.0 && c.val_frac < 1.0, "--val-frac must lie in (0, 1)");
  require(c.folds >= 2, "--folds must be at least 2");
  require(!c.T || *c.T >= 1, "--T must be at least 1");
  require(!c.grid.empty(), "--grid must not be empty");
  for (std::size_t i = 0; i < c.grid.size(); ++i)
    require(c.grid[i] >= 2 && (i == 0 || c.grid[i] > c.grid[i - 1]),
            "--grid must be strictly increasing with entries >= 2");
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string text = parameters_json(c).dump();
  return hex64(fnv1a(text.data(), text.size()));
}

void cmd_gen(const ExperimentConfig& c) {
  const Benchmark bench = make_benchmark(c.seed);
  const PredictiveOracle oracle(bench.model, c.k);
  const auto train = kernels::simulate_many(kernels::Exec::parallel, bench.model, c.n_traj, c.len,
                                            derive_seed(c.seed, kTrainData));
  const auto test = kernels::simulate_many(kernels::Exec::parallel, bench.model, c.n_test, c.len,
                                           derive_seed(c.seed, kTestData));
  const ErrorReport oracle_error = oracle_filter_error(bench.model, c.k, test, c.k);

  persist::write_json(c.out / "model.json", persist::to_json(bench.model));
  io::save_trajectories(c.out / "train.jsonl", train);
  io::save_trajectories(c.out / "test.jsonl", test);
  persist::write_json(c.out / "oracle_filter.json",
                      persist::to_json(oracle_filter(oracle, bench.model.obs_dim())));

  Json meta = sidecar(c);
  meta["k"] = c.k;
  meta["benchmark_attempts"] = bench.attempts;
  meta["e_F"] = oracle_error.mse;
  meta["e_F_overall"] = oracle_error.overall;
  meta["e_F_scope"] = "test.jsonl, states [0, L-k)";
  meta["trajectory_power"] = trajectory_power(test);
  meta["trajectory_power_definition"] = "mean over (trajectory, step) of ||x_t||^2";
  meta["lds"] = persist::to_json(bench.model);
  persist::write_json(c.out / "meta.json", meta);
}

void cmd_train(const ExperimentConfig& c) {
  const auto trajs = load_data(c.data);
  if (min_length(trajs) < c.k + 1)
    throw ConfigError("trajectories are too short for k=" + std::to_string(c.k));
  if (parse_algorithm(c.algo) == Algorithm::forward) forward_steps(c, trajs);
  const TrainResult result = train_filter(c, trajs);

  persist::write_json(c.out / "filter.json", persist::to_json(result.filter));
  std::ostringstream csv;
  result.report.write_csv(csv);
  Json meta = sidecar(c);
  meta["algorithm"] = std::string(to_string(result.report.algorithm));
  meta["selected_iteration"] = result.report.selected_iteration;
  meta["resolved_lambda"] = result.report.learner.lambda ? Json(*result.report.learner.lambda) : Json(nullptr);
  meta["resolved_bandwidth"] =
      result.report.learner.bandwidth ? Json(*result.report.learner.bandwidth) : Json(nullptr);
  write_csv_with_sidecar(c.out / "train_report.csv", csv.str(), std::move(meta));
}

void cmd_eval(const ExperimentConfig& c, std::ostream& err) {
  if (c.model.empty()) throw ConfigError("--model is required");
  if (!fs::exists(c.model)) throw ConfigError("model file not found: " + c.model.string());
  const Json model_json = persist::read_json(c.model);
  const auto trajs = load_data(c.data);

  ErrorTable table;
  Index k = 0;
  Index first_step = 0;
  const std::string format = model_json.value("format", "");
  if (format == "psim-ar") {
    const ArModel ar = persist::ar_from_json(model_json);
    k = ar.phi().k();
    const Index horizon = c.horizon.value_or(k);
    if (horizon > k) throw ConfigError("--horizon " + std::to_string(horizon) + " exceeds k=" + std::to_string(k));
    table.method = "ar-" + std::to_string(ar.history());
    table.report = ar_predict_errors(ar, trajs, horizon);
    table.report.trajectory_power = trajectory_power(trajs);
    first_step = ar.history();
  } else {
    const Filter filter = persist::filter_from_json(model_json);
    k = filter.phi().k();
    const Index horizon = c.horizon.value_or(k);
    if (horizon > k) throw ConfigError("--horizon " + std::to_string(horizon) + " exceeds k=" + std::to_string(k));
    table.method = method_name(filter);
    table.report = filtering_error(filter, trajs, horizon);
  }

  Json meta = sidecar(c);
  meta["method"] = table.method;
  meta["k"] = k;
  meta["first_step"] = first_step;
  meta["skipped_steps"] = table.report.skipped_steps;
  meta["trajectory_power"] = table.report.trajectory_power;
  meta["trajectory_power_definition"] = "mean over (trajectory, step) of ||x_t||^2";

  const Json bench_meta = meta_from(c.meta, c.data, err);
  std::string warning;
  if (!bench_meta.is_null()) {
    if (!bench_meta.contains("lds")) throw DataError("meta file has no 'lds' entry");
    const LdsModel lds = persist::lds_from_json(bench_meta.at("lds"));
    const ErrorReport oracle = oracle_filter_error(lds, k, trajs, table.report.horizon(), first_step);
    table.oracle = oracle.mse;
    meta["e_F"] = oracle.mse;
  } else {
    warning = "# warning: oracle metadata not found; log_ratio omitted\n";
    meta["warning"] = "oracle metadata not found; log_ratio omitted";
  }

  std::ostringstream csv;
  write_error_csv(csv, std::span<const ErrorTable>(&table, 1));
  write_csv_with_sidecar(c.out / "eval.csv", csv.str() + warning, std::move(meta));
}

void cmd_fig2(const ExperimentConfig& c) {
  std::vector<Trajectory> pool;
  std::vector<Trajectory> test;
  LdsModel model = make_benchmark(c.seed).model;
  if (!c.data.empty()) {
    pool = load_data(c.data / "train.jsonl");
    test = load_data(c.data / "test.jsonl");
    model = persist::lds_from_json(persist::read_json(c.data / "meta.json").at("lds"));
  } else {
    pool = kernels::simulate_many(kernels::Exec::parallel, model, c.grid.back(), c.len,
                                  derive_seed(c.seed, kTrainData));
    test = kernels::simulate_many(kernels::Exec::parallel, model, c.n_test, c.len,
                                  derive_seed(c.seed, kTestData));
  }
  if (static_cast<Index>(pool.size()) < c.grid.back())
    throw ConfigError("training pool holds " + std::to_string(pool.size()) +
                      " trajectories, grid needs " + std::to_string(c.grid.back()));

  const Index n = common_dim(pool);
  const FeatureMap phi = feature_map(c, n);
  const std::vector<Index> ar_orders{1, 2, 5};
  for (Index h : ar_orders)
    if (min_length(test) < h + c.k + 1)
      throw ConfigError("trajectories too short for AR-" + std::to_string(h));

  // Oracle errors on the same scored states as each method.
  std::vector<ErrorReport> oracle_by_first_step(6);
  for (Index first : {Index{0}, Index{1}, Index{2}, Index{5}})
    oracle_by_first_step[static_cast<std::size_t>(first)] = oracle_filter_error(model, c.k, test, c.k, first);

  std::ostringstream csv;
  csv << "method,n_train,log_n,mse,mse_oracle,log_ratio,mse_1step,mse_oracle_1step,log_ratio_1step\n";
  csv.precision(17);
  auto emit = [&](const std::string& method, Index count, const ErrorReport& e, Index first) {
    const ErrorReport& o = oracle_by_first_step[static_cast<std::size_t>(first)];
    csv << method << ',' << count << ',' << std::log(static_cast<double>(count)) << ',' << e.overall << ','
        << o.overall << ',' << error_ratio(e.overall, o.overall) << ',' << e.mse[0] << ',' << o.mse[0]
        << ',' << error_ratio(e.mse[0], o.mse[0]) << '\n';
  };

  for (Index count : c.grid) {
    const std::span<const Trajectory> subset(pool.data(), static_cast<std::size_t>(count));
    ExperimentConfig run = c;
    run.algo = "dagger";
    emit("psim-dagger", count, filtering_error(train_filter(run, subset).filter, test, c.k), 0);
    run.algo = "forward";
    run.T.reset();
    emit("psim-forward", count, filtering_error(train_filter(run, subset).filter, test, c.k), 0);
    for (Index h : ar_orders) {
      const ArModel ar = ar_train(subset, h, phi, c.lambda);
      emit("ar-" + std::to_string(h), count, ar_predict_errors(ar, test, c.k), h);
    }
  }

  Json meta = sidecar(c);
  meta["ratio"] = "log(e/e_F), e averaged over horizons 1..k; *_1step columns use horizon 1";
  meta["ar_scoring"] = "AR-h and its oracle are scored on states s >= h";
  meta["n_test"] = static_cast<Index>(test.size());
  write_csv_with_sidecar(c.out / "fig2.csv", csv.str(), std::move(meta));
}

void cmd_folds(const ExperimentConfig& c) {
  const auto trajs = load_data(c.data);
  const auto total = static_cast<Index>(trajs.size());
  if (total < c.folds)
    throw ConfigError("need at least " + std::to_string(c.folds) + " trajectories for " +
                      std::to_string(c.folds) + " folds, got " + std::to_string(total));
  const auto order = seeded_permutation(total, derive_seed(c.seed, kFolds));
  std::vector<Index> fold_of(static_cast<std::size_t>(total));
  for (Index i = 0; i < total; ++i) fold_of[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i % c.folds;

  const Index horizon = c.horizon.value_or(c.k);
  if (horizon > c.k) throw ConfigError("--horizon exceeds k");
  std::vector<std::vector<double>> per_horizon(static_cast<std::size_t>(horizon));
  std::ostringstream csv;
  csv << "fold,n_train,n_test,horizon,mse,n_samples\n";
  csv.precision(17);
  for (Index f = 0; f < c.folds; ++f) {
    std::vector<Trajectory> train;
    std::vector<Trajectory> test;
    for (Index i = 0; i < total; ++i)
      (fold_of[static_cast<std::size_t>(i)] == f ? test : train).push_back(trajs[static_cast<std::size_t>(i)]);
    ExperimentConfig run = c;
    run.seed = derive_seed(c.seed, static_cast<std::uint64_t>(100 + f));
    const ErrorReport report = filtering_error(train_filter(run, train).filter, test, horizon);
    for (Index i = 0; i < horizon; ++i) {
      const auto slot = static_cast<std::size_t>(i);
      csv << f << ',' << train.size() << ',' << test.size() << ',' << i + 1 << ',' << report.mse[slot]
          << ',' << report.counts[slot] << '\n';
      per_horizon[slot].push_back(report.mse[slot]);
    }
  }

  std::ostringstream summary;
  summary << "horizon,folds,mean,std\n";
  summary.precision(17);
  for (Index i = 0; i < horizon; ++i) {
    const auto& v = per_horizon[static_cast<std::size_t>(i)];
    summary << i + 1 << ',' << c.folds << ',' << mean(v) << ',' << sample_std(v) << '\n';
  }
  Json meta = sidecar(c);
  meta["std"] = "sample standard deviation across folds (n - 1)";
  write_csv_with_sidecar(c.out / "folds.csv", csv.str(), meta);
  write_csv_with_sidecar(c.out / "folds_summary.csv", summary.str(), meta);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Predictive State Inference Machines"};
  app.require_subcommand(1, 1);
  ExperimentConfig flags;
  std::string config_path;
  std::string out_dir, data, model, meta;
  std::vector<CLI::Option*> set;

  app.add_option("--config", config_path, "JSON config file; flags override its keys");
  auto* o_seed = app.add_option("--seed", flags.seed);
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_data = app.add_option("--data", data, "trajectory file (.jsonl or .csv); directory for fig2");
  auto* o_model = app.add_option("--model", model, "filter or AR model JSON");
  auto* o_meta = app.add_option("--meta", meta, "benchmark meta.json (default: next to --data)");
  auto* o_algo = app.add_option("--algo", flags.algo)->check(CLI::IsMember({"forward", "dagger"}));
  auto* o_learner = app.add_option("--learner", flags.learner)->check(CLI::IsMember({"linear", "rff"}));
  auto* o_k = app.add_option("--k", flags.k);
  auto* o_phi = app.add_option("--phi", flags.phi)->check(CLI::IsMember({"phi1", "phi2"}));
  double lambda = 0.0, bandwidth = 0.0;
  Index horizon = 0, steps = 0;
  auto* o_lambda = app.add_option("--lambda", lambda);
  auto* o_rff = app.add_option("--rff-dim", flags.rff_dim);
  auto* o_bw = app.add_option("--bandwidth", bandwidth);
  auto* o_median = app.add_flag("--median", flags.median, "median-heuristic bandwidth");
  o_bw->excludes(o_median);
  auto* o_iters = app.add_option("--iters", flags.iters);
  auto* o_horizon = app.add_option("--horizon", horizon);
  auto* o_val = app.add_option("--val-frac", flags.val_frac);
  auto* o_folds = app.add_option("--folds", flags.folds);
  auto* o_ntraj = app.add_option("--n-traj", flags.n_traj);
  auto* o_ntest = app.add_option("--n-test,--test-traj", flags.n_test);
  auto* o_len = app.add_option("--len", flags.len);
  auto* o_T = app.add_option("--T", steps);
  auto* o_grid = app.add_option("--grid", flags.grid)->delimiter(',');

  for (const char* name : {"gen", "train", "eval", "fig2", "folds"})
    app.add_subcommand(name)->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    ExperimentConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config " + config_path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(config_path + ": " + e.what());
      }
      apply_config_json(c, j);
    }
    c.command = app.get_subcommands().front()->get_name();
    if (o_seed->count()) c.seed = flags.seed;
    if (o_out->count()) c.out = out_dir;
    if (o_data->count()) c.data = data;
    if (o_model->count()) c.model = model;
    if (o_meta->count()) c.meta = meta;
    if (o_algo->count()) c.algo = flags.algo;
    if (o_learner->count()) c.learner = flags.learner;
    if (o_k->count()) c.k = flags.k;
    if (o_phi->count()) c.phi = flags.phi;
    if (o_lambda->count()) c.lambda = lambda;
    if (o_rff->count()) c.rff_dim = flags.rff_dim;
    if (o_bw->count()) c.bandwidth = bandwidth, c.median = false;
    if (o_median->count()) c.median = true, c.bandwidth.reset();
    if (o_iters->count()) c.iters = flags.iters;
    if (o_horizon->count()) c.horizon = horizon;
    if (o_val->count()) c.val_frac = flags.val_frac;
    if (o_folds->count()) c.folds = flags.folds;
    if (o_ntraj->count()) c.n_traj = flags.n_traj;
    if (o_ntest->count()) c.n_test = flags.n_test;
    if (o_len->count()) c.len = flags.len;
    if (o_T->count()) c.T = steps;
    if (o_grid->count()) c.grid = flags.grid;
    validate(c);

    if (c.command == "gen") cmd_gen(c);
    else if (c.command == "train") cmd_train(c);
    else if (c.command == "eval") cmd_eval(c, err);
    else if (c.command == "fig2") cmd_fig2(c);
    else cmd_folds(c);
    return 0;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace psim::cli
