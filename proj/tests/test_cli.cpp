#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "psim/cli.hpp"
#include "psim/persistence.hpp"
#include "psim/trajectory_io.hpp"

using namespace psim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("psim_cli_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path path;
};

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

void gen(const fs::path& out, int n_traj = 60, int n_test = 40) {
  REQUIRE(run({"gen", "--seed", "4", "--n-traj", std::to_string(n_traj), "--n-test", std::to_string(n_test),
               "--out", out.string()}) == 0);
}

}  // namespace

TEST_CASE("gen output is complete and deterministic") {
  TempDir a("gen_a"), b("gen_b");
  gen(a.path);
  gen(b.path);
  for (const char* name : {"model.json", "train.jsonl", "test.jsonl", "oracle_filter.json", "meta.json"}) {
    REQUIRE(fs::exists(a.path / name));
    CHECK(slurp(a.path / name) == slurp(b.path / name));
  }
  CHECK(io::load_trajectories(a.path / "train.jsonl").size() == 60);
  const auto meta = persist::read_json(a.path / "meta.json");
  CHECK(meta.dump().find("lds") != std::string::npos);
}

TEST_CASE("configuration errors exit with code 2") {
  TempDir dir("errors");
  std::string err;
  CHECK(run({"gen", "--len", "1", "--out", dir.path.string()}, &err) == 2);
  CHECK(err.find("len") != std::string::npos);
  CHECK_FALSE(fs::exists(dir.path / "train.jsonl"));

  std::ofstream(dir.path / "bad.json") << R"({"seed": 1, "n_trajs": 5})";
  CHECK(run({"gen", "--config", (dir.path / "bad.json").string(), "--out", dir.path.string()}, &err) == 2);
  CHECK(err.find("n_trajs") != std::string::npos);

  CHECK(run({"gen", "--no-such-flag"}) == 2);
  CHECK(run({"train", "--algo", "oracle"}) == 2);
  CHECK(run({"gen", "--bandwidth", "1", "--median"}) == 2);
  CHECK(run({"nonsense"}) == 2);
}

TEST_CASE("config file values are overridden by flags") {
  cli::ExperimentConfig c;
  cli::apply_config_json(c, nlohmann::json::parse(R"({"k": 3, "lambda": 0.5, "grid": [10, 20]})"));
  CHECK(c.k == 3);
  CHECK(c.lambda.value() == 0.5);
  CHECK(c.grid == std::vector<Index>{10, 20});
  CHECK_THROWS_AS(cli::apply_config_json(c, nlohmann::json::parse(R"({"k": "x"})")), ConfigError);

  TempDir dir("config");
  std::ofstream(dir.path / "c.json") << R"({"seed": 4, "n_traj": 50, "n_test": 5})";
  REQUIRE(run({"gen", "--config", (dir.path / "c.json").string(), "--n-traj", "7", "--out", dir.path.string()}) == 0);
  CHECK(io::load_trajectories(dir.path / "train.jsonl").size() == 7);
  CHECK(io::load_trajectories(dir.path / "test.jsonl").size() == 5);

  cli::ExperimentConfig x, y;
  x.out = "a";
  y.out = "b";
  CHECK(cli::config_hash(x) == cli::config_hash(y));
  y.seed = 1;
  CHECK(cli::config_hash(x) != cli::config_hash(y));
}

TEST_CASE("train then eval reproduces saved predictions") {
  TempDir data("train_data"), out("train_out");
  gen(data.path);
  REQUIRE(run({"train", "--data", (data.path / "train.jsonl").string(), "--iters", "3", "--out",
               out.path.string()}) == 0);
  for (const char* name : {"filter.json", "train_report.csv", "train_report.csv.meta.json"})
    CHECK(fs::exists(out.path / name));
  CHECK(lines(slurp(out.path / "train_report.csv")).size() == 4);
  const auto side = persist::read_json(out.path / "train_report.csv.meta.json");
  CHECK(side.at("schema_version") == 1);
  CHECK(side.at("config_hash").get<std::string>().size() == 16);

  const Filter f = persist::filter_from_json(persist::read_json(out.path / "filter.json"));
  const Filter g = persist::filter_from_json(persist::read_json(out.path / "filter.json"));
  const auto test = io::load_trajectories(data.path / "test.jsonl");
  CHECK(rollout(f, test[0]) == rollout(g, test[0]));

  REQUIRE(run({"eval", "--model", (out.path / "filter.json").string(), "--data",
               (data.path / "test.jsonl").string(), "--out", out.path.string()}) == 0);
  const auto rows = lines(slurp(out.path / "eval.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == "method,horizon,mse,n_samples,log_ratio");
  CHECK(split(rows[1])[0] == "psim-dagger");

  std::string err;
  CHECK(run({"eval", "--model", (out.path / "filter.json").string(), "--data", (data.path / "test.jsonl").string(),
             "--horizon", "3", "--out", out.path.string()}, &err) == 2);
}

TEST_CASE("forward training rejects T beyond the trajectory length") {
  TempDir data("forward_data"), out("forward_out");
  gen(data.path, 20, 5);
  CHECK(run({"train", "--algo", "forward", "--T", "9", "--data", (data.path / "train.jsonl").string(), "--out",
             out.path.string()}) == 2);
  CHECK_FALSE(fs::exists(out.path / "filter.json"));
  CHECK(run({"train", "--algo", "forward", "--T", "8", "--data", (data.path / "train.jsonl").string(), "--out",
             out.path.string()}) == 0);
  CHECK(lines(slurp(out.path / "train_report.csv")).size() == 9);
}

TEST_CASE("exported oracle filter scores a zero log ratio") {
  TempDir data("oracle_data");
  gen(data.path);
  REQUIRE(run({"eval", "--model", (data.path / "oracle_filter.json").string(), "--data",
               (data.path / "test.jsonl").string(), "--horizon", "1", "--out", data.path.string()}) == 0);
  const auto rows = lines(slurp(data.path / "eval.csv"));
  REQUIRE(rows.size() == 2);
  CHECK(std::abs(std::stod(split(rows[1])[4])) <= 1e-9);
}

TEST_CASE("eval without metadata warns and omits the ratio") {
  TempDir data("nometa_data"), other("nometa_other");
  gen(data.path);
  fs::copy_file(data.path / "test.jsonl", other.path / "test.jsonl");
  std::string err;
  REQUIRE(run({"eval", "--model", (data.path / "oracle_filter.json").string(), "--data",
               (other.path / "test.jsonl").string(), "--out", other.path.string()}, &err) == 0);
  CHECK(err.find("warning") != std::string::npos);
  const auto rows = lines(slurp(other.path / "eval.csv"));
  CHECK(rows[0] == "method,horizon,mse,n_samples");
  CHECK(rows.back().rfind("# warning:", 0) == 0);

  CHECK(run({"eval", "--model", (data.path / "oracle_filter.json").string(), "--data",
             (other.path / "test.jsonl").string(), "--meta", (other.path / "missing.json").string(), "--out",
             other.path.string()}) == 2);
}

TEST_CASE("folds give one test trajectory per fold") {
  TempDir dir("folds");
  const auto trajs = test::benchmark_trajs(2, 10, 10, 3);
  io::save_trajectories(dir.path / "d.jsonl", trajs);
  REQUIRE(run({"folds", "--data", (dir.path / "d.jsonl").string(), "--folds", "10", "--iters", "2", "--out",
               dir.path.string()}) == 0);
  const auto rows = lines(slurp(dir.path / "folds.csv"));
  REQUIRE(rows.size() == 1 + 10 * 2);
  double sum = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto cells = split(rows[i]);
    CHECK(cells[1] == "9");
    CHECK(cells[2] == "1");
    if (cells[3] == "1") sum += std::stod(cells[4]);
  }
  const auto summary = lines(slurp(dir.path / "folds_summary.csv"));
  REQUIRE(summary.size() == 3);
  CHECK(std::stod(split(summary[1])[2]) == doctest::Approx(sum / 10.0).epsilon(1e-12));

  const std::string first = slurp(dir.path / "folds.csv");
  REQUIRE(run({"folds", "--data", (dir.path / "d.jsonl").string(), "--folds", "10", "--iters", "2", "--out",
               dir.path.string()}) == 0);
  CHECK(slurp(dir.path / "folds.csv") == first);
  CHECK(run({"folds", "--data", (dir.path / "d.jsonl").string(), "--folds", "11", "--out", dir.path.string()}) == 2);
}

TEST_CASE("fig2 writes one row per method and training size") {
  TempDir dir("fig2");
  REQUIRE(run({"fig2", "--seed", "2", "--grid", "20,40", "--n-test", "50", "--iters", "2", "--out",
               dir.path.string()}) == 0);
  const auto rows = lines(slurp(dir.path / "fig2.csv"));
  REQUIRE(rows.size() == 1 + 5 * 2);
  CHECK(split(rows[0]).size() == 9);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::isfinite(std::stod(split(rows[i])[5])));
  CHECK(run({"fig2", "--grid", "40,20"}) == 2);
}
