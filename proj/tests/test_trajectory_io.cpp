#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "helpers.hpp"
#include "psim/rng.hpp"
#include "psim/trajectory_io.hpp"

using namespace psim;
using psim::test::traj;

TEST_CASE("JSON-lines round trip is exact") {
  Rng rng(1);
  std::vector<Trajectory> trajs = {Trajectory(rng.normal_matrix(4, 2)), Trajectory(rng.normal_matrix(2, 2))};
  std::stringstream buf;
  io::write_jsonl(buf, trajs);
  const auto back = io::read_jsonl(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[0].observations() == trajs[0].observations());
  CHECK(back[1].observations() == trajs[1].observations());
}

TEST_CASE("CSV round trip is exact") {
  Rng rng(2);
  std::vector<Trajectory> trajs = {Trajectory(rng.normal_matrix(3, 3)), Trajectory(rng.normal_matrix(5, 3))};
  std::stringstream buf;
  io::write_csv(buf, trajs);
  const auto back = io::read_csv(buf);
  REQUIRE(back.size() == 2);
  CHECK(back[1].observations() == trajs[1].observations());
}

TEST_CASE("readers reject malformed input") {
  std::stringstream ragged(R"({"obs": [[1, 2], [3]]})");
  CHECK_THROWS_AS(io::read_jsonl(ragged), Error);
  std::stringstream mixed("{\"obs\": [[1, 2]]}\n{\"obs\": [[1, 2, 3]]}\n");
  CHECK_THROWS_AS(io::read_jsonl(mixed), DataError);
  std::stringstream gap("traj_id,t,x_0\n0,1,1.0\n0,3,2.0\n");
  CHECK_THROWS_AS(io::read_csv(gap), DataError);
  std::stringstream zero_based("traj_id,t,x_0\n0,0,1.0\n");
  CHECK_THROWS_AS(io::read_csv(zero_based), DataError);
  std::stringstream nan("traj_id,t,x_0\n0,1,nan\n");
  CHECK_THROWS_AS(io::read_csv(nan), Error);
}

TEST_CASE("load_trajectories names the path on failure") {
  const auto missing = std::filesystem::temp_directory_path() / "psim_missing_file.jsonl";
  try {
    io::load_trajectories(missing);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("psim_missing_file.jsonl") != std::string::npos);
  }
}
