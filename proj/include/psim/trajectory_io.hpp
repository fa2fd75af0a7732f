#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "psim/core.hpp"

namespace psim::io {

// JSON-lines: one {"obs": [[x_0...], [x_1...], ...]} object per line.
std::vector<Trajectory> read_jsonl(std::istream& in);
void write_jsonl(std::ostream& out, std::span<const Trajectory> trajs);

// CSV: header traj_id,t,x_0..x_{n-1}; rows sorted by (traj_id, t) with t
// contiguous from 1 within each trajectory.
std::vector<Trajectory> read_csv(std::istream& in);
void write_csv(std::ostream& out, std::span<const Trajectory> trajs);

/// Dispatches on extension: .csv is CSV, anything else JSON-lines.
/// Errors carry the path.
std::vector<Trajectory> load_trajectories(const std::filesystem::path& path);
void save_trajectories(const std::filesystem::path& path, std::span<const Trajectory> trajs);

}  // namespace psim::io
