#include "psim/trajectory_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "psim/atomic_file.hpp"

namespace psim::io {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

double parse_double(const std::string& text, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) + ": cannot parse number '" + text + "'");
  }
}

long long parse_int(const std::string& text, std::size_t line_no) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw DataError("line " + std::to_string(line_no) + ": cannot parse integer '" + text + "'");
  return value;
}

}  // namespace

std::vector<Trajectory> read_jsonl(std::istream& in) {
  std::vector<Trajectory> out;
  std::string line;
  std::size_t line_no = 0;
  Index n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("obs") || !doc["obs"].is_array())
      throw DataError("line " + std::to_string(line_no) + ": expected {\"obs\": [[...], ...]}");
    std::vector<std::vector<double>> rows;
    try {
      rows = doc["obs"].get<std::vector<std::vector<double>>>();
    } catch (const nlohmann::json::exception&) {
      throw DataError("line " + std::to_string(line_no) + ": observations must be numeric arrays");
    }
    try {
      Trajectory traj = Trajectory::from_rows(rows);
      if (n >= 0 && traj.dim() != n)
        throw DataError("dimension " + std::to_string(traj.dim()) + " differs from " +
                        std::to_string(n));
      n = traj.dim();
      out.push_back(std::move(traj));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_jsonl(std::ostream& out, std::span<const Trajectory> trajs) {
  for (const auto& traj : trajs) {
    nlohmann::json rows = nlohmann::json::array();
    for (Index t = 0; t < traj.length(); ++t) {
      nlohmann::json row = nlohmann::json::array();
      for (Index j = 0; j < traj.dim(); ++j) row.push_back(traj.observations()(t, j));
      rows.push_back(std::move(row));
    }
    out << nlohmann::json{{"obs", std::move(rows)}}.dump() << '\n';
  }
}

std::vector<Trajectory> read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) return {};
  ++line_no;
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "traj_id" || header[1] != "t")
    throw DataError("CSV header must be traj_id,t,x_0,...");
  const std::size_t n = header.size() - 2;

  std::vector<Trajectory> out;
  std::vector<std::vector<double>> rows;
  long long current_id = 0;
  bool open = false;
  auto flush = [&] {
    if (open) out.push_back(Trajectory::from_rows(rows));
    rows.clear();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != n + 2)
      throw DataError("line " + std::to_string(line_no) + ": expected " + std::to_string(n + 2) +
                      " columns, got " + std::to_string(cells.size()));
    const long long id = parse_int(cells[0], line_no);
    const long long t = parse_int(cells[1], line_no);
    if (!open || id != current_id) {
      if (open && id < current_id)
        throw DataError("line " + std::to_string(line_no) + ": rows not sorted by traj_id");
      flush();
      current_id = id;
      open = true;
    }
    if (t != static_cast<long long>(rows.size()) + 1)
      throw DataError("line " + std::to_string(line_no) + ": time index " + std::to_string(t) +
                      " breaks the contiguous sequence starting at 1");
    std::vector<double> obs(n);
    for (std::size_t j = 0; j < n; ++j) obs[j] = parse_double(cells[j + 2], line_no);
    rows.push_back(std::move(obs));
  }
  flush();
  return out;
}

void write_csv(std::ostream& out, std::span<const Trajectory> trajs) {
  const Index n = trajs.empty() ? 1 : trajs.front().dim();
  out << "traj_id,t";
  for (Index j = 0; j < n; ++j) out << ",x_" << j;
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto& obs = trajs[i].observations();
    for (Index t = 0; t < obs.rows(); ++t) {
      out << i << ',' << t + 1;
      for (Index j = 0; j < obs.cols(); ++j) out << ',' << obs(t, j);
      out << '\n';
    }
  }
}

std::vector<Trajectory> load_trajectories(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return path.extension() == ".csv" ? read_csv(in) : read_jsonl(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void save_trajectories(const std::filesystem::path& path, std::span<const Trajectory> trajs) {
  std::ostringstream buffer;
  if (path.extension() == ".csv")
    write_csv(buffer, trajs);
  else
    write_jsonl(buffer, trajs);
  write_file_atomic(path, buffer.str());
}

}  // namespace psim::io
