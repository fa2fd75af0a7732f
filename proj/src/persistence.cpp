#include "psim/persistence.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "psim/atomic_file.hpp"

namespace psim::persist {

namespace {

constexpr int kFormatVersion = 1;

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw DataError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("field '") + key + "': " + e.what());
  }
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void expect_format(const Json& j, const char* format) {
  const auto name = field<std::string>(j, "format");
  if (name != format) throw DataError("expected format '" + std::string(format) + "', got '" + name + "'");
  if (field<int>(j, "version") != kFormatVersion)
    throw DataError("unsupported " + name + " version");
}

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw DataError("matrix must be an array of rows");
  const auto rows = static_cast<Index>(j.size());
  const Index cols = rows > 0 ? static_cast<Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw DataError("matrix rows must have equal length");
    for (Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw DataError("vector must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

Json to_json(const LinearModel& model) {
  Json j;
  j["input_dim"] = model.input_dim();
  j["output_dim"] = model.output_dim();
  j["lambda"] = model.lambda();
  j["intercept"] = model.intercept();
  j["weights"] = matrix_to_json(model.weights());
  return j;
}

LinearModel linear_model_from_json(const Json& j) {
  if (!j.contains("weights")) throw DataError("missing field 'weights'");
  LinearModel model(matrix_from_json(j.at("weights")), field<double>(j, "lambda"),
                    field<bool>(j, "intercept"));
  if (model.input_dim() != field<Index>(j, "input_dim") ||
      model.output_dim() != field<Index>(j, "output_dim"))
    throw DataError("linear model weights do not match the declared dimensions");
  return model;
}

Json to_json(const Hypothesis& h) {
  Json j;
  j["kind"] = std::string(to_string(h.kind()));
  if (const auto& map = h.rff_map()) {
    Json rff;
    rff["input_dim"] = map->input_dim();
    rff["feature_dim"] = map->feature_dim();
    rff["bandwidth"] = map->bandwidth();
    rff["seed"] = map->seed();
    rff["digest"] = hex(map->digest());
    j["rff"] = std::move(rff);
  }
  j["model"] = to_json(h.linear_model());
  return j;
}

Hypothesis hypothesis_from_json(const Json& j) {
  const LearnerKind kind = parse_learner(field<std::string>(j, "kind"));
  if (!j.contains("model")) throw DataError("missing field 'model'");
  LinearModel model = linear_model_from_json(j.at("model"));
  if (kind == LearnerKind::linear) return Hypothesis(std::move(model));
  if (!j.contains("rff")) throw DataError("missing field 'rff'");
  const Json& r = j.at("rff");
  RffMap map(field<Index>(r, "input_dim"), field<Index>(r, "feature_dim"), field<double>(r, "bandwidth"),
             field<std::uint64_t>(r, "seed"));
  if (hex(map.digest()) != field<std::string>(r, "digest"))
    throw DataError("RFF digest mismatch: regenerated features differ from the stored model");
  return Hypothesis(std::move(map), std::move(model));
}

Json to_json(const Filter& filter) {
  const FeatureMap& phi = filter.phi();
  Json j;
  j["format"] = "psim-filter";
  j["version"] = kFormatVersion;
  j["algorithm"] = std::string(to_string(filter.algorithm()));
  j["stationary"] = filter.is_stationary();
  j["phi"] = std::string(to_string(phi.kind()));
  j["k"] = phi.k();
  j["n"] = phi.n();
  j["p"] = phi.dim();
  j["selected_iteration"] = filter.selected_iteration();
  j["initial_state"] = vector_to_json(filter.initial_state());
  Json hs = Json::array();
  for (const auto& h : filter.hypotheses()) hs.push_back(to_json(h));
  j["hypotheses"] = std::move(hs);
  return j;
}

Filter filter_from_json(const Json& j) {
  expect_format(j, "psim-filter");
  const FeatureMap phi(parse_phi(field<std::string>(j, "phi")), field<Index>(j, "k"), field<Index>(j, "n"));
  if (field<Index>(j, "p") != phi.dim()) throw DataError("filter header p does not match phi, k, n");
  Vector initial = vector_from_json(j.at("initial_state"));
  std::vector<Hypothesis> hs;
  for (const auto& h : field<Json>(j, "hypotheses")) hs.push_back(hypothesis_from_json(h));
  const Algorithm algo = parse_algorithm(field<std::string>(j, "algorithm"));
  if (field<bool>(j, "stationary")) {
    if (hs.size() != 1) throw DataError("stationary filter must hold exactly one hypothesis");
    return Filter::stationary(std::move(hs.front()), std::move(initial), phi, algo,
                              field<Index>(j, "selected_iteration"));
  }
  return Filter::non_stationary(std::move(hs), std::move(initial), phi);
}

Json to_json(const LdsModel& model) {
  Json j;
  j["format"] = "psim-lds";
  j["version"] = kFormatVersion;
  j["A"] = matrix_to_json(model.A());
  j["C"] = matrix_to_json(model.C());
  j["Q"] = matrix_to_json(model.Q());
  j["R"] = matrix_to_json(model.R());
  j["initial_mean"] = vector_to_json(model.initial_mean());
  j["initial_cov"] = matrix_to_json(model.initial_cov());
  return j;
}

LdsModel lds_from_json(const Json& j) {
  expect_format(j, "psim-lds");
  return LdsModel(matrix_from_json(field<Json>(j, "A")), matrix_from_json(field<Json>(j, "C")),
                  matrix_from_json(field<Json>(j, "Q")), matrix_from_json(field<Json>(j, "R")),
                  vector_from_json(field<Json>(j, "initial_mean")),
                  matrix_from_json(field<Json>(j, "initial_cov")));
}

Json to_json(const ArModel& model) {
  Json j;
  j["format"] = "psim-ar";
  j["version"] = kFormatVersion;
  j["history"] = model.history();
  j["phi"] = std::string(to_string(model.phi().kind()));
  j["k"] = model.phi().k();
  j["n"] = model.phi().n();
  j["model"] = to_json(model.model());
  return j;
}

ArModel ar_from_json(const Json& j) {
  expect_format(j, "psim-ar");
  const FeatureMap phi(parse_phi(field<std::string>(j, "phi")), field<Index>(j, "k"), field<Index>(j, "n"));
  return ArModel(field<Index>(j, "history"), phi, linear_model_from_json(field<Json>(j, "model")));
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  io::write_file_atomic(path, j.dump(2) + "\n");
}

}  // namespace psim::persist
