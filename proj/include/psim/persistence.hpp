#pragma once

#include <filesystem>

#include <json.hpp>

#include "psim/baselines.hpp"
#include "psim/filter.hpp"
#include "psim/lds.hpp"
#include "psim/regression.hpp"

namespace psim::persist {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json to_json(const LinearModel& model);
LinearModel linear_model_from_json(const Json& j);

// RFF maps are stored as (input_dim, feature_dim, bandwidth, seed) and
// regenerated on load; the stored digest must match the regenerated map.
Json to_json(const Hypothesis& h);
Hypothesis hypothesis_from_json(const Json& j);

Json to_json(const Filter& filter);
Filter filter_from_json(const Json& j);

Json to_json(const LdsModel& model);
LdsModel lds_from_json(const Json& j);

Json to_json(const ArModel& model);
ArModel ar_from_json(const Json& j);

Json read_json(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline, written atomically.
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace psim::persist
