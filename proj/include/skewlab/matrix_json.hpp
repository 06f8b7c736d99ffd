#pragma once

#include <filesystem>

#include <json.hpp>

#include "skewlab/matrix.hpp"

namespace skewlab {

// {"dim": d, "entries": [[{"re": r, "im": i}, ...], ...]} in row-major order.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

ComplexMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

}  // namespace skewlab
