#include "skewlab/matrix_json.hpp"

#include <fstream>

#include "skewlab/error.hpp"

namespace skewlab {

using nlohmann::json;

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) {
      row.push_back({{"re", m(i, j).real()}, {"im", m(i, j).imag()}});
    }
    rows.push_back(std::move(row));
  }
  return {{"dim", m.dim()}, {"entries", std::move(rows)}};
}

ComplexMatrix matrix_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries")) {
      throw Error(ErrorKind::ParseError, "matrix object needs \"dim\" and \"entries\"");
    }
    const auto& dim_field = j.at("dim");
    if (!dim_field.is_number_integer() || dim_field.get<long long>() < 1) {
      throw Error(ErrorKind::ParseError, "\"dim\" must be a positive integer");
    }
    const auto d = dim_field.get<std::size_t>();
    const auto& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != d) {
      throw Error(ErrorKind::ParseError, "\"entries\" must hold exactly dim rows");
    }
    std::vector<Complex> data;
    data.reserve(d * d);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != d) {
        throw Error(ErrorKind::ParseError, "non-rectangular \"entries\"");
      }
      for (const auto& z : row) {
        if (!z.is_object() || !z.contains("re") || !z.contains("im") || !z.at("re").is_number() ||
            !z.at("im").is_number()) {
          throw Error(ErrorKind::ParseError, "entry must be {\"re\": number, \"im\": number}");
        }
        data.emplace_back(z.at("re").get<double>(), z.at("im").get<double>());
      }
    }
    ComplexMatrix m(d, std::move(data));
    if (!m.all_finite()) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
  }
  return matrix_from_json(j);
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::ParseError, "cannot write " + path.string());
  out << matrix_to_json(m).dump(2) << '\n';
}

}  // namespace skewlab
