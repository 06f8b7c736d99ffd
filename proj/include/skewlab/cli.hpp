#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace skewlab::cli {

inline constexpr int kScanGrid = 1001;

struct ReproductionRow {
  std::string fixture;
  std::string quantity;
  std::optional<double> alpha;  // located alpha for scan rows
  double expected = 0;
  double computed = 0;
  double tolerance = 0;
  bool pass = false;
  bool diagnostic = false;
  std::string anchor;
};

std::vector<ReproductionRow> reproduce_rows();
nlohmann::json to_json(const ReproductionRow& row);
std::string rows_to_csv(const std::vector<ReproductionRow>& rows);

/// Exit codes: 0 ok, 1 a gating check failed, 2 bad input or configuration.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skewlab::cli
