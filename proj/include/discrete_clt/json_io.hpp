#pragma once

// JSON and CSV serialization for distributions, reports, and sweep rows.

#include <ostream>
#include <string>
#include <vector>

#include "discrete_clt/bounds.hpp"
#include "discrete_clt/int_dist.hpp"
#include "discrete_clt/psi_family.hpp"
#include "discrete_clt/stein_bdp.hpp"
#include "json.hpp"

namespace dclt {

// {"offset": int, "weights": [...], "tail_mass": x}; parsing re-canonicalizes
// (trims zero ends) but weights written by to_json round-trip bit-exactly.
nlohmann::json to_json(const IntDist& d);
IntDist int_dist_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PsiParams& p);
nlohmann::json to_json(const TargetSet& a);
nlohmann::json to_json(const SimResult& r);
nlohmann::json to_json(const BoundReport& r);

// Family law with its metadata block (moments, junction mass, tail bound).
nlohmann::json psi_report_json(const PsiParams& p);

// Factor-bound report for one target set.
nlohmann::json stein_check_json(const PsiParams& p, const TargetSet& a);

// A component set from {"components": [...]} or a bare array of
// distributions in the IntDist format.
ComponentSet component_set_from_json(const nlohmann::json& j);

// Shortest-round-trip decimal for a finite double; NaN or infinity is a bug.
std::string csv_number(double x);

// Comma-separated writer that enforces a fixed column count per row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  std::size_t width_;
};

// Pinned sweep schema and the row for one report; absent bounds become
// empty cells. n_cell/p_cell carry the grid point (or a component hash).
const std::vector<std::string>& sweep_columns();
std::vector<std::string> bound_report_row(const std::string& n_cell,
                                          const std::string& p_cell,
                                          const BoundReport& rep);

}  // namespace dclt
