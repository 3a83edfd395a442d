#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace rgkit::cli {

// Cells keep their JSON type so csv and json agree on every value.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::size_t x_column = 0;
  std::vector<std::size_t> y_columns;
  bool log_y = false;
};

struct Report {
  std::string command;
  Table table;
  std::vector<std::pair<std::string, nlohmann::json>> summary;  // insertion order is output order
  std::vector<Plot> plots;
  bool ok = true;  // false when an invariant check inside the run failed

  void add(const std::string& key, nlohmann::json value) { summary.emplace_back(key, std::move(value)); }
};

// Shortest representation that reads back to the same double.
std::string format_number(double x);
std::string format_cell(const nlohmann::json& v);

void write_csv(std::ostream& os, const Report& r);
void write_json(std::ostream& os, const Report& r);
// One <svg> per plot; InputError when the report has none.
void write_svg(std::ostream& os, const Report& r);

}  // namespace rgkit::cli
