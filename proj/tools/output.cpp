#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "rgkit/errors.hpp"

namespace rgkit::cli {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_cell(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_null()) return "";
  return v.dump();
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json clean(const nlohmann::json& v) {
  // json has no inf/nan; keep them readable as strings
  if (v.is_number_float() && !std::isfinite(v.get<double>())) return format_number(v.get<double>());
  return v;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

double cell_value(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  return std::numeric_limits<double>::quiet_NaN();
}

void write_plot(std::ostream& os, const Report& r, const Plot& p) {
  constexpr double W = 640, H = 400, left = 70, right = 20, top = 40, bottom = 50;
  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  auto transform_y = [&](double y) { return p.log_y ? std::log10(y) : y; };
  double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
  std::vector<std::vector<std::pair<double, double>>> series(p.y_columns.size());
  for (const auto& row : r.table.rows) {
    const double x = cell_value(row.at(p.x_column));
    if (!std::isfinite(x)) continue;
    for (std::size_t s = 0; s < p.y_columns.size(); ++s) {
      double y = cell_value(row.at(p.y_columns[s]));
      if (!std::isfinite(y) || (p.log_y && y <= 0.0)) continue;
      y = transform_y(y);
      series[s].emplace_back(x, y);
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  if (x_hi == x_lo) x_hi = x_lo + 1;
  if (y_hi == y_lo) y_hi = y_lo + 1;
  auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * (W - left - right); };
  auto sy = [&](double y) { return H - bottom - (y - y_lo) / (y_hi - y_lo) * (H - top - bottom); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(p.title) << "</text>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x_lo + (x_hi - x_lo) * k / 4.0, yv = y_lo + (y_hi - y_lo) * k / 4.0;
    os << "<text x=\"" << format_number(sx(xv)) << "\" y=\"" << H - bottom + 16 << "\" text-anchor=\"middle\">"
       << format_number(std::round(xv * 1000) / 1000) << "</text>\n";
    const std::string ylab = p.log_y ? "1e" + format_number(std::round(yv * 10) / 10) : format_number(std::round(yv * 1e4) / 1e4);
    os << "<text x=\"" << left - 6 << "\" y=\"" << format_number(sy(yv) + 4) << "\" text-anchor=\"end\">" << ylab << "</text>\n";
  }
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xml_escape(p.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << H / 2 << ")\">"
     << xml_escape(p.y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = colours[s % 5];
    os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[s].size(); ++k)
      os << (k ? " " : "") << format_number(sx(series[s][k].first)) << "," << format_number(sy(series[s][k].second));
    os << "\"/>\n";
    os << "<text x=\"" << W - right - 4 << "\" y=\"" << top + 14 * (s + 1) << "\" text-anchor=\"end\" fill=\"" << colour
       << "\">" << xml_escape(r.table.columns.at(p.y_columns[s])) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace

void write_csv(std::ostream& os, const Report& r) {
  for (std::size_t c = 0; c < r.table.columns.size(); ++c) os << (c ? "," : "") << csv_escape(r.table.columns[c]);
  os << "\n";
  for (const auto& row : r.table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_escape(format_cell(row[c]));
    os << "\n";
  }
  for (const auto& [key, value] : r.summary) os << "# " << key << " = " << format_cell(value) << "\n";
}

void write_json(std::ostream& os, const Report& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["ok"] = r.ok;
  j["columns"] = r.table.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.table.rows) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& v : row) out.push_back(nlohmann::ordered_json::parse(clean(v).dump()));
    j["rows"].push_back(out);
  }
  j["summary"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : r.summary) j["summary"][key] = nlohmann::ordered_json::parse(clean(value).dump());
  os << j.dump(2) << "\n";
}

void write_svg(std::ostream& os, const Report& r) {
  if (r.plots.empty()) throw InputError("'" + r.command + "' has no plot; use --format csv or json");
  for (const auto& p : r.plots) write_plot(os, r, p);
}

}  // namespace rgkit::cli
