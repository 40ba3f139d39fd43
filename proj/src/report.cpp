#include "qfa/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "qfa/errors.hpp"

namespace qfa {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string format_count(long v) { return std::to_string(v); }

std::string display_word(const std::string& w) { return w.empty() ? "(empty)" : w; }

std::string render_table(const ExperimentReport& r) {
  std::ostringstream out;
  if (!r.title.empty()) out << "# " << r.title << "\n";
  std::vector<size_t> width(r.columns.size(), 0);
  for (size_t c = 0; c < r.columns.size(); ++c) width[c] = r.columns[c].size();
  for (const auto& row : r.rows)
    for (size_t c = 0; c < row.size() && c < width.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < width.size(); ++c) {
      const std::string& cell = c < row.size() ? row[c] : "";
      out << cell << std::string(width[c] - cell.size(), ' ');
      out << (c + 1 < width.size() ? "  " : "");
    }
    out << "\n";
  };
  emit(r.columns);
  std::vector<std::string> rule;
  for (size_t c = 0; c < width.size(); ++c) rule.push_back(std::string(width[c], '-'));
  emit(rule);
  for (const auto& row : r.rows) emit(row);
  for (const auto& [k, v] : r.notes) out << k << ": " << v << "\n";
  return out.str();
}

std::string render_csv(const ExperimentReport& r) {
  std::ostringstream out;
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  auto emit = [&](const std::vector<std::string>& row) {
    for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << quote(row[c]);
    out << "\n";
  };
  emit(r.columns);
  for (const auto& row : r.rows) emit(row);
  for (const auto& [k, v] : r.notes) emit({"#", k, v});
  return out.str();
}

std::string render_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["title"] = r.title;
  j["columns"] = r.columns;
  j["rows"] = r.rows;
  nlohmann::json notes = nlohmann::json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  j["notes"] = std::move(notes);
  return j.dump(2) + "\n";
}

std::string render_report(const ExperimentReport& r, const std::string& format) {
  if (format == "table") return render_table(r);
  if (format == "csv") return render_csv(r);
  if (format == "json-like") return render_json(r);
  throw ValidationError("unknown output format '" + format + "' (use table, csv or json-like)");
}

}  // namespace qfa
