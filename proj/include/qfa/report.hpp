#pragma once

// Experiment tables: deterministic row order (input order), renderable as an
// aligned text table, CSV, or a JSON document.  All three renderers share
// the same preformatted cell strings, so numeric values agree digit for
// digit across formats.

#include <string>
#include <utility>
#include <vector>

namespace qfa {

struct ExperimentReport {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::pair<std::string, std::string>> notes;  // summary key/value lines

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  void add_note(std::string key, std::string value) {
    notes.emplace_back(std::move(key), std::move(value));
  }
};

/// 12 significant digits; the shared formatting for every output format.
std::string format_value(double v);
std::string format_count(long v);

std::string render_table(const ExperimentReport& r);
std::string render_csv(const ExperimentReport& r);
std::string render_json(const ExperimentReport& r);
std::string render_report(const ExperimentReport& r, const std::string& format);

/// Shows the empty word as "(empty)" in tables; CSV/JSON keep the raw word.
std::string display_word(const std::string& w);

}  // namespace qfa
