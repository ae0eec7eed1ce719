#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "nilflow_io/config.hpp"

namespace nilflow::io {

// Every experiment produces one table. Cells are kept as the exact text that
// goes into the CSV, so the JSON rendering carries the same digits.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

// Parses CSV text with a header line (no quoting; the library never emits commas in cells).
Table table_from_csv(const std::string& csv);

std::string cell(double v);
std::string cell(long double v);
std::string cell(long long v);
std::string cell(unsigned long long v);
std::string cell(int v);
std::string cell(unsigned v);
std::string cell(bool v);

std::string render_csv(const Table& t);
// {"meta": ..., "columns": [...], "rows": [{col: value}, ...]}; numeric cells become numbers.
std::string render_json(const Table& t);
std::string render(const Table& t, Format f);

// Writes to path.tmp.<pid> in the same directory, then renames. Throws IoError.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace nilflow::io
