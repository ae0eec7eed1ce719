#include "nilflow_io/output.hpp"

#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace nilflow::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t c = line.find(',', start);
    out.push_back(line.substr(start, c == std::string::npos ? std::string::npos : c - start));
    if (c == std::string::npos) break;
    start = c + 1;
  }
  return out;
}

// JSON value for a cell: integers and finite reals become numbers, the rest stays text.
nlohmann::ordered_json cell_value(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.empty()) return s;
  char* end = nullptr;
  errno = 0;
  if (s.find_first_of(".eEnN") == std::string::npos) {
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (*end == '\0' && errno == 0) return v;
    errno = 0;
    unsigned long long u = std::strtoull(s.c_str(), &end, 10);
    if (*end == '\0' && errno == 0 && s[0] != '-') return u;
  }
  double d = std::strtod(s.c_str(), &end);
  if (*end == '\0' && std::isfinite(d)) return d;
  return s;
}

}  // namespace

Table table_from_csv(const std::string& csv) {
  Table t;
  std::istringstream in(csv);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      t.columns = split(line);
      header = false;
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

std::string cell(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
std::string cell(long double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17Lg", v);
  return buf;
}
std::string cell(long long v) { return std::to_string(v); }
std::string cell(unsigned long long v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(unsigned v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "true" : "false"; }

std::string render_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& t) {
  nlohmann::ordered_json j;
  j["meta"] = t.meta;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    nlohmann::ordered_json row = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < t.columns.size() && i < r.size(); ++i) row[t.columns[i]] = cell_value(r[i]);
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string render(const Table& t, Format f) { return f == Format::Csv ? render_csv(t) : render_json(t); }

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
    if (!o) throw IoError("cannot write '" + tmp.string() + "'");
    o << content;
    o.flush();
    if (!o) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError("write failed for '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot rename into '" + path + "': " + ec.message());
  }
}

}  // namespace nilflow::io
