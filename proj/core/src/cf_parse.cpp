#include <algorithm>
#include <cctype>
#include <regex>
#include <string>
#include <vector>

#include "nilflow/errors.hpp"
#include "nilflow/numtheory.hpp"

namespace nilflow {

namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

BigInt to_big(const std::string& s) {
  if (s.empty() || s == "+") return BigInt(1);
  if (s == "-") return BigInt(-1);
  std::string t = s[0] == '+' ? s.substr(1) : s;
  try {
    return BigInt(t);
  } catch (const std::exception&) {
    throw InputError("bad integer '" + s + "'");
  }
}

std::vector<BigInt> parse_list(const std::string& body) {
  std::vector<BigInt> out;
  if (body.empty()) return out;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    std::string item = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty()) throw InputError("cf: empty list entry");
    if (!std::all_of(item.begin(), item.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw InputError("cf: partial quotients must be positive integers, got '" + item + "'");
    out.push_back(BigInt(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

AlphaSpec parse_alpha(const std::string& text) {
  const std::string s = strip_spaces(text);
  std::smatch m;
  static const std::regex rational_re(R"(^rational:([+-]?\d+)/([+-]?\d+)$)");
  static const std::regex surd_re(R"(^surd:\(([+-]?\d+)([+-]\d*)\*?sqrt\((\d+)\)\)/([+-]?\d+)$)");
  static const std::regex cf_re(R"(^cf:\[([0-9,]*)\](?:[,;]?repeat:\[([0-9,]*)\])?$)");
  AlphaSpec spec;
  if (std::regex_match(s, m, rational_re)) {
    spec = AlphaSpec::from_rational(to_big(m[1]), to_big(m[2]));
  } else if (std::regex_match(s, m, surd_re)) {
    spec = AlphaSpec::from_surd(to_big(m[1]), to_big(m[2]), to_big(m[3]), to_big(m[4]));
  } else if (std::regex_match(s, m, cf_re)) {
    auto prefix = parse_list(m[1]);
    std::vector<BigInt> repeat;
    if (m[2].matched) {
      repeat = parse_list(m[2]);
      if (repeat.empty()) throw InputError("cf: repeat block must be nonempty");
    }
    spec = AlphaSpec::from_quotients(std::move(prefix), std::move(repeat));
  } else {
    throw InputError("unrecognised alpha '" + text +
                     "'; expected rational:p/q, surd:(a+b*sqrt(d))/c or cf:[...][,repeat:[...]]");
  }
  spec.text = text;
  return spec;
}

}  // namespace nilflow
