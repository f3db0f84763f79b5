#pragma once

// State-file parsing and JSON serialization of a MeasureReport.
//
// State file: four lines, each with four whitespace-separated complex entries
// written as `a`, `a+bi`, `a-bi` or `bi`, in the basis
// |1,1>, |1,0>, |0,1>, |0,0> (|1> is sigma_z = +1). Blank lines and lines
// starting with '#' are ignored.

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qcorr/error.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/measures.hpp"

namespace qcorr {

namespace detail {

inline double parse_real(std::string_view text, std::string_view token) {
  if (text.empty() || text == "+") return 1.0;
  if (text == "-") return -1.0;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::ConfigError, "malformed complex entry '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace detail

inline cplx parse_complex(std::string_view token) {
  if (token.empty()) throw Error(ErrorKind::ConfigError, "empty complex entry");
  if (token.back() != 'i' && token.back() != 'j') return {detail::parse_real(token, token), 0.0};

  const std::string_view body = token.substr(0, token.size() - 1);
  // The imaginary part starts at the last sign that is not a leading sign or
  // an exponent sign.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {0.0, detail::parse_real(body, token)};
  return {detail::parse_real(body.substr(0, split), token), detail::parse_real(body.substr(split), token)};
}

inline ComplexMatrix parse_state(std::istream& in) {
  std::vector<cplx> entries;
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string token;
    int cols = 0;
    while (fields >> token) {
      entries.push_back(parse_complex(token));
      ++cols;
    }
    if (cols != 4) {
      throw Error(ErrorKind::ConfigError, "state row " + std::to_string(rows + 1) + " has " + std::to_string(cols) +
                                              " entries, expected 4");
    }
    ++rows;
  }
  if (rows != 4) throw Error(ErrorKind::ConfigError, "state file has " + std::to_string(rows) + " rows, expected 4");
  return ComplexMatrix(4, std::move(entries));
}

inline ComplexMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open state file '" + path + "'");
  return parse_state(in);
}

inline nlohmann::json to_json(const MeasureReport& r) {
  using nlohmann::json;
  json bloch = {{"x", r.bloch.x}, {"y", r.bloch.y}, {"T", r.bloch.t}};
  json intermediates = {
      {"bloch", bloch},
      {"u", r.bell.u},
      {"lambdas", r.conc.lambdas},
      {"k_max", r.gqd.k_max},
      {"marginal_spectrum_a", r.mid.marginal_spectrum_a},
      {"marginal_spectrum_b", r.mid.marginal_spectrum_b},
      {"total_mi", r.mid.total_mi},
      {"classical_mi", r.mid.classical_mi},
      {"mid_raw", r.mid.raw_mid},
  };
  return json{
      {"concurrence", r.conc.concurrence},
      {"bell_m", r.bell.m},
      {"bell_violation", r.bell.violation},
      {"mid", r.mid.mid},
      {"gqd", r.gqd.gqd},
      {"degenerate_marginal_a", r.mid.degenerate_a},
      {"degenerate_marginal_b", r.mid.degenerate_b},
      {"intermediates", intermediates},
  };
}

}  // namespace qcorr
