#pragma once

// File formats: the functional JSON document and the plain-text matrix
// dump used for states, measurements and preparations.
//
// Functional JSON:
//   {"d": int, "mA": int, "mB": int,
//    "p": [[number x mB] x mA],
//    "terms": [{"x": int, "y": int, "i": int, "k": int, "F": int, "c": number}, ...]}
// Unknown fields are rejected. N and K are derived from the largest i and k.
//
// Matrix dump:
//   bellcc-matrices 1
//   count <n>
//   matrix <rows> <cols> <label>
//   (re, im) (re, im) ...          one line per row, 17 significant digits
//   ...

#include <fstream>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bellcc/errors.hpp"
#include "bellcc/functional.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/ptm.hpp"
#include "bellcc/quantum.hpp"

namespace bellcc {

namespace detail {

inline void require_keys(const nlohmann::json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  if (!j.is_object()) throw InputError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw InputError("unknown field \"" + key + "\" in " + where);
  for (const auto& key : allowed)
    if (!j.contains(key)) throw InputError("missing field \"" + key + "\" in " + where);
}

inline int get_int(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw InputError("field \"" + std::string(key) + "\" in " + where + " must be an integer");
  return v.get<int>();
}

inline double get_number(const nlohmann::json& v, const std::string& what) {
  if (!v.is_number()) throw InputError(what + " must be a number");
  return v.get<double>();
}

}  // namespace detail

inline BellFunctional functional_from_json(const nlohmann::json& j) {
  detail::require_keys(j, {"d", "mA", "mB", "p", "terms"}, "functional");
  Scenario sc;
  sc.d = detail::get_int(j, "d", "functional");
  sc.mA = detail::get_int(j, "mA", "functional");
  sc.mB = detail::get_int(j, "mB", "functional");
  if (sc.d < 1 || sc.mA < 1 || sc.mB < 1 || sc.d > 64 || sc.mA > 4096 || sc.mB > 4096)
    throw InputError("functional sizes out of range");
  const auto& p = j.at("p");
  if (!p.is_array() || p.size() != static_cast<size_t>(sc.mA))
    throw InputError("\"p\" must be an array of mA rows");
  for (const auto& row : p) {
    if (!row.is_array() || row.size() != static_cast<size_t>(sc.mB))
      throw InputError("each row of \"p\" must have mB entries");
    for (const auto& v : row) sc.p.push_back(detail::get_number(v, "p entry"));
  }
  const auto& terms = j.at("terms");
  if (!terms.is_array()) throw InputError("\"terms\" must be an array");
  std::vector<Term> out;
  for (const auto& t : terms) {
    detail::require_keys(t, {"x", "y", "i", "k", "F", "c"}, "term");
    out.push_back({detail::get_int(t, "x", "term"), detail::get_int(t, "y", "term"),
                   detail::get_int(t, "i", "term"), detail::get_int(t, "k", "term"),
                   detail::get_int(t, "F", "term"), detail::get_number(t.at("c"), "term coefficient")});
  }
  return make_functional(std::move(sc), std::move(out));
}

inline nlohmann::ordered_json functional_to_json(const BellFunctional& f) {
  nlohmann::ordered_json j;
  j["d"] = f.d();
  j["mA"] = f.mA();
  j["mB"] = f.mB();
  j["p"] = nlohmann::ordered_json::array();
  for (int x = 0; x < f.mA(); ++x) {
    auto row = nlohmann::ordered_json::array();
    for (int y = 0; y < f.mB(); ++y) row.push_back(f.scenario.prob(x, y));
    j["p"].push_back(row);
  }
  j["terms"] = nlohmann::ordered_json::array();
  for (const Term& t : f.terms)
    j["terms"].push_back({{"x", t.x}, {"y", t.y}, {"i", t.i}, {"k", t.k}, {"F", t.F}, {"c", t.c}});
  return j;
}

inline BellFunctional load_functional(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
  return functional_from_json(j);
}

inline void save_functional(const std::string& path, const BellFunctional& f) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << functional_to_json(f).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Matrix dump

struct LabeledMatrix {
  std::string label;
  Matrix m;
};

inline void write_matrices(std::ostream& os, const std::vector<LabeledMatrix>& items) {
  os << "bellcc-matrices 1\n" << "count " << items.size() << "\n";
  os << std::setprecision(17);
  for (const auto& [label, m] : items) {
    os << "matrix " << m.rows() << " " << m.cols() << " " << label << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        os << (j ? " " : "") << "(" << m(i, j).real() << ", " << m(i, j).imag() << ")";
      os << "\n";
    }
  }
}

inline std::vector<LabeledMatrix> read_matrices(std::istream& is) {
  std::string line;
  const auto next_line = [&](const char* what) {
    if (!std::getline(is, line)) throw InputError(std::string("matrix dump truncated before ") + what);
  };
  next_line("header");
  if (line != "bellcc-matrices 1") throw InputError("not a matrix dump (bad header)");
  next_line("count");
  std::istringstream cs(line);
  std::string word;
  size_t count = 0;
  if (!(cs >> word >> count) || word != "count") throw InputError("matrix dump: bad count line");

  static const std::regex entry(R"(\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\))");
  std::vector<LabeledMatrix> out;
  for (size_t n = 0; n < count; ++n) {
    next_line("matrix header");
    std::istringstream hs(line);
    long rows = 0, cols = 0;
    if (!(hs >> word >> rows >> cols) || word != "matrix" || rows < 1 || cols < 1 || rows > 4096 || cols > 4096)
      throw InputError("matrix dump: bad matrix header \"" + line + "\"");
    std::string label;
    std::getline(hs >> std::ws, label);
    Matrix m(rows, cols);
    for (long i = 0; i < rows; ++i) {
      next_line("matrix row");
      long j = 0;
      for (auto it = std::sregex_iterator(line.begin(), line.end(), entry); it != std::sregex_iterator(); ++it, ++j) {
        if (j >= cols) throw InputError("matrix dump: too many entries in a row");
        try {
          m(i, j) = {std::stod((*it)[1].str()), std::stod((*it)[2].str())};
        } catch (const std::exception&) {
          throw InputError("matrix dump: bad number in \"" + line + "\"");
        }
      }
      if (j != cols) throw InputError("matrix dump: wrong number of entries in a row");
    }
    out.push_back({label, std::move(m)});
  }
  return out;
}

inline std::string preparation_label(int x0, int x) {
  return "rho x0=" + std::to_string(x0) + " x=" + std::to_string(x);
}

inline std::vector<LabeledMatrix> preparations_to_matrices(const PreparationSet& prep) {
  std::vector<LabeledMatrix> out;
  for (int x0 = 0; x0 < prep.d; ++x0)
    for (int x = 0; x < prep.mA; ++x) out.push_back({preparation_label(x0, x), prep(x0, x).matrix()});
  return out;
}

// Preparations for a game with outcome count d and mA settings; every
// (x0, x) must appear exactly once.
inline PreparationSet preparations_from_matrices(const std::vector<LabeledMatrix>& items, int d, int mA) {
  static const std::regex label_re(R"(rho x0=(\d+) x=(\d+))");
  std::vector<const Matrix*> slot(static_cast<size_t>(d) * mA, nullptr);
  for (const auto& item : items) {
    std::smatch m;
    if (!std::regex_match(item.label, m, label_re)) continue;
    const int x0 = std::stoi(m[1].str()), x = std::stoi(m[2].str());
    if (x0 >= d || x >= mA) throw InputError("preparation label out of range: " + item.label);
    auto& s = slot[static_cast<size_t>(x0) * mA + x];
    if (s) throw InputError("duplicate preparation: " + item.label);
    s = &item.m;
  }
  PreparationSet prep{d, mA, {}};
  for (int x0 = 0; x0 < d; ++x0)
    for (int x = 0; x < mA; ++x) {
      const Matrix* m = slot[static_cast<size_t>(x0) * mA + x];
      if (!m) throw InputError("missing preparation " + preparation_label(x0, x));
      if (m->rows() != d) throw InputError("preparation " + preparation_label(x0, x) + " must have dimension d");
      prep.states.emplace_back(*m);
    }
  return prep;
}

inline std::vector<LabeledMatrix> measurements_to_matrices(const MeasurementSet& ms, const std::string& party) {
  std::vector<LabeledMatrix> out;
  const std::string setting = party == "A" ? "x" : "y";
  const std::string outcome = party == "A" ? "a" : "b";
  for (size_t s = 0; s < ms.size(); ++s)
    for (int o = 0; o < ms[s].outcomes(); ++o)
      out.push_back({party + " " + setting + "=" + std::to_string(s) + " " + outcome + "=" + std::to_string(o),
                     ms[s][o]});
  return out;
}

}  // namespace bellcc
