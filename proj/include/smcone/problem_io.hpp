#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "smcone/problem.hpp"

namespace smcone {

// Problem file layout:
//   {"n": int, "m": int,
//    "A": {"colptr": [int], "rowind": [int], "vals": [float]},
//    "b": [float], "c": [float],
//    "cones": {"f": int, "l": int, "q": [int], "s": [int], "ep": int, "ed": int}}
// Doubles are written in shortest round-trip form.

namespace detail {

using Json = nlohmann::json;

inline std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

inline const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(ErrorCode::ParseError, "missing field \"" + std::string(key) + "\" in " + where);
  }
  return obj.at(key);
}

inline Index read_index(const Json& obj, const char* key, const std::string& where,
                        bool optional = false) {
  if (optional && (!obj.is_object() || !obj.contains(key))) return 0;
  const Json& v = require(obj, key, where);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::ParseError, "field " + where + "." + key + " must be an integer");
  }
  return v.get<Index>();
}

inline std::vector<Index> read_index_list(const Json& obj, const char* key,
                                          const std::string& where, bool optional = false) {
  if (optional && (!obj.is_object() || !obj.contains(key))) return {};
  const Json& v = require(obj, key, where);
  if (!v.is_array()) {
    throw Error(ErrorCode::ParseError, "field " + where + "." + key + " must be an array");
  }
  std::vector<Index> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) {
      throw Error(ErrorCode::ParseError, "field " + where + "." + key + "[" + std::to_string(i) +
                                             "] must be an integer");
    }
    out.push_back(v[i].get<Index>());
  }
  return out;
}

inline Vector read_vector(const Json& obj, const char* key, const std::string& where) {
  const Json& v = require(obj, key, where);
  if (!v.is_array()) {
    throw Error(ErrorCode::ParseError, "field " + where + "." + key + " must be an array");
  }
  Vector out(static_cast<Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw Error(ErrorCode::ParseError, "field " + where + "." + key + "[" + std::to_string(i) +
                                             "] must be a number");
    }
    out[static_cast<Index>(i)] = v[i].get<double>();
  }
  return out;
}

inline Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace detail

/// Parses and validates a problem document.
inline ConicProblem load_problem(std::string_view text) {
  using detail::Json;
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(detail::line_of_offset(text, e.byte)) +
                                           ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");

  const Index n = detail::read_index(doc, "n", "document");
  const Index m = detail::read_index(doc, "m", "document");
  const detail::Json& a = detail::require(doc, "A", "document");
  std::vector<Index> colptr = detail::read_index_list(a, "colptr", "A");
  std::vector<Index> rowind = detail::read_index_list(a, "rowind", "A");
  Vector vals = detail::read_vector(a, "vals", "A");

  ConicProblem p;
  p.b = detail::read_vector(doc, "b", "document");
  p.c = detail::read_vector(doc, "c", "document");
  const detail::Json& k = detail::require(doc, "cones", "document");
  p.cones.f = detail::read_index(k, "f", "cones", true);
  p.cones.l = detail::read_index(k, "l", "cones", true);
  p.cones.q = detail::read_index_list(k, "q", "cones", true);
  p.cones.s = detail::read_index_list(k, "s", "cones", true);
  p.cones.ep = detail::read_index(k, "ep", "cones", true);
  p.cones.ed = detail::read_index(k, "ed", "cones", true);

  if (n < 0 || m < 0) throw Error(ErrorCode::ParseError, "n and m must be nonnegative");
  if (static_cast<Index>(colptr.size()) != n + 1) {
    throw Error(ErrorCode::ParseError, "A.colptr must have n + 1 entries");
  }
  if (rowind.size() != static_cast<std::size_t>(vals.size())) {
    throw Error(ErrorCode::ParseError, "A.rowind and A.vals differ in length");
  }
  if (colptr.front() != 0 || colptr.back() != static_cast<Index>(rowind.size())) {
    throw Error(ErrorCode::ParseError, "A.colptr must start at 0 and end at nnz");
  }
  for (Index j = 0; j < n; ++j) {
    if (colptr[j] > colptr[j + 1]) {
      throw Error(ErrorCode::ParseError, "A.colptr must be nondecreasing (column " +
                                             std::to_string(j) + ")");
    }
    for (Index k2 = colptr[j]; k2 < colptr[j + 1]; ++k2) {
      if (rowind[k2] < 0 || rowind[k2] >= m) {
        throw Error(ErrorCode::ParseError, "A.rowind[" + std::to_string(k2) + "] out of range");
      }
      if (k2 > colptr[j] && rowind[k2] <= rowind[k2 - 1]) {
        throw Error(ErrorCode::ParseError, "A.rowind must be strictly increasing within column " +
                                               std::to_string(j));
      }
    }
  }

  p.A.resize(m, n);
  p.A.reserve(static_cast<Index>(rowind.size()));
  for (Index j = 0; j < n; ++j) {
    p.A.startVec(j);
    for (Index k2 = colptr[j]; k2 < colptr[j + 1]; ++k2) {
      p.A.insertBack(rowind[k2], j) = vals[k2];
    }
  }
  p.A.finalize();
  p.A.makeCompressed();

  validate(p);
  return p;
}

inline std::string save_problem(const ConicProblem& p) {
  using detail::Json;
  SparseMatrix A = p.A;
  A.makeCompressed();
  Json colptr = Json::array();
  Json rowind = Json::array();
  Json vals = Json::array();
  for (Index j = 0; j <= A.cols(); ++j) colptr.push_back(A.outerIndexPtr()[j]);
  for (Index k = 0; k < A.nonZeros(); ++k) {
    rowind.push_back(A.innerIndexPtr()[k]);
    vals.push_back(A.valuePtr()[k]);
  }
  Json doc;
  doc["n"] = p.n();
  doc["m"] = p.m();
  doc["A"] = {{"colptr", colptr}, {"rowind", rowind}, {"vals", vals}};
  doc["b"] = detail::vector_json(p.b);
  doc["c"] = detail::vector_json(p.c);
  doc["cones"] = {{"f", p.cones.f},   {"l", p.cones.l},   {"q", p.cones.q},
                  {"s", p.cones.s},   {"ep", p.cones.ep}, {"ed", p.cones.ed}};
  return doc.dump();
}

inline ConicProblem read_problem_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_problem(buf.str());
}

inline void write_problem_file(const std::string& path, const ConicProblem& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << save_problem(p) << '\n';
}

}  // namespace smcone
