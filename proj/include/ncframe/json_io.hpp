#pragma once

// JSON interchange. Complex numbers are [re, im] pairs; algebra elements are
// lists of per-summand blocks, each a row-major flat list of pairs; frame and
// partition indices in reports are 1-based.

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ncframe/algebra.hpp"
#include "ncframe/decomposition.hpp"
#include "ncframe/error.hpp"
#include "ncframe/frames.hpp"
#include "ncframe/module.hpp"
#include "ncframe/optimize.hpp"

namespace ncframe::io {

using nlohmann::json;

inline json encode_spec(const AlgebraSpec& spec) { return spec.dims(); }

inline AlgebraSpec decode_spec(const json& j) {
  if (!j.is_array()) throw ParseError("algebra must be an array of block sizes");
  std::vector<int> dims;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw ParseError("algebra block sizes must be integers");
    dims.push_back(v.get<int>());
  }
  try {
    return AlgebraSpec(std::move(dims));
  } catch (const ShapeError& e) {
    throw ParseError(e.what());
  }
}

inline json encode_complex(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex decode_complex(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex number must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json encode_element(const AlgebraElement& a) {
  json out = json::array();
  for (const auto& blk : a.blocks()) {
    json flat = json::array();
    for (Eigen::Index r = 0; r < blk.rows(); ++r)
      for (Eigen::Index c = 0; c < blk.cols(); ++c) flat.push_back(encode_complex(blk(r, c)));
    out.push_back(std::move(flat));
  }
  return out;
}

inline AlgebraElement decode_element(const json& j, const AlgebraSpec& spec) {
  if (!j.is_array() || j.size() != spec.summands()) throw ParseError("element must list one block per summand");
  std::vector<CMatrix> blocks;
  for (std::size_t s = 0; s < spec.summands(); ++s) {
    const int m = spec.dim(s);
    const auto& flat = j[s];
    if (!flat.is_array() || flat.size() != static_cast<std::size_t>(m * m))
      throw ParseError("block " + std::to_string(s) + " must hold " + std::to_string(m * m) + " entries");
    CMatrix blk(m, m);
    for (int r = 0; r < m; ++r)
      for (int c = 0; c < m; ++c) blk(r, c) = decode_complex(flat[static_cast<std::size_t>(r * m + c)]);
    blocks.push_back(std::move(blk));
  }
  return {spec, std::move(blocks)};
}

inline json encode_matrix(const AMatrix& m) {
  json entries = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) entries.push_back(encode_element(m.entry(r, c)));
  return {{"algebra", encode_spec(m.spec())}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline std::size_t positive_size(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 1)
    throw ParseError(std::string("field '") + key + "' must be a positive integer");
  return j[key].get<std::size_t>();
}

inline AMatrix decode_matrix(const json& j) {
  if (!j.is_object() || !j.contains("algebra") || !j.contains("entries")) throw ParseError("matrix object lacks fields");
  const auto spec = decode_spec(j["algebra"]);
  const auto rows = positive_size(j, "rows");
  const auto cols = positive_size(j, "cols");
  const auto& entries = j["entries"];
  if (!entries.is_array() || entries.size() != rows * cols) throw ParseError("entries must hold rows*cols elements");
  AMatrix out(spec, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.set_entry(r, c, decode_element(entries[r * cols + c], spec));
  return out;
}

/// Frame as a matrix with "kind": "frame".
inline json encode_frame_matrix(const Frame& f) {
  json out = encode_matrix(f.matrix);
  out["kind"] = "frame";
  return out;
}

/// Column-wise frame file: algebra, n, k, columns[k][n], optional metadata.
inline json encode_frame_file(const Frame& f, const json& metadata = json::object()) {
  json columns = json::array();
  for (std::size_t c = 0; c < f.k(); ++c) {
    json col = json::array();
    for (std::size_t r = 0; r < f.n(); ++r) col.push_back(encode_element(f.matrix.entry(r, c)));
    columns.push_back(std::move(col));
  }
  json out = {{"kind", "frame"}, {"algebra", encode_spec(f.spec())}, {"n", f.n()}, {"k", f.k()}, {"columns", columns}};
  if (!metadata.empty()) out["metadata"] = metadata;
  return out;
}

/// Accepts both the column-wise frame file and the matrix encoding.
inline Frame decode_frame(const json& j) {
  if (!j.is_object()) throw ParseError("frame must be a JSON object");
  if (j.contains("entries")) return Frame(decode_matrix(j));
  if (!j.contains("algebra") || !j.contains("columns")) throw ParseError("frame file lacks 'algebra' or 'columns'");
  const auto spec = decode_spec(j["algebra"]);
  const auto n = positive_size(j, "n");
  const auto k = positive_size(j, "k");
  const auto& columns = j["columns"];
  if (!columns.is_array() || columns.size() != k) throw ParseError("'columns' must hold k columns");
  AMatrix out(spec, n, k);
  for (std::size_t c = 0; c < k; ++c) {
    if (!columns[c].is_array() || columns[c].size() != n) throw ParseError("each column must hold n elements");
    for (std::size_t r = 0; r < n; ++r) out.set_entry(r, c, decode_element(columns[c][r], spec));
  }
  return Frame(std::move(out));
}

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw ParseError("write failed for " + path);
}

inline Frame read_frame_file(const std::string& path) { return decode_frame(read_json_file(path)); }

inline json encode_tightness(const TightnessReport& r) {
  return {{"b", r.b}, {"residual", r.residual}, {"is_tight", r.is_tight}, {"per_summand_b", r.per_summand_b}};
}

inline json encode_spherical(const SphericalReport& r, SphericalMode mode) {
  return {{"mode", mode == SphericalMode::strict ? "strict" : "equal_norm"},
          {"spherical", r.spherical},
          {"radius", r.radius},
          {"max_deviation", r.max_deviation}};
}

/// 1-based blocks.
inline json encode_partition(const Partition& p) {
  json out = json::array();
  for (const auto& blk : p.blocks()) {
    json b = json::array();
    for (std::size_t i : blk) b.push_back(i + 1);
    out.push_back(std::move(b));
  }
  return out;
}

inline Partition decode_partition(const json& j, std::size_t k) {
  if (!j.is_array()) throw ParseError("partition must be a list of blocks");
  std::vector<IndexSet> blocks;
  for (const auto& blk : j) {
    IndexSet set;
    for (const auto& v : blk) {
      if (!v.is_number_integer() || v.get<long long>() < 1) throw ParseError("partition indices are 1-based integers");
      set.push_back(v.get<std::size_t>() - 1);
    }
    blocks.push_back(std::move(set));
  }
  try {
    return {k, std::move(blocks)};
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

inline json encode_factorization(const Factorization& fac) {
  return {{"b", fac.b}, {"reconstruction_residual", fac.reconstruction_residual}, {"U", encode_matrix(fac.u)}};
}

/// Config echo, every 50th accepted iterate plus the last, and the final frame.
inline json encode_trace(const OptimizerTrace& t) {
  json config = {{"step_size", t.config.step_size}, {"max_iters", t.config.max_iters}, {"tight_tol", t.config.tight_tol},
                 {"seed", t.config.seed},           {"radius", t.radius},                {"algebra", encode_spec(t.spec)},
                 {"k", t.k},                        {"n", t.n}};
  json iterates = json::array();
  for (std::size_t i = 0; i < t.iterates.size(); ++i) {
    if (i % 50 != 0 && i + 1 != t.iterates.size()) continue;
    const auto& e = t.iterates[i];
    iterates.push_back({{"iteration", e.iteration}, {"potential", e.potential}, {"excess", e.excess}, {"residual", e.residual}});
  }
  json out = {{"config", config},
              {"iterates", iterates},
              {"converged", t.converged},
              {"final_residual", t.final_residual},
              {"accepted_steps", t.iterates.empty() ? 0 : t.iterates.size() - 1},
              {"frame", encode_frame_matrix(t.frame)}};
  if (t.failed) out["failure"] = t.failure;
  return out;
}

}  // namespace ncframe::io
