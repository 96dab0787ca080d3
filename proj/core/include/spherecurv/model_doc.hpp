#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spherecurv/sphere_bundle.hpp"

namespace spherecurv {

// Human-writable model documents: `key value` statements where a value is a
// bare word, a bracketed list (possibly nested), or a braced block of further
// statements. '#' starts a comment. Errors carry line and column.

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

struct DocNode {
  enum class Kind { Word, List, Block };
  Kind kind = Kind::Word;
  std::string word;
  std::vector<DocNode> items;                            // Kind::List
  std::vector<std::pair<std::string, DocNode>> fields;   // Kind::Block
  int line = 0, col = 0;

  const DocNode* find(const std::string& key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return &v;
    return nullptr;
  }
  const DocNode& require(const std::string& key) const {
    if (const DocNode* n = find(key)) return *n;
    throw ParseError("missing required field '" + key + "'", line, col);
  }
};

DocNode parse_document(const std::string& text);
DocNode parse_file(const std::string& path);

enum class NumericMode { Float, Exact };
enum class BundleKind { Tangent, Atiyah, Generic };

template <class S>
using AnySphereModel =
    std::variant<SphereBundleModel<ClassicTangentBundle<S>>,
                 SphereBundleModel<AtiyahBundle<S>>, SphereBundleModel<GenericVecBundle<S>>>;

struct BoundModel {
  NumericMode mode = NumericMode::Float;
  double tol = kDefaultTol;
  BundleKind bundle_kind = BundleKind::Tangent;
  std::string base_summary;
  AnySphereModel<double> fmodel;
  std::optional<AnySphereModel<Rational>> emodel;  // present when mode == exact
};

// Builds the runtime model(s) from a parsed document, validating shapes,
// symmetries and |a| = r. Exact mode binds a second rational instantiation.
BoundModel bind_model(const DocNode& doc);

// Scan grid specifications (see cmd_scan).
struct MilnorGridSpec {
  Rational m_lo, m_hi, m_step;
  Rational n_lo, n_hi, n_step;
  Rational p_lo, p_hi, p_step;
};

struct BoundsSweepSpec {
  DocNode base;  // base block, bound lazily per k
  double r = 1;
  double k_lo = 1, k_hi = 2, k_step = 0.05;
};

using ScanSpec = std::variant<MilnorGridSpec, BoundsSweepSpec>;

ScanSpec bind_scan_spec(const DocNode& doc);

// Bind just a base block (used by the bounds sweep and by verify --model).
template <class S>
PointModel<S> bind_base(const DocNode& base_block);

}  // namespace spherecurv
