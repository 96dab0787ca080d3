#include "spherecurv/model_doc.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace spherecurv {

// ---------------------------------------------------------------------------
// Rational literal parsing: "3", "-1/2", "0.25", "2.5e-3" (all exact).

Rational parse_rational(const std::string& text) {
  size_t slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + text);
    return Rational(num) / Rational(den);
  }
  std::string t = text;
  bool neg = false;
  if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
    neg = t[0] == '-';
    t = t.substr(1);
  }
  long exp10 = 0;
  size_t epos = t.find_first_of("eE");
  if (epos != std::string::npos) {
    exp10 = std::stol(t.substr(epos + 1));
    t = t.substr(0, epos);
  }
  size_t dpos = t.find('.');
  std::string digits = t;
  if (dpos != std::string::npos) {
    digits = t.substr(0, dpos) + t.substr(dpos + 1);
    exp10 -= static_cast<long>(t.size() - dpos - 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed number: " + text);
  Rational out{BigInt(digits)};
  BigInt pow10 = 1;
  for (long i = 0; i < std::labs(exp10); ++i) pow10 *= 10;
  if (exp10 >= 0)
    out *= Rational(pow10);
  else
    out /= Rational(pow10);
  return neg ? -out : out;
}

// ---------------------------------------------------------------------------
// Tokenizer / recursive-descent parser

namespace {

struct Token {
  std::string text;
  int line, col;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(text[i++]);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(c);
      ++i;
      continue;
    }
    if (c == '{' || c == '}' || c == '[' || c == ']') {
      out.push_back({std::string(1, c), line, col});
      advance(c);
      ++i;
      continue;
    }
    int sl = line, sc = col;
    std::string word;
    while (i < text.size()) {
      char d = text[i];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '{' || d == '}' || d == '[' ||
          d == ']' || d == '#')
        break;
      word.push_back(d);
      advance(d);
      ++i;
    }
    out.push_back({word, sl, sc});
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  DocNode parse_top() {
    DocNode doc;
    doc.kind = DocNode::Kind::Block;
    doc.line = 1;
    doc.col = 1;
    parse_fields(doc, /*until_brace=*/false);
    return doc;
  }

 private:
  const Token* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }
  Token take() {
    if (pos_ >= toks_.size()) {
      int l = toks_.empty() ? 1 : toks_.back().line;
      throw ParseError("unexpected end of document", l, 1);
    }
    return toks_[pos_++];
  }

  void parse_fields(DocNode& block, bool until_brace) {
    while (true) {
      const Token* t = peek();
      if (!t) {
        if (until_brace) throw ParseError("missing closing '}'", block.line, block.col);
        return;
      }
      if (t->text == "}") {
        if (!until_brace) throw ParseError("unmatched '}'", t->line, t->col);
        take();
        return;
      }
      if (t->text == "{" || t->text == "[" || t->text == "]")
        throw ParseError("expected a field name", t->line, t->col);
      Token key = take();
      DocNode value = parse_value();
      block.fields.emplace_back(key.text, std::move(value));
    }
  }

  DocNode parse_value() {
    Token t = take();
    DocNode node;
    node.line = t.line;
    node.col = t.col;
    if (t.text == "{") {
      node.kind = DocNode::Kind::Block;
      parse_fields(node, /*until_brace=*/true);
      return node;
    }
    if (t.text == "[") {
      node.kind = DocNode::Kind::List;
      while (true) {
        const Token* u = peek();
        if (!u) throw ParseError("missing closing ']'", t.line, t.col);
        if (u->text == "]") {
          take();
          return node;
        }
        if (u->text == "[") {
          node.items.push_back(parse_value());
        } else if (u->text == "{" || u->text == "}") {
          throw ParseError("unexpected '" + u->text + "' inside list", u->line, u->col);
        } else {
          Token w = take();
          DocNode item;
          item.kind = DocNode::Kind::Word;
          item.word = w.text;
          item.line = w.line;
          item.col = w.col;
          node.items.push_back(std::move(item));
        }
      }
    }
    if (t.text == "}" || t.text == "]")
      throw ParseError("unexpected '" + t.text + "'", t.line, t.col);
    node.kind = DocNode::Kind::Word;
    node.word = t.text;
    return node;
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

const DocNode& expect_kind(const DocNode& n, DocNode::Kind k, const std::string& what) {
  if (n.kind != k) throw ParseError("expected " + what, n.line, n.col);
  return n;
}

template <class S>
S node_scalar(const DocNode& n) {
  expect_kind(n, DocNode::Kind::Word, "a number");
  try {
    return parse_scalar<S>(n.word);
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad number '") + n.word + "': " + e.what(), n.line, n.col);
  }
}

int node_int(const DocNode& n) {
  expect_kind(n, DocNode::Kind::Word, "an integer");
  try {
    size_t used = 0;
    int v = std::stoi(n.word, &used);
    if (used != n.word.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + n.word + "'", n.line, n.col);
  }
}

template <class S>
std::vector<S> node_scalar_list(const DocNode& n) {
  expect_kind(n, DocNode::Kind::List, "a list of numbers");
  std::vector<S> out;
  out.reserve(n.items.size());
  for (const auto& it : n.items) out.push_back(node_scalar<S>(it));
  return out;
}

template <class S>
Vec<S> node_vec(const DocNode& n, int want_dim) {
  auto v = node_scalar_list<S>(n);
  if (static_cast<int>(v.size()) != want_dim)
    throw ParseError("expected " + std::to_string(want_dim) + " numbers, got " +
                         std::to_string(v.size()),
                     n.line, n.col);
  Vec<S> out(want_dim);
  for (int i = 0; i < want_dim; ++i) out[i] = v[static_cast<size_t>(i)];
  return out;
}

template <class S>
Skew<S> node_skew_matrix(const DocNode& n, int dim) {
  auto v = node_scalar_list<S>(n);
  if (static_cast<int>(v.size()) != dim * dim)
    throw ParseError("expected " + std::to_string(dim * dim) + " matrix entries", n.line, n.col);
  Skew<S> out(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out.at(i, j) = v[static_cast<size_t>(i) * dim + j];
  if (!out.is_skew(1e-12))
    throw ParseError("matrix is not skew-symmetric", n.line, n.col);
  return out;
}

}  // namespace

DocNode parse_document(const std::string& text) {
  Parser p(tokenize(text));
  return p.parse_top();
}

DocNode parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

// ---------------------------------------------------------------------------
// Base model binding

template <class S>
PointModel<S> bind_base(const DocNode& block) {
  expect_kind(block, DocNode::Kind::Block, "a base block");
  if (block.fields.size() != 1)
    throw ParseError("base block must contain exactly one variant", block.line, block.col);
  const auto& [name, body] = block.fields.front();

  if (name == "spaceform") {
    SpaceFormModel<S> m;
    m.n = node_int(body.require("dim"));
    m.c = node_scalar<S>(body.require("c"));
    return PointModel<S>{m};
  }
  if (name == "product") {
    ProductModel<S> m;
    for (const auto& [k, v] : body.fields) {
      if (k != "factor") throw ParseError("product block accepts only 'factor' fields", v.line, v.col);
      m.factors.push_back(bind_base<S>(v));
    }
    if (m.factors.empty()) throw ParseError("product needs at least one factor", body.line, body.col);
    return PointModel<S>{m};
  }
  if (name == "symmetric") {
    SymmetricSpaceModel<S> m;
    m.dim_p = node_int(body.require("dim_p"));
    m.dim_k = node_int(body.require("dim_k"));
    auto bind_table = [&](const DocNode& n, int rows, int cols, int veclen) {
      expect_kind(n, DocNode::Kind::List, "a bracket table");
      if (static_cast<int>(n.items.size()) != rows)
        throw ParseError("bracket table needs " + std::to_string(rows) + " rows", n.line, n.col);
      std::vector<std::vector<Vec<S>>> out;
      for (const auto& row : n.items) {
        expect_kind(row, DocNode::Kind::List, "a table row");
        if (static_cast<int>(row.items.size()) != cols)
          throw ParseError("table row needs " + std::to_string(cols) + " entries", row.line,
                           row.col);
        std::vector<Vec<S>> r;
        for (const auto& cell : row.items) r.push_back(node_vec<S>(cell, veclen));
        out.push_back(std::move(r));
      }
      return out;
    };
    m.pp = bind_table(body.require("pp"), m.dim_p, m.dim_p, m.dim_k);
    m.kp = bind_table(body.require("kp"), m.dim_k, m.dim_p, m.dim_p);
    m.kk = bind_table(body.require("kk"), m.dim_k, m.dim_k, m.dim_k);
    return PointModel<S>{m};
  }
  if (name == "cpn") {
    ComplexProjectiveModel<S> m;
    m.n_complex = node_int(body.require("n"));
    if (const DocNode* j = body.find("J"))
      m.J = node_skew_matrix<S>(*j, 2 * m.n_complex);
    else
      m.J = ComplexProjectiveModel<S>::canonical_J(m.n_complex);
    return PointModel<S>{m};
  }
  if (name == "surface2d") {
    Surface2DModel<S> m;
    m.C = node_scalar<S>(body.require("c"));
    if (const DocNode* g = body.find("grad")) m.grad_c = node_vec<S>(*g, 2);
    if (const DocNode* h = body.find("hess")) {
      auto v = node_scalar_list<S>(*h);
      if (v.size() != 3)
        throw ParseError("hess needs 3 entries (h11, h12, h22)", h->line, h->col);
      m.hess_c = {v[0], v[1], v[2]};
    }
    return PointModel<S>{m};
  }
  if (name == "unimodular3") {
    Unimodular3Model<S> m;
    m.m = node_scalar<S>(body.require("m"));
    m.n = node_scalar<S>(body.require("n"));
    m.p = node_scalar<S>(body.require("p"));
    return PointModel<S>{m};
  }
  if (name == "generic") {
    GenericModel<S> m;
    m.n = node_int(body.require("dim"));
    const DocNode& curv = body.require("curv");
    expect_kind(curv, DocNode::Kind::List, "a curvature table");
    if (static_cast<int>(curv.items.size()) != pair_count(m.n))
      throw ParseError("curv needs " + std::to_string(pair_count(m.n)) + " matrices", curv.line,
                       curv.col);
    for (const auto& cell : curv.items) m.R.push_back(node_skew_matrix<S>(cell, m.n));
    if (const DocNode* nab = body.find("nabla")) {
      expect_kind(*nab, DocNode::Kind::List, "a derivative table");
      if (static_cast<int>(nab->items.size()) != m.n)
        throw ParseError("nabla needs " + std::to_string(m.n) + " rows", nab->line, nab->col);
      std::vector<std::vector<Skew<S>>> table;
      for (const auto& row : nab->items) {
        expect_kind(row, DocNode::Kind::List, "a derivative row");
        if (static_cast<int>(row.items.size()) != pair_count(m.n))
          throw ParseError("nabla row needs " + std::to_string(pair_count(m.n)) + " matrices",
                           row.line, row.col);
        std::vector<Skew<S>> r;
        for (const auto& cell : row.items) r.push_back(node_skew_matrix<S>(cell, m.n));
        table.push_back(std::move(r));
      }
      m.nablaR = std::move(table);
    }
    return PointModel<S>{m};
  }
  throw ParseError("unknown base variant '" + name + "'", body.line, body.col);
}

template PointModel<double> bind_base<double>(const DocNode&);
template PointModel<Rational> bind_base<Rational>(const DocNode&);

namespace {

std::string summarize_base(const DocNode& block) {
  if (block.kind != DocNode::Kind::Block || block.fields.empty()) return "";
  const auto& [name, body] = block.fields.front();
  std::string out = name;
  std::string params;
  for (const auto& [k, v] : body.fields) {
    if (v.kind != DocNode::Kind::Word) continue;
    if (!params.empty()) params += ", ";
    params += k + "=" + v.word;
  }
  if (name == "product") {
    params = std::to_string(body.fields.size()) + " factors";
  }
  return params.empty() ? out : out + "(" + params + ")";
}

template <class S>
AnySphereModel<S> bind_typed(const DocNode& doc, BundleKind kind, double tol) {
  const DocNode& base_block = doc.require("base");
  PointModel<S> base = bind_base<S>(base_block);
  validate_model(base, tol);
  const int n = base.dim();
  S r = node_scalar<S>(doc.require("r"));

  const DocNode& a_node = doc.require("a");
  expect_kind(a_node, DocNode::Kind::Block, "an 'a' block");

  auto finish = [&](auto model) -> AnySphereModel<S> {
    model.validate(tol);
    return model;
  };

  if (kind == BundleKind::Atiyah) {
    AtiyahBundle<S> bundle{AtiyahSpec<S>{base, node_scalar<S>(doc.require("k"))}};
    if (!(bundle.spec.k > S(0)))
      throw ParseError("k must be positive", doc.require("k").line, doc.require("k").col);
    FiberVec<S> a = FiberVec<S>::zero(n);
    if (const DocNode* t = a_node.find("tangent")) a.t = node_vec<S>(*t, n);
    if (const DocNode* w = a_node.find("skew")) {
      auto coeffs = node_scalar_list<S>(*w);
      if (static_cast<int>(coeffs.size()) != pair_count(n))
        throw ParseError("skew needs " + std::to_string(pair_count(n)) + " coefficients",
                         w->line, w->col);
      if constexpr (is_exact_v<S>) {
        for (const S& c : coeffs)
          if (c != S(0))
            throw ParseError(
                "exact mode cannot represent the normalized skew frame (1/sqrt(2k) is "
                "irrational); use mode float or a tangent-only fiber vector",
                w->line, w->col);
      } else {
        double scale = 1.0 / std::sqrt(2.0 * to_double(bundle.spec.k));
        int idx = 0;
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j, ++idx) {
            S c = coeffs[static_cast<size_t>(idx)] * scale;
            a.w.at(i, j) += c;
            a.w.at(j, i) -= c;
          }
      }
    }
    return finish(SphereBundleModel<AtiyahBundle<S>>{bundle, r, a});
  }

  if (kind == BundleKind::Tangent) {
    ClassicTangentBundle<S> bundle{base};
    Vec<S> a = node_vec<S>(a_node.require("flat"), n);
    return finish(SphereBundleModel<ClassicTangentBundle<S>>{bundle, r, a});
  }

  // generic bundle
  const DocNode& bspec = doc.require("bundle");
  GenericVecBundle<S> bundle;
  bundle.base = base;
  const DocNode& body = bspec;
  bundle.m = node_int(body.require("m"));
  if (bundle.m < 2) throw ParseError("bundle rank must be >= 2", body.line, body.col);
  const DocNode& curv = body.require("curv");
  expect_kind(curv, DocNode::Kind::List, "a curvature table");
  if (static_cast<int>(curv.items.size()) != pair_count(n))
    throw ParseError("bundle curv needs " + std::to_string(pair_count(n)) + " matrices",
                     curv.line, curv.col);
  auto read_matrix = [&](const DocNode& cell) {
    auto v = node_scalar_list<S>(cell);
    if (static_cast<int>(v.size()) != bundle.m * bundle.m)
      throw ParseError("bundle matrix needs " + std::to_string(bundle.m * bundle.m) + " entries",
                       cell.line, cell.col);
    for (int i = 0; i < bundle.m; ++i)
      for (int j = 0; j <= i; ++j)
        if (!scalar_near<S>(v[static_cast<size_t>(i) * bundle.m + j] +
                                v[static_cast<size_t>(j) * bundle.m + i],
                            S(0), 1e-12))
          throw ParseError("bundle curvature matrix is not skew", cell.line, cell.col);
    return v;
  };
  for (const auto& cell : curv.items) bundle.curv_table.push_back(read_matrix(cell));
  if (const DocNode* nab = body.find("nabla")) {
    expect_kind(*nab, DocNode::Kind::List, "a derivative table");
    if (static_cast<int>(nab->items.size()) != n)
      throw ParseError("bundle nabla needs " + std::to_string(n) + " rows", nab->line, nab->col);
    for (const auto& row : nab->items) {
      expect_kind(row, DocNode::Kind::List, "a derivative row");
      if (static_cast<int>(row.items.size()) != pair_count(n))
        throw ParseError("bundle nabla row needs " + std::to_string(pair_count(n)) + " matrices",
                         row.line, row.col);
      std::vector<std::vector<S>> r;
      for (const auto& cell : row.items) r.push_back(read_matrix(cell));
      bundle.nabla_table.push_back(std::move(r));
    }
  }
  Vec<S> a = node_vec<S>(a_node.require("flat"), bundle.m);
  return finish(SphereBundleModel<GenericVecBundle<S>>{bundle, r, a});
}

}  // namespace

BoundModel bind_model(const DocNode& doc) {
  BoundModel out;
  if (const DocNode* m = doc.find("mode")) {
    expect_kind(*m, DocNode::Kind::Word, "'float' or 'exact'");
    if (m->word == "float")
      out.mode = NumericMode::Float;
    else if (m->word == "exact")
      out.mode = NumericMode::Exact;
    else
      throw ParseError("mode must be 'float' or 'exact'", m->line, m->col);
  }
  if (const DocNode* t = doc.find("tol")) out.tol = to_double(node_scalar<double>(*t));

  const DocNode& b = doc.require("bundle");
  if (b.kind == DocNode::Kind::Word) {
    if (b.word == "atiyah")
      out.bundle_kind = BundleKind::Atiyah;
    else if (b.word == "tangent")
      out.bundle_kind = BundleKind::Tangent;
    else
      throw ParseError("bundle must be 'atiyah', 'tangent' or a 'generic' block", b.line, b.col);
  } else if (b.kind == DocNode::Kind::Block) {
    out.bundle_kind = BundleKind::Generic;
  } else {
    throw ParseError("bundle must be 'atiyah', 'tangent' or a 'generic' block", b.line, b.col);
  }

  out.base_summary = summarize_base(doc.require("base"));
  out.fmodel = bind_typed<double>(doc, out.bundle_kind, out.tol);
  if (out.mode == NumericMode::Exact) out.emodel = bind_typed<Rational>(doc, out.bundle_kind, out.tol);
  return out;
}

ScanSpec bind_scan_spec(const DocNode& doc) {
  const DocNode& scan = doc.require("scan");
  expect_kind(scan, DocNode::Kind::Block, "a scan block");
  if (scan.fields.size() != 1)
    throw ParseError("scan block must contain exactly one kind", scan.line, scan.col);
  const auto& [kind, body] = scan.fields.front();

  auto read_range = [&](const DocNode& n, const char* what) {
    // "<lo> .. <hi> step <s>"
    expect_kind(n, DocNode::Kind::List, std::string("a range [lo .. hi step s] for ") + what);
    if (n.items.size() != 5 || n.items[1].word != ".." || n.items[3].word != "step")
      throw ParseError(std::string("range for ") + what + " must be [lo .. hi step s]", n.line,
                       n.col);
    return std::array<std::string, 3>{n.items[0].word, n.items[2].word, n.items[4].word};
  };

  if (kind == "milnor") {
    MilnorGridSpec g;
    auto rm = read_range(body.require("m"), "m");
    auto rn = read_range(body.require("n"), "n");
    auto rp = read_range(body.require("p"), "p");
    g.m_lo = parse_rational(rm[0]);
    g.m_hi = parse_rational(rm[1]);
    g.m_step = parse_rational(rm[2]);
    g.n_lo = parse_rational(rn[0]);
    g.n_hi = parse_rational(rn[1]);
    g.n_step = parse_rational(rn[2]);
    g.p_lo = parse_rational(rp[0]);
    g.p_hi = parse_rational(rp[1]);
    g.p_step = parse_rational(rp[2]);
    return g;
  }
  if (kind == "bounds") {
    BoundsSweepSpec s;
    s.base = body.require("base");
    s.r = to_double(node_scalar<double>(body.require("r")));
    auto rk = read_range(body.require("k"), "k");
    s.k_lo = std::stod(rk[0]);
    s.k_hi = std::stod(rk[1]);
    s.k_step = std::stod(rk[2]);
    return s;
  }
  throw ParseError("unknown scan kind '" + kind + "' (use 'milnor' or 'bounds')", body.line,
                   body.col);
}

}  // namespace spherecurv
