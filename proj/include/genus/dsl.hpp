#pragma once

// Text syntax for prime sets, families, automorphism families, modules,
// Heisenberg elements and subgroups, and fracture-square requests.
//
//   primeset := "{" [int {"," int}] "}" | "all" ["\" primeset]
//   family   := "singletons" "(" primeset "," primeset ")"
//             | "blocks" "(" primeset "," primeset ";" primeset {"," primeset} ")"
//   aut      := "aut" "(" family [";" "tail" "=" tail] [";" exc {"," exc}] ")"
//   exc      := int "->" rational
//   tail     := "id" | rational | "p" "^" int
//   module   := "module" "(" "T" "=" primeset [";" "gens" "=" int] [";" "rel" "=" intmatrix] ")"
//   heis     := "heis" "(" rational "," rational "," rational [";" "T" "=" primeset] ")"
//   subgroup := "subgroup" "(" [heis {"," heis}] [";" "T" "=" primeset] ")"
//   square   := "square" "(" module "," family [";" ratmatrix {"," ratmatrix}] ")"
//   document := {expr}, '#' starting a comment to end of line.

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "genus/abmod.hpp"
#include "genus/error.hpp"
#include "genus/heis.hpp"
#include "genus/primeset.hpp"
#include "genus/rank1.hpp"

namespace genus::dsl {

struct Span {
  std::size_t begin = 0, end = 0;  // byte offsets, end exclusive
  std::size_t line = 1, column = 1;
};

struct Diagnostic {
  std::string message;
  Span span;
  std::vector<std::string> expected;
};

class DslError : public Error {
 public:
  explicit DslError(Diagnostic d) : Error(ErrorKind::Input, format(d)), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const noexcept { return diag_; }

 private:
  static std::string format(const Diagnostic& d) {
    std::string out = "line " + std::to_string(d.span.line) + ", column " + std::to_string(d.span.column) + ": " + d.message;
    if (!d.expected.empty()) {
      out += " (expected ";
      for (std::size_t i = 0; i < d.expected.size(); ++i) out += (i ? " or " : "") + d.expected[i];
      out += ")";
    }
    return out;
  }
  Diagnostic diag_;
};

// --- lexer -------------------------------------------------------------------------

enum class Tok { Int, Ident, LBrace, RBrace, LParen, RParen, LBracket, RBracket, Comma, Semi, Eq, Arrow, Slash, Backslash, Caret, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

inline std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

inline std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') ++line, col = 1;
      else ++col;
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Span sp{i, i, line, col};
    std::size_t len = 0;
    Tok kind;
    if (std::isdigit(static_cast<unsigned char>(ch)) ||
        (ch == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      len = 1;
      while (i + len < src.size() && std::isdigit(static_cast<unsigned char>(src[i + len]))) ++len;
      kind = Tok::Int;
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      len = 1;
      while (i + len < src.size() && (std::isalnum(static_cast<unsigned char>(src[i + len])) || src[i + len] == '_')) ++len;
      kind = Tok::Ident;
    } else if (ch == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      len = 2;
      kind = Tok::Arrow;
    } else {
      len = 1;
      switch (ch) {
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '[': kind = Tok::LBracket; break;
        case ']': kind = Tok::RBracket; break;
        case ',': kind = Tok::Comma; break;
        case ';': kind = Tok::Semi; break;
        case '=': kind = Tok::Eq; break;
        case '/': kind = Tok::Slash; break;
        case '\\': kind = Tok::Backslash; break;
        case '^': kind = Tok::Caret; break;
        default: {
          sp.end = i + 1;
          throw DslError({"unexpected character '" + std::string(1, ch) + "'", sp, {}});
        }
      }
    }
    sp.end = i + len;
    out.push_back({kind, std::string(src.substr(i, len)), sp});
    advance(len);
  }
  out.push_back({Tok::End, "", Span{src.size(), src.size(), line, col}});
  return out;
}

// --- syntax tree -------------------------------------------------------------------

enum class NodeKind { Document, PrimeSet, Family, AutFamily, Tail, Exception, Module, Heis, Subgroup, Square, Matrix, Row, Integer, Rational };

inline std::string kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Document: return "document";
    case NodeKind::PrimeSet: return "primeset";
    case NodeKind::Family: return "family";
    case NodeKind::AutFamily: return "autfamily";
    case NodeKind::Tail: return "tail";
    case NodeKind::Exception: return "exception";
    case NodeKind::Module: return "module";
    case NodeKind::Heis: return "heis";
    case NodeKind::Subgroup: return "subgroup";
    case NodeKind::Square: return "square";
    case NodeKind::Matrix: return "matrix";
    case NodeKind::Row: return "row";
    case NodeKind::Integer: return "integer";
    case NodeKind::Rational: return "rational";
  }
  return "?";
}

/// `text` carries the variant for inner nodes (e.g. "singletons", "gens") and
/// the literal for leaves.
struct Node {
  NodeKind kind;
  Span span;
  std::string text;
  std::vector<Node> children;

  const Node* child(NodeKind k, std::string_view tag = {}) const {
    for (const auto& c : children)
      if (c.kind == k && (tag.empty() || c.text == tag)) return &c;
    return nullptr;
  }
};

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  Node document() {
    Node doc{NodeKind::Document, peek().span, "", {}};
    while (peek().kind != Tok::End) doc.children.push_back(expr());
    doc.span.end = peek().span.end;
    return doc;
  }

  Node single() {
    Node n = expr();
    if (peek().kind != Tok::End) fail("trailing input", {"end of input"});
    return n;
  }

  Node expr() {
    const Token& t = peek();
    if (t.kind == Tok::LBrace || is_word("all")) return primeset();
    if (is_word("singletons") || is_word("blocks")) return family();
    if (is_word("aut")) return aut();
    if (is_word("module")) return module();
    if (is_word("heis")) return heis();
    if (is_word("subgroup")) return subgroup();
    if (is_word("square")) return square();
    fail("expected an expression", {"'{'", "'all'", "'singletons'", "'blocks'", "'aut'", "'module'", "'heis'", "'subgroup'", "'square'"});
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }

  [[noreturn]] void fail(const std::string& what, std::vector<std::string> expected) const {
    throw DslError({what + ", got " + describe(peek()), peek().span, std::move(expected)});
  }

  Token take(Tok k, std::string expected) {
    if (peek().kind != k) fail("unexpected token", {std::move(expected)});
    return toks_[pos_++];
  }
  Token word(std::string_view w) {
    if (!is_word(w)) fail("unexpected token", {"'" + std::string(w) + "'"});
    return toks_[pos_++];
  }

  Node open(NodeKind k, std::string text = {}) { return Node{k, peek().span, std::move(text), {}}; }
  void close(Node& n) { n.span.end = toks_[pos_ - 1].span.end; }

  Node integer() {
    Token t = take(Tok::Int, "integer");
    return Node{NodeKind::Integer, t.span, t.text, {}};
  }

  Node rational() {
    Node n = open(NodeKind::Rational);
    n.text = take(Tok::Int, "integer").text;
    if (peek().kind == Tok::Slash) {
      ++pos_;
      Token d = take(Tok::Int, "positive integer");
      n.text += "/" + d.text;
    }
    close(n);
    return n;
  }

  Node primeset() {
    Node n = open(NodeKind::PrimeSet);
    if (peek().kind == Tok::LBrace) {
      n.text = "finite";
      ++pos_;
      if (peek().kind != Tok::RBrace) {
        n.children.push_back(integer());
        while (peek().kind == Tok::Comma) {
          ++pos_;
          n.children.push_back(integer());
        }
      }
      if (peek().kind != Tok::RBrace) fail("unexpected token", {"','", "'}'"});
      ++pos_;
    } else if (is_word("all")) {
      n.text = "cofinite";
      ++pos_;
      if (peek().kind == Tok::Backslash) {
        ++pos_;
        n.children.push_back(primeset());
      }
    } else {
      fail("unexpected token", {"'{'", "'all'"});
    }
    close(n);
    return n;
  }

  Node family() {
    Node n = open(NodeKind::Family);
    bool singletons = is_word("singletons");
    if (!singletons && !is_word("blocks")) fail("unexpected token", {"'singletons'", "'blocks'"});
    n.text = toks_[pos_++].text;
    take(Tok::LParen, "'('");
    n.children.push_back(primeset());
    take(Tok::Comma, "','");
    n.children.push_back(primeset());
    if (!singletons) {
      take(Tok::Semi, "';'");
      n.children.push_back(primeset());
      while (peek().kind == Tok::Comma) {
        ++pos_;
        n.children.push_back(primeset());
      }
      if (peek().kind != Tok::RParen) fail("unexpected token", {"','", "')'"});
    }
    take(Tok::RParen, "')'");
    close(n);
    return n;
  }

  Node tail() {
    Node n = open(NodeKind::Tail);
    if (is_word("id")) {
      n.text = "id";
      ++pos_;
    } else if (is_word("p")) {
      n.text = "p^";
      ++pos_;
      take(Tok::Caret, "'^'");
      n.children.push_back(integer());
    } else if (peek().kind == Tok::Int) {
      n.text = "const";
      n.children.push_back(rational());
    } else {
      fail("unexpected token", {"'id'", "'p'", "rational"});
    }
    close(n);
    return n;
  }

  Node exception() {
    Node n = open(NodeKind::Exception);
    n.children.push_back(integer());
    take(Tok::Arrow, "'->'");
    n.children.push_back(rational());
    close(n);
    return n;
  }

  Node aut() {
    Node n = open(NodeKind::AutFamily);
    word("aut");
    take(Tok::LParen, "'('");
    n.children.push_back(family());
    bool seen_exc = false;
    while (peek().kind == Tok::Semi && !seen_exc) {
      ++pos_;
      if (is_word("tail") && !n.child(NodeKind::Tail)) {
        ++pos_;
        take(Tok::Eq, "'='");
        n.children.push_back(tail());
      } else if (peek().kind == Tok::Int) {
        n.children.push_back(exception());
        while (peek().kind == Tok::Comma) {
          ++pos_;
          n.children.push_back(exception());
        }
        seen_exc = true;
      } else {
        fail("unexpected token", n.child(NodeKind::Tail) ? std::vector<std::string>{"integer"}
                                                         : std::vector<std::string>{"'tail'", "integer"});
      }
    }
    if (peek().kind != Tok::RParen) fail("unexpected token", seen_exc ? std::vector<std::string>{"','", "')'"} : std::vector<std::string>{"';'", "')'"});
    ++pos_;
    close(n);
    return n;
  }

  /// "[" [row {"," row}] "]" with rows of integers or rationals.
  Node matrix(bool rational_entries) {
    Node n = open(NodeKind::Matrix);
    take(Tok::LBracket, "'['");
    if (peek().kind != Tok::RBracket) {
      n.children.push_back(row(rational_entries));
      while (peek().kind == Tok::Comma) {
        ++pos_;
        n.children.push_back(row(rational_entries));
      }
    }
    if (peek().kind != Tok::RBracket) fail("unexpected token", {"','", "']'"});
    ++pos_;
    close(n);
    return n;
  }

  Node row(bool rational_entries) {
    Node n = open(NodeKind::Row);
    take(Tok::LBracket, "'['");
    if (peek().kind != Tok::RBracket) {
      n.children.push_back(rational_entries ? rational() : integer());
      while (peek().kind == Tok::Comma) {
        ++pos_;
        n.children.push_back(rational_entries ? rational() : integer());
      }
    }
    if (peek().kind != Tok::RBracket) fail("unexpected token", {"','", "']'"});
    ++pos_;
    close(n);
    return n;
  }

  Node module() {
    Node n = open(NodeKind::Module);
    word("module");
    take(Tok::LParen, "'('");
    word("T");
    take(Tok::Eq, "'='");
    n.children.push_back(primeset());
    bool gens = false, rel = false;
    while (peek().kind == Tok::Semi) {
      ++pos_;
      if (is_word("gens") && !gens && !rel) {
        ++pos_;
        take(Tok::Eq, "'='");
        n.children.push_back(integer());
        gens = true;
      } else if (is_word("rel") && !rel) {
        ++pos_;
        take(Tok::Eq, "'='");
        n.children.push_back(matrix(false));
        rel = true;
      } else {
        std::vector<std::string> exp;
        if (!gens && !rel) exp.push_back("'gens'");
        if (!rel) exp.push_back("'rel'");
        fail("unexpected token", exp);
      }
    }
    if (peek().kind != Tok::RParen) fail("unexpected token", rel ? std::vector<std::string>{"')'"} : std::vector<std::string>{"';'", "')'"});
    ++pos_;
    close(n);
    return n;
  }

  void optional_ring(Node& n) {
    word("T");
    take(Tok::Eq, "'='");
    n.children.push_back(primeset());
  }

  Node heis() {
    Node n = open(NodeKind::Heis);
    word("heis");
    take(Tok::LParen, "'('");
    n.children.push_back(rational());
    take(Tok::Comma, "','");
    n.children.push_back(rational());
    take(Tok::Comma, "','");
    n.children.push_back(rational());
    if (peek().kind == Tok::Semi) {
      ++pos_;
      optional_ring(n);
    }
    if (peek().kind != Tok::RParen) fail("unexpected token", n.children.size() == 3 ? std::vector<std::string>{"';'", "')'"} : std::vector<std::string>{"')'"});
    ++pos_;
    close(n);
    return n;
  }

  Node subgroup() {
    Node n = open(NodeKind::Subgroup);
    word("subgroup");
    take(Tok::LParen, "'('");
    bool ring_now = false;
    if (is_word("heis")) {
      n.children.push_back(heis());
      while (peek().kind == Tok::Comma) {
        ++pos_;
        n.children.push_back(heis());
      }
      if (peek().kind == Tok::Semi) {
        ++pos_;
        ring_now = true;
      }
    } else if (is_word("T")) {
      ring_now = true;
    }
    if (ring_now) optional_ring(n);
    if (peek().kind != Tok::RParen) fail("unexpected token", ring_now ? std::vector<std::string>{"')'"} : std::vector<std::string>{"','", "';'", "')'"});
    ++pos_;
    close(n);
    return n;
  }

  Node square() {
    Node n = open(NodeKind::Square);
    word("square");
    take(Tok::LParen, "'('");
    n.children.push_back(module());
    take(Tok::Comma, "','");
    n.children.push_back(family());
    bool alpha = false;
    if (peek().kind == Tok::Semi) {
      ++pos_;
      alpha = true;
      n.children.push_back(matrix(true));
      while (peek().kind == Tok::Comma) {
        ++pos_;
        n.children.push_back(matrix(true));
      }
    }
    if (peek().kind != Tok::RParen) fail("unexpected token", alpha ? std::vector<std::string>{"','", "')'"} : std::vector<std::string>{"';'", "')'"});
    ++pos_;
    close(n);
    return n;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline Node parse(std::string_view text) { return Parser(text).document(); }
inline Node parse_expr(std::string_view text) { return Parser(text).single(); }

// --- elaboration -------------------------------------------------------------------

/// A fracture-square request: module, family and optional automorphisms of G_S.
struct SquareSpec {
  FGModule g;
  PartitionFamily family;
  std::vector<RatMatrix> alpha;

  friend bool operator==(const SquareSpec& a, const SquareSpec& b) {
    return a.g == b.g && a.family == b.family && a.alpha == b.alpha;
  }
};

using Value = std::variant<PrimeSet, PartitionFamily, rank1::AutFamily1, FGModule, heis::HeisElement,
                           heis::HeisSubgroup, SquareSpec>;

namespace detail {

[[noreturn]] inline void semantic(const Node& n, const std::string& msg) { throw DslError({msg, n.span, {}}); }

/// Runs a constructor and re-reports its validation errors at the node.
template <class F>
auto at(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const DslError&) {
    throw;
  } catch (const Error& e) {
    semantic(n, e.what());
  }
}

inline Integer to_integer(const Node& n) { return at(n, [&] { return Integer(n.text); }); }

inline Rational to_rational(const Node& n) {
  auto slash = n.text.find('/');
  if (slash == std::string::npos) return Rational(Integer(n.text));
  Integer num(n.text.substr(0, slash)), den(n.text.substr(slash + 1));
  if (den <= 0) semantic(n, "denominator must be positive");
  return Rational(num, den);
}

inline Prime to_prime(const Node& n) {
  Integer v = to_integer(n);
  if (v < 2 || v >= (Integer(1) << 64) || !is_prime(static_cast<std::uint64_t>(v))) semantic(n, n.text + " is not a prime");
  return static_cast<Prime>(v);
}

inline PrimeSet primeset(const Node& n) {
  if (n.kind != NodeKind::PrimeSet) semantic(n, "expected a prime set, found " + kind_name(n.kind));
  if (n.text == "cofinite") return n.children.empty() ? PrimeSet::all() : PrimeSet::all().difference(primeset(n.children[0]));
  std::vector<Prime> ps;
  for (const auto& c : n.children) ps.push_back(to_prime(c));
  return PrimeSet::finite(ps);
}

inline PartitionFamily family(const Node& n) {
  if (n.kind != NodeKind::Family) semantic(n, "expected a family, found " + kind_name(n.kind));
  PrimeSet t = primeset(n.children[0]), s = primeset(n.children[1]);
  if (n.text == "singletons") return at(n, [&] { return PartitionFamily::singletons(t, s); });
  std::vector<PrimeSet> blocks;
  for (std::size_t i = 2; i < n.children.size(); ++i) blocks.push_back(primeset(n.children[i]));
  return at(n, [&] { return PartitionFamily::explicit_blocks(t, s, blocks); });
}

inline rank1::AutFamily1 aut(const Node& n) {
  PartitionFamily fam = family(n.children[0]);
  rank1::Tail tail = rank1::TailIdentity{};
  std::map<BlockIndex, Rational> exc;
  for (std::size_t i = 1; i < n.children.size(); ++i) {
    const Node& c = n.children[i];
    if (c.kind == NodeKind::Tail) {
      if (c.text == "p^") {
        Integer k = to_integer(c.children[0]);
        if (k < -1000 || k > 1000) semantic(c, "exponent out of range");
        tail = rank1::TailIndexPrimePower{static_cast<int>(k)};
      } else if (c.text == "const") {
        Rational q = to_rational(c.children[0]);
        if (q == 0) semantic(c, "tail constant must be nonzero");
        tail = rank1::TailConstant{q};
      }
      continue;
    }
    Prime p = to_prime(c.children[0]);
    if (!fam.residual().contains(p))
      semantic(c, "exception index invalid: " + std::to_string(p) + " is not in T - S = " + fam.residual().str());
    BlockIndex b = fam.block_of(p);
    if (exc.count(b)) semantic(c, "block of " + std::to_string(p) + " already has an exception");
    Rational q = to_rational(c.children[1]);
    if (q == 0) semantic(c.children[1], "alpha must be nonzero");
    exc.emplace(b, q);
  }
  return at(n, [&] { return rank1::AutFamily1(fam, exc, tail); });
}

inline IntMatrix int_matrix(const Node& n, std::optional<std::size_t> cols) {
  std::size_t c = n.children.empty() ? cols.value_or(0) : n.children[0].children.size();
  IntMatrix m(n.children.size(), c);
  for (std::size_t i = 0; i < n.children.size(); ++i) {
    const Node& r = n.children[i];
    if (r.children.size() != c) semantic(r, "row has " + std::to_string(r.children.size()) + " entries, expected " + std::to_string(c));
    for (std::size_t j = 0; j < c; ++j) m(i, j) = to_integer(r.children[j]);
  }
  return m;
}

inline RatMatrix rat_matrix(const Node& n, std::size_t size) {
  if (n.children.size() != size) semantic(n, "automorphism must be " + std::to_string(size) + "x" + std::to_string(size));
  RatMatrix m(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    const Node& r = n.children[i];
    if (r.children.size() != size) semantic(r, "row has " + std::to_string(r.children.size()) + " entries, expected " + std::to_string(size));
    for (std::size_t j = 0; j < size; ++j) m(i, j) = to_rational(r.children[j]);
  }
  return m;
}

inline FGModule module(const Node& n) {
  PrimeSet t = primeset(n.children[0]);
  std::optional<std::size_t> gens;
  const Node* rel = nullptr;
  for (std::size_t i = 1; i < n.children.size(); ++i) {
    const Node& c = n.children[i];
    if (c.kind == NodeKind::Integer) {
      Integer g = to_integer(c);
      if (g < 0 || g > 64) semantic(c, "generator count out of range");
      gens = static_cast<std::size_t>(g);
    } else {
      rel = &c;
    }
  }
  if (!gens && (!rel || rel->children.empty())) semantic(n, "module needs gens= when there are no relations");
  IntMatrix r = rel ? int_matrix(*rel, gens) : IntMatrix(0, *gens);
  std::size_t g = gens ? *gens : r.cols();
  if (r.rows() && r.cols() != g) semantic(*rel, "relations have " + std::to_string(r.cols()) + " columns but gens=" + std::to_string(g));
  return at(n, [&] { return FGModule(t, r, g); });
}

inline heis::HeisElement heis_element(const Node& n, std::optional<PrimeSet> ring) {
  if (n.kind != NodeKind::Heis) semantic(n, "expected a Heisenberg element, found " + kind_name(n.kind));
  PrimeSet t = n.children.size() == 4 ? primeset(n.children[3]) : ring.value_or(PrimeSet::all());
  if (ring && t != *ring) semantic(n, "element over " + t.str() + " inside a subgroup over " + ring->str());
  return at(n, [&] { return heis::HeisElement(to_rational(n.children[0]), to_rational(n.children[1]), to_rational(n.children[2]), t); });
}

inline heis::HeisSubgroup subgroup(const Node& n) {
  PrimeSet t = PrimeSet::all();
  if (!n.children.empty() && n.children.back().kind == NodeKind::PrimeSet) t = primeset(n.children.back());
  std::vector<heis::HeisElement> gens;
  for (const auto& c : n.children)
    if (c.kind == NodeKind::Heis) gens.push_back(heis_element(c, t));
  return at(n, [&] { return heis::HeisSubgroup(gens, t); });
}

inline SquareSpec square(const Node& n) {
  FGModule g = module(n.children[0]);
  PartitionFamily fam = family(n.children[1]);
  std::vector<RatMatrix> alpha;
  for (std::size_t i = 2; i < n.children.size(); ++i) alpha.push_back(rat_matrix(n.children[i], g.gens()));
  if (!alpha.empty()) {
    std::size_t k = fam.is_singletons() && !fam.has_infinite_index() ? fam.indices().size()
                    : fam.is_singletons()                              ? 0
                                                                       : fam.explicit_list().size();
    if (alpha.size() != k) semantic(n, "expected " + std::to_string(k) + " automorphisms, got " + std::to_string(alpha.size()));
  }
  return SquareSpec{g, fam, alpha};
}

}  // namespace detail

inline Value elaborate(const Node& n) {
  switch (n.kind) {
    case NodeKind::PrimeSet: return detail::primeset(n);
    case NodeKind::Family: return detail::family(n);
    case NodeKind::AutFamily: return detail::aut(n);
    case NodeKind::Module: return detail::module(n);
    case NodeKind::Heis: return detail::heis_element(n, std::nullopt);
    case NodeKind::Subgroup: return detail::subgroup(n);
    case NodeKind::Square: return detail::square(n);
    default: detail::semantic(n, "cannot elaborate a " + kind_name(n.kind) + " on its own");
  }
}

inline std::vector<Value> elaborate_document(const Node& doc) {
  std::vector<Value> out;
  for (const auto& c : doc.children) out.push_back(elaborate(c));
  return out;
}

inline Value read(std::string_view text) { return elaborate(parse_expr(text)); }

inline std::string print(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, SquareSpec>) {
          std::string out = "square(" + x.g.str() + ", " + x.family.str();
          for (std::size_t i = 0; i < x.alpha.size(); ++i) out += (i ? ", " : "; ") + x.alpha[i].str();
          return out + ")";
        } else {
          return x.str();
        }
      },
      v);
}

}  // namespace genus::dsl
