#include "elenchus/formula.hpp"

#include <array>
#include <cassert>
#include <optional>

namespace elenchus {

bool is_valid_atom_name(std::string_view name) noexcept {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  for (char c : name)
    if (!alpha(c) && !digit(c)) return false;
  return true;
}

AtomId::AtomId(std::string name) : name_(std::move(name)) {
  if (!is_valid_atom_name(name_))
    throw Error("InvalidAtomId", "invalid atom identifier '" + name_ + "'");
}

struct Formula::Node {
  Connective kind;
  std::optional<AtomId> atom;
  std::array<std::optional<Formula>, 2> children;
  std::size_t connectives = 0;
  std::string text;
};

namespace {

// Binding strength used by the renderer; higher binds tighter.
int precedence(Connective c) {
  switch (c) {
    case Connective::Imp: return 1;
    case Connective::Or: return 2;
    case Connective::And: return 3;
    case Connective::Neg: return 4;
    case Connective::Atom: return 5;
  }
  return 0;
}

std::string wrap(const Formula& f, bool parens) {
  return parens ? "(" + f.text() + ")" : f.text();
}

}  // namespace

Formula Formula::atom(AtomId id) {
  auto node = std::make_shared<Node>();
  node->kind = Connective::Atom;
  node->text = id.name();
  node->atom = std::move(id);
  return Formula(std::move(node));
}

Formula Formula::negation(Formula operand) {
  auto node = std::make_shared<Node>();
  node->kind = Connective::Neg;
  node->connectives = operand.connectives() + 1;
  node->text = "~" + wrap(operand, precedence(operand.kind()) < precedence(Connective::Neg));
  node->children[0] = std::move(operand);
  return Formula(std::move(node));
}

Formula Formula::binary(Connective kind, Formula left, Formula right) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->connectives = left.connectives() + right.connectives() + 1;
  const int own = precedence(kind);
  const int lp = precedence(left.kind());
  const int rp = precedence(right.kind());
  // & and | associate to the left, -> to the right.
  const bool right_assoc = kind == Connective::Imp;
  const bool left_parens = right_assoc ? lp <= own : lp < own;
  const bool right_parens = right_assoc ? rp < own : rp <= own;
  const char* op = kind == Connective::And ? " & " : kind == Connective::Or ? " | " : " -> ";
  node->text = wrap(left, left_parens) + op + wrap(right, right_parens);
  node->children[0] = std::move(left);
  node->children[1] = std::move(right);
  return Formula(std::move(node));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return binary(Connective::And, std::move(left), std::move(right));
}
Formula Formula::disjunction(Formula left, Formula right) {
  return binary(Connective::Or, std::move(left), std::move(right));
}
Formula Formula::implication(Formula antecedent, Formula consequent) {
  return binary(Connective::Imp, std::move(antecedent), std::move(consequent));
}

Connective Formula::kind() const noexcept { return node_->kind; }

const AtomId& Formula::atom_id() const {
  assert(is_atom());
  return *node_->atom;
}
const Formula& Formula::operand() const {
  assert(kind() == Connective::Neg);
  return *node_->children[0];
}
const Formula& Formula::left() const {
  assert(!is_atom() && kind() != Connective::Neg);
  return *node_->children[0];
}
const Formula& Formula::right() const {
  assert(!is_atom() && kind() != Connective::Neg);
  return *node_->children[1];
}

std::size_t Formula::connectives() const noexcept { return node_->connectives; }
const std::string& Formula::text() const noexcept { return node_->text; }

void Formula::collect_atoms(AtomSet& out) const {
  switch (kind()) {
    case Connective::Atom: out.insert(atom_id()); break;
    case Connective::Neg: operand().collect_atoms(out); break;
    default:
      left().collect_atoms(out);
      right().collect_atoms(out);
  }
}

std::string render(const Formula& f) { return f.text(); }

bool Sequent::is_atomic() const noexcept {
  for (const auto& f : antecedent)
    if (!f.is_atom()) return false;
  for (const auto& f : succedent)
    if (!f.is_atom()) return false;
  return true;
}

std::size_t Sequent::connectives() const noexcept {
  std::size_t n = 0;
  for (const auto& f : antecedent) n += f.connectives();
  for (const auto& f : succedent) n += f.connectives();
  return n;
}

AtomSet Sequent::atoms() const {
  AtomSet out;
  for (const auto& f : antecedent) f.collect_atoms(out);
  for (const auto& f : succedent) f.collect_atoms(out);
  return out;
}

namespace {

std::string join(const FormulaSet& side) {
  std::string out;
  for (const auto& f : side) {
    if (!out.empty()) out += ", ";
    out += f.text();
  }
  return out;
}

}  // namespace

std::string Sequent::text() const {
  std::string out = join(antecedent);
  if (!out.empty()) out += ' ';
  out += "|-";
  if (!succedent.empty()) out += ' ' + join(succedent);
  return out;
}

std::string render(const Sequent& s) { return s.text(); }

Sequent atomic_sequent(const AtomSet& lhs, const AtomSet& rhs) {
  Sequent s;
  for (const auto& a : lhs) s.antecedent.insert(Formula::atom(a));
  for (const auto& a : rhs) s.succedent.insert(Formula::atom(a));
  return s;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Atom, Not, And, Or, Imp, LParen, RParen, Comma, Turnstile, End };

const char* describe(Tok t) {
  switch (t) {
    case Tok::Atom: return "atom";
    case Tok::Not: return "'~'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Imp: return "'->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Turnstile: return "'|-'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
};

std::vector<Token> tokenize(std::string_view in) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto ident_start = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto ident_char = [&](char c) { return ident_start(c) || (c >= '0' && c <= '9'); };
  while (i < in.size()) {
    const char c = in[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < in.size() && ident_char(in[i])) ++i;
      out.push_back({Tok::Atom, start, in.substr(start, i - start)});
      continue;
    }
    switch (c) {
      case '~': out.push_back({Tok::Not, start, in.substr(start, 1)}); ++i; continue;
      case '&': out.push_back({Tok::And, start, in.substr(start, 1)}); ++i; continue;
      case '(': out.push_back({Tok::LParen, start, in.substr(start, 1)}); ++i; continue;
      case ')': out.push_back({Tok::RParen, start, in.substr(start, 1)}); ++i; continue;
      case ',': out.push_back({Tok::Comma, start, in.substr(start, 1)}); ++i; continue;
      case '|':
        if (i + 1 < in.size() && in[i + 1] == '-') {
          out.push_back({Tok::Turnstile, start, in.substr(start, 2)});
          i += 2;
        } else {
          out.push_back({Tok::Or, start, in.substr(start, 1)});
          ++i;
        }
        continue;
      case '-':
        if (i + 1 < in.size() && in[i + 1] == '>') {
          out.push_back({Tok::Imp, start, in.substr(start, 2)});
          i += 2;
          continue;
        }
        break;
      default: break;
    }
    throw SyntaxError(start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::End, in.size(), {}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(peek().offset, what + ", found " + describe(peek().kind));
  }

  void expect(Tok t) {
    if (peek().kind != t) fail(std::string("expected ") + describe(t));
    ++pos_;
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Imp) {
      take();
      return Formula::implication(std::move(lhs), formula());
    }
    return lhs;
  }

  std::vector<Formula> list(Tok terminator) {
    std::vector<Formula> out;
    if (peek().kind == terminator) return out;
    out.push_back(formula());
    while (peek().kind == Tok::Comma) {
      take();
      out.push_back(formula());
    }
    return out;
  }

 private:
  Formula disjunction() {
    Formula acc = conjunction();
    while (peek().kind == Tok::Or) {
      take();
      acc = Formula::disjunction(std::move(acc), conjunction());
    }
    return acc;
  }

  Formula conjunction() {
    Formula acc = unary();
    while (peek().kind == Tok::And) {
      take();
      acc = Formula::conjunction(std::move(acc), unary());
    }
    return acc;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not:
        take();
        return Formula::negation(unary());
      case Tok::Atom:
        return Formula::atom(AtomId(std::string(take().text)));
      case Tok::LParen: {
        take();
        Formula inner = formula();
        expect(Tok::RParen);
        return inner;
      }
      default:
        fail("expected formula");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

bool blank(std::string_view text) {
  return text.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

Formula parse_formula(std::string_view text) {
  if (blank(text)) throw SyntaxError(0, "empty input", "EmptyInput");
  Parser p(tokenize(text));
  Formula f = p.formula();
  if (p.peek().kind != Tok::End) p.fail("expected end of formula");
  return f;
}

Sequent parse_sequent(std::string_view text) {
  auto tokens = tokenize(text);
  std::size_t turnstiles = 0;
  for (const auto& t : tokens)
    if (t.kind == Tok::Turnstile) ++turnstiles;
  if (turnstiles == 0) throw SyntaxError(text.size(), "missing '|-'", "MissingTurnstile");

  Parser p(std::move(tokens));
  Sequent s;
  for (auto& f : p.list(Tok::Turnstile)) s.antecedent.insert(std::move(f));
  p.expect(Tok::Turnstile);
  for (auto& f : p.list(Tok::End)) s.succedent.insert(std::move(f));
  if (p.peek().kind != Tok::End) p.fail("expected ',' or end of sequent");
  return s;
}

}  // namespace elenchus
