#include "bpn/formula.hpp"

#include <cctype>

#include "bpn/errors.hpp"

namespace bpn {

Formula Formula::atom(VariableId v, Pol p) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->var = v;
  n->pol = p;
  return Formula(n);
}

Formula Formula::one() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::One;
  return Formula(n);
}

Formula Formula::bottom() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bottom;
  return Formula(n);
}

Formula Formula::tensor(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Tensor;
  n->l = l.node_;
  n->r = r.node_;
  return Formula(n);
}

Formula Formula::par(Formula l, Formula r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Par;
  n->l = l.node_;
  n->r = r.node_;
  return Formula(n);
}

VariableId Formula::atom_var() const {
  if (!is_atomic()) throw NotAtomic("atom_var on composite formula");
  return node_->var;
}

Pol Formula::atom_pol() const {
  if (!is_atomic()) throw NotAtomic("atom_pol on composite formula");
  return node_->pol;
}

Formula Formula::left() const {
  if (!node_->l) throw NotAtomic("left() on leaf formula");
  return Formula(node_->l);
}

Formula Formula::right() const {
  if (!node_->r) throw NotAtomic("right() on leaf formula");
  return Formula(node_->r);
}

Formula Formula::dual() const {
  switch (node_->kind) {
    case Kind::Atom:
      return atom(node_->var, bpn::dual(node_->pol));
    case Kind::One:
      return bottom();
    case Kind::Bottom:
      return one();
    case Kind::Tensor:
      return par(left().dual(), right().dual());
    case Kind::Par:
      return tensor(left().dual(), right().dual());
  }
  throw InternalInconsistency("bad formula kind");
}

std::string Formula::to_string() const {
  switch (node_->kind) {
    case Kind::Atom:
      return node_->var.name() + (node_->pol == Pol::Pos ? "+" : "-");
    case Kind::One:
      return "1";
    case Kind::Bottom:
      return "bot";
    case Kind::Tensor:
      return "(" + left().to_string() + "*" + right().to_string() + ")";
    case Kind::Par:
      return "(" + left().to_string() + "|" + right().to_string() + ")";
  }
  throw InternalInconsistency("bad formula kind");
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (node_->kind != o.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Atom:
      return node_->var == o.node_->var && node_->pol == o.node_->pol;
    case Kind::One:
    case Kind::Bottom:
      return true;
    case Kind::Tensor:
    case Kind::Par:
      return left() == o.left() && right() == o.right();
  }
  return false;
}

namespace {

struct Parser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      pos++;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  Formula parse_formula() {
    skip_ws();
    if (pos >= s.size()) throw ParseError("empty formula");
    char c = s[pos];
    if (c == '(') {
      pos++;
      Formula l = parse_formula();
      skip_ws();
      if (pos >= s.size() || (s[pos] != '*' && s[pos] != '|'))
        throw ParseError("expected * or | in " + s);
      char op = s[pos++];
      Formula r = parse_formula();
      skip_ws();
      if (pos >= s.size() || s[pos] != ')')
        throw ParseError("expected ) in " + s);
      pos++;
      return op == '*' ? Formula::tensor(l, r) : Formula::par(l, r);
    }
    if (c == '1') {
      pos++;
      return Formula::one();
    }
    if (s.compare(pos, 3, "bot") == 0) {
      std::size_t after = pos + 3;
      bool is_unit = after >= s.size() ||
                     (!std::isalnum(static_cast<unsigned char>(s[after])) &&
                      s[after] != '_' && s[after] != '+' && s[after] != '-');
      if (is_unit) {
        pos += 3;
        return Formula::bottom();
      }
    }
    // atom: name up to + or -
    std::size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) ||
                              s[pos] == '_'))
      pos++;
    if (pos == start || pos >= s.size() || (s[pos] != '+' && s[pos] != '-'))
      throw ParseError("expected atom with polarity in " + s);
    std::string name = s.substr(start, pos - start);
    Pol p = s[pos] == '+' ? Pol::Pos : Pol::Neg;
    pos++;
    return Formula::atom(VariableId::intern(name), p);
  }
};

}  // namespace

Formula Formula::parse(const std::string& s) {
  Parser p{s};
  Formula f = p.parse_formula();
  p.skip_ws();
  if (p.pos != s.size()) throw ParseError("trailing characters in " + s);
  return f;
}

}  // namespace bpn
