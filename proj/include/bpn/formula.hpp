#ifndef BPN_FORMULA_HPP
#define BPN_FORMULA_HPP

#include <memory>
#include <string>

#include "bpn/factor.hpp"

namespace bpn {

enum class Pol { Pos, Neg };

inline Pol dual(Pol p) { return p == Pol::Pos ? Pol::Neg : Pol::Pos; }

// MLL formula tree: atoms X+/X-, units 1/bot, tensor, par. Immutable value
// type; copies share structure.
class Formula {
 public:
  enum class Kind { Atom, One, Bottom, Tensor, Par };

  Formula() : Formula(one()) {}

  static Formula atom(VariableId v, Pol p);
  static Formula one();
  static Formula bottom();
  static Formula tensor(Formula l, Formula r);
  static Formula par(Formula l, Formula r);

  Kind kind() const { return node_->kind; }
  bool is_atomic() const { return node_->kind == Kind::Atom; }
  VariableId atom_var() const;
  Pol atom_pol() const;
  Formula left() const;
  Formula right() const;

  Formula dual() const;
  std::string to_string() const;
  static Formula parse(const std::string& s);

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  struct Node {
    Kind kind;
    VariableId var;  // Atom only
    Pol pol = Pol::Pos;
    std::shared_ptr<const Node> l, r;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

}  // namespace bpn

#endif  // BPN_FORMULA_HPP
