#ifndef BPN_BAYES_HPP
#define BPN_BAYES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bpn/factor.hpp"
#include "bpn/net.hpp"

namespace bpn {

inline constexpr std::uint64_t kDefaultStateCap = std::uint64_t(1) << 22;

struct BayesNet {
  std::vector<VariableId> variables;  // declared order
  std::map<VariableId, Domain> domains;
  std::map<VariableId, std::vector<VariableId>> parents;  // declared order
  std::map<VariableId, Factor> cpts;  // scope {X} u Pa(X), child X

  std::uint64_t state_space() const;
};

// Assigns value sets to atoms and a CPT to each box.
struct Valuation {
  std::map<VariableId, Domain> domains;
  std::map<NodeId, Factor> cpts;  // box node id -> CPT

  std::string to_json() const;
  static Valuation from_json(const std::string& text);
};

BayesNet parse_bn(const std::string& json_text);
std::string bn_to_json(const BayesNet& bn);

bool bn_equivalent(const BayesNet& a, const BayesNet& b, double tol = 1e-12);

// Full product of all CPTs (Bayes-net joint distribution).
Factor joint(const BayesNet& bn, std::uint64_t cap = kDefaultStateCap);

enum class CompileMode { Positive, Empty };

struct CompileResult {
  Net net;
  Valuation valuation;
  std::map<VariableId, NodeId> box_of;
};

// One box per variable wired through per-atom contraction combs. Positive
// mode exposes every X+ in the conclusions (through an extra axiom leaf in
// the atom's comb); empty mode hides every atom behind a weakening. The
// output is a normal bpn whose box DAG is the input's Bayesian structure.
CompileResult compile_bn(const BayesNet& bn, CompileMode mode);

// Reads a Bayesian network back off a positive or empty-conclusion bpn.
BayesNet extract_bn(const Net& net, const Valuation& valuation);

}  // namespace bpn

#endif  // BPN_BAYES_HPP
