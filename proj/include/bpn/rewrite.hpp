#ifndef BPN_REWRITE_HPP
#define BPN_REWRITE_HPP

#include <functional>
#include <string>
#include <vector>

#include "bpn/net.hpp"

namespace bpn {

enum class RuleKind {
  AxCut,
  CW,
  CAss,
  CId,
  TensorPar,
  AxExpand,
  CWExpand,
  CAssExpand,
};

std::string rule_name(RuleKind r);

struct Redex {
  RuleKind rule;
  std::vector<int> sites;  // rule-specific node/edge ids
};

// All reduction left-hand sides present in the net, ordered by site ids.
std::vector<Redex> find_redexes(const Net& net);

// Applies one reduction or expansion step, returning the rewritten net.
// Throws StaleRedex if the sites no longer match the rule's pattern.
Net apply(const Net& net, const Redex& redex);

struct NormalizeResult {
  Net net;
  std::vector<std::string> trace;  // one line per step: "rule site_ids"
  std::size_t steps = 0;
};

// Reduces to normal form with the deterministic lowest-site-first strategy,
// or with a caller-supplied choice function. Guarded by a step limit of
// 10*(node count)^2 + 16; exceeding it throws StepLimitExceeded.
NormalizeResult normalize(
    const Net& net,
    const std::function<std::size_t(const std::vector<Redex>&)>& choose = {});

// Expansion helpers used by the factorizer and by property tests.
// ax_expand splits edge e with a fresh cut/ax pair; cw_expand routes a
// negative edge through a fresh contraction with a weakening premise;
// cass_expand rotates a left-nested contraction pair to the right.
Net ax_expand(const Net& net, EdgeId e);
Net cw_expand(const Net& net, EdgeId e);
Net cass_expand(const Net& net, NodeId outer);

// Cuts the conclusion Y+ against a fresh weakening, making Y internal.
Net hide(const Net& net, VariableId y);

// De-weakening: exposes the internal atom Y as a fresh conclusion Y+.
Net show(const Net& net, VariableId y);

}  // namespace bpn

#endif  // BPN_REWRITE_HPP
