#ifndef BPN_ORACLE_HPP
#define BPN_ORACLE_HPP

#include <cstdint>
#include <optional>

#include "bpn/bayes.hpp"
#include "bpn/clique_tree.hpp"

namespace bpn {

struct EliminationOrder {
  std::vector<VariableId> order;
  int induced_width = 0;  // max product-scope size along the order, minus one
};

// project(joint(bn), keep); the baseline everything is checked against.
Factor brute_force_marginal(const BayesNet& bn,
                            const std::vector<VariableId>& keep,
                            std::uint64_t cap = kDefaultStateCap);

// Sum-product variable elimination for a single query variable; `order`
// must enumerate exactly the other variables.
Factor variable_elimination(const BayesNet& bn, VariableId query,
                            const std::vector<VariableId>& order);

// Variant keeping a set of variables; eliminates `order` left to right.
Factor variable_elimination_keep(const BayesNet& bn,
                                 const std::vector<VariableId>& keep,
                                 const std::vector<VariableId>& order);

// Clique tree read off the data flow of variable elimination with the given
// full order: one cluster per elimination step, an edge wherever a message
// is consumed, CPTs assigned to the step that first uses them.
CliqueTree clique_tree_from_order(const BayesNet& bn,
                                  const std::vector<VariableId>& order);

// Single-traversal message passing toward a root cluster containing the
// query; evidence (optional) is absorbed by slicing the CPTs first.
Factor message_passing(const BayesNet& bn, const CliqueTree& ct, int root,
                       VariableId query,
                       const Assignment& evidence = Assignment{});

enum class OrderStrategy { MinDegree, MinFill, Given };

EliminationOrder heuristic_order(const BayesNet& bn, OrderStrategy strategy,
                                 const std::vector<VariableId>& given = {});
EliminationOrder heuristic_order(const Net& net, OrderStrategy strategy,
                                 const std::vector<VariableId>& given = {});

// Width that the given full elimination order induces on the moral graph.
int order_width(const BayesNet& bn, const std::vector<VariableId>& order);

// Deterministic 64-bit generator (splitmix64). One value is drawn per
// variable per sample, in topological order of the DAG (ties by variable
// id), so sample streams are stable across platforms.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  double next_double();  // uniform in [0,1)
};

std::vector<Assignment> forward_sample(const BayesNet& bn, std::uint64_t seed,
                                       std::size_t count);

}  // namespace bpn

#endif  // BPN_ORACLE_HPP
