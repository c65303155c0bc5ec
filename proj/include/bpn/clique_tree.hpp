#ifndef BPN_CLIQUE_TREE_HPP
#define BPN_CLIQUE_TREE_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bpn/bayes.hpp"

namespace bpn {

// Tree of variable clusters with family preservation and the running
// intersection property; CPTs are assigned to cliques that cover them.
struct CliqueTree {
  struct Cluster {
    std::set<VariableId> clique;
    std::vector<int> neighbors;
    std::vector<VariableId> assigned_cpts;  // by child variable
  };
  std::vector<Cluster> clusters;
  // separator per undirected edge, keyed with the smaller id first
  std::map<std::pair<int, int>, std::set<VariableId>> separators;

  const std::set<VariableId>& separator(int i, int j) const;
  int width() const;  // largest clique size minus one
  std::string to_dot() const;
};

// Checks family preservation, the jointree property, separator consistency
// and assignment coverage; throws JointreeViolation / InvalidTree.
void validate_clique_tree(const BayesNet& bn, const CliqueTree& ct);

}  // namespace bpn

#endif  // BPN_CLIQUE_TREE_HPP
