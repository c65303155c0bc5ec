#ifndef BPN_NET_ANALYSIS_HPP
#define BPN_NET_ANALYSIS_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "bpn/net.hpp"

namespace bpn {

struct CorrectnessReport {
  bool is_atomic = false;
  bool switching_acyclic = false;
  std::vector<EdgeId> switching_cycle;  // witness when cyclic
  bool polarized_dag = false;           // meaningful for atomic nets only
  std::vector<NodeId> polarized_cycle;  // witness when cyclic
};

// Validates node arities and label discipline (throws ArityViolation or
// LabelMismatch), then runs the correctness analyses.
CorrectnessReport check_pre_module(const Net& net);

// True iff no undirected cycle uses more than one premise of any par or
// contraction node. Polynomial (no switching enumeration); on failure the
// witness lists the edges of one violating cycle.
bool switching_acyclic(const Net& net, std::vector<EdgeId>* witness = nullptr);

struct PolarizedResult {
  bool is_dag = false;
  std::vector<NodeId> topo_order;  // valid when is_dag
  std::vector<NodeId> cycle;       // valid when !is_dag
};

// Orients atomic edges downwards if positive, upwards if negative, and
// topologically sorts the nodes. Throws NotAtomic on composite labels.
PolarizedResult polarized_orient(const Net& net);

// An edge is initial when it is minimal for the polarized order, i.e. its
// polarized tail endpoint is pending.
bool edge_is_initial(const Net& net, EdgeId e);

struct MllComponent {
  std::set<NodeId> nodes;
  std::set<EdgeId> edges;
  VariableId supporting_atom;
  std::vector<EdgeId> initial_edges;
  bool directed_tree = false;  // polarized orientation forms a tree
};

// Undirected connected components of an atomic box-free module.
// Throws NotMllAtomic if the module has boxes or composite labels.
std::vector<MllComponent> connected_components(const Net& module);

struct WellLabelledReport {
  bool same_atom_edges_connected = false;   // condition 1
  bool components_have_distinct_atoms = false;  // condition 2
  bool initial_edges_distinct_atoms = false;    // condition 3
  bool interface_positives_distinct = false;    // condition 4
  bool verdict = false;
};

// Evaluates the four equivalent characterizations independently and checks
// they agree (InternalInconsistency otherwise).
WellLabelledReport well_labelled(const Net& module);

struct BpnReport {
  bool repetition_free_conclusions = false;
  bool repetition_free_box_interfaces = false;
  bool unique_positive_per_atom = false;
  bool is_bpn = false;
  std::vector<std::string> violations;
};

// Interface conditions for Bayesian proof-nets, cross-checked against the
// well-labelling of the box-free module when the interfaces are
// repetition-free.
BpnReport is_bpn(const Net& net);

struct BoxDag {
  std::vector<NodeId> boxes;                  // ascending
  std::map<NodeId, VariableId> box_atom;      // box -> its positive atom
  std::map<NodeId, std::vector<NodeId>> parents;  // box -> parent boxes
};

// DAG over boxes: b1 -> b2 iff a polarized path joins them without passing
// through a third box.
BoxDag bnet(const Net& net);

std::set<VariableId> internal_atoms(const Net& net);

struct Decomposition {
  std::vector<NodeId> boxes;
  Net module;  // original net minus box nodes; edge/node ids preserved
};

Decomposition decompose(const Net& net);

// Re-glues a decomposition (for round-trip checks).
Net glue(const Net& original, const Decomposition& d);

// Structural isomorphism respecting kinds, labels, wiring and the declared
// conclusion order. Backtracking; intended for test-sized nets.
bool net_isomorphic(const Net& a, const Net& b);

}  // namespace bpn

#endif  // BPN_NET_ANALYSIS_HPP
