#ifndef BPN_NET_HPP
#define BPN_NET_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bpn/formula.hpp"

namespace bpn {

using NodeId = int;
using EdgeId = int;

enum class NodeKind {
  Ax,
  Box,
  Cut,
  Tensor,
  Par,
  Contraction,  // @
  Weakening,    // w
  OneIntro,
  BotIntro,
};

std::string kind_name(NodeKind k);
NodeKind kind_from_name(const std::string& s);

struct Node {
  NodeKind kind;
  std::vector<EdgeId> premises;     // incoming, in order
  std::vector<EdgeId> conclusions;  // outgoing, in order
};

// Edges are directed top-to-bottom; an absent endpoint is "pending".
struct Edge {
  std::optional<NodeId> src;
  std::optional<NodeId> dst;
  Formula label;
};

// Labelled DAG of typed nodes with possibly pending edges. Pending-target
// edges are the conclusions (declared order kept), pending-source edges the
// premises. Mutable only through this interface, which keeps node edge
// lists and the conclusion order consistent.
class Net {
 public:
  NodeId add_node(NodeKind kind);

  // Adds an edge; appends to src's conclusion list and dst's premise list,
  // and to the net conclusion order if dst is pending.
  EdgeId add_edge(Formula label, std::optional<NodeId> src,
                  std::optional<NodeId> dst);

  // Points an existing pending-target edge at a node (removing it from the
  // conclusion order) or detaches it again.
  void set_dst(EdgeId e, std::optional<NodeId> dst);
  void set_src(EdgeId e, std::optional<NodeId> src);

  // Replaces edge `from` by `to` in the same position of n's premise list.
  void replace_premise(NodeId n, EdgeId from, EdgeId to);

  void remove_edge(EdgeId e);  // e must be detached from both endpoints
  void remove_node(NodeId n);  // n must have no incident edges

  // Detaches e from its endpoints (node lists and conclusion order updated).
  void detach_edge(EdgeId e);

  // Rewiring surgery. take_over_target moves `lower`'s target (or
  // conclusion slot) onto `upper`, leaving `lower` dangling on the target
  // side; the caller must detach and remove `lower` before returning.
  // split_target inserts a fresh edge (same label, source `new_src`) in
  // front of e's target, leaving e dangling on the target side; the caller
  // must immediately re-point e with set_dst.
  void take_over_target(EdgeId upper, EdgeId lower);
  EdgeId split_target(EdgeId e, NodeId new_src);

  const Node& node(NodeId n) const;
  const Edge& edge(EdgeId e) const;
  bool has_node(NodeId n) const { return nodes_.count(n) > 0; }
  bool has_edge(EdgeId e) const { return edges_.count(e) > 0; }

  const std::map<NodeId, Node>& nodes() const { return nodes_; }
  const std::map<EdgeId, Edge>& edges() const { return edges_; }

  // Conclusions in declared order (edges with pending target).
  const std::vector<EdgeId>& conclusions() const { return conclusions_; }
  void set_conclusion_order(std::vector<EdgeId> order);

  // Pending-source edges, ascending by id.
  std::vector<EdgeId> premises() const;

  std::vector<NodeId> nodes_of_kind(NodeKind k) const;
  bool is_atomic() const;
  std::set<VariableId> atoms() const;
  std::set<VariableId> conclusion_atoms() const;

  // For a box node, its unique positive conclusion edge.
  EdgeId box_positive(NodeId box) const;

  std::string to_json() const;
  static Net from_json(const std::string& text);

  std::string to_dot() const;

 private:
  std::map<NodeId, Node> nodes_;
  std::map<EdgeId, Edge> edges_;
  std::vector<EdgeId> conclusions_;
  NodeId next_node_ = 0;
  EdgeId next_edge_ = 0;
};

}  // namespace bpn

#endif  // BPN_NET_HPP
