#include "bpn/net_analysis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <queue>
#include <sstream>

#include "bpn/errors.hpp"

namespace bpn {

namespace {

std::string node_desc(const Net& net, NodeId n) {
  return kind_name(net.node(n).kind) + " #" + std::to_string(n);
}

void collect_atoms(const Formula& f, std::set<VariableId>& out) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out.insert(f.atom_var());
      break;
    case Formula::Kind::Tensor:
    case Formula::Kind::Par:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
      break;
    default:
      break;
  }
}

}  // namespace

CorrectnessReport check_pre_module(const Net& net) {
  for (const auto& [id, e] : net.edges()) {
    if (e.src && !net.has_node(*e.src))
      throw InternalInconsistency("edge with unknown src");
    if (e.dst && !net.has_node(*e.dst))
      throw InternalInconsistency("edge with unknown dst");
  }
  for (const auto& [id, n] : net.nodes()) {
    const auto& prem = n.premises;
    const auto& conc = n.conclusions;
    auto arity = [&](std::size_t np, std::size_t nc) {
      if (prem.size() != np || conc.size() != nc) {
        std::ostringstream os;
        os << node_desc(net, id) << " has " << prem.size() << " premises and "
           << conc.size() << " conclusions";
        throw ArityViolation(os.str());
      }
    };
    auto label_of = [&](EdgeId e) { return net.edge(e).label; };
    switch (n.kind) {
      case NodeKind::Ax: {
        arity(0, 2);
        if (label_of(conc[0]) != label_of(conc[1]).dual())
          throw LabelMismatch("ax #" + std::to_string(id) +
                              " conclusions are not dual");
        break;
      }
      case NodeKind::Cut: {
        arity(2, 0);
        if (label_of(prem[0]) != label_of(prem[1]).dual())
          throw LabelMismatch("cut #" + std::to_string(id) +
                              " premises are not dual");
        break;
      }
      case NodeKind::Tensor:
      case NodeKind::Par: {
        arity(2, 1);
        Formula c = label_of(conc[0]);
        bool is_tensor = n.kind == NodeKind::Tensor;
        if (c.kind() !=
            (is_tensor ? Formula::Kind::Tensor : Formula::Kind::Par))
          throw LabelMismatch(node_desc(net, id) +
                              " conclusion is not a " +
                              (is_tensor ? std::string("tensor") : "par"));
        Formula a = label_of(prem[0]), b = label_of(prem[1]);
        bool ok = (c.left() == a && c.right() == b) ||
                  (c.left() == b && c.right() == a);
        if (!ok)
          throw LabelMismatch(node_desc(net, id) +
                              " conclusion does not combine its premises");
        break;
      }
      case NodeKind::Contraction: {
        if (conc.size() != 1 || prem.size() < 1 || prem.size() > 2) {
          std::ostringstream os;
          os << node_desc(net, id) << " has " << prem.size()
             << " premises and " << conc.size() << " conclusions";
          throw ArityViolation(os.str());
        }
        Formula c = label_of(conc[0]);
        if (!c.is_atomic() || c.atom_pol() != Pol::Neg)
          throw LabelMismatch("@ #" + std::to_string(id) +
                              " conclusion must be a negative atom");
        for (EdgeId p : prem)
          if (!(label_of(p) == c))
            throw LabelMismatch("@ #" + std::to_string(id) +
                                " premises must match its conclusion");
        break;
      }
      case NodeKind::Weakening: {
        arity(0, 1);
        Formula c = label_of(conc[0]);
        if (!c.is_atomic() || c.atom_pol() != Pol::Neg)
          throw LabelMismatch("w #" + std::to_string(id) +
                              " conclusion must be a negative atom");
        break;
      }
      case NodeKind::OneIntro: {
        arity(0, 1);
        if (label_of(conc[0]).kind() != Formula::Kind::One)
          throw LabelMismatch("one #" + std::to_string(id));
        break;
      }
      case NodeKind::BotIntro: {
        arity(0, 1);
        if (label_of(conc[0]).kind() != Formula::Kind::Bottom)
          throw LabelMismatch("bot #" + std::to_string(id));
        break;
      }
      case NodeKind::Box: {
        if (!prem.empty() || conc.empty()) {
          std::ostringstream os;
          os << node_desc(net, id) << " has " << prem.size()
             << " premises and " << conc.size() << " conclusions";
          throw ArityViolation(os.str());
        }
        int positives = 0;
        for (EdgeId c : conc) {
          Formula f = label_of(c);
          if (!f.is_atomic())
            throw LabelMismatch("box #" + std::to_string(id) +
                                " conclusion must be atomic");
          if (f.atom_pol() == Pol::Pos) positives++;
        }
        if (positives != 1)
          throw LabelMismatch("box #" + std::to_string(id) +
                              " must have exactly one positive conclusion");
        break;
      }
    }
  }

  CorrectnessReport rep;
  rep.is_atomic = net.is_atomic();
  rep.switching_acyclic = switching_acyclic(net, &rep.switching_cycle);
  if (rep.is_atomic) {
    PolarizedResult pr = polarized_orient(net);
    rep.polarized_dag = pr.is_dag;
    rep.polarized_cycle = pr.cycle;
  }
  return rep;
}

// Switching cycles are detected on a transition graph: one vertex per edge
// endpoint plus one hub per node whose transitions are unrestricted; par/@
// endpoints are wired premise<->conclusion only. A cycle there projects to
// an undirected net cycle using at most one premise of each par/@ node.
bool switching_acyclic(const Net& net, std::vector<EdgeId>* witness) {
  // H vertices: 2 per edge (0 = src end, 1 = dst end), plus node hubs.
  std::map<EdgeId, int> edge_base;
  int nv = 0;
  for (const auto& [id, e] : net.edges()) {
    edge_base[id] = nv;
    nv += 2;
  }
  std::map<NodeId, int> hub;
  for (const auto& [id, n] : net.nodes()) {
    if (n.kind != NodeKind::Par && n.kind != NodeKind::Contraction)
      hub[id] = nv++;
  }

  struct HEdge {
    int a, b;
    EdgeId crossing;  // net edge id when this is a crossing edge, else -1
  };
  std::vector<HEdge> hedges;
  auto endpoint = [&](EdgeId e, bool dst_end) {
    return edge_base.at(e) + (dst_end ? 1 : 0);
  };
  for (const auto& [id, e] : net.edges()) {
    if (e.src && e.dst) hedges.push_back({endpoint(id, false), endpoint(id, true), id});
  }
  for (const auto& [id, n] : net.nodes()) {
    if (n.kind == NodeKind::Par || n.kind == NodeKind::Contraction) {
      for (EdgeId c : n.conclusions)
        for (EdgeId p : n.premises)
          hedges.push_back({endpoint(c, false), endpoint(p, true), -1});
    } else {
      int h = hub.at(id);
      for (EdgeId c : n.conclusions) hedges.push_back({h, endpoint(c, false), -1});
      for (EdgeId p : n.premises) hedges.push_back({h, endpoint(p, true), -1});
    }
  }

  std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (vertex, hedge idx)
  for (int i = 0; i < static_cast<int>(hedges.size()); ++i) {
    adj[hedges[i].a].push_back({hedges[i].b, i});
    adj[hedges[i].b].push_back({hedges[i].a, i});
  }

  std::vector<int> state(nv, 0);  // 0 unseen, 1 on stack path, 2 done
  std::vector<int> parent_vertex(nv, -1), parent_hedge(nv, -1);
  for (int start = 0; start < nv; ++start) {
    if (state[start] != 0) continue;
    std::vector<std::pair<int, std::size_t>> stack;  // (vertex, next nbr idx)
    state[start] = 1;
    stack.push_back({start, 0});
    while (!stack.empty()) {
      auto& [u, it] = stack.back();
      if (it >= adj[u].size()) {
        state[u] = 2;
        stack.pop_back();
        continue;
      }
      auto [v, hi] = adj[u][it++];
      if (hi == parent_hedge[u]) continue;
      if (state[v] == 1) {
        // cycle: walk back from u to v
        if (witness) {
          witness->clear();
          if (hedges[hi].crossing >= 0) witness->push_back(hedges[hi].crossing);
          int x = u;
          while (x != v) {
            int he = parent_hedge[x];
            if (hedges[he].crossing >= 0)
              witness->push_back(hedges[he].crossing);
            x = parent_vertex[x];
          }
          std::sort(witness->begin(), witness->end());
          witness->erase(std::unique(witness->begin(), witness->end()),
                         witness->end());
        }
        return false;
      }
      if (state[v] == 0) {
        state[v] = 1;
        parent_vertex[v] = u;
        parent_hedge[v] = hi;
        stack.push_back({v, 0});
      }
    }
  }
  return true;
}

PolarizedResult polarized_orient(const Net& net) {
  if (!net.is_atomic()) throw NotAtomic("polarized orientation needs atomic net");
  // node-level adjacency under the polarized orientation
  std::map<NodeId, std::vector<NodeId>> succ;
  std::map<NodeId, int> indeg;
  for (const auto& [id, n] : net.nodes()) {
    succ[id];
    indeg[id];
  }
  for (const auto& [id, e] : net.edges()) {
    if (!e.src || !e.dst) continue;
    NodeId from = *e.src, to = *e.dst;
    if (e.label.atom_pol() == Pol::Neg) std::swap(from, to);
    succ[from].push_back(to);
    indeg[to]++;
  }

  PolarizedResult res;
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> q;
  std::map<NodeId, int> deg = indeg;
  for (const auto& [id, d] : deg)
    if (d == 0) q.push(id);
  while (!q.empty()) {
    NodeId u = q.top();
    q.pop();
    res.topo_order.push_back(u);
    for (NodeId v : succ[u])
      if (--deg[v] == 0) q.push(v);
  }
  if (res.topo_order.size() == net.nodes().size()) {
    res.is_dag = true;
    return res;
  }
  // Extract a directed cycle among unfinished nodes by walking predecessors
  // (every unfinished node keeps at least one unfinished predecessor).
  std::set<NodeId> remaining;
  for (const auto& [id, d] : deg)
    if (d > 0) remaining.insert(id);
  std::map<NodeId, std::vector<NodeId>> pred;
  for (const auto& [u, vs] : succ)
    for (NodeId v : vs)
      if (remaining.count(u) && remaining.count(v)) pred[v].push_back(u);
  NodeId cur = *remaining.begin();
  std::map<NodeId, int> seen;
  std::vector<NodeId> path;
  while (!seen.count(cur)) {
    seen[cur] = static_cast<int>(path.size());
    path.push_back(cur);
    cur = pred.at(cur).front();
  }
  res.cycle.assign(path.begin() + seen[cur], path.end());
  std::reverse(res.cycle.begin(), res.cycle.end());
  res.is_dag = false;
  return res;
}

bool edge_is_initial(const Net& net, EdgeId e) {
  const Edge& ed = net.edge(e);
  if (!ed.label.is_atomic()) throw NotAtomic("initiality needs atomic edge");
  return ed.label.atom_pol() == Pol::Pos ? !ed.src : !ed.dst;
}

std::vector<MllComponent> connected_components(const Net& module) {
  for (const auto& [id, n] : module.nodes()) {
    if (n.kind == NodeKind::Box)
      throw NotMllAtomic("module contains a box");
    if (n.kind == NodeKind::Tensor || n.kind == NodeKind::Par ||
        n.kind == NodeKind::OneIntro || n.kind == NodeKind::BotIntro)
      throw NotMllAtomic("module contains a multiplicative connective");
  }
  if (!module.is_atomic()) throw NotMllAtomic("module has composite labels");

  // undirected reachability over nodes and edges
  std::map<EdgeId, int> comp_of_edge;
  std::map<NodeId, int> comp_of_node;
  int ncomp = 0;
  for (const auto& [eid, e] : module.edges()) {
    if (comp_of_edge.count(eid)) continue;
    int c = ncomp++;
    std::deque<EdgeId> work{eid};
    comp_of_edge[eid] = c;
    while (!work.empty()) {
      EdgeId cur = work.front();
      work.pop_front();
      const Edge& ce = module.edge(cur);
      for (std::optional<NodeId> endpt : {ce.src, ce.dst}) {
        if (!endpt) continue;
        if (comp_of_node.count(*endpt)) continue;
        comp_of_node[*endpt] = c;
        const Node& n = module.node(*endpt);
        for (EdgeId nxt : n.premises)
          if (!comp_of_edge.count(nxt)) {
            comp_of_edge[nxt] = c;
            work.push_back(nxt);
          }
        for (EdgeId nxt : n.conclusions)
          if (!comp_of_edge.count(nxt)) {
            comp_of_edge[nxt] = c;
            work.push_back(nxt);
          }
      }
    }
  }

  std::vector<MllComponent> comps(ncomp);
  for (const auto& [eid, c] : comp_of_edge) comps[c].edges.insert(eid);
  for (const auto& [nid, c] : comp_of_node) comps[c].nodes.insert(nid);

  for (MllComponent& comp : comps) {
    bool first = true;
    bool homogeneous = true;
    for (EdgeId e : comp.edges) {
      VariableId a = module.edge(e).label.atom_var();
      if (first) {
        comp.supporting_atom = a;
        first = false;
      } else if (!(a == comp.supporting_atom)) {
        homogeneous = false;
      }
      if (edge_is_initial(module, e)) comp.initial_edges.push_back(e);
    }
    if (!homogeneous)
      throw InternalInconsistency(
          "MLL component supported by more than one atom");

    // directed-tree shape: polarized-acyclic with a unique initial edge
    // from which every edge is reachable.
    comp.directed_tree = false;
    if (comp.initial_edges.size() == 1) {
      // local Kahn over the component's nodes
      std::map<NodeId, int> indeg;
      for (NodeId n : comp.nodes) indeg[n] = 0;
      for (EdgeId e : comp.edges) {
        const Edge& ce = module.edge(e);
        if (!ce.src || !ce.dst) continue;
        NodeId head = ce.label.atom_pol() == Pol::Pos ? *ce.dst : *ce.src;
        indeg[head]++;
      }
      std::deque<NodeId> q;
      for (const auto& [n, d] : indeg)
        if (d == 0) q.push_back(n);
      std::size_t done = 0;
      std::map<NodeId, std::vector<NodeId>> succ;
      for (EdgeId e : comp.edges) {
        const Edge& ce = module.edge(e);
        if (!ce.src || !ce.dst) continue;
        NodeId from = *ce.src, to = *ce.dst;
        if (ce.label.atom_pol() == Pol::Neg) std::swap(from, to);
        succ[from].push_back(to);
      }
      while (!q.empty()) {
        NodeId u = q.front();
        q.pop_front();
        done++;
        for (NodeId v : succ[u])
          if (--indeg[v] == 0) q.push_back(v);
      }
      bool acyclic = done == comp.nodes.size();

      std::set<EdgeId> reached;
      std::deque<EdgeId> work{comp.initial_edges.front()};
      reached.insert(comp.initial_edges.front());
      while (!work.empty()) {
        EdgeId cur = work.front();
        work.pop_front();
        const Edge& ce = module.edge(cur);
        std::optional<NodeId> head =
            ce.label.atom_pol() == Pol::Pos ? ce.dst : ce.src;
        if (!head) continue;
        const Node& n = module.node(*head);
        auto leaves = [&](EdgeId out) {
          const Edge& oe = module.edge(out);
          std::optional<NodeId> tail =
              oe.label.atom_pol() == Pol::Pos ? oe.src : oe.dst;
          return tail == head;
        };
        for (EdgeId nxt : n.premises)
          if (leaves(nxt) && reached.insert(nxt).second) work.push_back(nxt);
        for (EdgeId nxt : n.conclusions)
          if (leaves(nxt) && reached.insert(nxt).second) work.push_back(nxt);
      }
      comp.directed_tree = acyclic && reached.size() == comp.edges.size();
    }
  }
  return comps;
}

WellLabelledReport well_labelled(const Net& module) {
  std::vector<MllComponent> comps = connected_components(module);
  WellLabelledReport rep;

  // (1) any two edges supported by the same atom are connected
  {
    std::map<VariableId, int> comp_of_atom;
    rep.same_atom_edges_connected = true;
    for (int c = 0; c < static_cast<int>(comps.size()); ++c) {
      auto [it, fresh] =
          comp_of_atom.insert({comps[c].supporting_atom, c});
      if (!fresh) rep.same_atom_edges_connected = false;
    }
  }
  // (2) distinct components carry distinct atoms
  {
    std::set<VariableId> seen;
    rep.components_have_distinct_atoms = true;
    for (const MllComponent& c : comps)
      if (!seen.insert(c.supporting_atom).second)
        rep.components_have_distinct_atoms = false;
  }
  // (3) distinct initial edges carry distinct atoms
  {
    std::set<VariableId> seen;
    rep.initial_edges_distinct_atoms = true;
    for (const auto& [eid, e] : module.edges())
      if (edge_is_initial(module, eid) &&
          !seen.insert(e.label.atom_var()).second)
        rep.initial_edges_distinct_atoms = false;
  }
  // (4) positive atomic formulas in premises and dualized conclusions are
  // pairwise distinct
  {
    std::set<VariableId> seen;
    rep.interface_positives_distinct = true;
    for (const auto& [eid, e] : module.edges()) {
      bool counts = (!e.src && e.label.atom_pol() == Pol::Pos) ||
                    (!e.dst && e.label.atom_pol() == Pol::Neg);
      if (counts && !seen.insert(e.label.atom_var()).second)
        rep.interface_positives_distinct = false;
    }
  }

  if (rep.same_atom_edges_connected != rep.components_have_distinct_atoms ||
      rep.same_atom_edges_connected != rep.initial_edges_distinct_atoms ||
      rep.same_atom_edges_connected != rep.interface_positives_distinct)
    throw InternalInconsistency(
        "the four well-labelling conditions disagree");
  rep.verdict = rep.same_atom_edges_connected;
  return rep;
}

BpnReport is_bpn(const Net& net) {
  if (!net.is_atomic()) throw NotAtomic("bpn check needs an atomic net");
  BpnReport rep;

  if (!net.premises().empty())
    rep.violations.push_back("net has pending premises (not a proof-net)");

  {
    std::set<VariableId> seen;
    rep.repetition_free_conclusions = true;
    for (EdgeId c : net.conclusions()) {
      VariableId a = net.edge(c).label.atom_var();
      if (!seen.insert(a).second) {
        rep.repetition_free_conclusions = false;
        rep.violations.push_back("conclusions repeat atom " + a.name());
      }
    }
  }
  rep.repetition_free_box_interfaces = true;
  for (NodeId b : net.nodes_of_kind(NodeKind::Box)) {
    std::set<VariableId> seen;
    for (EdgeId c : net.node(b).conclusions) {
      VariableId a = net.edge(c).label.atom_var();
      if (!seen.insert(a).second) {
        rep.repetition_free_box_interfaces = false;
        rep.violations.push_back("box #" + std::to_string(b) +
                                 " interface repeats atom " + a.name());
      }
    }
  }
  rep.unique_positive_per_atom = true;
  {
    std::set<VariableId> box_positive;
    for (NodeId b : net.nodes_of_kind(NodeKind::Box)) {
      VariableId a = net.edge(net.box_positive(b)).label.atom_var();
      if (!box_positive.insert(a).second) {
        rep.unique_positive_per_atom = false;
        rep.violations.push_back("two boxes output " + a.name() + "+");
      }
    }
    for (EdgeId c : net.conclusions()) {
      const Formula& f = net.edge(c).label;
      if (f.atom_pol() == Pol::Neg && box_positive.count(f.atom_var())) {
        rep.unique_positive_per_atom = false;
        rep.violations.push_back(f.atom_var().name() +
                                 "- appears in the conclusions but " +
                                 f.atom_var().name() + "+ is a box output");
      }
    }
  }

  rep.is_bpn = rep.violations.empty();

  // Cross-check against the characterization through well-labelling of the
  // box-free module, which applies when the interfaces are repetition-free.
  if (rep.repetition_free_conclusions && rep.repetition_free_box_interfaces &&
      net.premises().empty()) {
    Decomposition d = decompose(net);
    bool wl = well_labelled(d.module).verdict;
    if (wl != rep.unique_positive_per_atom)
      throw InternalInconsistency(
          "bpn interface conditions disagree with module well-labelling");
  }
  return rep;
}

BoxDag bnet(const Net& net) {
  PolarizedResult pr = polarized_orient(net);
  if (!pr.is_dag) throw NotAtomic("bnet needs a polarized-acyclic net");

  BoxDag dag;
  std::map<NodeId, std::vector<NodeId>> succ;
  for (const auto& [id, n] : net.nodes()) succ[id];
  for (const auto& [id, e] : net.edges()) {
    if (!e.src || !e.dst) continue;
    NodeId from = *e.src, to = *e.dst;
    if (e.label.atom_pol() == Pol::Neg) std::swap(from, to);
    succ[from].push_back(to);
  }

  for (NodeId b : net.nodes_of_kind(NodeKind::Box)) {
    dag.boxes.push_back(b);
    dag.box_atom[b] = net.edge(net.box_positive(b)).label.atom_var();
    dag.parents[b];
  }
  for (NodeId b : dag.boxes) {
    // walk forward, stopping at boxes; each first-reached box is a child
    std::set<NodeId> seen{b};
    std::deque<NodeId> work{b};
    while (!work.empty()) {
      NodeId u = work.front();
      work.pop_front();
      for (NodeId v : succ[u]) {
        if (!seen.insert(v).second) continue;
        if (net.node(v).kind == NodeKind::Box) {
          dag.parents[v].push_back(b);
        } else {
          work.push_back(v);
        }
      }
    }
  }
  for (auto& [b, ps] : dag.parents) std::sort(ps.begin(), ps.end());
  return dag;
}

std::set<VariableId> internal_atoms(const Net& net) {
  std::set<VariableId> all = net.atoms();
  for (VariableId v : net.conclusion_atoms()) all.erase(v);
  return all;
}

Decomposition decompose(const Net& net) {
  Decomposition d;
  d.module = net;
  for (NodeId b : net.nodes_of_kind(NodeKind::Box)) {
    d.boxes.push_back(b);
    std::vector<EdgeId> conclusions = net.node(b).conclusions;
    for (EdgeId c : conclusions) d.module.set_src(c, std::nullopt);
    d.module.remove_node(b);
  }
  return d;
}

Net glue(const Net& original, const Decomposition& d) {
  Net g = d.module;
  for (NodeId b : d.boxes) {
    NodeId nb = g.add_node(NodeKind::Box);
    for (EdgeId c : original.node(b).conclusions) g.set_src(c, nb);
  }
  return g;
}

namespace {

struct IsoState {
  const Net& a;
  const Net& b;
  std::map<NodeId, NodeId> ab;
  std::map<NodeId, NodeId> ba;

  bool compatible(NodeId na, NodeId nb) const {
    const Node& x = a.node(na);
    const Node& y = b.node(nb);
    if (x.kind != y.kind) return false;
    if (x.premises.size() != y.premises.size()) return false;
    if (x.conclusions.size() != y.conclusions.size()) return false;
    auto sig = [](const Net& n, const Node& nd) {
      std::vector<std::string> s;
      for (EdgeId e : nd.premises)
        s.push_back("p" + n.edge(e).label.to_string());
      for (EdgeId e : nd.conclusions)
        s.push_back("c" + n.edge(e).label.to_string());
      std::sort(s.begin(), s.end());
      return s;
    };
    return sig(a, x) == sig(b, y);
  }

  // multiset of labelled edges between mapped pairs must agree
  bool edges_consistent() const {
    auto count = [](const Net& n, NodeId u, std::optional<NodeId> v,
                    const std::string& lbl) {
      int c = 0;
      for (EdgeId e : n.node(u).conclusions) {
        const Edge& ed = n.edge(e);
        if (ed.dst == v && ed.label.to_string() == lbl) c++;
      }
      return c;
    };
    for (const auto& [na, nb] : ab) {
      for (EdgeId e : a.node(na).conclusions) {
        const Edge& ea = a.edge(e);
        std::optional<NodeId> da = ea.dst;
        if (da && !ab.count(*da)) continue;  // endpoint not mapped yet
        std::optional<NodeId> db =
            da ? std::optional<NodeId>(ab.at(*da)) : std::nullopt;
        if (count(a, na, da, ea.label.to_string()) !=
            count(b, nb, db, ea.label.to_string()))
          return false;
      }
    }
    return true;
  }
};

bool iso_search(IsoState& st, const std::vector<NodeId>& order,
                std::size_t idx) {
  if (idx == order.size()) return st.edges_consistent();
  NodeId na = order[idx];
  if (st.ab.count(na)) return iso_search(st, order, idx + 1);
  for (const auto& [nb, node_b] : st.b.nodes()) {
    if (st.ba.count(nb)) continue;
    if (!st.compatible(na, nb)) continue;
    st.ab[na] = nb;
    st.ba[nb] = na;
    if (st.edges_consistent() && iso_search(st, order, idx + 1)) return true;
    st.ab.erase(na);
    st.ba.erase(nb);
  }
  return false;
}

}  // namespace

bool net_isomorphic(const Net& a, const Net& b) {
  if (a.nodes().size() != b.nodes().size()) return false;
  if (a.edges().size() != b.edges().size()) return false;
  if (a.conclusions().size() != b.conclusions().size()) return false;
  for (std::size_t i = 0; i < a.conclusions().size(); ++i) {
    if (a.edge(a.conclusions()[i]).label.to_string() !=
        b.edge(b.conclusions()[i]).label.to_string())
      return false;
  }

  IsoState st{a, b, {}, {}};

  // conclusion order forces endpoint pairs
  for (std::size_t i = 0; i < a.conclusions().size(); ++i) {
    const Edge& ea = a.edge(a.conclusions()[i]);
    const Edge& eb = b.edge(b.conclusions()[i]);
    if (ea.src.has_value() != eb.src.has_value()) return false;
    if (ea.src) {
      auto it = st.ab.find(*ea.src);
      if (it != st.ab.end()) {
        if (it->second != *eb.src) return false;
      } else {
        if (st.ba.count(*eb.src)) return false;
        if (!st.compatible(*ea.src, *eb.src)) return false;
        st.ab[*ea.src] = *eb.src;
        st.ba[*eb.src] = *ea.src;
      }
    }
  }
  if (!st.edges_consistent()) return false;

  std::vector<NodeId> order;
  for (const auto& [id, n] : a.nodes()) order.push_back(id);
  return iso_search(st, order, 0);
}

}  // namespace bpn
