#include "bpn/net.hpp"

#include <algorithm>
#include <sstream>

#include "bpn/errors.hpp"
#include "json.hpp"

namespace bpn {

std::string kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::Ax: return "ax";
    case NodeKind::Box: return "box";
    case NodeKind::Cut: return "cut";
    case NodeKind::Tensor: return "tensor";
    case NodeKind::Par: return "par";
    case NodeKind::Contraction: return "@";
    case NodeKind::Weakening: return "w";
    case NodeKind::OneIntro: return "one";
    case NodeKind::BotIntro: return "bot";
  }
  throw InternalInconsistency("bad node kind");
}

NodeKind kind_from_name(const std::string& s) {
  if (s == "ax") return NodeKind::Ax;
  if (s == "box") return NodeKind::Box;
  if (s == "cut") return NodeKind::Cut;
  if (s == "tensor") return NodeKind::Tensor;
  if (s == "par") return NodeKind::Par;
  if (s == "@" || s == "contr") return NodeKind::Contraction;
  if (s == "w" || s == "weak") return NodeKind::Weakening;
  if (s == "one" || s == "1") return NodeKind::OneIntro;
  if (s == "bot") return NodeKind::BotIntro;
  throw ParseError("unknown node kind: " + s);
}

NodeId Net::add_node(NodeKind kind) {
  NodeId id = next_node_++;
  nodes_[id] = Node{kind, {}, {}};
  return id;
}

EdgeId Net::add_edge(Formula label, std::optional<NodeId> src,
                     std::optional<NodeId> dst) {
  EdgeId id = next_edge_++;
  edges_[id] = Edge{src, dst, std::move(label)};
  if (src) nodes_.at(*src).conclusions.push_back(id);
  if (dst)
    nodes_.at(*dst).premises.push_back(id);
  else
    conclusions_.push_back(id);
  return id;
}

void Net::set_dst(EdgeId e, std::optional<NodeId> dst) {
  Edge& ed = edges_.at(e);
  if (ed.dst) {
    auto& ps = nodes_.at(*ed.dst).premises;
    ps.erase(std::find(ps.begin(), ps.end(), e));
  } else {
    conclusions_.erase(std::find(conclusions_.begin(), conclusions_.end(), e));
  }
  ed.dst = dst;
  if (dst)
    nodes_.at(*dst).premises.push_back(e);
  else
    conclusions_.push_back(e);
}

void Net::set_src(EdgeId e, std::optional<NodeId> src) {
  Edge& ed = edges_.at(e);
  if (ed.src) {
    auto& cs = nodes_.at(*ed.src).conclusions;
    cs.erase(std::find(cs.begin(), cs.end(), e));
  }
  ed.src = src;
  if (src) nodes_.at(*src).conclusions.push_back(e);
}

void Net::replace_premise(NodeId n, EdgeId from, EdgeId to) {
  Edge& ef = edges_.at(from);
  Edge& et = edges_.at(to);
  if (ef.dst != n) throw InternalInconsistency("replace_premise: bad source");
  auto& ps = nodes_.at(n).premises;
  auto it = std::find(ps.begin(), ps.end(), from);
  if (et.dst) {
    auto& pd = nodes_.at(*et.dst).premises;
    pd.erase(std::find(pd.begin(), pd.end(), to));
  } else {
    conclusions_.erase(std::find(conclusions_.begin(), conclusions_.end(), to));
  }
  *it = to;
  et.dst = n;
  ef.dst = std::nullopt;
  conclusions_.push_back(from);
}

void Net::detach_edge(EdgeId e) {
  Edge& ed = edges_.at(e);
  if (ed.src) {
    auto& cs = nodes_.at(*ed.src).conclusions;
    cs.erase(std::find(cs.begin(), cs.end(), e));
    ed.src = std::nullopt;
  }
  if (ed.dst) {
    auto& ps = nodes_.at(*ed.dst).premises;
    ps.erase(std::find(ps.begin(), ps.end(), e));
    ed.dst = std::nullopt;
  } else {
    auto it = std::find(conclusions_.begin(), conclusions_.end(), e);
    if (it != conclusions_.end()) conclusions_.erase(it);
  }
}

void Net::take_over_target(EdgeId upper, EdgeId lower) {
  if (!(edges_.at(upper).label == edges_.at(lower).label))
    throw InternalInconsistency("take_over_target with different labels");
  std::optional<NodeId> up_dst = edges_.at(upper).dst;
  std::optional<NodeId> lo_dst = edges_.at(lower).dst;
  if (up_dst) {
    auto& ps = nodes_.at(*up_dst).premises;
    ps.erase(std::find(ps.begin(), ps.end(), upper));
  } else {
    conclusions_.erase(std::find(conclusions_.begin(), conclusions_.end(), upper));
  }
  if (lo_dst) {
    auto& ps = nodes_.at(*lo_dst).premises;
    *std::find(ps.begin(), ps.end(), lower) = upper;
  } else {
    *std::find(conclusions_.begin(), conclusions_.end(), lower) = upper;
  }
  edges_.at(upper).dst = lo_dst;
  edges_.at(lower).dst = std::nullopt;
}

EdgeId Net::split_target(EdgeId e, NodeId new_src) {
  std::optional<NodeId> dst = edges_.at(e).dst;
  Formula label = edges_.at(e).label;
  EdgeId ne = next_edge_++;
  edges_[ne] = Edge{new_src, dst, label};
  nodes_.at(new_src).conclusions.push_back(ne);
  if (dst) {
    auto& ps = nodes_.at(*dst).premises;
    *std::find(ps.begin(), ps.end(), e) = ne;
  } else {
    *std::find(conclusions_.begin(), conclusions_.end(), e) = ne;
  }
  edges_.at(e).dst = std::nullopt;
  return ne;
}

void Net::remove_edge(EdgeId e) {
  Edge& ed = edges_.at(e);
  if (ed.src || ed.dst)
    throw InternalInconsistency("remove_edge: still attached");
  auto it = std::find(conclusions_.begin(), conclusions_.end(), e);
  if (it != conclusions_.end()) conclusions_.erase(it);
  edges_.erase(e);
}

void Net::remove_node(NodeId n) {
  const Node& nd = nodes_.at(n);
  if (!nd.premises.empty() || !nd.conclusions.empty())
    throw InternalInconsistency("remove_node: still has incident edges");
  nodes_.erase(n);
}

const Node& Net::node(NodeId n) const {
  auto it = nodes_.find(n);
  if (it == nodes_.end()) throw InternalInconsistency("unknown node id");
  return it->second;
}

const Edge& Net::edge(EdgeId e) const {
  auto it = edges_.find(e);
  if (it == edges_.end()) throw InternalInconsistency("unknown edge id");
  return it->second;
}

void Net::set_conclusion_order(std::vector<EdgeId> order) {
  std::vector<EdgeId> sorted_new = order;
  std::sort(sorted_new.begin(), sorted_new.end());
  std::vector<EdgeId> sorted_old = conclusions_;
  std::sort(sorted_old.begin(), sorted_old.end());
  if (sorted_new != sorted_old)
    throw InternalInconsistency("conclusion order must be a permutation");
  conclusions_ = std::move(order);
}

std::vector<EdgeId> Net::premises() const {
  std::vector<EdgeId> out;
  for (const auto& [id, e] : edges_)
    if (!e.src) out.push_back(id);
  return out;
}

std::vector<NodeId> Net::nodes_of_kind(NodeKind k) const {
  std::vector<NodeId> out;
  for (const auto& [id, n] : nodes_)
    if (n.kind == k) out.push_back(id);
  return out;
}

bool Net::is_atomic() const {
  for (const auto& [id, e] : edges_)
    if (!e.label.is_atomic()) return false;
  return true;
}

std::set<VariableId> Net::atoms() const {
  std::set<VariableId> out;
  for (const auto& [id, e] : edges_) {
    // collect atoms of the label tree
    std::vector<Formula> stack{e.label};
    while (!stack.empty()) {
      Formula f = stack.back();
      stack.pop_back();
      switch (f.kind()) {
        case Formula::Kind::Atom:
          out.insert(f.atom_var());
          break;
        case Formula::Kind::Tensor:
        case Formula::Kind::Par:
          stack.push_back(f.left());
          stack.push_back(f.right());
          break;
        default:
          break;
      }
    }
  }
  return out;
}

std::set<VariableId> Net::conclusion_atoms() const {
  std::set<VariableId> out;
  for (EdgeId c : conclusions_) {
    std::vector<Formula> stack{edge(c).label};
    while (!stack.empty()) {
      Formula f = stack.back();
      stack.pop_back();
      switch (f.kind()) {
        case Formula::Kind::Atom:
          out.insert(f.atom_var());
          break;
        case Formula::Kind::Tensor:
        case Formula::Kind::Par:
          stack.push_back(f.left());
          stack.push_back(f.right());
          break;
        default:
          break;
      }
    }
  }
  return out;
}

EdgeId Net::box_positive(NodeId box) const {
  const Node& b = node(box);
  if (b.kind != NodeKind::Box)
    throw InternalInconsistency("box_positive on non-box");
  for (EdgeId c : b.conclusions) {
    const Formula& f = edge(c).label;
    if (f.is_atomic() && f.atom_pol() == Pol::Pos) return c;
  }
  throw LabelMismatch("box without positive conclusion");
}

std::string Net::to_json() const {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& [id, n] : nodes_) {
    j["nodes"].push_back({{"id", id}, {"kind", kind_name(n.kind)}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& [id, e] : edges_) {
    nlohmann::ordered_json je;
    je["id"] = id;
    if (e.src)
      je["src"] = *e.src;
    else
      je["src"] = "pending";
    if (e.dst)
      je["dst"] = *e.dst;
    else
      je["dst"] = "pending";
    if (e.label.is_atomic()) {
      je["atom"] = e.label.atom_var().name();
      je["pol"] = e.label.atom_pol() == Pol::Pos ? "+" : "-";
    } else {
      je["label"] = e.label.to_string();
    }
    j["edges"].push_back(je);
  }
  j["conclusions"] = conclusions_;
  return j.dump(2) + "\n";
}

Net Net::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  Net net;
  try {
    for (const auto& jn : j.at("nodes")) {
      NodeId id = jn.at("id").get<NodeId>();
      if (net.nodes_.count(id)) throw ParseError("duplicate node id");
      net.nodes_[id] = Node{kind_from_name(jn.at("kind").get<std::string>()),
                            {}, {}};
      net.next_node_ = std::max(net.next_node_, id + 1);
    }
    for (const auto& je : j.at("edges")) {
      EdgeId id = je.at("id").get<EdgeId>();
      if (net.edges_.count(id)) throw ParseError("duplicate edge id");
      Formula label;
      if (je.contains("label")) {
        label = Formula::parse(je.at("label").get<std::string>());
      } else {
        std::string atom = je.at("atom").get<std::string>();
        std::string pol = je.at("pol").get<std::string>();
        if (pol != "+" && pol != "-") throw ParseError("pol must be + or -");
        label = Formula::atom(VariableId::intern(atom),
                              pol == "+" ? Pol::Pos : Pol::Neg);
      }
      std::optional<NodeId> src, dst;
      const auto& js = je.at("src");
      const auto& jd = je.at("dst");
      if (js.is_number_integer()) src = js.get<NodeId>();
      else if (js.get<std::string>() != "pending")
        throw ParseError("src must be a node id or \"pending\"");
      if (jd.is_number_integer()) dst = jd.get<NodeId>();
      else if (jd.get<std::string>() != "pending")
        throw ParseError("dst must be a node id or \"pending\"");
      if (src && !net.nodes_.count(*src)) throw ParseError("unknown src node");
      if (dst && !net.nodes_.count(*dst)) throw ParseError("unknown dst node");
      net.edges_[id] = Edge{src, dst, label};
      net.next_edge_ = std::max(net.next_edge_, id + 1);
    }
    // Node premise/conclusion lists in ascending edge id order.
    for (const auto& [id, e] : net.edges_) {
      if (e.src) net.nodes_.at(*e.src).conclusions.push_back(id);
      if (e.dst) net.nodes_.at(*e.dst).premises.push_back(id);
    }
    std::vector<EdgeId> pending;
    for (const auto& [id, e] : net.edges_)
      if (!e.dst) pending.push_back(id);
    if (j.contains("conclusions")) {
      std::vector<EdgeId> order = j.at("conclusions").get<std::vector<EdgeId>>();
      std::vector<EdgeId> sorted = order;
      std::sort(sorted.begin(), sorted.end());
      if (sorted != pending)
        throw ParseError("conclusions must list exactly the pending-target edges");
      net.conclusions_ = order;
    } else {
      net.conclusions_ = pending;
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad net JSON: ") + e.what());
  }
  return net;
}

std::string Net::to_dot() const {
  std::ostringstream os;
  os << "digraph net {\n  rankdir=TB;\n";
  for (const auto& [id, n] : nodes_) {
    std::string shape = "ellipse";
    if (n.kind == NodeKind::Box) shape = "box";
    if (n.kind == NodeKind::Cut) shape = "point";
    os << "  n" << id << " [label=\"" << kind_name(n.kind) << " #" << id
       << "\", shape=" << shape << "];\n";
  }
  int pend = 0;
  for (const auto& [id, e] : edges_) {
    std::string from = e.src ? "n" + std::to_string(*e.src)
                             : "p" + std::to_string(pend++);
    if (!e.src)
      os << "  " << from << " [shape=none, label=\"\"];\n";
    std::string to = e.dst ? "n" + std::to_string(*e.dst)
                           : "p" + std::to_string(pend++);
    if (!e.dst)
      os << "  " << to << " [shape=none, label=\"\"];\n";
    os << "  " << from << " -> " << to << " [label=\"" << e.label.to_string()
       << " #" << id << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace bpn
