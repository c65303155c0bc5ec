#include "bpn/rewrite.hpp"

#include <algorithm>

#include "bpn/errors.hpp"
#include "bpn/net_analysis.hpp"

namespace bpn {

std::string rule_name(RuleKind r) {
  switch (r) {
    case RuleKind::AxCut: return "ax";
    case RuleKind::CW: return "c.w";
    case RuleKind::CAss: return "c.ass";
    case RuleKind::CId: return "c.id";
    case RuleKind::TensorPar: return "tensor.par";
    case RuleKind::AxExpand: return "ax.exp";
    case RuleKind::CWExpand: return "c.w.exp";
    case RuleKind::CAssExpand: return "c.ass.exp";
  }
  throw InternalInconsistency("bad rule kind");
}

namespace {

// upper keeps its source, absorbs lower's target (or conclusion slot);
// lower disappears.
void splice(Net& net, EdgeId upper, EdgeId lower) {
  net.take_over_target(upper, lower);
  net.set_src(lower, std::nullopt);
  net.remove_edge(lower);
}

bool is_kind(const Net& net, int id, NodeKind k) {
  return net.has_node(id) && net.node(id).kind == k;
}

}  // namespace

std::vector<Redex> find_redexes(const Net& net) {
  std::vector<Redex> out;
  for (const auto& [id, n] : net.nodes()) {
    switch (n.kind) {
      case NodeKind::Cut: {
        const Edge& p0 = net.edge(n.premises[0]);
        const Edge& p1 = net.edge(n.premises[1]);
        // ax against cut, skipping the two-conclusion self loop
        for (int side = 0; side < 2; ++side) {
          const Edge& pe = side == 0 ? p0 : p1;
          const Edge& other = side == 0 ? p1 : p0;
          if (pe.src && net.node(*pe.src).kind == NodeKind::Ax &&
              other.src != pe.src)
            out.push_back({RuleKind::AxCut, {id, *pe.src}});
        }
        if (p0.src && p1.src) {
          NodeKind k0 = net.node(*p0.src).kind;
          NodeKind k1 = net.node(*p1.src).kind;
          if (k0 == NodeKind::Tensor && k1 == NodeKind::Par)
            out.push_back({RuleKind::TensorPar, {id, *p0.src, *p1.src}});
          else if (k0 == NodeKind::Par && k1 == NodeKind::Tensor)
            out.push_back({RuleKind::TensorPar, {id, *p1.src, *p0.src}});
        }
        break;
      }
      case NodeKind::Contraction: {
        if (n.premises.size() == 1) {
          out.push_back({RuleKind::CId, {id}});
          break;
        }
        for (EdgeId p : n.premises) {
          const Edge& pe = net.edge(p);
          if (pe.src && net.node(*pe.src).kind == NodeKind::Weakening)
            out.push_back({RuleKind::CW, {id, *pe.src}});
        }
        const Edge& second = net.edge(n.premises[1]);
        if (second.src && net.node(*second.src).kind == NodeKind::Contraction)
          out.push_back({RuleKind::CAss, {id, *second.src}});
        break;
      }
      default:
        break;
    }
  }
  std::sort(out.begin(), out.end(), [](const Redex& a, const Redex& b) {
    if (a.sites != b.sites) return a.sites < b.sites;
    return static_cast<int>(a.rule) < static_cast<int>(b.rule);
  });
  return out;
}

namespace {

void apply_ax_cut(Net& net, const Redex& r) {
  NodeId cut = r.sites[0], ax = r.sites[1];
  if (!is_kind(net, cut, NodeKind::Cut) || !is_kind(net, ax, NodeKind::Ax))
    throw StaleRedex("ax-cut sites vanished");
  const Node& k = net.node(cut);
  EdgeId a_cut = -1, p = -1;
  for (EdgeId pe : k.premises) {
    if (net.edge(pe).src == std::optional<NodeId>(ax))
      a_cut = pe;
    else
      p = pe;
  }
  if (a_cut < 0 || p < 0) throw StaleRedex("cut no longer meets this ax");
  EdgeId a_other = -1;
  for (EdgeId ce : net.node(ax).conclusions)
    if (ce != a_cut) a_other = ce;
  if (a_other < 0) throw StaleRedex("degenerate ax");

  net.detach_edge(a_cut);
  net.remove_edge(a_cut);
  splice(net, p, a_other);
  net.remove_node(cut);
  net.remove_node(ax);
}

void apply_cw(Net& net, const Redex& r) {
  NodeId contr = r.sites[0], weak = r.sites[1];
  if (!is_kind(net, contr, NodeKind::Contraction) ||
      !is_kind(net, weak, NodeKind::Weakening))
    throw StaleRedex("c.w sites vanished");
  const Node& c = net.node(contr);
  if (c.premises.size() != 2) throw StaleRedex("contraction arity changed");
  EdgeId pw = -1, q = -1;
  for (EdgeId pe : c.premises) {
    if (net.edge(pe).src == std::optional<NodeId>(weak))
      pw = pe;
    else
      q = pe;
  }
  if (pw < 0 || q < 0) throw StaleRedex("contraction no longer meets this w");
  EdgeId concl = c.conclusions[0];

  net.detach_edge(pw);
  net.remove_edge(pw);
  net.remove_node(weak);
  splice(net, q, concl);
  net.remove_node(contr);
}

void apply_cid(Net& net, const Redex& r) {
  NodeId contr = r.sites[0];
  if (!is_kind(net, contr, NodeKind::Contraction))
    throw StaleRedex("c.id site vanished");
  const Node& c = net.node(contr);
  if (c.premises.size() != 1) throw StaleRedex("contraction is not unary");
  splice(net, c.premises[0], c.conclusions[0]);
  net.remove_node(contr);
}

void apply_cass(Net& net, const Redex& r) {
  NodeId outer = r.sites[0], inner = r.sites[1];
  if (!is_kind(net, outer, NodeKind::Contraction) ||
      !is_kind(net, inner, NodeKind::Contraction))
    throw StaleRedex("c.ass sites vanished");
  const Node& o = net.node(outer);
  if (o.premises.size() != 2 ||
      net.edge(o.premises[1]).src != std::optional<NodeId>(inner))
    throw StaleRedex("contractions no longer nested");
  const Node& i = net.node(inner);
  if (i.premises.size() != 2) throw StaleRedex("inner contraction not binary");

  EdgeId a = o.premises[0];
  EdgeId mid = o.premises[1];  // conclusion of inner
  EdgeId b = i.premises[0];
  EdgeId c = i.premises[1];
  EdgeId oc = o.conclusions[0];
  Formula label = net.edge(oc).label;

  // @(a, @(b,c)) -> @(@(a,b), c)
  NodeId ni = net.add_node(NodeKind::Contraction);
  NodeId no = net.add_node(NodeKind::Contraction);
  net.set_dst(a, ni);
  net.set_dst(b, ni);
  EdgeId nmid = net.add_edge(label, ni, no);
  (void)nmid;
  net.set_dst(c, no);
  net.set_src(oc, no);

  net.detach_edge(mid);
  net.remove_edge(mid);
  net.remove_node(outer);
  net.remove_node(inner);
}

void apply_tensor_par(Net& net, const Redex& r) {
  NodeId cut = r.sites[0], tnode = r.sites[1], pnode = r.sites[2];
  if (!is_kind(net, cut, NodeKind::Cut) ||
      !is_kind(net, tnode, NodeKind::Tensor) ||
      !is_kind(net, pnode, NodeKind::Par))
    throw StaleRedex("tensor/par sites vanished");
  const Node& k = net.node(cut);
  EdgeId ct = -1, cp = -1;
  for (EdgeId pe : k.premises) {
    if (net.edge(pe).src == std::optional<NodeId>(tnode)) ct = pe;
    if (net.edge(pe).src == std::optional<NodeId>(pnode)) cp = pe;
  }
  if (ct < 0 || cp < 0) throw StaleRedex("cut no longer joins tensor and par");

  Formula f = net.edge(ct).label.left();
  const Node& t = net.node(tnode);
  const Node& p = net.node(pnode);
  EdgeId ta = t.premises[0], tb = t.premises[1];
  if (!(net.edge(ta).label == f)) std::swap(ta, tb);
  EdgeId pa = p.premises[0], pb = p.premises[1];
  if (!(net.edge(pa).label == f.dual())) std::swap(pa, pb);

  for (EdgeId e : {ct, cp}) {
    net.detach_edge(e);
    net.remove_edge(e);
  }
  NodeId k1 = net.add_node(NodeKind::Cut);
  net.set_dst(ta, k1);
  net.set_dst(pa, k1);
  NodeId k2 = net.add_node(NodeKind::Cut);
  net.set_dst(tb, k2);
  net.set_dst(pb, k2);
  net.remove_node(cut);
  net.remove_node(tnode);
  net.remove_node(pnode);
}

void apply_ax_expand(Net& net, const Redex& r) {
  EdgeId e = r.sites[0];
  if (!net.has_edge(e)) throw StaleRedex("edge vanished");
  Formula label = net.edge(e).label;
  NodeId ax = net.add_node(NodeKind::Ax);
  NodeId cut = net.add_node(NodeKind::Cut);
  net.split_target(e, ax);  // new edge continues to e's old target
  net.set_dst(e, cut);
  net.add_edge(label.dual(), ax, cut);
}

void apply_cw_expand(Net& net, const Redex& r) {
  EdgeId e = r.sites[0];
  if (!net.has_edge(e)) throw StaleRedex("edge vanished");
  Formula label = net.edge(e).label;
  if (!label.is_atomic() || label.atom_pol() != Pol::Neg)
    throw StaleRedex("c.w expansion needs a negative atomic edge");
  NodeId contr = net.add_node(NodeKind::Contraction);
  NodeId weak = net.add_node(NodeKind::Weakening);
  net.split_target(e, contr);
  net.set_dst(e, contr);
  net.add_edge(label, weak, contr);
}

void apply_cass_expand(Net& net, const Redex& r) {
  NodeId outer = r.sites[0];
  if (!is_kind(net, outer, NodeKind::Contraction))
    throw StaleRedex("c.ass expansion site vanished");
  const Node& o = net.node(outer);
  if (o.premises.size() != 2) throw StaleRedex("outer contraction not binary");
  const Edge& first = net.edge(o.premises[0]);
  if (!first.src || net.node(*first.src).kind != NodeKind::Contraction)
    throw StaleRedex("no left-nested contraction");
  NodeId inner = *first.src;
  const Node& i = net.node(inner);
  if (i.premises.size() != 2) throw StaleRedex("inner contraction not binary");

  EdgeId a = i.premises[0];
  EdgeId b = i.premises[1];
  EdgeId mid = o.premises[0];
  EdgeId c = o.premises[1];
  EdgeId oc = o.conclusions[0];
  Formula label = net.edge(oc).label;

  // @(@(a,b), c) -> @(a, @(b,c))
  NodeId ni = net.add_node(NodeKind::Contraction);
  NodeId no = net.add_node(NodeKind::Contraction);
  net.set_dst(b, ni);
  net.set_dst(c, ni);
  net.set_dst(a, no);
  EdgeId nmid = net.add_edge(label, ni, no);
  (void)nmid;
  net.set_src(oc, no);
  // keep premise order (a, inner-conclusion)
  net.detach_edge(mid);
  net.remove_edge(mid);
  net.remove_node(outer);
  net.remove_node(inner);
}

}  // namespace

Net apply(const Net& net, const Redex& redex) {
  Net out = net;
  switch (redex.rule) {
    case RuleKind::AxCut: apply_ax_cut(out, redex); break;
    case RuleKind::CW: apply_cw(out, redex); break;
    case RuleKind::CId: apply_cid(out, redex); break;
    case RuleKind::CAss: apply_cass(out, redex); break;
    case RuleKind::TensorPar: apply_tensor_par(out, redex); break;
    case RuleKind::AxExpand: apply_ax_expand(out, redex); break;
    case RuleKind::CWExpand: apply_cw_expand(out, redex); break;
    case RuleKind::CAssExpand: apply_cass_expand(out, redex); break;
  }
  return out;
}

NormalizeResult normalize(
    const Net& net,
    const std::function<std::size_t(const std::vector<Redex>&)>& choose) {
  NormalizeResult res{net, {}, 0};
  std::size_t limit = 10 * net.nodes().size() * net.nodes().size() + 16;
  for (;;) {
    std::vector<Redex> rs = find_redexes(res.net);
    if (rs.empty()) return res;
    if (res.steps >= limit)
      throw StepLimitExceeded("normalization exceeded the step guard");
    std::size_t pick = choose ? choose(rs) % rs.size() : 0;
    const Redex& r = rs[pick];
    std::string line = rule_name(r.rule);
    for (int s : r.sites) line += " " + std::to_string(s);
    res.trace.push_back(line);
    res.net = apply(res.net, r);
    res.steps++;
  }
}

Net ax_expand(const Net& net, EdgeId e) {
  return apply(net, {RuleKind::AxExpand, {e}});
}

Net cw_expand(const Net& net, EdgeId e) {
  return apply(net, {RuleKind::CWExpand, {e}});
}

Net cass_expand(const Net& net, NodeId outer) {
  return apply(net, {RuleKind::CAssExpand, {outer}});
}

Net hide(const Net& net, VariableId y) {
  EdgeId target = -1;
  for (EdgeId c : net.conclusions()) {
    const Formula& f = net.edge(c).label;
    if (f.is_atomic() && f.atom_var() == y && f.atom_pol() == Pol::Pos)
      target = c;
  }
  if (target < 0)
    throw NoSuchConclusion(y.name() + "+ is not a conclusion");
  Net out = net;
  NodeId weak = out.add_node(NodeKind::Weakening);
  NodeId cut = out.add_node(NodeKind::Cut);
  out.set_dst(target, cut);
  out.add_edge(Formula::atom(y, Pol::Neg), weak, cut);
  return out;
}

Net show(const Net& net, VariableId y) {
  if (!internal_atoms(net).count(y))
    throw NotInternal(y.name() + " is not an internal atom");
  // the lowest-id cut on y
  NodeId cut = -1;
  EdgeId neg = -1;
  for (const auto& [id, n] : net.nodes()) {
    if (n.kind != NodeKind::Cut) continue;
    const Formula& f = net.edge(n.premises[0]).label;
    if (!f.is_atomic() || f.atom_var() != y) continue;
    cut = id;
    neg = net.edge(n.premises[0]).label.atom_pol() == Pol::Neg
              ? n.premises[0]
              : n.premises[1];
    break;
  }
  if (cut < 0)
    throw NotInternal("no cut on " + y.name());

  Net out = net;
  std::optional<NodeId> nsrc = out.edge(neg).src;
  if (nsrc && out.node(*nsrc).kind == NodeKind::Weakening) {
    // Swap the weakening for an axiom whose positive side becomes the new
    // conclusion.
    NodeId ax = out.add_node(NodeKind::Ax);
    out.add_edge(Formula::atom(y, Pol::Pos), ax, std::nullopt);
    out.set_src(neg, ax);
    out.remove_node(*nsrc);
    return out;
  }
  // Route the negative premise through a fresh contraction fed by a new
  // axiom; the axiom's positive side becomes the new conclusion.
  NodeId contr = out.add_node(NodeKind::Contraction);
  NodeId ax = out.add_node(NodeKind::Ax);
  out.add_edge(Formula::atom(y, Pol::Pos), ax, std::nullopt);
  out.split_target(neg, contr);
  out.set_dst(neg, contr);
  out.add_edge(Formula::atom(y, Pol::Neg), ax, contr);
  return out;
}

}  // namespace bpn
