#include "bpn/bayes.hpp"

#include <algorithm>
#include <deque>

#include "bpn/errors.hpp"
#include "bpn/net_analysis.hpp"
#include "json.hpp"

namespace bpn {

std::uint64_t BayesNet::state_space() const {
  std::uint64_t s = 1;
  for (VariableId v : variables) {
    s *= domains.at(v).size();
    if (s > (std::uint64_t(1) << 62)) return s;  // saturate well above caps
  }
  return s;
}

BayesNet parse_bn(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  BayesNet bn;
  try {
    for (const auto& jv : j.at("variables")) {
      VariableId v = VariableId::intern(jv.at("name").get<std::string>());
      if (bn.domains.count(v)) throw SchemaError("duplicate variable " + v.name());
      Domain d;
      for (const auto& val : jv.at("values"))
        d.values.push_back(val.get<std::string>());
      if (d.values.empty()) throw SchemaError("empty domain for " + v.name());
      for (std::size_t i = 0; i < d.values.size(); ++i)
        for (std::size_t k = i + 1; k < d.values.size(); ++k)
          if (d.values[i] == d.values[k])
            throw SchemaError("duplicate value label for " + v.name());
      bn.variables.push_back(v);
      bn.domains[v] = d;
    }
    for (const auto& jc : j.at("cpts")) {
      VariableId child = VariableId::intern(jc.at("child").get<std::string>());
      if (!bn.domains.count(child))
        throw SchemaError("cpt for unknown variable " + child.name());
      if (bn.cpts.count(child))
        throw SchemaError("duplicate cpt for " + child.name());
      std::vector<VariableId> ps;
      for (const auto& jp : jc.at("parents")) {
        VariableId p = VariableId::intern(jp.get<std::string>());
        if (!bn.domains.count(p))
          throw UnknownParent(p.name() + " (parent of " + child.name() + ")");
        ps.push_back(p);
      }
      // rows: one per parent assignment, last listed parent fastest; each
      // row lists child values in domain order
      std::size_t nrows = 1;
      for (VariableId p : ps) nrows *= bn.domains[p].size();
      const auto& rows = jc.at("table");
      if (rows.size() != nrows)
        throw SchemaError("cpt for " + child.name() + " expects " +
                          std::to_string(nrows) + " rows, got " +
                          std::to_string(rows.size()));
      std::vector<double> flat;
      for (const auto& row : rows) {
        if (row.size() != bn.domains[child].size())
          throw SchemaError("cpt row width mismatch for " + child.name());
        for (const auto& x : row) flat.push_back(x.get<double>());
      }
      std::vector<VariableId> fvars = ps;
      fvars.push_back(child);
      std::vector<Domain> fdoms;
      for (VariableId v : fvars) fdoms.push_back(bn.domains[v]);
      Factor f = make_factor(fvars, fdoms, flat);
      validate_cpt(f, child, 1e-9);
      bn.parents[child] = ps;
      bn.cpts.insert({child, f});
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(std::string("bad BN JSON: ") + e.what());
  }
  for (VariableId v : bn.variables) {
    if (!bn.cpts.count(v)) throw SchemaError("missing cpt for " + v.name());
  }
  // acyclicity of the parent graph
  std::map<VariableId, int> indeg;
  for (VariableId v : bn.variables) indeg[v] = 0;
  for (const auto& [c, ps] : bn.parents) {
    (void)c;
    for (VariableId p : ps) indeg[p] += 0;  // ensure key
  }
  std::map<VariableId, std::vector<VariableId>> children;
  for (const auto& [c, ps] : bn.parents)
    for (VariableId p : ps) {
      children[p].push_back(c);
      indeg[c]++;
    }
  std::deque<VariableId> q;
  for (const auto& [v, d] : indeg)
    if (d == 0) q.push_back(v);
  std::size_t done = 0;
  while (!q.empty()) {
    VariableId u = q.front();
    q.pop_front();
    done++;
    for (VariableId c : children[u])
      if (--indeg[c] == 0) q.push_back(c);
  }
  if (done != bn.variables.size()) throw CycleInDag("parent graph is cyclic");
  return bn;
}

std::string bn_to_json(const BayesNet& bn) {
  nlohmann::ordered_json j;
  j["variables"] = nlohmann::ordered_json::array();
  for (VariableId v : bn.variables)
    j["variables"].push_back(
        {{"name", v.name()}, {"values", bn.domains.at(v).values}});
  j["cpts"] = nlohmann::ordered_json::array();
  for (VariableId v : bn.variables) {
    const std::vector<VariableId>& ps = bn.parents.at(v);
    nlohmann::ordered_json jc;
    jc["child"] = v.name();
    jc["parents"] = nlohmann::ordered_json::array();
    for (VariableId p : ps) jc["parents"].push_back(p.name());
    // rebuild the row layout from the canonical factor: one row per parent
    // assignment (last listed parent fastest), child values within a row
    const Factor& f = bn.cpts.at(v);
    std::size_t nrows = 1;
    for (VariableId p : ps) nrows *= bn.domains.at(p).size();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t r = 0; r < nrows; ++r) {
      Assignment a;
      std::size_t rest = r;
      for (std::size_t i = ps.size(); i-- > 0;) {
        std::size_t size = bn.domains.at(ps[i]).size();
        a.bind(ps[i], rest % size);
        rest /= size;
      }
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t c = 0; c < bn.domains.at(v).size(); ++c) {
        Assignment full = a;
        full.bind(v, c);
        row.push_back(f.at(full));
      }
      rows.push_back(row);
    }
    jc["table"] = rows;
    j["cpts"].push_back(jc);
  }
  return j.dump(2) + "\n";
}

bool bn_equivalent(const BayesNet& a, const BayesNet& b, double tol) {
  std::vector<VariableId> va = a.variables, vb = b.variables;
  std::sort(va.begin(), va.end());
  std::sort(vb.begin(), vb.end());
  if (va != vb) return false;
  for (VariableId v : va) {
    if (!(a.domains.at(v) == b.domains.at(v))) return false;
    std::vector<VariableId> pa = a.parents.at(v), pb = b.parents.at(v);
    std::sort(pa.begin(), pa.end());
    std::sort(pb.begin(), pb.end());
    if (pa != pb) return false;
    const Factor& fa = a.cpts.at(v);
    const Factor& fb = b.cpts.at(v);
    if (fa.vars() != fb.vars()) return false;
    for (std::size_t i = 0; i < fa.table().size(); ++i)
      if (std::abs(fa.table()[i] - fb.table()[i]) > tol) return false;
  }
  return true;
}

Factor joint(const BayesNet& bn, std::uint64_t cap) {
  if (bn.state_space() > cap)
    throw StateSpaceTooLarge("joint needs " +
                             std::to_string(bn.state_space()) +
                             " cells, cap is " + std::to_string(cap));
  std::vector<const Factor*> fs;
  for (VariableId v : bn.variables) fs.push_back(&bn.cpts.at(v));
  std::vector<VariableId> all = bn.variables;
  std::vector<Domain> doms;
  for (VariableId v : all) doms.push_back(bn.domains.at(v));
  return multiply_all(std::span<const Factor* const>(fs.data(), fs.size()),
                      all, doms);
}

CompileResult compile_bn(const BayesNet& bn, CompileMode mode) {
  CompileResult res;
  Net& net = res.net;

  std::map<VariableId, EdgeId> positive_out;           // box X+ edge
  std::map<VariableId, std::vector<EdgeId>> consumers;  // X- edges, in order
  for (VariableId v : bn.variables) {
    NodeId box = net.add_node(NodeKind::Box);
    res.box_of[v] = box;
    positive_out[v] = net.add_edge(Formula::atom(v, Pol::Pos), box, std::nullopt);
    for (VariableId p : bn.parents.at(v))
      consumers[p].push_back(
          net.add_edge(Formula::atom(p, Pol::Neg), box, std::nullopt));
  }

  auto left_comb = [&](VariableId v, const std::vector<EdgeId>& leaves) {
    EdgeId cur = leaves[0];
    for (std::size_t i = 1; i < leaves.size(); ++i) {
      NodeId c = net.add_node(NodeKind::Contraction);
      net.set_dst(cur, c);
      net.set_dst(leaves[i], c);
      cur = net.add_edge(Formula::atom(v, Pol::Neg), c, std::nullopt);
    }
    return cur;
  };

  for (VariableId v : bn.variables) {
    std::vector<EdgeId> leaves = consumers[v];
    if (mode == CompileMode::Positive) {
      if (leaves.empty()) continue;  // the box's X+ is already a conclusion
      // extra axiom leaf keeps X+ visible in the conclusions
      NodeId ax = net.add_node(NodeKind::Ax);
      net.add_edge(Formula::atom(v, Pol::Pos), ax, std::nullopt);
      leaves.push_back(
          net.add_edge(Formula::atom(v, Pol::Neg), ax, std::nullopt));
      EdgeId root = left_comb(v, leaves);
      NodeId cut = net.add_node(NodeKind::Cut);
      net.set_dst(positive_out[v], cut);
      net.set_dst(root, cut);
    } else {
      EdgeId root;
      if (leaves.empty()) {
        NodeId weak = net.add_node(NodeKind::Weakening);
        root = net.add_edge(Formula::atom(v, Pol::Neg), weak, std::nullopt);
      } else {
        root = left_comb(v, leaves);
      }
      NodeId cut = net.add_node(NodeKind::Cut);
      net.set_dst(positive_out[v], cut);
      net.set_dst(root, cut);
    }
  }

  if (mode == CompileMode::Positive) {
    // conclusions in declared variable order
    std::map<VariableId, int> idx;
    for (std::size_t i = 0; i < bn.variables.size(); ++i)
      idx[bn.variables[i]] = static_cast<int>(i);
    std::vector<EdgeId> order = net.conclusions();
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
      return idx[net.edge(a).label.atom_var()] <
             idx[net.edge(b).label.atom_var()];
    });
    net.set_conclusion_order(order);
  }

  for (VariableId v : bn.variables) {
    res.valuation.domains[v] = bn.domains.at(v);
    res.valuation.cpts.insert({res.box_of[v], bn.cpts.at(v)});
  }
  return res;
}

BayesNet extract_bn(const Net& net, const Valuation& valuation) {
  BpnReport rep = is_bpn(net);
  if (!rep.is_bpn) {
    std::string why = rep.violations.empty() ? "not a bpn" : rep.violations[0];
    throw NotBpn(why);
  }
  for (EdgeId c : net.conclusions())
    if (net.edge(c).label.atom_pol() != Pol::Pos)
      throw NotBpn("extraction needs a positive or empty-conclusion bpn");

  BoxDag dag = bnet(net);
  BayesNet bn;
  std::vector<std::pair<VariableId, NodeId>> order;
  for (NodeId b : dag.boxes) order.push_back({dag.box_atom.at(b), b});
  std::sort(order.begin(), order.end());

  for (const auto& [v, b] : order) {
    auto it = valuation.cpts.find(b);
    if (it == valuation.cpts.end())
      throw MissingValuation("no cpt for box #" + std::to_string(b));
    const Factor& f = it->second;

    std::vector<VariableId> ps;
    for (NodeId pb : dag.parents.at(b)) ps.push_back(dag.box_atom.at(pb));
    std::sort(ps.begin(), ps.end());

    std::vector<VariableId> want = ps;
    want.push_back(v);
    std::sort(want.begin(), want.end());
    if (f.vars() != want)
      throw ValuationMismatch("cpt scope for box #" + std::to_string(b) +
                              " does not match its interface");
    validate_cpt(f, v, 1e-9);
    auto dit = valuation.domains.find(v);
    if (dit == valuation.domains.end())
      throw MissingValuation("no domain for " + v.name());
    if (!(f.domain_of(v) == dit->second))
      throw ValuationMismatch("domain of " + v.name() +
                              " differs from its cpt");

    bn.variables.push_back(v);
    bn.domains[v] = dit->second;
    bn.parents[v] = ps;
    bn.cpts.insert({v, f});
  }
  return bn;
}

std::string Valuation::to_json() const {
  nlohmann::ordered_json j;
  j["domains"] = nlohmann::ordered_json::object();
  for (const auto& [v, d] : domains) j["domains"][v.name()] = d.values;
  j["boxes"] = nlohmann::ordered_json::array();
  for (const auto& [box, f] : cpts) {
    nlohmann::ordered_json jb;
    jb["box"] = box;
    jb["vars"] = nlohmann::ordered_json::array();
    for (VariableId v : f.vars()) jb["vars"].push_back(v.name());
    jb["table"] = f.table();
    j["boxes"].push_back(jb);
  }
  return j.dump(2) + "\n";
}

Valuation Valuation::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  Valuation val;
  try {
    for (const auto& [name, values] : j.at("domains").items()) {
      Domain d;
      for (const auto& x : values) d.values.push_back(x.get<std::string>());
      val.domains[VariableId::intern(name)] = d;
    }
    for (const auto& jb : j.at("boxes")) {
      NodeId box = jb.at("box").get<NodeId>();
      std::vector<VariableId> vars;
      std::vector<Domain> doms;
      for (const auto& vn : jb.at("vars")) {
        VariableId v = VariableId::intern(vn.get<std::string>());
        vars.push_back(v);
        auto it = val.domains.find(v);
        if (it == val.domains.end())
          throw ParseError("box references undeclared variable " + v.name());
        doms.push_back(it->second);
      }
      std::vector<double> table = jb.at("table").get<std::vector<double>>();
      val.cpts.insert({box, make_factor(vars, doms, table)});
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad valuation JSON: ") + e.what());
  }
  return val;
}

}  // namespace bpn
