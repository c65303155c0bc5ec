#include "bpn/oracle.hpp"

#include <algorithm>
#include <deque>

#include "bpn/errors.hpp"
#include "bpn/net_analysis.hpp"

namespace bpn {

Factor brute_force_marginal(const BayesNet& bn,
                            const std::vector<VariableId>& keep,
                            std::uint64_t cap) {
  return project(joint(bn, cap), keep);
}

namespace {

std::set<VariableId> scope_set(const Factor& f) {
  return std::set<VariableId>(f.vars().begin(), f.vars().end());
}

Factor eliminate(std::vector<Factor>& pool, VariableId z) {
  std::vector<Factor> gathered;
  std::vector<Factor> rest;
  for (Factor& f : pool) {
    if (f.has_var(z))
      gathered.push_back(std::move(f));
    else
      rest.push_back(std::move(f));
  }
  std::vector<const Factor*> ptrs;
  for (const Factor& f : gathered) ptrs.push_back(&f);
  Factor psi = multiply_all(std::span<const Factor* const>(ptrs.data(), ptrs.size()));
  Factor tau = psi.has_var(z) ? sum_out(psi, z) : psi;
  pool = std::move(rest);
  return tau;
}

}  // namespace

Factor variable_elimination_keep(const BayesNet& bn,
                                 const std::vector<VariableId>& keep,
                                 const std::vector<VariableId>& order) {
  std::set<VariableId> keep_set(keep.begin(), keep.end());
  std::set<VariableId> seen;
  for (VariableId z : order) {
    if (keep_set.count(z))
      throw QueryInOrder(z.name() + " is both kept and eliminated");
    if (!seen.insert(z).second)
      throw OrderIncomplete("duplicate " + z.name() + " in order");
    if (!bn.domains.count(z))
      throw UnknownVariable(z.name() + " not in the network");
  }
  if (order.size() + keep_set.size() != bn.variables.size())
    throw OrderIncomplete("order plus query must cover all variables");

  std::vector<Factor> pool;
  for (VariableId v : bn.variables) pool.push_back(bn.cpts.at(v));
  for (VariableId z : order) pool.push_back(eliminate(pool, z));

  std::vector<const Factor*> ptrs;
  for (const Factor& f : pool) ptrs.push_back(&f);
  std::vector<VariableId> extra(keep_set.begin(), keep_set.end());
  std::vector<Domain> extra_doms;
  for (VariableId v : extra) extra_doms.push_back(bn.domains.at(v));
  return multiply_all(std::span<const Factor* const>(ptrs.data(), ptrs.size()),
                      extra, extra_doms);
}

Factor variable_elimination(const BayesNet& bn, VariableId query,
                            const std::vector<VariableId>& order) {
  return variable_elimination_keep(bn, {query}, order);
}

const std::set<VariableId>& CliqueTree::separator(int i, int j) const {
  auto key = std::minmax(i, j);
  return separators.at({key.first, key.second});
}

int CliqueTree::width() const {
  std::size_t m = 1;  // a degenerate tree still has width 0
  for (const Cluster& c : clusters) m = std::max(m, c.clique.size());
  return static_cast<int>(m) - 1;
}

std::string CliqueTree::to_dot() const {
  std::string out = "graph cliques {\n  node [shape=record];\n";
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    std::string label;
    for (VariableId v : clusters[i].clique) {
      if (!label.empty()) label += " ";
      label += v.name();
    }
    out += "  c" + std::to_string(i) + " [label=\"{" + label + "}\"];\n";
  }
  for (const auto& [edge, sep] : separators) {
    std::string label;
    for (VariableId v : sep) {
      if (!label.empty()) label += ",";
      label += v.name();
    }
    out += "  c" + std::to_string(edge.first) + " -- c" +
           std::to_string(edge.second) + " [label=\"" + label + "\"];\n";
  }
  out += "}\n";
  return out;
}

void validate_clique_tree(const BayesNet& bn, const CliqueTree& ct) {
  // tree shape
  std::size_t n = ct.clusters.size();
  if (n == 0) throw InvalidTree("no clusters");
  std::size_t nedges = ct.separators.size();
  if (nedges != n - 1) throw InvalidTree("cluster graph is not a tree");
  std::vector<bool> seen(n, false);
  std::deque<int> q{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int v : ct.clusters[u].neighbors)
      if (!seen[v]) {
        seen[v] = true;
        reached++;
        q.push_back(v);
      }
  }
  if (reached != n) throw InvalidTree("cluster graph is disconnected");

  // family preservation and assignment coverage
  std::set<VariableId> assigned;
  for (std::size_t i = 0; i < n; ++i)
    for (VariableId v : ct.clusters[i].assigned_cpts) {
      if (!assigned.insert(v).second)
        throw InvalidTree("cpt assigned twice: " + v.name());
      std::set<VariableId> fam(bn.parents.at(v).begin(), bn.parents.at(v).end());
      fam.insert(v);
      for (VariableId x : fam)
        if (!ct.clusters[i].clique.count(x))
          throw JointreeViolation("family of " + v.name() +
                                  " not inside its cluster");
    }
  for (VariableId v : bn.variables)
    if (!assigned.count(v))
      throw InvalidTree("cpt not assigned: " + v.name());

  // jointree (running intersection) property: per variable the clusters
  // containing it form a connected subgraph
  for (VariableId v : bn.variables) {
    std::vector<int> holders;
    for (std::size_t i = 0; i < n; ++i)
      if (ct.clusters[i].clique.count(v)) holders.push_back(static_cast<int>(i));
    if (holders.empty())
      throw JointreeViolation(v.name() + " appears in no cluster");
    std::set<int> hs(holders.begin(), holders.end());
    std::deque<int> qq{holders[0]};
    std::set<int> vis{holders[0]};
    while (!qq.empty()) {
      int u = qq.front();
      qq.pop_front();
      for (int w : ct.clusters[u].neighbors)
        if (hs.count(w) && !vis.count(w)) {
          vis.insert(w);
          qq.push_back(w);
        }
    }
    if (vis.size() != hs.size())
      throw JointreeViolation(v.name() + " violates the running intersection");
  }

  // separators match clique intersections
  for (const auto& [edge, sep] : ct.separators) {
    std::set<VariableId> inter;
    for (VariableId v : ct.clusters[edge.first].clique)
      if (ct.clusters[edge.second].clique.count(v)) inter.insert(v);
    if (inter != sep)
      throw JointreeViolation("separator differs from clique intersection");
  }
}

CliqueTree clique_tree_from_order(const BayesNet& bn,
                                  const std::vector<VariableId>& order) {
  std::set<VariableId> seen;
  for (VariableId z : order) {
    if (!bn.domains.count(z)) throw UnknownVariable(z.name());
    if (!seen.insert(z).second)
      throw OrderIncomplete("duplicate " + z.name() + " in order");
  }
  if (order.size() != bn.variables.size())
    throw OrderIncomplete("order must cover every variable");

  struct Item {
    std::set<VariableId> scope;
    int producer;         // -1 for a cpt, else the step that produced it
    VariableId cpt_child; // valid when producer == -1
  };
  std::vector<Item> pool;
  for (VariableId v : bn.variables) {
    Item it;
    it.scope = scope_set(bn.cpts.at(v));
    it.producer = -1;
    it.cpt_child = v;
    pool.push_back(it);
  }

  CliqueTree ct;
  ct.clusters.resize(order.size());
  for (std::size_t step = 0; step < order.size(); ++step) {
    VariableId z = order[step];
    std::vector<Item> gathered, rest;
    for (Item& it : pool) {
      if (it.scope.count(z))
        gathered.push_back(std::move(it));
      else
        rest.push_back(std::move(it));
    }
    std::set<VariableId> clique;
    for (const Item& it : gathered) {
      clique.insert(it.scope.begin(), it.scope.end());
      if (it.producer == -1) {
        ct.clusters[step].assigned_cpts.push_back(it.cpt_child);
      } else {
        int i = it.producer, j = static_cast<int>(step);
        ct.clusters[i].neighbors.push_back(j);
        ct.clusters[j].neighbors.push_back(i);
        std::set<VariableId> inter;
        for (VariableId v : ct.clusters[i].clique)
          if (clique.count(v) || it.scope.count(v)) inter.insert(v);
        ct.separators[{std::min(i, j), std::max(i, j)}] = it.scope;
      }
    }
    clique.insert(z);  // defensive: gather is never empty, but keep z present
    ct.clusters[step].clique = clique;

    Item tau;
    tau.scope = clique;
    tau.scope.erase(z);
    tau.producer = static_cast<int>(step);
    pool = std::move(rest);
    if (!tau.scope.empty()) pool.push_back(tau);
  }

  // Leftover messages with empty scope make the flow a forest; chain the
  // roots with empty separators so the result is a single tree.
  std::vector<int> roots;
  {
    // components over recorded edges
    std::vector<int> comp(ct.clusters.size(), -1);
    int nc = 0;
    for (std::size_t i = 0; i < ct.clusters.size(); ++i) {
      if (comp[i] != -1) continue;
      std::deque<int> q{static_cast<int>(i)};
      comp[i] = nc;
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int v : ct.clusters[u].neighbors)
          if (comp[v] == -1) {
            comp[v] = nc;
            q.push_back(v);
          }
      }
      roots.push_back(static_cast<int>(i));
      nc++;
    }
  }
  for (std::size_t k = 1; k < roots.size(); ++k) {
    int i = roots[k - 1], j = roots[k];
    ct.clusters[i].neighbors.push_back(j);
    ct.clusters[j].neighbors.push_back(i);
    ct.separators[{std::min(i, j), std::max(i, j)}] = {};
  }

  validate_clique_tree(bn, ct);
  return ct;
}

Factor message_passing(const BayesNet& bn, const CliqueTree& ct, int root,
                       VariableId query, const Assignment& evidence) {
  if (root < 0 || root >= static_cast<int>(ct.clusters.size()))
    throw InvalidTree("root out of range");
  if (!ct.clusters[root].clique.count(query))
    throw QueryNotInRoot(query.name() + " is not in the root cluster");
  validate_clique_tree(bn, ct);

  // evidence absorption: slice every cpt on the evidence variables
  std::map<VariableId, Factor> cpts;
  for (VariableId v : bn.variables) {
    Factor f = bn.cpts.at(v);
    Assignment ev;
    for (const auto& [x, val] : evidence.bindings())
      if (f.has_var(x)) ev.bind(x, val);
    cpts.insert({v, condition(f, ev)});
  }
  std::set<VariableId> ev_vars;
  for (const auto& [x, val] : evidence.bindings()) {
    (void)val;
    ev_vars.insert(x);
  }

  // post-order traversal from the root
  std::function<Factor(int, int)> psi = [&](int k, int parent) -> Factor {
    std::vector<Factor> inputs;
    for (VariableId v : ct.clusters[k].assigned_cpts)
      inputs.push_back(cpts.at(v));
    for (int i : ct.clusters[k].neighbors) {
      if (i == parent) continue;
      Factor msg = psi(i, k);
      std::vector<VariableId> sep;
      for (VariableId v : ct.separator(i, k))
        if (!ev_vars.count(v)) sep.push_back(v);
      msg = project(msg, sep);
      inputs.push_back(std::move(msg));
    }
    std::vector<const Factor*> ptrs;
    for (const Factor& f : inputs) ptrs.push_back(&f);
    // extend over the (unobserved part of the) cluster scope
    std::vector<VariableId> extra;
    std::vector<Domain> extra_doms;
    for (VariableId v : ct.clusters[k].clique)
      if (!ev_vars.count(v)) {
        extra.push_back(v);
        extra_doms.push_back(bn.domains.at(v));
      }
    return multiply_all(std::span<const Factor* const>(ptrs.data(), ptrs.size()),
                        extra, extra_doms);
  };

  Factor root_psi = psi(root, -1);
  return project(root_psi, {query});
}

namespace {

struct MoralGraph {
  std::vector<VariableId> vars;
  std::map<VariableId, std::set<VariableId>> adj;
};

MoralGraph moralize(const BayesNet& bn) {
  MoralGraph g;
  g.vars = bn.variables;
  std::sort(g.vars.begin(), g.vars.end());
  for (VariableId v : g.vars) g.adj[v];
  auto link = [&](VariableId a, VariableId b) {
    if (a == b) return;
    g.adj[a].insert(b);
    g.adj[b].insert(a);
  };
  for (VariableId v : bn.variables) {
    const auto& ps = bn.parents.at(v);
    for (VariableId p : ps) link(v, p);
    for (std::size_t i = 0; i < ps.size(); ++i)
      for (std::size_t j = i + 1; j < ps.size(); ++j) link(ps[i], ps[j]);
  }
  return g;
}

MoralGraph interaction_graph(const Net& net) {
  MoralGraph g;
  std::set<VariableId> vars = net.atoms();
  g.vars.assign(vars.begin(), vars.end());
  for (VariableId v : g.vars) g.adj[v];
  for (NodeId b : net.nodes_of_kind(NodeKind::Box)) {
    std::vector<VariableId> face;
    for (EdgeId e : net.node(b).conclusions)
      face.push_back(net.edge(e).label.atom_var());
    for (std::size_t i = 0; i < face.size(); ++i)
      for (std::size_t j = i + 1; j < face.size(); ++j) {
        if (face[i] == face[j]) continue;
        g.adj[face[i]].insert(face[j]);
        g.adj[face[j]].insert(face[i]);
      }
  }
  return g;
}

EliminationOrder greedy_order(MoralGraph g, OrderStrategy strategy,
                              const std::vector<VariableId>& given) {
  EliminationOrder out;
  if (strategy == OrderStrategy::Given) {
    std::set<VariableId> want(g.vars.begin(), g.vars.end());
    std::set<VariableId> got(given.begin(), given.end());
    if (want != got || given.size() != g.vars.size())
      throw OrderIncomplete("given order must enumerate every variable once");
    out.order = given;
  }

  std::set<VariableId> remaining(g.vars.begin(), g.vars.end());
  int width = 0;
  std::size_t step = 0;
  while (!remaining.empty()) {
    VariableId pick;
    if (strategy == OrderStrategy::Given) {
      pick = out.order[step++];
    } else {
      bool first = true;
      long best_score = 0;
      for (VariableId v : remaining) {  // ascending id: deterministic ties
        long score;
        if (strategy == OrderStrategy::MinDegree) {
          score = static_cast<long>(g.adj[v].size());
        } else {
          // fill-in edges among the neighbours
          score = 0;
          std::vector<VariableId> nb(g.adj[v].begin(), g.adj[v].end());
          for (std::size_t i = 0; i < nb.size(); ++i)
            for (std::size_t j = i + 1; j < nb.size(); ++j)
              if (!g.adj[nb[i]].count(nb[j])) score++;
        }
        if (first || score < best_score) {
          best_score = score;
          pick = v;
          first = false;
        }
      }
    }
    width = std::max(width, static_cast<int>(g.adj[pick].size()));
    std::vector<VariableId> nb(g.adj[pick].begin(), g.adj[pick].end());
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        g.adj[nb[i]].insert(nb[j]);
        g.adj[nb[j]].insert(nb[i]);
      }
    for (VariableId n : nb) g.adj[n].erase(pick);
    g.adj.erase(pick);
    remaining.erase(pick);
    if (strategy != OrderStrategy::Given) out.order.push_back(pick);
  }
  out.induced_width = width;
  return out;
}

}  // namespace

EliminationOrder heuristic_order(const BayesNet& bn, OrderStrategy strategy,
                                 const std::vector<VariableId>& given) {
  return greedy_order(moralize(bn), strategy, given);
}

EliminationOrder heuristic_order(const Net& net, OrderStrategy strategy,
                                 const std::vector<VariableId>& given) {
  return greedy_order(interaction_graph(net), strategy, given);
}

int order_width(const BayesNet& bn, const std::vector<VariableId>& order) {
  return greedy_order(moralize(bn), OrderStrategy::Given, order).induced_width;
}

std::uint64_t SplitMix64::next() {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::vector<Assignment> forward_sample(const BayesNet& bn, std::uint64_t seed,
                                       std::size_t count) {
  // topological order, ties broken by ascending variable id
  std::map<VariableId, int> indeg;
  std::map<VariableId, std::vector<VariableId>> children;
  for (VariableId v : bn.variables) indeg[v] = 0;
  for (const auto& [c, ps] : bn.parents)
    for (VariableId p : ps) {
      children[p].push_back(c);
      indeg[c]++;
    }
  std::vector<VariableId> topo;
  std::set<VariableId> ready;
  for (const auto& [v, d] : indeg)
    if (d == 0) ready.insert(v);
  while (!ready.empty()) {
    VariableId u = *ready.begin();
    ready.erase(ready.begin());
    topo.push_back(u);
    for (VariableId c : children[u])
      if (--indeg[c] == 0) ready.insert(c);
  }

  SplitMix64 rng(seed);
  std::vector<Assignment> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Assignment a;
    for (VariableId v : topo) {
      Assignment parent_vals;
      for (VariableId p : bn.parents.at(v)) parent_vals.bind(p, a.at(p));
      Factor row = condition(bn.cpts.at(v), parent_vals);
      double u = rng.next_double();
      double acc = 0.0;
      std::size_t chosen = row.table().size() - 1;
      for (std::size_t i = 0; i < row.table().size(); ++i) {
        acc += row.table()[i];
        if (u < acc) {
          chosen = i;
          break;
        }
      }
      a.bind(v, chosen);
    }
    out.push_back(a);
  }
  return out;
}

}  // namespace bpn
