#include "bpn/factor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace bpn {

namespace {

struct Interner {
  std::mutex mu;
  std::map<std::string, std::uint32_t> by_name;
  std::vector<std::string> names;
};

Interner& interner() {
  static Interner i;
  return i;
}

thread_local CostCounters* g_cost = nullptr;

void charge_alloc(std::size_t cells) {
  if (g_cost) g_cost->table_cells_allocated += cells;
}
void charge_ops(std::size_t ops) {
  if (g_cost) g_cost->mul_adds += ops;
}

std::string var_list(const std::vector<VariableId>& vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) s += ",";
    s += vs[i].name();
  }
  return s;
}

}  // namespace

VariableId VariableId::intern(const std::string& name) {
  if (name.empty()) throw SchemaError("variable name must be nonempty");
  Interner& in = interner();
  std::lock_guard<std::mutex> lock(in.mu);
  auto it = in.by_name.find(name);
  if (it != in.by_name.end()) return VariableId(it->second);
  std::uint32_t id = static_cast<std::uint32_t>(in.names.size());
  in.names.push_back(name);
  in.by_name.emplace(name, id);
  return VariableId(id);
}

bool VariableId::interned(const std::string& name) {
  Interner& in = interner();
  std::lock_guard<std::mutex> lock(in.mu);
  return in.by_name.count(name) > 0;
}

const std::string& VariableId::name() const {
  Interner& in = interner();
  std::lock_guard<std::mutex> lock(in.mu);
  return in.names.at(id_);
}

int Domain::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == label) return static_cast<int>(i);
  return -1;
}

void Assignment::bind(VariableId v, std::size_t value_index) {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), v,
      [](const auto& p, VariableId x) { return p.first < x; });
  if (it != bindings_.end() && it->first == v) {
    it->second = value_index;
  } else {
    bindings_.insert(it, {v, value_index});
  }
}

bool Assignment::has(VariableId v) const {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), v,
      [](const auto& p, VariableId x) { return p.first < x; });
  return it != bindings_.end() && it->first == v;
}

std::size_t Assignment::at(VariableId v) const {
  auto it = std::lower_bound(
      bindings_.begin(), bindings_.end(), v,
      [](const auto& p, VariableId x) { return p.first < x; });
  if (it == bindings_.end() || it->first != v)
    throw UnknownVariable("no binding for " + v.name());
  return it->second;
}

CostScope::CostScope(CostCounters& sink) : prev_(g_cost) { g_cost = &sink; }
CostScope::~CostScope() { g_cost = prev_; }

Factor::Factor() : table_(1, 1.0) {}

Factor::Factor(Raw, std::vector<VariableId> vars, std::vector<Domain> domains,
               std::size_t cells)
    : vars_(std::move(vars)), domains_(std::move(domains)),
      table_(cells, 0.0) {
  charge_alloc(cells);
}

Factor::Factor(std::vector<VariableId> vars, std::vector<Domain> domains,
               std::vector<double> table) {
  if (vars.size() != domains.size())
    throw LengthMismatch("vars and domains differ in length");
  std::size_t cells = 1;
  for (const Domain& d : domains) {
    if (d.size() == 0) throw SchemaError("empty domain");
    cells *= d.size();
  }
  if (table.size() != cells) {
    std::ostringstream os;
    os << "table has " << table.size() << " entries, scope needs " << cells;
    throw LengthMismatch(os.str());
  }
  for (double x : table) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw NegativeEntry("table entries must be finite and >= 0");
  }

  const std::size_t n = vars.size();
  std::vector<std::size_t> perm(n);  // canonical position -> given position
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return vars[a] < vars[b];
  });
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (vars[perm[i]] == vars[perm[i + 1]])
      throw DuplicateVariable(vars[perm[i]].name());

  vars_.resize(n);
  domains_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    vars_[i] = vars[perm[i]];
    domains_[i] = domains[perm[i]];
  }

  bool sorted = true;
  for (std::size_t i = 0; i < n; ++i)
    if (perm[i] != i) sorted = false;
  if (sorted) {
    table_ = std::move(table);
    return;
  }

  // Re-stride: walk canonical cells with an odometer, keep the matching
  // input index incrementally per digit.
  std::vector<std::size_t> in_stride(n);  // stride of given position
  {
    std::size_t s = 1;
    for (std::size_t i = n; i-- > 0;) {
      in_stride[i] = s;
      s *= domains[i].size();
    }
  }
  table_.assign(cells, 0.0);
  std::vector<std::size_t> digit(n, 0);
  std::size_t in_idx = 0;
  for (std::size_t out = 0; out < cells; ++out) {
    table_[out] = table[in_idx];
    for (std::size_t i = n; i-- > 0;) {
      digit[i]++;
      in_idx += in_stride[perm[i]];
      if (digit[i] < domains_[i].size()) break;
      in_idx -= in_stride[perm[i]] * digit[i];
      digit[i] = 0;
    }
  }
}

bool Factor::has_var(VariableId v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

const Domain& Factor::domain_of(VariableId v) const {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v)
    throw UnknownVariable(v.name() + " not in factor over {" +
                          var_list(vars_) + "}");
  return domains_[static_cast<std::size_t>(it - vars_.begin())];
}

double Factor::at(const Assignment& full) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    std::size_t v = full.at(vars_[i]);
    if (v >= domains_[i].size())
      throw ValueOutOfRange(vars_[i].name());
    idx = idx * domains_[i].size() + v;
  }
  return table_[idx];
}

double Factor::total_mass() const {
  double s = 0.0;
  for (double x : table_) s += x;
  return s;
}

Factor make_factor(std::vector<VariableId> vars, std::vector<Domain> domains,
                   std::vector<double> table) {
  return Factor(std::move(vars), std::move(domains), std::move(table));
}

Factor multiply_all(std::span<const Factor* const> factors,
                    const std::vector<VariableId>& extra_scope,
                    const std::vector<Domain>& extra_domains) {
  // Union scope, domains checked for agreement on shared variables.
  std::vector<VariableId> uvars;
  std::vector<Domain> udoms;
  auto add_var = [&](VariableId v, const Domain& d) {
    auto it = std::lower_bound(uvars.begin(), uvars.end(), v);
    if (it != uvars.end() && *it == v) {
      const Domain& have = udoms[static_cast<std::size_t>(it - uvars.begin())];
      if (!(have == d))
        throw DomainMismatch("conflicting domains for " + v.name());
      return;
    }
    std::size_t pos = static_cast<std::size_t>(it - uvars.begin());
    uvars.insert(it, v);
    udoms.insert(udoms.begin() + static_cast<std::ptrdiff_t>(pos), d);
  };
  for (const Factor* f : factors)
    for (std::size_t i = 0; i < f->vars().size(); ++i)
      add_var(f->vars()[i], f->domains()[i]);
  if (extra_scope.size() != extra_domains.size())
    throw LengthMismatch("extra scope/domain length mismatch");
  for (std::size_t i = 0; i < extra_scope.size(); ++i)
    add_var(extra_scope[i], extra_domains[i]);

  const std::size_t n = uvars.size();
  std::size_t cells = 1;
  for (const Domain& d : udoms) cells *= d.size();

  Factor out(Factor::Raw{}, uvars, udoms, cells);

  // Per-factor stride for each union position (0 where absent).
  std::vector<std::vector<std::size_t>> stride(factors.size(),
                                               std::vector<std::size_t>(n, 0));
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const Factor* f = factors[k];
    std::size_t s = 1;
    std::vector<std::size_t> fs(f->vars().size());
    for (std::size_t i = f->vars().size(); i-- > 0;) {
      fs[i] = s;
      s *= f->domains()[i].size();
    }
    for (std::size_t i = 0; i < f->vars().size(); ++i) {
      auto it = std::lower_bound(uvars.begin(), uvars.end(), f->vars()[i]);
      stride[k][static_cast<std::size_t>(it - uvars.begin())] = fs[i];
    }
  }

  std::vector<std::size_t> digit(n, 0);
  std::vector<std::size_t> idx(factors.size(), 0);
  for (std::size_t out_i = 0; out_i < cells; ++out_i) {
    double p = 1.0;
    for (std::size_t k = 0; k < factors.size(); ++k)
      p *= factors[k]->table()[idx[k]];
    out.table_[out_i] = p;
    for (std::size_t i = n; i-- > 0;) {
      digit[i]++;
      for (std::size_t k = 0; k < factors.size(); ++k)
        idx[k] += stride[k][i];
      if (digit[i] < udoms[i].size()) break;
      for (std::size_t k = 0; k < factors.size(); ++k)
        idx[k] -= stride[k][i] * digit[i];
      digit[i] = 0;
    }
  }
  charge_ops(cells * std::max<std::size_t>(factors.size(), 1));
  return out;
}

Factor multiply(const Factor& f1, const Factor& f2) {
  const Factor* fs[2] = {&f1, &f2};
  return multiply_all(std::span<const Factor* const>(fs, 2));
}

Factor sum_out(const Factor& f, VariableId x) {
  auto it = std::lower_bound(f.vars_.begin(), f.vars_.end(), x);
  if (it == f.vars_.end() || *it != x)
    throw UnknownVariable(x.name() + " not in factor over {" +
                          var_list(f.vars_) + "}");
  const std::size_t pos = static_cast<std::size_t>(it - f.vars_.begin());
  const std::size_t n = f.vars_.size();
  const std::size_t dx = f.domains_[pos].size();

  std::vector<VariableId> rvars;
  std::vector<Domain> rdoms;
  for (std::size_t i = 0; i < n; ++i) {
    if (i == pos) continue;
    rvars.push_back(f.vars_[i]);
    rdoms.push_back(f.domains_[i]);
  }
  std::size_t inner = 1;  // stride of x in the input
  for (std::size_t i = pos + 1; i < n; ++i) inner *= f.domains_[i].size();
  std::size_t outer = f.table_.size() / (inner * dx);

  Factor out(Factor::Raw{}, std::move(rvars), std::move(rdoms),
             f.table_.size() / dx);
  std::size_t w = 0;
  for (std::size_t o = 0; o < outer; ++o) {
    const std::size_t base = o * inner * dx;
    for (std::size_t in_i = 0; in_i < inner; ++in_i, ++w) {
      double s = 0.0;
      for (std::size_t k = 0; k < dx; ++k) s += f.table_[base + k * inner + in_i];
      out.table_[w] = s;
    }
  }
  charge_ops(f.table_.size());
  return out;
}

Factor project(const Factor& f, const std::vector<VariableId>& keep) {
  std::vector<VariableId> k = keep;
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  for (VariableId v : k)
    if (!f.has_var(v))
      throw UnknownVariable(v.name() + " not in factor over {" +
                            var_list(f.vars_) + "}");
  Factor out = f;
  for (std::size_t i = f.vars_.size(); i-- > 0;) {
    VariableId v = f.vars_[i];
    if (!std::binary_search(k.begin(), k.end(), v)) out = sum_out(out, v);
  }
  return out;
}

void validate_cpt(const Factor& f, VariableId child, double tol) {
  auto it = std::lower_bound(f.vars_.begin(), f.vars_.end(), child);
  if (it == f.vars_.end() || *it != child)
    throw UnknownVariable("child " + child.name() + " not in factor");
  const std::size_t pos = static_cast<std::size_t>(it - f.vars_.begin());
  const std::size_t n = f.vars_.size();
  const std::size_t dc = f.domains_[pos].size();
  std::size_t inner = 1;
  for (std::size_t i = pos + 1; i < n; ++i) inner *= f.domains_[i].size();
  const std::size_t outer = f.table_.size() / (inner * dc);

  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in_i = 0; in_i < inner; ++in_i) {
      double s = 0.0;
      for (std::size_t c = 0; c < dc; ++c)
        s += f.table_[o * inner * dc + c * inner + in_i];
      if (std::abs(s - 1.0) > tol) {
        // Reconstruct the offending parent assignment for the message.
        std::ostringstream os;
        os << "row for parents (";
        std::size_t rest = o * inner + in_i;  // mixed radix over parents
        std::vector<std::size_t> pdig(n - 1, 0);
        for (std::size_t i = n; i-- > 0;) {
          if (i == pos) continue;
          std::size_t j = i > pos ? i - 1 : i;
          pdig[j] = rest % f.domains_[i].size();
          rest /= f.domains_[i].size();
        }
        bool first = true;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == pos) continue;
          std::size_t j = i > pos ? i - 1 : i;
          if (!first) os << ",";
          os << f.vars_[i].name() << "="
             << f.domains_[i].values[pdig[j]];
          first = false;
        }
        os << ") sums to " << s;
        throw RowNotNormalized(os.str());
      }
    }
  }
}

Factor condition(const Factor& f, const Assignment& evidence) {
  for (const auto& [v, val] : evidence.bindings()) {
    if (!f.has_var(v))
      throw UnknownVariable(v.name() + " not in factor over {" +
                            var_list(f.vars_) + "}");
    if (val >= f.domain_of(v).size())
      throw ValueOutOfRange(v.name());
  }
  if (evidence.size() == 0) return f;

  const std::size_t n = f.vars_.size();
  std::vector<VariableId> rvars;
  std::vector<Domain> rdoms;
  std::vector<std::size_t> in_stride(n);
  {
    std::size_t s = 1;
    for (std::size_t i = n; i-- > 0;) {
      in_stride[i] = s;
      s *= f.domains_[i].size();
    }
  }
  std::size_t base = 0;
  std::vector<std::size_t> kept;  // input positions kept
  for (std::size_t i = 0; i < n; ++i) {
    if (evidence.has(f.vars_[i])) {
      base += in_stride[i] * evidence.at(f.vars_[i]);
    } else {
      kept.push_back(i);
      rvars.push_back(f.vars_[i]);
      rdoms.push_back(f.domains_[i]);
    }
  }
  std::size_t cells = 1;
  for (const Domain& d : rdoms) cells *= d.size();
  Factor out(Factor::Raw{}, std::move(rvars), std::move(rdoms), cells);
  std::vector<std::size_t> digit(kept.size(), 0);
  std::size_t in_idx = base;
  for (std::size_t w = 0; w < cells; ++w) {
    out.table_[w] = f.table_[in_idx];
    for (std::size_t i = kept.size(); i-- > 0;) {
      digit[i]++;
      in_idx += in_stride[kept[i]];
      if (digit[i] < f.domains_[kept[i]].size()) break;
      in_idx -= in_stride[kept[i]] * digit[i];
      digit[i] = 0;
    }
  }
  charge_ops(cells);
  return out;
}

Factor normalize(const Factor& f) {
  double mass = f.total_mass();
  if (!(mass > 0.0))
    throw ZeroMass("factor has zero total mass (impossible evidence?)");
  Factor out(Factor::Raw{}, f.vars_, f.domains_, f.table_.size());
  for (std::size_t i = 0; i < f.table_.size(); ++i)
    out.table_[i] = f.table_[i] / mass;
  charge_ops(f.table_.size());
  return out;
}

}  // namespace bpn
