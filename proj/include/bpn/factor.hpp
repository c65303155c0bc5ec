#ifndef BPN_FACTOR_HPP
#define BPN_FACTOR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bpn/errors.hpp"

namespace bpn {

// Interned variable (atom) symbol. Ids are dense and assigned in interning
// order; all canonical orderings in this library are by id.
class VariableId {
 public:
  VariableId() : id_(0) {}
  static VariableId intern(const std::string& name);
  static bool interned(const std::string& name);
  const std::string& name() const;
  std::uint32_t raw() const { return id_; }

  friend bool operator==(VariableId a, VariableId b) { return a.id_ == b.id_; }
  friend bool operator!=(VariableId a, VariableId b) { return a.id_ != b.id_; }
  friend bool operator<(VariableId a, VariableId b) { return a.id_ < b.id_; }
  friend bool operator>(VariableId a, VariableId b) { return a.id_ > b.id_; }
  friend bool operator<=(VariableId a, VariableId b) { return a.id_ <= b.id_; }

 private:
  explicit VariableId(std::uint32_t id) : id_(id) {}
  std::uint32_t id_;
};

// Ordered list of value labels for one variable.
struct Domain {
  std::vector<std::string> values;

  std::size_t size() const { return values.size(); }
  int index_of(const std::string& label) const;  // -1 if absent
  bool operator==(const Domain& o) const { return values == o.values; }
};

// Partial assignment of value indices to variables, kept sorted by id.
class Assignment {
 public:
  Assignment() = default;
  void bind(VariableId v, std::size_t value_index);
  bool has(VariableId v) const;
  std::size_t at(VariableId v) const;
  const std::vector<std::pair<VariableId, std::size_t>>& bindings() const {
    return bindings_;
  }
  std::size_t size() const { return bindings_.size(); }

 private:
  std::vector<std::pair<VariableId, std::size_t>> bindings_;
};

// Counters for the factor cost model. One table of size |union scope| is
// allocated per k-ary product; a product touches every output cell once per
// input factor (mul_adds), a projection touches every input cell once.
struct CostCounters {
  std::uint64_t table_cells_allocated = 0;
  std::uint64_t mul_adds = 0;
};

// Installs a thread-local counter sink for the lifetime of the scope.
class CostScope {
 public:
  explicit CostScope(CostCounters& sink);
  ~CostScope();
  CostScope(const CostScope&) = delete;
  CostScope& operator=(const CostScope&) = delete;

 private:
  CostCounters* prev_;
};

// Dense nonnegative table over a set of discrete variables. Variables are
// strictly sorted by id; the table is mixed-radix indexed with the last
// variable varying fastest. Immutable after construction.
class Factor {
 public:
  // Unit factor (empty scope, single cell 1.0).
  Factor();

  // `vars` may be given in any order; the table must be laid out with the
  // last *given* variable fastest. The stored factor is permuted to
  // canonical (ascending id) order.
  Factor(std::vector<VariableId> vars, std::vector<Domain> domains,
         std::vector<double> table);

  const std::vector<VariableId>& vars() const { return vars_; }
  const std::vector<Domain>& domains() const { return domains_; }
  const std::vector<double>& table() const { return table_; }
  std::size_t size() const { return table_.size(); }
  bool has_var(VariableId v) const;
  const Domain& domain_of(VariableId v) const;

  double at(const Assignment& full) const;  // full must cover vars()

  friend Factor multiply(const Factor& f1, const Factor& f2);
  friend Factor multiply_all(std::span<const Factor* const> factors,
                             const std::vector<VariableId>& extra_scope,
                             const std::vector<Domain>& extra_domains);
  friend Factor sum_out(const Factor& f, VariableId x);
  friend Factor project(const Factor& f, const std::vector<VariableId>& keep);
  friend Factor condition(const Factor& f, const Assignment& evidence);
  friend Factor normalize(const Factor& f);
  friend void validate_cpt(const Factor& f, VariableId child, double tol);

  double total_mass() const;

 private:
  struct Raw {};
  Factor(Raw, std::vector<VariableId> vars, std::vector<Domain> domains,
         std::size_t cells);

  std::vector<VariableId> vars_;   // strictly ascending
  std::vector<Domain> domains_;    // aligned with vars_
  std::vector<double> table_;      // last variable fastest
};

Factor make_factor(std::vector<VariableId> vars, std::vector<Domain> domains,
                   std::vector<double> table);

Factor multiply(const Factor& f1, const Factor& f2);

// k-ary product over the union scope, optionally extended by `extra_scope`
// variables (which then index all-ones dimensions). Allocates exactly one
// table.
Factor multiply_all(std::span<const Factor* const> factors,
                    const std::vector<VariableId>& extra_scope = {},
                    const std::vector<Domain>& extra_domains = {});

Factor sum_out(const Factor& f, VariableId x);
Factor project(const Factor& f, const std::vector<VariableId>& keep);

// Checks that for every assignment of the non-child variables the child row
// sums to 1 within tol. Throws RowNotNormalized otherwise.
void validate_cpt(const Factor& f, VariableId child, double tol = 1e-9);

Factor condition(const Factor& f, const Assignment& evidence);
Factor normalize(const Factor& f);

}  // namespace bpn

#endif  // BPN_FACTOR_HPP
