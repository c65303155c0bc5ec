#ifndef BPN_TEST_SUPPORT_HPP
#define BPN_TEST_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "bpn/factor.hpp"

namespace bpn::testing {

inline Domain dom(std::initializer_list<const char*> labels) {
  Domain d;
  for (const char* l : labels) d.values.push_back(l);
  return d;
}

inline Domain dom_n(std::size_t n) {
  Domain d;
  for (std::size_t i = 0; i < n; ++i) d.values.push_back("v" + std::to_string(i));
  return d;
}

inline VariableId var(const std::string& name) {
  return VariableId::intern(name);
}

// Enumerates every full assignment over (vars, domains), invoking fn.
template <typename Fn>
void for_each_assignment(const std::vector<VariableId>& vars,
                         const std::vector<Domain>& domains, Fn&& fn) {
  std::vector<std::size_t> digit(vars.size(), 0);
  for (;;) {
    Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a.bind(vars[i], digit[i]);
    fn(a);
    std::size_t i = vars.size();
    while (i-- > 0) {
      if (++digit[i] < domains[i].size()) break;
      digit[i] = 0;
      if (i == 0) return;
    }
    if (vars.empty()) return;
  }
}

inline Factor random_factor(std::mt19937_64& rng,
                            const std::vector<VariableId>& vars,
                            const std::vector<Domain>& domains) {
  std::size_t cells = 1;
  for (const Domain& d : domains) cells *= d.size();
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> t(cells);
  for (double& x : t) x = u(rng);
  return make_factor(vars, domains, t);
}

inline bool approx_eq(const Factor& a, const Factor& b, double tol = 1e-12) {
  if (a.vars() != b.vars()) return false;
  if (a.table().size() != b.table().size()) return false;
  for (std::size_t i = 0; i < a.table().size(); ++i)
    if (std::abs(a.table()[i] - b.table()[i]) > tol) return false;
  return true;
}

}  // namespace bpn::testing

#endif
