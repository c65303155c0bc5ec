#include "bpn/factor.hpp"

#include <random>

#include "doctest.h"
#include "test_support.hpp"

using namespace bpn;
using namespace bpn::testing;

TEST_CASE("make_factor basics") {
  VariableId A = var("A");
  Factor f = make_factor({A}, {dom({"t", "f"})}, {0.2, 0.8});
  CHECK(f.vars().size() == 1);
  CHECK(f.table()[0] == 0.2);
  CHECK(f.table()[1] == 0.8);

  Factor unit = make_factor({}, {}, {1.0});
  CHECK(unit.vars().empty());
  CHECK(unit.table().size() == 1);
}

TEST_CASE("make_factor permutes input order to canonical") {
  VariableId A = var("A"), B = var("B");
  Domain dA = dom({"t", "f"});
  Domain dB = dom({"x", "y", "z"});
  // Given as [B, A] with B-major layout: table[b][a].
  std::vector<double> t_ba = {1, 2, 3, 4, 5, 6};  // b=x:(a=t,a=f), b=y:..., b=z:...
  Factor f_ba = make_factor({B, A}, {dB, dA}, t_ba);
  // Same function given canonically.
  std::vector<double> t_ab = {1, 3, 5, 2, 4, 6};  // a=t:(x,y,z), a=f:(x,y,z)
  Factor f_ab = make_factor({A, B}, {dA, dB}, t_ab);
  CHECK(approx_eq(f_ba, f_ab, 0.0));
  // Independent oracle: compare entry by entry over all assignments.
  for_each_assignment({A, B}, {dA, dB}, [&](const Assignment& a) {
    CHECK(f_ba.at(a) == f_ab.at(a));
  });
}

TEST_CASE("make_factor rejects bad input") {
  VariableId A = var("A");
  CHECK_THROWS_AS(make_factor({A}, {dom({"t", "f"})}, {0.2}), LengthMismatch);
  CHECK_THROWS_AS(make_factor({A}, {dom({"t", "f"})}, {0.2, -0.1}),
                  NegativeEntry);
  CHECK_THROWS_AS(
      make_factor({A, A}, {dom({"t", "f"}), dom({"t", "f"})}, {1, 0, 0, 1}),
      DuplicateVariable);
}

TEST_CASE("multiply agrees with brute force and has a unit") {
  VariableId A = var("A"), B = var("B");
  Domain d2 = dom({"t", "f"});
  Factor pa = make_factor({A}, {d2}, {0.2, 0.8});
  Factor pba = make_factor({B, A}, {d2, d2}, {0.7, 0.4, 0.3, 0.6});

  Factor prod = multiply(pa, pba);
  for_each_assignment({A, B}, {d2, d2}, [&](const Assignment& a) {
    CHECK(prod.at(a) == doctest::Approx(pa.at(a) * pba.at(a)).epsilon(1e-14));
  });

  Factor unit;
  CHECK(approx_eq(multiply(pa, unit), pa, 0.0));
  CHECK(approx_eq(multiply(pa, pba), multiply(pba, pa), 0.0));
}

TEST_CASE("multiply rejects domain mismatch on shared variables") {
  VariableId A = var("A");
  Factor f1 = make_factor({A}, {dom({"t", "f"})}, {0.2, 0.8});
  Factor f2 = make_factor({A}, {dom({"a", "b", "c"})}, {1, 1, 1});
  CHECK_THROWS_AS(multiply(f1, f2), DomainMismatch);
}

TEST_CASE("sum_out basics") {
  VariableId A = var("A");
  Factor pa = make_factor({A}, {dom({"t", "f"})}, {0.2, 0.8});
  Factor s = sum_out(pa, A);
  CHECK(s.vars().empty());
  CHECK(s.table()[0] == doctest::Approx(1.0));

  VariableId C1 = var("C1");
  Factor single = make_factor({C1, A}, {dom({"only"}), dom({"t", "f"})},
                              {0.3, 0.7});
  Factor dropped = sum_out(single, C1);
  CHECK(dropped.vars() == std::vector<VariableId>{A});
  CHECK(dropped.table()[0] == 0.3);
  CHECK(dropped.table()[1] == 0.7);

  CHECK_THROWS_AS(sum_out(pa, var("ZZZ")), UnknownVariable);
}

TEST_CASE("distributivity of sum_out over multiply") {
  std::mt19937_64 rng(7);
  VariableId X = var("X"), Y = var("Y"), Z = var("Z");
  Domain d3 = dom_n(3), d2 = dom_n(2);
  for (int rep = 0; rep < 50; ++rep) {
    Factor f1 = random_factor(rng, {Y, Z}, {d2, d3});
    Factor f2 = random_factor(rng, {X, Y}, {d3, d2});
    Factor lhs = sum_out(multiply(f1, f2), X);
    Factor rhs = multiply(f1, sum_out(f2, X));
    CHECK(approx_eq(lhs, rhs, 1e-12));
  }
}

TEST_CASE("associativity and commutativity of multiply") {
  std::mt19937_64 rng(11);
  VariableId X = var("X"), Y = var("Y"), Z = var("Z");
  Domain d2 = dom_n(2), d3 = dom_n(3), d4 = dom_n(4);
  for (int rep = 0; rep < 30; ++rep) {
    Factor f1 = random_factor(rng, {X, Y}, {d2, d3});
    Factor f2 = random_factor(rng, {Y, Z}, {d3, d4});
    Factor f3 = random_factor(rng, {X, Z}, {d2, d4});
    Factor a = multiply(multiply(f1, f2), f3);
    Factor b = multiply(f1, multiply(f2, f3));
    Factor c = multiply(multiply(f3, f2), f1);
    CHECK(approx_eq(a, b, 1e-12));
    CHECK(approx_eq(a, c, 1e-12));
  }
}

TEST_CASE("project basics and order independence") {
  std::mt19937_64 rng(23);
  VariableId X = var("X"), Y = var("Y"), Z = var("Z"), W = var("W");
  Domain d2 = dom_n(2), d3 = dom_n(3);
  Factor f = random_factor(rng, {X, Y, Z, W}, {d2, d3, d2, d3});

  CHECK(approx_eq(project(f, f.vars()), f, 0.0));
  Factor scalar = project(f, {});
  CHECK(scalar.vars().empty());
  CHECK(scalar.table()[0] == doctest::Approx(f.total_mass()));

  // Two explicit elimination orders.
  Factor o1 = sum_out(sum_out(f, Y), W);
  Factor o2 = sum_out(sum_out(f, W), Y);
  Factor pr = project(f, {X, Z});
  CHECK(approx_eq(o1, o2, 1e-12));
  CHECK(approx_eq(pr, o1, 1e-12));

  CHECK_THROWS_AS(project(f, {var("NOPE")}), UnknownVariable);
}

TEST_CASE("validate_cpt") {
  VariableId A = var("A"), B = var("B");
  Domain d2 = dom({"t", "f"});
  CHECK_NOTHROW(validate_cpt(make_factor({A}, {d2}, {0.2, 0.8}), A, 1e-9));
  CHECK_THROWS_AS(validate_cpt(make_factor({A}, {d2}, {0.2, 0.7}), A, 1e-9),
                  RowNotNormalized);
  // Deterministic rows are fine.
  Factor det = make_factor({B, A}, {d2, d2}, {1, 0, 0, 1});
  CHECK_NOTHROW(validate_cpt(det, B, 1e-9));
  CHECK_THROWS_AS(validate_cpt(det, var("QQ"), 1e-9), UnknownVariable);
}

TEST_CASE("condition") {
  VariableId A = var("A"), B = var("B");
  Domain d2 = dom({"t", "f"});
  Factor pa = make_factor({A}, {d2}, {0.2, 0.8});
  Assignment ev;
  ev.bind(A, 0);
  Factor sliced = condition(pa, ev);
  CHECK(sliced.vars().empty());
  CHECK(sliced.table()[0] == 0.2);

  CHECK(approx_eq(condition(pa, Assignment{}), pa, 0.0));

  // condition then sum_out equals slicing the brute-force joint
  std::mt19937_64 rng(5);
  Factor j = random_factor(rng, {A, B}, {d2, d2});
  Assignment evb;
  evb.bind(B, 1);
  Factor left = condition(j, evb);
  for_each_assignment({A}, {d2}, [&](const Assignment& a) {
    Assignment full = a;
    full.bind(B, 1);
    CHECK(left.at(a) == doctest::Approx(j.at(full)).epsilon(1e-14));
  });

  Assignment bad;
  bad.bind(var("NOPE2"), 0);
  CHECK_THROWS_AS(condition(pa, bad), UnknownVariable);
  Assignment oob;
  oob.bind(A, 5);
  CHECK_THROWS_AS(condition(pa, oob), ValueOutOfRange);
}

TEST_CASE("normalize") {
  VariableId A = var("A");
  Domain d2 = dom({"t", "f"});
  Factor f = make_factor({A}, {d2}, {0.2, 0.6});
  Factor n = normalize(f);
  CHECK(n.table()[0] == doctest::Approx(0.25));
  CHECK(n.table()[1] == doctest::Approx(0.75));
  CHECK(approx_eq(normalize(n), n, 1e-12));
  CHECK_THROWS_AS(normalize(make_factor({A}, {d2}, {0.0, 0.0})), ZeroMass);
}

TEST_CASE("cost model: one table per k-ary product") {
  VariableId X = var("X"), Y = var("Y"), Z = var("Z");
  Domain d2 = dom_n(2), d3 = dom_n(3);
  std::mt19937_64 rng(3);
  Factor f1 = random_factor(rng, {X, Y}, {d2, d3});
  Factor f2 = random_factor(rng, {Y, Z}, {d3, d2});
  Factor f3 = random_factor(rng, {Z}, {d2});

  CostCounters cost;
  {
    CostScope scope(cost);
    const Factor* fs[3] = {&f1, &f2, &f3};
    Factor p = multiply_all(std::span<const Factor* const>(fs, 3));
    CHECK(p.size() == 2 * 3 * 2);
  }
  CHECK(cost.table_cells_allocated == 12);   // exactly the union-scope table
  CHECK(cost.mul_adds == 12 * 3);
}
