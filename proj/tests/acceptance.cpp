// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"

using namespace nilmult;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome timed(double budget, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double dt = seconds_since(t0);
  o.require(dt < budget, "runtime " + std::to_string(dt) + " s over budget");
  std::ostringstream s;
  s.precision(3);
  s << std::fixed << dt << " s";
  o.detail = o.detail.empty() ? s.str() : s.str() + "; " + o.detail;
  return o;
}

CyclicFactors orders(std::initializer_list<long long> r) { return CyclicFactors(r); }

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results;

  results.emplace_back("1 free-product formula on Z_2 * Z_2", timed(1.0, [](Outcome& o) {
    const auto z2 = GroupData::cyclic(2);
    o.require(burns_ellis_m2(z2, z2) == FgAbelianGroup::cyclic(2), "M2(Z_2*Z_2) != Z_2");
    o.require(direct_sum(z2.m2, z2.m2).is_trivial(), "M2(Z_2) + M2(Z_2) not trivial");
  }));

  results.emplace_back("2 formula trivial for coprime cyclic factors", timed(1.0, [](Outcome& o) {
    for (auto f : {orders({2, 3}), orders({3, 4}), orders({2, 3, 5}), orders({4, 9, 25})})
      o.require(m2_free_product_cyclics(f).is_trivial(), render_orders(f));
  }));

  results.emplace_back("3 truncated multiplier trivial on the coprime grid", timed(300.0, [](Outcome& o) {
    int cells = 0;
    for (auto f : {orders({2, 3}), orders({2, 9}), orders({3, 4}), orders({2, 3, 5})})
      for (int c = 1; c <= 3; ++c)
        for (int k = c + 1; k <= std::min(c + 3, 6); ++k) {
          ++cells;
          const auto q = truncated_multiplier(f, c, k).quotient;
          o.require(q.is_trivial(), render_orders(f) + " c=" + std::to_string(c) + " k=" + std::to_string(k) +
                                        " gives " + render(q));
        }
    o.require(cells == 36, "grid has " + std::to_string(cells) + " cells");
  }));

  results.emplace_back("4 weight-2 and weight-3 intersections at depth 4", timed(300.0, [](Outcome& o) {
    for (auto f : {orders({2, 3}), orders({2, 9}), orders({3, 4}), orders({2, 3, 5})}) {
      const auto r = verify_intersection_layers(f, 4);
      o.require(r.passed() && r.checks.size() == 2, render_orders(f));
    }
  }));

  results.emplace_back("5 rho intersection at n=3, depth 5", timed(300.0, [](Outcome& o) {
    for (auto f : {orders({2, 3}), orders({3, 5})}) o.require(verify_rho_intersection(f, 3, 5).passed(), render_orders(f));
  }));

  results.emplace_back("6 (2,2) class 2 bounded by Z_2 and monotone in depth", timed(300.0, [](Outcome& o) {
    const auto exact = burns_ellis_m2(GroupData::cyclic(2), GroupData::cyclic(2));
    FgAbelianGroup previous;
    std::string values;
    for (int k = 3; k <= 6; ++k) {
      const auto q = truncated_multiplier(orders({2, 2}), 2, k).quotient;
      values += (values.empty() ? "" : ", ") + std::string("k=") + std::to_string(k) + ": " + render(q);
      bool only_twos = q.is_finite();
      for (const auto& d : q.invariant_factors()) only_twos = only_twos && d == 2;
      o.require(only_twos, "k=" + std::to_string(k) + " not a quotient of Z_2");
      o.require(oracle::is_quotient_of(previous, q), "k=" + std::to_string(k) + " not monotone");
      o.require(oracle::is_quotient_of(q, exact), "k=" + std::to_string(k) + " exceeds Z_2");
      previous = q;
    }
    o.detail = values;
  }));

  results.emplace_back("7 Schur multiplier trivial for all (r,s) in {2..6}^2 at depth 4", timed(300.0, [](Outcome& o) {
    for (long long r = 2; r <= 6; ++r)
      for (long long s = 2; s <= 6; ++s)
        o.require(truncated_multiplier(orders({r, s}), 1, 4).quotient.is_trivial(),
                  std::to_string(r) + "," + std::to_string(s));
  }));

  results.emplace_back("8 property suites", timed(1800.0, [](Outcome& o) {
    for (const char* suite : {NILMULT_TEST_SERIES, NILMULT_TEST_HALL_BASIS, NILMULT_TEST_INTLINALG,
                              NILMULT_TEST_NILGROUP, NILMULT_TEST_MULTIPLIER}) {
      const std::string cmd = std::string("\"") + suite + "\" --gtest_brief=1 > /dev/null 2>&1";
      o.require(std::system(cmd.c_str()) == 0, std::string(suite) + " failed");
    }
  }));

  bool all = true;
  for (const auto& [name, outcome] : results) {
    std::cout << (outcome.pass ? "PASS" : "FAIL") << "  criterion " << name << "  (" << outcome.detail << ")\n";
    all = all && outcome.pass;
  }
  return all ? 0 : 1;
}
