// Usage sample: M^(2) of Z_2 * Z_2 from the free-product formula, and the truncated
// multiplier of Z_2 * Z_3 in a free nilpotent quotient.

#include <iostream>

#include "nilmult.hpp"

int main() {
  using namespace nilmult;

  const CyclicFactors d_inf{2, 2};
  std::cout << "M2(Z_2 * Z_2) = " << render(m2_free_product_cyclics(d_inf)) << "\n";

  for (int k = 3; k <= 5; ++k) {
    const auto r = truncated_multiplier({2, 3}, 2, k);
    std::cout << "M^(2)(Z_2 * Z_3) mod depth " << k << ": " << render(r.quotient) << "\n";
  }

  // Mal'cev coordinates of x^2 y^3 [y,x]^5 in F/gamma_3(F).
  const NilContext ctx(2, 2);
  const auto x = ctx.generator(1), y = ctx.generator(2);
  const auto g = power(x, 2) * power(y, 3) * power(group_commutator(y, x), 5);
  for (const auto& c : to_coordinates(g, ctx)) std::cout << c << " ";
  std::cout << "\n";
}
