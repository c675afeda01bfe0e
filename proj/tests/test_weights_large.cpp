// Construction of the largest supported weights (slow tier).
#include "doctest.h"
#include "omf5/forms.hpp"
#include "omf5/weights.hpp"

using namespace omf5;

TEST_CASE("large weight construction") {
  IMat h = hessian_from_coeffs({1, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 0, 1, 0, 8});
  for (auto [a, b] : std::vector<std::pair<int, int>>{
           {5, 1}, {5, 3}, {5, 5}, {6, 0}, {6, 2}, {6, 4}, {6, 6}}) {
    auto w = build_weight(a, b, h);
    CHECK(w.dim == weight_dimension(a, b));
    CHECK((i64)w.basis.size() == w.dim);
    CHECK((i64)w.pivot_rows.size() == w.dim);
  }
}
