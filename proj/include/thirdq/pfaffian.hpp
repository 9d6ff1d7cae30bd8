#pragma once

#include "thirdq/types.hpp"

namespace thirdq {

// Pfaffian of an antisymmetric matrix. Odd dimension gives 0; the empty
// matrix gives 1. Only the strictly upper triangle is read.
Complex pfaffian(const CMatrix& a);

// Minor expansion along the first row; exponential cost, meant for size <= 8.
Complex pfaffian_expansion(const CMatrix& a);

// Parlett-Reid tridiagonalization with partial pivoting, O(N^3).
Complex pfaffian_parlett_reid(const CMatrix& a);

}  // namespace thirdq
