#pragma once

#include "ncpi/ncpoly.hpp"
#include "ncpi/tensor2.hpp"

namespace ncpi {

/// Free difference quotient: the derivation with fdq(X) = 1 (x) 1 and
/// fdq(b) = 0 for b in B. A monomial b_0 X b_1 ... X b_n maps to the sum of
/// its n splits b_0 X...b_{i-1} (x) b_i X...X b_n.
///
/// Operates on the stored representation (not the canonical form) so the
/// induced projective-norm upper bounds stay tight.
TensorElem fdq(const NCPoly& p);

}  // namespace ncpi
