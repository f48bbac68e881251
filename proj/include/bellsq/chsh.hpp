#pragma once

#include <array>
#include <cstdint>
#include <cstddef>

#include "bellsq/diagram.hpp"
#include "bellsq/finprob.hpp"

namespace bellsq {

// An outcome variable taking values exactly +1 or -1.
struct DichotomicRV {
  RandomVar rv;
};

// Throws unless every value is exactly +1.0 or -1.0.
DichotomicRV make_dichotomic(FinSpace space, std::vector<double> values);

// Sign pattern from a bit mask: bit (size-1-i) of mask set means outcome i
// maps to -1, clear means +1. Integer order of masks is therefore the
// lexicographic order of sign vectors with +1 before -1.
DichotomicRV sign_rv(const FinSpace& space, std::uint64_t mask);

// One choice of +-1 variable per corner, plus which of the four correlators
// enters the combination with a minus sign.
struct ChshAssignment {
  DichotomicRV xq, xr, xs, xt;
  MeasPair minus_term = MeasPair::QT;
};

// The product variable (x,y) -> x(a)*y(b) on the flattened joint. Spaces of
// x and y must match the joint's sides label-for-label.
RandomVar product_rv(const DichotomicRV& x, const DichotomicRV& y, const JointSpace& j);

// The four correlators E[X Y] in pair order QS, RS, RT, QT.
std::array<double, 4> chsh_expectations(const BellSquare& bs, const ChshAssignment& a);

// Three correlators plus, one minus, accumulated in fixed pair order.
double chsh_value(const BellSquare& bs, const ChshAssignment& a);

// Whether the value exceeds the locally realistic ceiling of 2.
bool is_violation(const BellSquare& bs, const ChshAssignment& a, double tol = kDefaultTol);

struct MaxChshResult {
  double value = 0.0;
  ChshAssignment assignment;
  std::uint64_t mask = 0;  // concatenated (Q,R,S,T) sign vector, Q first outcome highest bit
};

// Exhaustive maximum over all sign assignments and minus positions. Ties
// resolve to the lexicographically smallest sign vector, then the earliest
// minus position in pair order. Throws when any corner has more than 12
// outcomes ("search space too large"). The OpenMP build partitions the mask
// space across threads; results are bitwise identical to max_chsh_serial
// because per-assignment evaluation is shared and merging is ordered.
MaxChshResult max_chsh(const BellSquare& bs);

// Plain single-loop reference used to cross-check the parallel kernel.
MaxChshResult max_chsh_serial(const BellSquare& bs);

}  // namespace bellsq
