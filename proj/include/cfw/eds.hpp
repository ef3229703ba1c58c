#pragma once

// Integral elements, polar spaces, Cartan characters and Cartan's test for
// the differential ideal attached to a symmetric pair, computed at the
// identity tangent space.

#include "cfw/algebra.hpp"

namespace cfw {

struct IntegralElement {
  std::vector<Mat> basis;  // in U1, pairwise commuting
  int dim() const { return static_cast<int>(basis.size()); }
};

// Throws NotIntegral if a basis vector leaves U1 or a bracket fails to vanish.
void validate_integral(const SymmetricPair& p, const IntegralElement& E,
                       double tol = kTolSpace);

// H(E) = {y in U1 : [x_a, y] = 0 for every basis x_a}; U1 itself for dim 0.
Subspace polar_space(const SymmetricPair& p, const IntegralElement& E);

// dim H(E) - dim E - 1 (may be negative at a terminus).
int polar_rank(const SymmetricPair& p, const IntegralElement& E);

struct Flag {
  std::vector<IntegralElement> levels;  // E_0 (trivial) .. E_n
  int terminus_dim() const { return static_cast<int>(levels.size()) - 1; }
};

// (0) ⊂ span(a_1) ⊂ ... ⊂ A.
Flag canonical_flag(const SymmetricPair& p);

// Strict nesting with dim E_j = j; throws InvalidFlag.
void validate_flag(const SymmetricPair& p, const Flag& F);

struct CartanReport {
  std::vector<int> dimH;     // per level 0..n
  std::vector<int> polar_r;  // r(E_j)
  std::vector<int> c;        // c(E_j) = dim U - dim H(E_j)
  std::vector<int> s;        // Cartan characters s_0..s_n
  int cF = 0;                // c(E_0) + ... + c(E_{n-1})
  int codim = -1;            // rank of the linearized conditions at E_n
  bool regular_flag = false; // codim == cF (Cartan's test equality)
  bool involutive = false;
  std::vector<bool> probe_regular;  // per level j < n
};

CartanReport cartan_characters(const SymmetricPair& p, const Flag& F);

// Samples nearby integral elements (random perturbation + Newton re-projection
// onto the bracket constraints) and checks dim H is constant.
bool regularity_probe(const SymmetricPair& p, const IntegralElement& E,
                      int samples, unsigned seed);

// Characters plus the linearized-codimension computation at the terminus.
CartanReport cartan_test(const SymmetricPair& p, const Flag& F);

// Canonical flag: characters, probes and Cartan's test in one report;
// asserts s_2 = ... = s_r = 0.
CartanReport involutivity_report(const SymmetricPair& p, unsigned seed = 7,
                                 int probe_samples = 50);

}  // namespace cfw
