#pragma once

#include <vector>

#include "mixedh2/lti.hpp"

namespace mixedh2 {

/// Real symmetric trigonometric polynomial p(w) = c0 + 2 sum_k c_k cos(k w).
struct LaurentPolynomial {
  Vector coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  double operator()(double omega) const;
  Vector sample(const FrequencyGrid& grid) const;
};

/// L(z) = l0 + l1 z^-1 + ... + lm z^-m.
struct CausalPolynomial {
  Vector coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
  Complex operator()(double omega) const;
  std::vector<Complex> sample(const FrequencyGrid& grid) const;
  // Roots of z^m L(z).
  CVector roots() const;
};

// Laurent coefficients of |L|^2.
LaurentPolynomial squared_magnitude(const CausalPolynomial& L);

// Cepstral minimum-phase factor of positive samples: |L|^2 = N, L causal with
// positive constant term. Spectra touching zero are lifted by 1e-10 max N.
std::vector<Complex> cepstral_factor(const Vector& N);
GridSpectrum spectral_factor_grid(const GridSpectrum& N);

// Canonical factor of a positive Laurent polynomial via polynomial roots.
CausalPolynomial polynomial_factor(const LaurentPolynomial& p);

}  // namespace mixedh2
