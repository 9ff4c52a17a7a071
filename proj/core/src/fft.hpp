#pragma once

#include <complex>
#include <vector>

namespace mixedh2::detail {

using cvec = std::vector<std::complex<double>>;

// Conventions: samples x_k = sum_t c_t e^{-j w_k t}, w_k = 2 pi k / N.
// coefficients() returns c (index t >= N/2 holds lag t - N), samples() is
// its inverse.
cvec coefficients(const cvec& samples);
cvec samples(const cvec& coeffs);

}  // namespace mixedh2::detail
