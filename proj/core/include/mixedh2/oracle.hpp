#pragma once

#include <vector>

#include "mixedh2/lti.hpp"

namespace mixedh2::oracle {

/// Finite section of a block Laurent operator: Markov blocks at lags -T..T,
/// where lag t multiplies z^{-t}.
struct ToeplitzTruncation {
  int horizon = 0;
  std::vector<Matrix> blocks;  // blocks[t + horizon]

  int rows() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows()); }
  int cols() const { return blocks.empty() ? 0 : static_cast<int>(blocks.front().cols()); }
  const Matrix& at(int lag) const { return blocks[static_cast<std::size_t>(lag + horizon)]; }
  Matrix& at(int lag) { return blocks[static_cast<std::size_t>(lag + horizon)]; }
  bool causal() const;

  static ToeplitzTruncation zeros(int horizon, int rows, int cols);
  // Causal impulse response h_0, h_1, ... (truncated or zero-padded to the horizon).
  static ToeplitzTruncation from_impulse(const std::vector<Matrix>& h, int horizon);
  // Fourier coefficients of grid samples; requires horizon < N / 2.
  static ToeplitzTruncation from_spectrum(const GridSpectrum& s, int horizon);
};

// Closed-loop [F K + G; K] impulse response for a realized controller.
ToeplitzTruncation closed_loop_impulse(const StateSpaceSystem& sys, const StateSpaceController& K, int horizon);

double markov_h2(const ToeplitzTruncation& T);
double toeplitz_hinf(const ToeplitzTruncation& T);

struct CausalSplit {
  GridSpectrum causal;
  GridSpectrum anticausal;
};
CausalSplit fft_causal_split(const GridSpectrum& s);

struct WeightedH2 {
  ToeplitzTruncation K_fir;
  double cost = 0.0;
};

// min over causal FIR K of sum_{s,t} r_{s-t} <h_s, h_t>, with r the Fourier
// coefficients of the weight N and h the closed-loop impulse response.
// Requires a Schur-stable A.
WeightedH2 finite_horizon_weighted_h2(const StateSpaceSystem& sys, const GridSpectrum& Nspec, int horizon = 64);

double weighted_cost(const StateSpaceSystem& sys, const GridSpectrum& Nspec, const std::vector<Matrix>& k_fir);

}  // namespace mixedh2::oracle
