#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "multiform/signed_measure.hpp"

namespace multiform {

// In-order complex DFT, out[j] = sum_k in[k] e^{-2 pi i jk/n} (FFTW backend,
// plans cached per size).
void fft_forward(std::vector<std::complex<double>>& data);

// Loads a measure on the length-n circular buffer (positions taken mod n;
// exact as long as n >= number of window points) and returns the DFT,
// i.e. the symbol rho_hat(2 pi j / n) for j = 0..n-1.
std::vector<std::complex<double>> measure_symbol_grid(const SignedMeasure& rho, std::int64_t n);

// Direct evaluation rho_hat(xi) = sum_x rho(x) e^{-i xi x}; the slow oracle.
std::complex<double> measure_symbol_at(const SignedMeasure& rho, double xi);

// max_j |rho_hat(2 pi j/n)|.
double measure_symbol_grid_max(const SignedMeasure& rho, std::int64_t n);

}  // namespace multiform
