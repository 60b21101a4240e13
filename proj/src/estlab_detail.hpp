#pragma once

#include <cmath>
#include <initializer_list>
#include <numbers>

#include "json.hpp"
#include "phnls/spectral.hpp"

namespace phnls::detail {

// y-spacing that resolves a product of factors with the given top Hermite rows.
inline double product_spacing(std::initializer_list<std::size_t> kmaxes) {
  double band = 0;
  for (std::size_t k : kmaxes) band += std::sqrt(2.0 * static_cast<double>(k) + 1.0) + 3.0;
  return 2.0 * std::numbers::pi / (1.15 * band);
}

inline double product_spacing(std::size_t kmax, std::size_t copies) {
  double band = static_cast<double>(copies) * (std::sqrt(2.0 * static_cast<double>(kmax) + 1.0) + 3.0);
  return 2.0 * std::numbers::pi / (1.15 * band);
}

// Torus points integrating trigonometric polynomials of the given degree exactly.
inline std::size_t torus_points(const BasisSpec& spec, int degree) {
  std::size_t Mx = spec.Nx();
  while (static_cast<int>(Mx) <= degree) Mx *= 2;
  return Mx;
}

inline nlohmann::json spec_json(const BasisSpec& spec) {
  return {{"Lx", spec.Lx()}, {"Nx", spec.Nx()}, {"K", spec.K()}, {"hermite_nodes", spec.hermite().nodes()}};
}

}  // namespace phnls::detail
