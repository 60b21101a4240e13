#pragma once

#include <span>
#include <vector>

#include "phnls/spectral.hpp"

namespace phnls {

enum class Component { value, dx, dy };

// Tensor grid for evaluating fields away from the basis quadrature nodes: Mx
// points across the whole x-torus times a list of y points with weights. The
// uniform form puts Ny equally spaced points on [ylo, yhi] with weight dy.
// Fields may only populate Hermite rows k < kmax.
class SampleGrid {
 public:
  SampleGrid(const BasisSpec& spec, std::size_t kmax, std::size_t Mx, double ylo, double yhi, std::size_t Ny);
  // Explicit y nodes with quadrature weights.
  SampleGrid(const BasisSpec& spec, std::size_t kmax, std::size_t Mx, std::vector<double> y, std::vector<double> wy);

  // Gauss-Hermite nodes rescaled to the weight e^{-p y²/2}: sums of products of p
  // fields from rows < kmax are exact when nodes >= p (kmax - 1) / 2 + 1.
  static SampleGrid gaussian(const BasisSpec& spec, std::size_t kmax, std::size_t Mx, int p);

  std::size_t Mx() const { return Mx_; }
  std::size_t Ny() const { return y_.size(); }
  double dx() const { return dx_; }
  double y(std::size_t i) const { return y_[i]; }
  double weight(std::size_t i) const { return dx_ * wy_[i]; }  // area element of row i
  const BasisSpec& spec() const { return spec_; }

  // Samples [iy][m] of the requested components of e^{itA} f.
  std::vector<std::vector<cplx>> evaluate(const SpectralField& f, double t, std::span<const Component> comps) const;
  std::vector<cplx> evaluate(const SpectralField& f, double t = 0.0, Component c = Component::value) const;

  // Σ_i weight(i) Σ_m v[i][m]
  cplx integrate(std::span<const cplx> v) const;
  double integrate(std::span<const double> v) const;

 private:
  void build_table();

  BasisSpec spec_;
  std::size_t kmax_, Mx_;
  double dx_;
  std::vector<double> y_, wy_;
  std::vector<double> table_;  // [iy][k], k <= kmax
};

// Largest populated Hermite index + 1 and largest populated |j|.
struct ModeExtent {
  std::size_t kmax = 0;
  int jmax = 0;
  double lambda_max = 0;
};
ModeExtent mode_extent(const SpectralField& f);

}  // namespace phnls
