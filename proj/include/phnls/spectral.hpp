#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "phnls/hermite.hpp"

namespace phnls {

// Discretization of the coefficient space: x-torus [-Lx, Lx) with Nx Fourier
// modes ξ_j = πj/Lx, j ∈ [-Nx/2, Nx/2), times Hermite modes k < K.
// Storage index jj = j + Nx/2 runs in natural (ascending ξ) order.
class BasisSpec {
 public:
  BasisSpec(double Lx, std::size_t Nx, std::size_t K, std::size_t hermite_nodes = 0);

  double Lx() const { return Lx_; }
  std::size_t Nx() const { return Nx_; }
  std::size_t K() const { return hermite_.modes(); }
  std::size_t size() const { return Nx_ * K(); }
  const HermiteBasis& hermite() const { return hermite_; }

  int j_of(std::size_t jj) const { return static_cast<int>(jj) - static_cast<int>(Nx_ / 2); }
  double xi(std::size_t jj) const;
  double eigenvalue(std::size_t jj, std::size_t k) const;
  double lambda_max() const;
  double x(std::size_t m, std::size_t Mx = 0) const;

  bool operator==(const BasisSpec& o) const;

 private:
  double Lx_;
  std::size_t Nx_;
  HermiteBasis hermite_;
};

// Coefficients c[jj][k] of u = Σ c e^{iξx} h_k(y) / sqrt(2Lx).
class SpectralField {
 public:
  explicit SpectralField(const BasisSpec& spec);
  SpectralField(const BasisSpec& spec, std::vector<cplx> coeffs);

  const BasisSpec& spec() const { return spec_; }
  std::vector<cplx>& data() { return c_; }
  const std::vector<cplx>& data() const { return c_; }
  cplx& operator()(std::size_t jj, std::size_t k) { return c_[jj * spec_.K() + k]; }
  const cplx& operator()(std::size_t jj, std::size_t k) const { return c_[jj * spec_.K() + k]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(cplx a);
  bool is_zero() const;
  bool all_finite() const;

  static SpectralField unit_mode(const BasisSpec& spec, std::size_t jj, std::size_t k);

 private:
  BasisSpec spec_;
  std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx s, SpectralField a);

// Σ conj(a) b, i.e. ∫ conj(u) v.
cplx inner(const SpectralField& a, const SpectralField& b);
double l2_norm(const SpectralField& f);

// Physical samples are laid out [i][m]: Hermite node i outer, x-point m inner.
// Mx = 0 means the native grid Mx = Nx; larger Mx zero-pads in x.
std::vector<cplx> to_physical(const SpectralField& f, std::size_t Mx = 0);
SpectralField to_spectral(std::span<const cplx> samples, const BasisSpec& spec, std::size_t Mx = 0);

// ∫∫ f dx dy for samples on the (Mx, Hermite-node) grid: (2Lx/Mx) Σ W_i f.
cplx grid_integral(std::span<const cplx> samples, const BasisSpec& spec, std::size_t Mx = 0);
double grid_integral(std::span<const double> samples, const BasisSpec& spec, std::size_t Mx = 0);

// Diagonal symbol m(ξ, k).
struct Multiplier {
  std::function<cplx(double xi, std::size_t k)> symbol;

  cplx operator()(double xi, std::size_t k) const { return symbol(xi, k); }

  static Multiplier identity();
  static Multiplier sobolev(double s);  // λ^{s/2}
  static Multiplier heat(double t);  // e^{-tλ}
  static Multiplier schrodinger(double t);  // e^{itλ}
  static Multiplier lp_smooth(double N);  // φ(λ/N²)
  static Multiplier lp_block(double N);  // ψ_N(λ)
  static Multiplier indicator(int lambda);  // sqrt(λ) ∈ [lambda, lambda+1)
};

Multiplier operator*(const Multiplier& a, const Multiplier& b);

SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m);

double sobolev_norm(const SpectralField& f, double s);

// ((‖D^s u‖² + ‖⟨y⟩^s u‖²)/2)^{1/2} for even integer s, computed exactly in
// the Hermite ladder representation (y and ∂y are tridiagonal in k). The 1/2
// makes s = 0 return the L2 norm.
double equivalent_norm(const SpectralField& f, double s);

// Frozen smooth cutoff: 1 on [0,1], 0 on [2,∞),
// f(2-λ)/(f(2-λ)+f(λ-1)) in between with f(s) = exp(-1/s).
double lp_phi(double lambda);
// ψ_N(λ) = φ(λ/N²) - φ(4λ/N²).
double lp_psi(double N, double lambda);

enum class LPKind { S, Delta };
SpectralField lp_project(const SpectralField& f, int N, LPKind kind);
SpectralField indicator_project(const SpectralField& f, int lambda);

// Integer ⌊sqrt(λ)⌋ shell index of a mode, robust at perfect squares.
int shell_index(double eigenvalue);

}  // namespace phnls
