#pragma once

#include <span>
#include <vector>

#include "phnls/spectral.hpp"

namespace phnls {

// Frames at t0 + n dt, n = 0..size-1, all on one basis.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<SpectralField> frames;

  const BasisSpec& spec() const { return frames.front().spec(); }
  double time(std::size_t n) const { return t0 + dt * static_cast<double>(n); }
  std::size_t size() const { return frames.size(); }
  void validate() const;
};

// Window χ over [a, b]: equals 1 on the middle half and vanishes at the ends,
// χ(t) = φ(2|t - c| / h) with c the midpoint, h the half-length, φ = lp_phi.
double time_window(double t, double a, double b);

struct BourgainParams {
  double s = 0.0;
  double b = 0.5;
  bool window = true;  // multiply frames by time_window over the frame range
};

enum class BourgainForm {
  direct,     // transform of χu with weight ⟨τ + λ⟩^{2b}
  conjugated  // transform of e^{-itA} χu with weight ⟨τ⟩^{2b}
};

// Time-frequency core for one scalar sequence w_n = w(t0 + n dt):
// ((1/2π) Σ_l |ŵ(τ_l)|² ⟨τ_l + shift⟩^{2b} Δτ)^{1/2}, ŵ(τ) = dt Σ e^{iτt_n} w_n,
// sampled on a zero-padded grid with τ in the period centred at -shift.
double time_sobolev_norm(std::span<const cplx> w, double t0, double dt, double b, double shift = 0.0);

double bourgain_norm(const Trajectory& traj, const BourgainParams& p, BourgainForm form = BourgainForm::direct);

// Zero-padding factor used by the time transforms for a sequence spanning T.
std::size_t bourgain_padding(double T);

}  // namespace phnls
