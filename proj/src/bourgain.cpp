#include "phnls/bourgain.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "phnls/error.hpp"

namespace phnls {

void Trajectory::validate() const {
  if (frames.size() < 2) throw ShapeError("Trajectory: needs at least two frames");
  if (!(dt > 0)) throw InvalidArgument("Trajectory: dt must be positive");
  for (const auto& f : frames)
    if (!(f.spec() == frames.front().spec())) throw ShapeError("Trajectory: frames on different bases");
}

double time_window(double t, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  if (h <= 0) return 0.0;
  return lp_phi(2.0 * std::abs(t - c) / h);
}

std::size_t bourgain_padding(double T) {
  return static_cast<std::size_t>(std::ceil(25.0 / std::max(T, 1e-12))) + 2;
}

double time_sobolev_norm(std::span<const cplx> w, double t0, double dt, double b, double shift) {
  const std::size_t F = w.size();
  if (F == 0) return 0.0;
  const std::size_t L = F * bourgain_padding(F * dt);
  std::vector<cplx> buf(L);
  for (std::size_t n = 0; n < F; ++n) buf[n] = w[n];
  // Backward DFT gives Σ_n w_n e^{+2πi l n / L}, i.e. ŵ(τ_l) e^{-iτ_l t0} / dt.
  detail::fft_rows(buf.data(), L, 1, +1);
  const double dtau = 2.0 * std::numbers::pi / (static_cast<double>(L) * dt);
  // Pick the alias of each τ_l closest to -shift.
  const double centre = -shift;
  double total = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    double tau = dtau * static_cast<double>(l);
    double period = dtau * static_cast<double>(L);
    tau -= period * std::round((tau - centre) / period);
    double x = tau + shift;
    total += std::norm(buf[l]) * std::pow(1.0 + x * x, b);
  }
  (void)t0;  // |ŵ| does not depend on the time origin
  return std::sqrt(total * dt * dt * dtau / (2.0 * std::numbers::pi));
}

double bourgain_norm(const Trajectory& traj, const BourgainParams& p, BourgainForm form) {
  traj.validate();
  const std::size_t F = traj.size();
  if (F < 16) throw ResolutionError("bourgain_norm: at least 16 frames required");
  if (p.b < 0 || p.b > 1) throw InvalidArgument("bourgain_norm: b must lie in [0,1]");
  const BasisSpec& sp = traj.spec();
  if (traj.dt * sp.lambda_max() > std::numbers::pi)
    throw ResolutionError("bourgain_norm: dt*lambda_max exceeds pi; refine the frame spacing");

  const double a = traj.time(0), e = traj.time(F - 1);
  std::vector<double> chi(F, 1.0);
  if (p.window)
    for (std::size_t n = 0; n < F; ++n) chi[n] = time_window(traj.time(n), a, e);

  std::vector<cplx> w(F);
  double total = 0.0;
  for (std::size_t jj = 0; jj < sp.Nx(); ++jj)
    for (std::size_t k = 0; k < sp.K(); ++k) {
      bool any = false;
      const double lam = sp.eigenvalue(jj, k);
      for (std::size_t n = 0; n < F; ++n) {
        cplx c = chi[n] * traj.frames[n](jj, k);
        if (form == BourgainForm::conjugated) c *= std::polar(1.0, -lam * traj.time(n));
        w[n] = c;
        any = any || c != cplx{};
      }
      if (!any) continue;
      double shift = form == BourgainForm::direct ? lam : 0.0;
      double v = time_sobolev_norm(w, traj.t0, traj.dt, p.b, shift);
      total += std::pow(lam, p.s) * v * v;
    }
  return std::sqrt(total);
}

}  // namespace phnls
