#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "phnls/bourgain.hpp"
#include "phnls/evolve.hpp"
#include "phnls/fit.hpp"

namespace phnls {

struct GrowthReport {
  int k = 1;  // tracks ‖u‖_{H^{2k}}
  double horizon = 0.0;
  std::size_t stride = 1;
  SimConfig config;
  std::vector<double> t, norm, h1, mass, energy;

  SlopeFit fit;  // log ‖u‖_{H^{2k}} against log ⟨t⟩ over the second half
  double alpha = 0.0, alpha_lo = 0.0, alpha_hi = 0.0;  // 95% interval from the slope standard error
  double bound = 0.0;     // (2/3)(2k - 1)
  double tolerance = 0.1;
  double h1_ratio = 0.0;  // max/min of ‖u‖_{H¹}
  double mass_drift = 0.0, energy_drift = 0.0;  // max relative deviation from t = 0
  Verdict verdict = Verdict::inconclusive;

  nlohmann::json to_json() const;
  std::string to_csv() const;
  // growth_seed<seed>_k<k>_<nonlinearity>_T<horizon>
  std::string file_stem() const;
};

inline constexpr double kH1RatioLimit = 1.5;

double japanese_bracket(double t);

// Runs config over [0, horizon], sampling every stride steps. Frames are not kept.
GrowthReport track_growth(const SimConfig& config, int k, double horizon, std::size_t stride);
GrowthReport track_growth(const SimConfig& config, const SpectralField& initial, int k, double horizon,
                          std::size_t stride);

// (‖∂ₜ^k u - i^k A^k u‖_{H^s}, ‖u‖_{H^{s+2k-1}}).
std::pair<double, double> comparability_check(const SpectralField& u, int k, double s, double gamma);

struct EnergyTermSpec {
  enum class Type { S, R };
  enum class Op { dx, dy, bracket_y, identity };  // bracket_y multiplies by ⟨y⟩
  Type type = Type::S;
  Op L = Op::identity;
  int k = 0;
  std::array<int, 3> orders{0, 0, 0};  // (m1, m2, m3) or (n1, n2, n3)
  std::array<bool, 4> conj{false, true, false, true};  // u_i = conj(u) where set

  void validate() const;
};

// ∫ ∂ₜ^k L u0 ∂ₜ^{o1} L u1 ∂ₜ^{o2} u2 ∂ₜ^{o3} u3 dz by Gauss-Hermite quadrature exact
// for the polynomial part of the integrand.
cplx modified_energy_term(const SpectralField& u, const EnergyTermSpec& term, double gamma);

// d/dt ½‖A ∂ₜ^k u‖² = -γ Re ∫ ∂ₜ^k(|u|²u) ∂ₜ^{k+1} A ū dz on interior frames:
// left side by centred difference, right side at the middle frame.
struct EnergyIdentityCheck {
  std::vector<double> t, lhs, rhs, residual;
  double max_residual = 0.0;
  double scale = 0.0;  // max |rhs|
};
EnergyIdentityCheck energy_derivative_check(const Trajectory& traj, int k, double gamma);

// Residual on every other frame over the residual on all frames, compared at
// the shared times (root mean square). Second-order differencing gives 4.
double energy_identity_richardson(const Trajectory& traj, int k, double gamma);

}  // namespace phnls
