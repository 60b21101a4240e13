#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phnls/bourgain.hpp"
#include "phnls/spectral.hpp"

namespace phnls {

// i∂ₜu + Au + γ|u|²u = 0. The conserved energy is ½‖u‖²_{H¹} + (γ/4)∫|u|⁴,
// so γ = +1 is the defocusing case.
enum class Nonlinearity { defocusing, focusing, linear };

double gamma_of(Nonlinearity n);
std::string to_string(Nonlinearity n);
Nonlinearity parse_nonlinearity(const std::string& s);

SpectralField linear_propagate(const SpectralField& f, double t);

enum class HeatMethod { spectral, mehler };
SpectralField heat_propagate(const SpectralField& f, double t, HeatMethod method);

// x-grid used for products: 2Nx points, so cubic products are alias-free in x.
std::size_t dealiased_grid(const BasisSpec& spec);

// P(|u|²u) on the dealiased grid.
SpectralField cubic_term(const SpectralField& u);

// Strang step: half linear flow, exact phase e^{iγ dt |u|²}, half linear flow.
SpectralField nls_step(const SpectralField& u, double dt, double gamma);

struct InitialData {
  enum class Kind { coherent_gaussian, random_sobolev, explicit_coefficients };
  Kind kind = Kind::coherent_gaussian;
  // coherent_gaussian: a exp(-(x-x0)²/(2w²) + ipx) π^{-1/4} exp(-(y-y0)²/2)
  double amplitude = 1.0;
  double x0 = 0.0, y0 = 0.0, momentum = 0.0, width = 1.0;
  // random_sobolev: Gaussian coefficients times λ^{-s/2} e^{-decay λ}
  double s = 1.0, decay = 0.05;
  // explicit_coefficients: (j, k, value) with j signed
  struct Mode {
    int j;
    std::size_t k;
    cplx value;
  };
  std::vector<Mode> modes;
  // If positive, rescale so that ‖u‖_{H^{norm_s}} = norm_target.
  double norm_target = 0.0;
  double norm_s = 1.0;
};

SpectralField make_initial(const InitialData& init, const BasisSpec& spec, std::uint64_t seed);

struct SimConfig {
  BasisSpec spec{16.0, 256, 128};
  Nonlinearity nonlinearity = Nonlinearity::defocusing;
  double dt = 1e-3;
  double t_end = 1.0;
  std::size_t output_stride = 1;  // steps between stored frames
  InitialData initial;
  std::uint64_t seed = 0;
  bool keep_frames = true;
  // Abort with BlowUpDetected once ‖u‖_{H¹} exceeds this multiple of its initial value.
  double blowup_factor = 1e6;

  void validate() const;
};

struct Observables {
  double t, mass, energy, h1, h2, h4;
};

double mass(const SpectralField& u);
double quartic_integral(const SpectralField& u);
double energy(const SpectralField& u, double gamma);
Observables observe(const SpectralField& u, double t, double gamma);

struct SimulationResult {
  Trajectory trajectory;  // frames only when keep_frames
  std::vector<Observables> series;
  SpectralField final_state;
};

SimulationResult simulate(const SimConfig& cfg);
// Same run from an explicit initial field.
SimulationResult simulate(const SimConfig& cfg, const SpectralField& initial);

struct PicardResult {
  std::vector<Trajectory> iterates;  // u^(0) .. u^(iters)
  std::vector<double> differences;   // d_n = max_t ‖u^(n) - u^(n-1)‖_{H¹}, n >= 1
  bool contracting = true;           // false if differences stop decreasing after iteration 3
};

// Duhamel iteration on the grid t_n = nT/steps with trapezoid quadrature.
PicardResult picard_iterate(const SpectralField& phi, double T, std::size_t iters, double gamma,
                            std::size_t steps = 400);

struct TimeDerivatives {
  std::vector<SpectralField> d;  // ∂ₜ^0 u .. ∂ₜ^m u
  std::vector<SpectralField> n;  // P ∂ₜ^j (|u|²u), j = 0 .. m-1
  double projection_loss = 0.0;  // largest relative norm of the discarded part
};

// ∂ₜ^{j+1}u = i(A ∂ₜ^j u + γ Σ_{a+b+c=j} j!/(a!b!c!) ∂ₜ^a u ∂ₜ^b u conj(∂ₜ^c u)).
// With extra_nonlinear, also returns P∂ₜ^m(|u|²u) as n[m].
TimeDerivatives time_derivatives(const SpectralField& u, int m, double gamma, bool extra_nonlinear = false);
SpectralField time_derivative(const SpectralField& u, int m, double gamma);

}  // namespace phnls
