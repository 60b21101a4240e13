#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "phnls/fit.hpp"
#include "phnls/spectral.hpp"

namespace phnls {

struct SweepPlan {
  std::vector<int> M{4};
  std::vector<int> N{8, 16, 32, 64};
  std::vector<int> lambda0{16, 32, 64};
  std::vector<int> lambda_low{2, 2, 2};  // λ1, λ2, λ3
  std::size_t samples = 32;
  std::uint64_t seed = 1;
  double T = 1.0;
  std::size_t frames_per_unit = 128;
  double b = 0.4;        // b < 1/2 estimates
  double b_embed = 0.6;  // b > 1/2 norms of the trilinear bound
  double b_prime = 0.35;
  double delta = 0.1;
  double eps = 0.1;
  double s = 1.0;
  std::size_t threads = 1;
  bool diagnostic = false;  // run cells that violate preconditions and record only

  std::size_t frames() const;  // frames over [0, T], endpoints included
  void validate() const;
  nlohmann::json to_json() const;
};

struct Cell {
  nlohmann::json params;       // e.g. {"M": 4, "N": 16}
  std::vector<double> values;  // unnormalized quantity per sample
  std::vector<double> log_values;  // natural log of each value (exact where the value underflows)
  std::vector<double> ratios;  // values divided by the predicted scaling
  double max_ratio = 0, mean_ratio = 0, max_value = 0, log_mean_value = 0;

  void summarize();
};

struct FitResult {
  std::string label;
  std::string variable;  // abscissa name, fitted on log scale against log of the cell mean
  SlopeFit fit;
  double expected = 0;
  double tolerance = 0;
  bool upper_bound = false;  // pass iff slope <= expected + tolerance
  double max_secant = 0;     // steepest-to-shallowest slope between consecutive points (upper bounds)
  Verdict verdict = Verdict::inconclusive;
};

struct Check {
  std::string name;
  double value = 0;
  double limit = 0;
  bool passed = false;
};

struct EstimateReport {
  std::string estimate;
  nlohmann::json config;
  std::vector<Cell> cells;
  std::vector<FitResult> fits;
  std::vector<Check> checks;
  Verdict verdict = Verdict::inconclusive;
  std::string note;

  void finalize();  // derives verdict from fits and checks
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

// R² below this makes a fit inconclusive.
inline constexpr double kMinR2 = 0.9;

FitResult make_fit(std::string label, std::string variable, std::span<const double> abscissa,
                   std::span<const double> log_means, double expected, double tolerance, bool upper_bound = false);

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t cell, std::uint64_t sample);

// ---- random data -------------------------------------------------------------

// Δ_N φ (or S_N φ) for φ with i.i.d. complex Gaussian coefficients, normalized in L².
SpectralField random_block(const BasisSpec& spec, int N, std::mt19937_64& rng);

enum class ShellPart { any, x_dominated, hermite_dominated };
// 1_λ φ, φ i.i.d. Gaussian, restricted to ξ² >= λ²/2 (x-dominated) or ξ² < λ²/2.
SpectralField random_shell(const BasisSpec& spec, int lambda, ShellPart part, std::mt19937_64& rng);

// Δ_N δ_{(x0, y0)}, normalized in L².
SpectralField wavepacket(const BasisSpec& spec, int N, double x0, double y0);

// Gaussian coefficients on |j| <= jcap, k < kcap, drawn in a fixed (j, k) order so
// the same field results on any basis containing the band. Normalized in L².
SpectralField random_band(const BasisSpec& spec, int jcap, std::size_t kcap, std::mt19937_64& rng);

// Random smooth time envelope 1 + Σ_r c_r e^{iω_r t} sampled at t_n = n T/(F-1).
std::vector<cplx> random_envelope(std::size_t frames, double T, std::mt19937_64& rng);

// ---- single-sample kernels ---------------------------------------------------

// Per-frame ‖e^{itA}f e^{itA}g‖²_{L²} and (optionally) ‖·‖²_{H¹} at t_n = n T/(F-1).
struct BilinearProfile {
  std::vector<double> l2, h1;
};
BilinearProfile bilinear_profile(const SpectralField& f, const SpectralField& g, double T, std::size_t frames,
                                 bool with_h1);

double trapezoid(std::span<const double> v, double dt);

// ‖(χg1 e^{itA}f1)(χg2 e^{itA}f2)‖_{L²L²} and the two X^{0,b} norms of the factors.
struct BourgainPair {
  double lhs = 0, norm_u = 0, norm_v = 0;
};
BourgainPair bilinear_bourgain_sample(const SpectralField& f1, const SpectralField& f2,
                                      std::span<const cplx> g1, std::span<const cplx> g2, double T, double b);

// ∫ f0 f1 f2 f3 dz, f1..f3 of low Hermite degree, evaluated mode by mode.
// Returns the natural log of the modulus (-inf for an exact zero) and the value.
struct Pairing {
  std::complex<long double> value;
  double log_abs = 0;
};
Pairing quadruple_pairing(const SpectralField& f0, const SpectralField& f1, const SpectralField& f2,
                          const SpectralField& f3);
// Same integral by physical quadrature on a uniform window (roundoff-level zero check).
cplx quadruple_pairing_grid(const SpectralField& f0, const SpectralField& f1, const SpectralField& f2,
                            const SpectralField& f3);

// ‖e^{itA}φ‖_{L^q((0,T); L^r)}; q may be +inf.
double strichartz_norm(const SpectralField& phi, double q, double r, double T, std::size_t frames);

struct TrilinearSample {
  cplx pairing;          // ∫∫ u1 u2 conj(u3) conj(u0) dz dt
  double norms[4] = {};  // ‖u0‖_{X^{-s,b'}}, ‖u1‖_{X^{s,b}}, ‖u2‖_{X^{ε,b}}, ‖u3‖_{X^{ε,b}}
};
// u_i = χ g_i e^{itA} φ_i on [0, T].
TrilinearSample trilinear_sample(std::span<const SpectralField> phi, std::span<const std::vector<cplx>> env, double T,
                                 const SweepPlan& plan);

// ---- experiments -------------------------------------------------------------

BasisSpec estlab_default_spec(const std::string& estimate);
bool strichartz_admissible(double q, double r);

EstimateReport verify_strichartz(const BasisSpec& spec, double q, double r, const SweepPlan& plan);
EstimateReport verify_bilinear_l2(const BasisSpec& spec, const SweepPlan& plan);
EstimateReport verify_bilinear_h1(const BasisSpec& spec, const SweepPlan& plan);
EstimateReport verify_bilinear_bourgain(const BasisSpec& spec, const SweepPlan& plan);
// The three bilinear experiments from one pass over the same samples.
struct BilinearReports {
  EstimateReport l2, h1, bourgain;
};
BilinearReports verify_bilinear(const BasisSpec& spec, const SweepPlan& plan, bool with_h1 = true);
EstimateReport verify_almost_orthogonality(const BasisSpec& spec, const SweepPlan& plan);
EstimateReport verify_bernstein(const BasisSpec& spec, int p, int q, int s, const SweepPlan& plan);
EstimateReport verify_trilinear(const BasisSpec& spec, const SweepPlan& plan);

}  // namespace phnls
