#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace phnls {

using cplx = std::complex<double>;

// Gauss-Hermite rule for the weight e^{-y^2}.
// scaled_weights[i] = weights[i] * exp(nodes[i]^2); these stay finite when
// weights underflow and are the ones used against Hermite functions.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> scaled_weights;
  std::size_t size() const { return nodes.size(); }
};

QuadratureRule gauss_hermite_nodes(std::size_t n);

// L2-normalized Hermite function h_k(y).
double hermite_eval(int k, double y);

// h_0(y) .. h_{count-1}(y) into out. The recurrence runs on a rescaled value
// with a tracked exponent, so large |y| neither underflows nor overflows.
void hermite_eval_all(double y, std::size_t count, double* out);

// Hermite modes k < K together with a quadrature rule (default 2K nodes) and
// the table h_k(y_i), laid out [k][i]. Rule and table are built on first use
// and shared read-only between copies.
class HermiteBasis {
 public:
  explicit HermiteBasis(std::size_t modes, std::size_t nodes = 0);

  std::size_t modes() const { return modes_; }
  std::size_t nodes() const { return nodes_; }
  const QuadratureRule& rule() const;
  const std::vector<double>& table() const;
  double at(std::size_t k, std::size_t i) const { return table()[k * nodes_ + i]; }

  // Copy with one table entry shifted by delta. Used for fault injection.
  HermiteBasis perturbed(std::size_t k, std::size_t i, double delta) const;

 private:
  struct Data;
  std::size_t modes_;
  std::size_t nodes_;
  std::shared_ptr<Data> d_;
};

std::vector<cplx> hermite_analyze(std::span<const cplx> samples, const HermiteBasis& basis);
std::vector<cplx> hermite_synthesize(std::span<const cplx> coeffs, const HermiteBasis& basis);

// Largest |Σ_i W_i h_j(y_i) h_k(y_i) - δ_jk| over j,k < K.
double orthonormality_defect(const HermiteBasis& basis);

// ∫ h_k0 h_k1 h_k2 h_k3 dy by quadrature. Requires nodes >= 2 Σk + 8.
double quadruple_product(int k0, int k1, int k2, int k3, const HermiteBasis& basis);

// ∫ h_n(y) h_m(a y) dy in closed form (generating-function expansion).
long double hermite_dilation_overlap(int n, int m, long double a);

}  // namespace phnls
