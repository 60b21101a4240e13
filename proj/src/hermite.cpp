#include "phnls/hermite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include "phnls/error.hpp"

namespace phnls {

namespace {

const double kPiQuarter = std::pow(std::numbers::pi, -0.25);
constexpr double kBig = 1e200;
const double kLogBig = std::log(kBig);

// Runs the normalized recurrence up to index n with h = v * exp(L).
// Returns v_n, v_{n-1} and L.
struct Tail {
  double v, vm1, L;
};

Tail recurrence_tail(double y, std::size_t n) {
  double L = -0.5 * y * y;
  double vm1 = 0.0, v = kPiQuarter;
  for (std::size_t k = 0; k < n; ++k) {
    double kk = static_cast<double>(k);
    double vn = y * std::sqrt(2.0 / (kk + 1.0)) * v - std::sqrt(kk / (kk + 1.0)) * vm1;
    vm1 = v;
    v = vn;
    if (std::abs(v) > kBig) {
      v /= kBig;
      vm1 /= kBig;
      L += kLogBig;
    }
  }
  return {v, vm1, L};
}

}  // namespace

QuadratureRule gauss_hermite_nodes(std::size_t n) {
  if (n == 0) throw InvalidArgument("gauss_hermite_nodes: n must be positive");
  QuadratureRule r;
  r.nodes.resize(n);
  if (n == 1) {
    r.nodes[0] = 0.0;
  } else {
    // Golub-Welsch: eigenvalues of the Jacobi matrix with off-diagonal sqrt(k/2).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(n - 1));
    for (std::size_t k = 1; k < n; ++k) sub[static_cast<Eigen::Index>(k - 1)] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("gauss_hermite_nodes: eigensolver failed");
    for (std::size_t i = 0; i < n; ++i) r.nodes[i] = es.eigenvalues()[static_cast<Eigen::Index>(i)];

    // Newton polish on h_n, with h_n' = sqrt(2n) h_{n-1} - y h_n.
    const double s2n = std::sqrt(2.0 * n);
    for (auto& y : r.nodes) {
      for (int it = 0; it < 3; ++it) {
        Tail t = recurrence_tail(y, n);
        double d = s2n * t.vm1 - y * t.v;
        if (d == 0.0) break;
        double step = t.v / d;
        y -= step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(y))) break;
      }
    }
    for (std::size_t i = 0; i < n / 2; ++i) {
      double a = 0.5 * (r.nodes[n - 1 - i] - r.nodes[i]);
      r.nodes[i] = -a;
      r.nodes[n - 1 - i] = a;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  }

  // Christoffel numbers W_i e^{y_i²} = 1 / Σ_{k<n} h_k(y_i)², summed from the same
  // Hermite function values the tables use, so per-node rounding cancels in
  // Σ_i W_i e^{y_i²} h_j(y_i) h_k(y_i). h_{n-1} is O(1) at every node of the rule,
  // so the sum never underflows.
  r.weights.resize(n);
  r.scaled_weights.resize(n);
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    double y = r.nodes[i];
    hermite_eval_all(y, n, h.data());
    double S = 0.0;
    for (double v : h) S += v * v;
    r.scaled_weights[i] = 1.0 / S;
    r.weights[i] = std::exp(-std::log(S) - y * y);
  }
  for (std::size_t i = 0; i < n / 2; ++i) {
    double a = 0.5 * (r.scaled_weights[i] + r.scaled_weights[n - 1 - i]);
    double b = 0.5 * (r.weights[i] + r.weights[n - 1 - i]);
    r.scaled_weights[i] = r.scaled_weights[n - 1 - i] = a;
    r.weights[i] = r.weights[n - 1 - i] = b;
  }
  return r;
}

void hermite_eval_all(double y, std::size_t count, double* out) {
  if (count == 0) return;
  // h_k = v_k * f * g; f = exp(L + 600) and g = exp(-600) keep f normal while
  // exp(L) alone would be subnormal.
  static const double g = std::exp(-600.0);
  double L = -0.5 * y * y;
  double f = std::exp(L + 600.0);
  double vm1 = 0.0, v = kPiQuarter;
  out[0] = (v * f) * g;
  for (std::size_t k = 0; k + 1 < count; ++k) {
    double kk = static_cast<double>(k);
    double vn = y * std::sqrt(2.0 / (kk + 1.0)) * v - std::sqrt(kk / (kk + 1.0)) * vm1;
    vm1 = v;
    v = vn;
    if (std::abs(v) > kBig) {
      v /= kBig;
      vm1 /= kBig;
      L += kLogBig;
      f = std::exp(L + 600.0);
    }
    out[k + 1] = (v * f) * g;
  }
}

double hermite_eval(int k, double y) {
  if (k < 0) throw InvalidArgument("hermite_eval: negative mode index");
  std::vector<double> h(static_cast<std::size_t>(k) + 1);
  hermite_eval_all(y, h.size(), h.data());
  return h.back();
}

struct HermiteBasis::Data {
  std::once_flag rule_once, table_once;
  QuadratureRule rule;
  std::vector<double> table;
};

HermiteBasis::HermiteBasis(std::size_t modes, std::size_t nodes)
    : modes_(modes), nodes_(nodes == 0 ? 2 * modes : nodes), d_(std::make_shared<Data>()) {
  if (modes == 0) throw InvalidArgument("HermiteBasis: K must be positive");
  if (nodes_ < modes_) throw InvalidArgument("HermiteBasis: fewer nodes than modes");
}

const QuadratureRule& HermiteBasis::rule() const {
  std::call_once(d_->rule_once, [this] { d_->rule = gauss_hermite_nodes(nodes_); });
  return d_->rule;
}

const std::vector<double>& HermiteBasis::table() const {
  const QuadratureRule& r = rule();
  std::call_once(d_->table_once, [this, &r] {
    std::vector<double> t(modes_ * nodes_);
    std::vector<double> col(modes_);
    for (std::size_t i = 0; i < nodes_; ++i) {
      hermite_eval_all(r.nodes[i], modes_, col.data());
      for (std::size_t k = 0; k < modes_; ++k) t[k * nodes_ + i] = col[k];
    }
    d_->table = std::move(t);
  });
  return d_->table;
}

HermiteBasis HermiteBasis::perturbed(std::size_t k, std::size_t i, double delta) const {
  if (k >= modes_ || i >= nodes_) throw InvalidArgument("HermiteBasis::perturbed: index out of range");
  HermiteBasis out(modes_, nodes_);
  const QuadratureRule& r = rule();
  std::vector<double> t = table();
  t[k * nodes_ + i] += delta;
  std::call_once(out.d_->rule_once, [&] { out.d_->rule = r; });
  std::call_once(out.d_->table_once, [&] { out.d_->table = std::move(t); });
  return out;
}

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Pairs = Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>;

}  // namespace

std::vector<cplx> hermite_analyze(std::span<const cplx> samples, const HermiteBasis& basis) {
  const std::size_t n = basis.nodes(), K = basis.modes();
  if (samples.size() != n) throw ShapeError("hermite_analyze: sample count does not match node count");
  const auto& W = basis.rule().scaled_weights;
  Pairs f(static_cast<Eigen::Index>(n), 2);
  for (std::size_t i = 0; i < n; ++i) {
    f(static_cast<Eigen::Index>(i), 0) = W[i] * samples[i].real();
    f(static_cast<Eigen::Index>(i), 1) = W[i] * samples[i].imag();
  }
  Eigen::Map<const RowMat> T(basis.table().data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(n));
  std::vector<cplx> out(K);
  Eigen::Map<Pairs> c(reinterpret_cast<double*>(out.data()), static_cast<Eigen::Index>(K), 2);
  c.noalias() = T * f;
  return out;
}

std::vector<cplx> hermite_synthesize(std::span<const cplx> coeffs, const HermiteBasis& basis) {
  const std::size_t n = basis.nodes(), K = basis.modes();
  if (coeffs.size() > K) throw ShapeError("hermite_synthesize: more coefficients than modes");
  const auto len = static_cast<Eigen::Index>(coeffs.size());
  std::vector<cplx> out(n);
  if (len == 0) return out;
  Eigen::Map<const RowMat> T(basis.table().data(), len, static_cast<Eigen::Index>(n));
  Eigen::Map<const Pairs> c(reinterpret_cast<const double*>(coeffs.data()), len, 2);
  Eigen::Map<Pairs> f(reinterpret_cast<double*>(out.data()), static_cast<Eigen::Index>(n), 2);
  f.noalias() = T.transpose() * c;
  return out;
}

double orthonormality_defect(const HermiteBasis& basis) {
  const std::size_t n = basis.nodes(), K = basis.modes();
  Eigen::Map<const RowMat> T(basis.table().data(), static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(n));
  Eigen::Map<const Eigen::VectorXd> W(basis.rule().scaled_weights.data(), static_cast<Eigen::Index>(n));
  RowMat G = T * W.asDiagonal() * T.transpose();
  G -= RowMat::Identity(G.rows(), G.cols());
  return G.cwiseAbs().maxCoeff();
}

double quadruple_product(int k0, int k1, int k2, int k3, const HermiteBasis& basis) {
  std::array<int, 4> k{k0, k1, k2, k3};
  std::sort(k.begin(), k.end());
  if (k[0] < 0 || static_cast<std::size_t>(k[3]) >= basis.modes())
    throw InvalidArgument("quadruple_product: mode index out of range");
  const std::size_t total = static_cast<std::size_t>(k[0] + k[1] + k[2] + k[3]);
  if (basis.nodes() < 2 * total + 8)
    throw ResolutionError("quadruple_product: quadrature needs at least 2*sum(k)+8 nodes");
  if (total % 2 == 1) return 0.0;
  const std::size_t n = basis.nodes();
  const auto& W = basis.rule().scaled_weights;
  const double* t = basis.table().data();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += W[i] * t[k[0] * n + i] * t[k[1] * n + i] * t[k[2] * n + i] * t[k[3] * n + i];
  }
  return s;
}

long double hermite_dilation_overlap(int n, int m, long double a) {
  if (n < 0 || m < 0) throw InvalidArgument("hermite_dilation_overlap: negative index");
  if ((n - m) % 2 != 0) return 0.0L;
  const long double d = 1.0L + a * a;
  const long double rho = (1.0L - a * a) / d;
  const long double sigma = 2.0L * a / d;
  const long double base = 0.5L * std::log(2.0L / d) +
                           0.5L * (std::lgamma(static_cast<long double>(n) + 1) +
                                   std::lgamma(static_cast<long double>(m) + 1));
  std::vector<long double> logs;
  std::vector<int> signs;
  for (int l = n % 2; l <= std::min(n, m); l += 2) {
    const int p = (n - l) / 2, q = (m - l) / 2;
    if (rho == 0.0L && (p > 0 || q > 0)) continue;
    if (sigma == 0.0L && l > 0) continue;
    long double lg = base - std::lgamma(static_cast<long double>(p) + 1) -
                     std::lgamma(static_cast<long double>(q) + 1) -
                     std::lgamma(static_cast<long double>(l) + 1);
    if (p + q > 0) lg += (p + q) * std::log(std::abs(rho) / 2.0L);
    if (l > 0) lg += l * std::log(std::abs(sigma));
    int sg = 1;
    if (rho < 0 && p % 2 == 1) sg = -sg;
    if (rho > 0 && q % 2 == 1) sg = -sg;
    if (sigma < 0 && l % 2 == 1) sg = -sg;
    logs.push_back(lg);
    signs.push_back(sg);
  }
  if (logs.empty()) return 0.0L;
  const long double top = *std::max_element(logs.begin(), logs.end());
  long double s = 0.0L;
  for (std::size_t i = 0; i < logs.size(); ++i) s += signs[i] * std::exp(logs[i] - top);
  return s * std::exp(top);
}

}  // namespace phnls
