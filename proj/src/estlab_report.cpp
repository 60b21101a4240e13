#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "phnls/error.hpp"
#include "phnls/estlab.hpp"

namespace phnls {

using nlohmann::json;

std::size_t SweepPlan::frames() const {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(frames_per_unit) * T - 1e-9)) + 1;
}

void SweepPlan::validate() const {
  if (samples < 8) throw InvalidArgument("SweepPlan: samples must be at least 8");
  if (!(T > 0) || !std::isfinite(T)) throw InvalidArgument("SweepPlan: T must be positive");
  if (frames_per_unit < 128) throw InvalidArgument("SweepPlan: frames_per_unit must be at least 128");
  if (!(b > 0 && b < 1) || !(b_embed > 0 && b_embed < 1) || !(b_prime > 0 && b_prime < 1))
    throw InvalidArgument("SweepPlan: Bourgain exponents must lie in (0,1)");
  if (!(delta > 0 && delta < 0.5)) throw InvalidArgument("SweepPlan: delta must lie in (0,1/2)");
  for (int v : M)
    if (v < 1) throw InvalidArgument("SweepPlan: M values must be >= 1");
  for (int v : N)
    if (v < 1) throw InvalidArgument("SweepPlan: N values must be >= 1");
  if (lambda_low.size() != 3) throw InvalidArgument("SweepPlan: lambda_low needs three entries");
}

json SweepPlan::to_json() const {
  return json{{"M", M},
              {"N", N},
              {"lambda0", lambda0},
              {"lambda_low", lambda_low},
              {"samples", samples},
              {"seed", seed},
              {"T", T},
              {"frames_per_unit", frames_per_unit},
              {"b", b},
              {"b_embed", b_embed},
              {"b_prime", b_prime},
              {"delta", delta},
              {"eps", eps},
              {"s", s},
              {"diagnostic", diagnostic}};
}

void Cell::summarize() {
  if (values.empty()) return;
  max_ratio = *std::max_element(ratios.begin(), ratios.end());
  max_value = *std::max_element(values.begin(), values.end());
  double m = 0;
  for (double r : ratios) m += r;
  mean_ratio = m / static_cast<double>(ratios.size());
  // log of the mean from the logs, stable when values underflow
  double top = -std::numeric_limits<double>::infinity();
  for (double l : log_values) top = std::max(top, l);
  if (std::isinf(top)) {
    log_mean_value = top;
    return;
  }
  long double acc = 0;
  for (double l : log_values) acc += std::exp(static_cast<long double>(l - top));
  log_mean_value = top + static_cast<double>(std::log(acc / log_values.size()));
}

FitResult make_fit(std::string label, std::string variable, std::span<const double> abscissa,
                   std::span<const double> log_means, double expected, double tolerance, bool upper_bound) {
  FitResult r;
  r.label = std::move(label);
  r.variable = std::move(variable);
  r.expected = expected;
  r.tolerance = tolerance;
  r.upper_bound = upper_bound;
  std::vector<double> lx;
  for (double a : abscissa) lx.push_back(std::log(a));
  r.fit = fit_line(lx, log_means);
  if (upper_bound) {
    // A one-sided decay bound holds when every consecutive secant obeys it; a
    // faster-than-power law is curved in log-log, so R² alone does not gate it.
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < lx.size(); ++i) pts.emplace_back(lx[i], log_means[i]);
    std::sort(pts.begin(), pts.end());
    r.max_secant = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      r.max_secant = std::max(r.max_secant, (pts[i + 1].second - pts[i].second) / (pts[i + 1].first - pts[i].first));
    const double lim = expected + tolerance;
    if (r.fit.slope <= lim && r.max_secant <= lim)
      r.verdict = Verdict::pass;
    else
      r.verdict = r.fit.r2 < kMinR2 ? Verdict::inconclusive : Verdict::fail;
  } else if (expected == 0.0) {
    // Flat hypothesis: R² carries no information, the slope's standard error does.
    if (2.0 * r.fit.slope_stderr > tolerance)
      r.verdict = Verdict::inconclusive;
    else
      r.verdict = std::abs(r.fit.slope) <= tolerance ? Verdict::pass : Verdict::fail;
  } else if (r.fit.r2 < kMinR2)
    r.verdict = Verdict::inconclusive;
  else
    r.verdict = std::abs(r.fit.slope - expected) <= tolerance ? Verdict::pass : Verdict::fail;
  return r;
}

void EstimateReport::finalize() {
  verdict = Verdict::pass;
  for (const auto& f : fits) verdict = combine(verdict, f.verdict);
  for (const auto& c : checks) verdict = combine(verdict, c.passed ? Verdict::pass : Verdict::fail);
}

namespace {

json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

}  // namespace

json EstimateReport::to_json() const {
  json j;
  j["estimate"] = estimate;
  j["version"] = PHNLS_VERSION;
  j["config"] = config;
  j["verdict"] = to_string(verdict);
  if (!note.empty()) j["note"] = note;
  json cs = json::array();
  for (const auto& c : cells) {
    cs.push_back(json{{"params", c.params},
                      {"samples", c.values.size()},
                      {"max_ratio", num(c.max_ratio)},
                      {"mean_ratio", num(c.mean_ratio)},
                      {"max_value", num(c.max_value)},
                      {"log_mean_value", num(c.log_mean_value)},
                      {"values", nums(c.values)},
                      {"log_values", nums(c.log_values)},
                      {"ratios", nums(c.ratios)}});
  }
  j["cells"] = cs;
  json fs = json::array();
  for (const auto& f : fits) {
    fs.push_back(json{{"label", f.label},
                      {"variable", f.variable},
                      {"fit_on", "log cell mean vs log " + f.variable},
                      {"slope", num(f.fit.slope)},
                      {"intercept", num(f.fit.intercept)},
                      {"r2", num(f.fit.r2)},
                      {"residual", num(f.fit.residual)},
                      {"slope_stderr", num(f.fit.slope_stderr)},
                      {"points", f.fit.points},
                      {"expected_slope", f.expected},
                      {"tolerance", f.tolerance},
                      {"bound", f.upper_bound ? "upper" : "two-sided"},
                      {"max_secant", f.upper_bound ? num(f.max_secant) : json(nullptr)},
                      {"verdict", to_string(f.verdict)}});
  }
  j["fits"] = fs;
  json ks = json::array();
  for (const auto& c : checks)
    ks.push_back(json{{"name", c.name}, {"value", num(c.value)}, {"limit", num(c.limit)}, {"passed", c.passed}});
  j["checks"] = ks;
  return j;
}

std::string EstimateReport::to_csv() const {
  // Union of parameter names across cells, in sorted order.
  std::vector<std::string> keys;
  for (const auto& c : cells)
    for (auto it = c.params.begin(); it != c.params.end(); ++it)
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  std::ostringstream os;
  os << "estimate,cell";
  for (const auto& k : keys) os << ',' << k;
  os << ",sample,value,log_value,ratio\n";
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const auto& c = cells[ci];
    for (std::size_t s = 0; s < c.values.size(); ++s) {
      os << estimate << ',' << ci;
      for (const auto& k : keys) {
        os << ',';
        if (c.params.contains(k)) os << format_double(c.params[k].get<double>());
      }
      os << ',' << s << ',' << format_double(c.values[s]) << ',' << format_double(c.log_values[s]) << ','
         << format_double(c.ratios[s]) << '\n';
    }
  }
  return os.str();
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t cell, std::uint64_t sample) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(cell), static_cast<std::uint32_t>(cell >> 32),
                    static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32), 0x70686eu};
  return std::mt19937_64(seq);
}

}  // namespace phnls
