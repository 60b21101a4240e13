#pragma once

#include <span>
#include <string>

namespace phnls {

// Least-squares line y = intercept + slope x.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double residual = 0.0;  // root-mean-square residual
  double slope_stderr = 0.0;
  std::size_t points = 0;
};

SlopeFit fit_line(std::span<const double> x, std::span<const double> y);

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

// Combination: any fail -> fail, else any inconclusive -> inconclusive.
Verdict combine(Verdict a, Verdict b);

// Shortest decimal that round-trips to the same double; "nan", "inf", "-inf" otherwise.
std::string format_double(double v);

}  // namespace phnls
