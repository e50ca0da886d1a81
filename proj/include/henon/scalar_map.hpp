#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "henon/error.hpp"
#include "henon/io.hpp"

namespace henon {

/// A C^2 map of the real line together with its first two derivatives.
struct ScalarMap {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;

  double operator()(double x) const { return f(x); }
};

inline ScalarMap logistic(double mu) {
  return {"logistic(" + format_real(mu) + ")",
          [mu](double x) { return mu * x * (1.0 - x); },
          [mu](double x) { return mu * (1.0 - 2.0 * x); },
          [mu](double) { return -2.0 * mu; }};
}

inline ScalarMap linear(double delta) {
  return {"linear(" + format_real(delta) + ")",
          [delta](double x) { return delta * x; },
          [delta](double) { return delta; },
          [](double) { return 0.0; }};
}

/// x -> delta*x + eta*sin(x)
inline ScalarMap linear_plus_sine(double delta, double eta) {
  return {"linear_plus_sine(" + format_real(delta) + "," + format_real(eta) + ")",
          [delta, eta](double x) { return delta * x + eta * std::sin(x); },
          [delta, eta](double x) { return delta + eta * std::cos(x); },
          [eta](double x) { return -eta * std::sin(x); }};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view text) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw InvalidArgument("not a finite number: '" + s + "'");
  return v;
}

}  // namespace detail

/// Builds a catalog map from text such as "logistic(2)", "linear(0.1)" or
/// "linear_plus_sine(0.1, 0.001)".
inline ScalarMap scalar_map_from_spec(std::string_view spec) {
  spec = detail::trim(spec);
  const auto open = spec.find('(');
  if (open == std::string_view::npos || spec.back() != ')')
    throw InvalidArgument("scalar map spec must look like name(args): '" + std::string(spec) + "'");
  const std::string_view name = detail::trim(spec.substr(0, open));
  std::string_view inner = spec.substr(open + 1, spec.size() - open - 2);

  std::vector<double> args;
  while (!detail::trim(inner).empty()) {
    const auto comma = inner.find(',');
    args.push_back(detail::parse_real(inner.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    inner.remove_prefix(comma + 1);
  }

  auto want = [&](std::size_t n) {
    if (args.size() != n)
      throw InvalidArgument(std::string(name) + " expects " + std::to_string(n) + " argument(s)");
  };
  if (name == "logistic") {
    want(1);
    return logistic(args[0]);
  }
  if (name == "linear") {
    want(1);
    return linear(args[0]);
  }
  if (name == "linear_plus_sine") {
    want(2);
    return linear_plus_sine(args[0], args[1]);
  }
  throw InvalidArgument("unknown scalar map '" + std::string(name) +
                        "' (known: logistic, linear, linear_plus_sine)");
}

/// Largest relative disagreement between the supplied derivatives and central
/// finite differences at `samples` evenly spaced points of [a, b]. Relative
/// error is measured against max(1, |derivative|).
inline double derivative_consistency_error(const ScalarMap& m, double a, double b, int samples = 101) {
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = samples == 1 ? a : a + (b - a) * k / (samples - 1);
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    const double fd1 = (m.f(x + h) - m.f(x - h)) / (2.0 * h);
    const double fd2 = (m.df(x + h) - m.df(x - h)) / (2.0 * h);
    const double d1 = m.df(x);
    const double d2 = m.d2f(x);
    worst = std::max(worst, std::abs(fd1 - d1) / std::max(1.0, std::abs(d1)));
    worst = std::max(worst, std::abs(fd2 - d2) / std::max(1.0, std::abs(d2)));
  }
  return worst;
}

/// Sampled estimate of ||h - L_delta||_2 = sup max(|h - delta x|, |h' - delta|, |h''|).
/// The true quantity is a supremum over the whole line; this only sees
/// [a, b], which `interval_only` records.
struct C2Estimate {
  double value = 0.0;
  double a = 0.0, b = 0.0;
  int samples = 0;
  bool interval_only = true;
};

inline C2Estimate c2_distance_to_linear(const ScalarMap& h, double delta, double a, double b, int samples) {
  if (samples < 100) throw InvalidArgument("c2_distance_to_linear needs at least 100 samples");
  if (!(a < b)) throw InvalidArgument("c2_distance_to_linear needs a < b");
  double sup = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double x = a + (b - a) * k / (samples - 1);
    sup = std::max({sup, std::abs(h.f(x) - delta * x), std::abs(h.df(x) - delta), std::abs(h.d2f(x))});
  }
  return {sup, a, b, samples, true};
}

}  // namespace henon
