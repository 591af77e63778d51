#include "sslhs/problems.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "sslhs/blackbox.hpp"
#include "sslhs/errors.hpp"

namespace sslhs {

double eval_p1(std::span<const double> y, double a, double delta) {
  return 1.0 / (std::abs(a - y[0] * y[0] - y[1] * y[1]) + delta);
}

namespace {

double block_norm_sq(std::span<const double> y, std::size_t begin, std::size_t end) {
  double s = 0.0;
  for (std::size_t m = begin; m < end; ++m) s += y[m] * y[m];
  return s;
}

}  // namespace

double eval_p2(std::span<const double> y, std::size_t dprime, double r, double c) {
  return block_norm_sq(y, 0, dprime) <= r * r ? c : 0.0;
}

double eval_p3(std::span<const double> y, std::size_t dprime, double r1, double r2, double c) {
  double v = 0.0;
  if (block_norm_sq(y, 0, dprime) <= r1 * r1) v += c;
  if (block_norm_sq(y, dprime, 2 * dprime) <= r2 * r2) v += c;
  return v;
}

void ModelSpec::validate() const {
  if (dim == 0) throw ConfigError("model dimension must be positive");
  switch (kind) {
    case ProblemKind::P1:
      if (dim != 2) throw ConfigError("p1 requires d = 2");
      if (!(delta > 0.0)) throw ConfigError("p1 requires delta > 0");
      break;
    case ProblemKind::P2:
      if (dprime == 0 || dim < dprime) throw ConfigError("p2 requires 1 <= dprime <= d");
      if (!(radius > 0.0)) throw ConfigError("p2 requires radius > 0");
      break;
    case ProblemKind::P3:
      if (dprime == 0 || dim < 2 * dprime) throw ConfigError("p3 requires d >= 2 dprime");
      if (!(radius > 0.0 && radius2 > 0.0)) throw ConfigError("p3 requires positive radii");
      break;
    case ProblemKind::Blackbox:
      if (command.empty()) throw ConfigError("blackbox model requires a command");
      break;
  }
}

std::string ModelSpec::name() const {
  switch (kind) {
    case ProblemKind::P1: return "p1";
    case ProblemKind::P2: return "p2";
    case ProblemKind::P3: return "p3";
    case ProblemKind::Blackbox: return "blackbox";
  }
  return "unknown";
}

std::string ModelSpec::params() const {
  const auto f = format_double;
  switch (kind) {
    case ProblemKind::P1: return "a=" + f(a) + ";delta=" + f(delta);
    case ProblemKind::P2:
      return "dprime=" + std::to_string(dprime) + ";r=" + f(radius) + ";c=" + f(c);
    case ProblemKind::P3:
      return "dprime=" + std::to_string(dprime) + ";r1=" + f(radius) + ";r2=" + f(radius2) +
             ";c=" + f(c);
    case ProblemKind::Blackbox: {
      // Keep the CSV column intact.
      std::string cmd = command;
      for (char& ch : cmd) {
        if (ch == ',' || ch == '\n') ch = ' ';
      }
      return "cmd=" + cmd;
    }
  }
  return {};
}

namespace {

// Volume of {y in [0,1]^k : |y| <= r} for r < 1: an orthant of the k-ball.
std::optional<double> orthant_ball_volume(std::size_t k, double r) {
  if (!(r < 1.0)) return std::nullopt;
  switch (k) {
    case 1: return r;
    case 2: return std::numbers::pi * r * r / 4.0;
    case 3: return std::numbers::pi * r * r * r / 6.0;
    default: return std::nullopt;
  }
}

}  // namespace

std::optional<double> ModelSpec::exact_mean() const {
  if (kind == ProblemKind::P2) {
    auto v = orthant_ball_volume(dprime, radius);
    if (v) return c * *v;
  }
  if (kind == ProblemKind::P3) {
    auto v1 = orthant_ball_volume(dprime, radius);
    auto v2 = orthant_ball_volume(dprime, radius2);
    if (v1 && v2) return c * (*v1 + *v2);
  }
  return std::nullopt;
}

ProblemKind parse_problem_kind(const std::string& name) {
  if (name == "p1" || name == "P1") return ProblemKind::P1;
  if (name == "p2" || name == "P2") return ProblemKind::P2;
  if (name == "p3" || name == "P3") return ProblemKind::P3;
  if (name == "blackbox") return ProblemKind::Blackbox;
  throw ConfigError("unknown problem '" + name + "' (expected p1, p2, p3 or blackbox)");
}

Model make_model(const ModelSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case ProblemKind::P1:
      return [a = spec.a, delta = spec.delta](std::span<const double> y) { return eval_p1(y, a, delta); };
    case ProblemKind::P2:
      return [dp = spec.dprime, r = spec.radius, c = spec.c](std::span<const double> y) {
        return eval_p2(y, dp, r, c);
      };
    case ProblemKind::P3:
      return [dp = spec.dprime, r1 = spec.radius, r2 = spec.radius2, c = spec.c](std::span<const double> y) {
        return eval_p3(y, dp, r1, r2, c);
      };
    case ProblemKind::Blackbox: {
      auto process = std::make_shared<BlackBoxProcess>(spec.command);
      return [process](std::span<const double> y) { return process->evaluate(y); };
    }
  }
  throw ConfigError("unsupported model kind");
}

}  // namespace sslhs
