#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "sslhs/model.hpp"

namespace sslhs {

double eval_p1(std::span<const double> y, double a, double delta);
double eval_p2(std::span<const double> y, std::size_t dprime, double r, double c);
double eval_p3(std::span<const double> y, std::size_t dprime, double r1, double r2, double c);

enum class ProblemKind { P1, P2, P3, Blackbox };

struct ModelSpec {
  ProblemKind kind = ProblemKind::P1;
  std::size_t dim = 2;
  double a = 0.3;        // P1 level-set constant
  double delta = 1.0;    // P1 regularisation
  std::size_t dprime = 2;
  double radius = 0.4;   // P2 radius; first P3 radius
  double radius2 = 0.4;  // second P3 radius
  double c = 1.0;        // P2/P3 scale
  std::string command;   // black-box command line, run through /bin/sh -c

  /// Throws ConfigError on inconsistent parameters.
  void validate() const;

  /// "p1", "p2", "p3" or "blackbox".
  std::string name() const;
  /// Semicolon-separated parameter list for reports and CSV rows.
  std::string params() const;

  /// Closed-form mean where one is known (P2/P3 with dprime <= 3 and radii < 1).
  std::optional<double> exact_mean() const;
};

ProblemKind parse_problem_kind(const std::string& name);

/// In-process evaluator for P1-P3; starts the child process for a black-box
/// spec. The returned model is safe to call from several threads.
Model make_model(const ModelSpec& spec);

}  // namespace sslhs
