#pragma once

#include <functional>
#include <span>
#include <string>

namespace sslhs {

/// Scalar model on [0,1]^d, accessed only through point evaluations.
using Model = std::function<double(std::span<const double>)>;

/// Evaluates `model` and throws ModelError (naming the input point) if the
/// result is not finite.
double evaluate_checked(const Model& model, std::span<const double> point);

std::string format_point(std::span<const double> point);

/// Shortest round-trip decimal, independent of the global locale.
std::string format_double(double value);

}  // namespace sslhs
