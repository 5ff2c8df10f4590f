#pragma once

#include <span>

#include "kosmann/expr.hpp"

namespace kosmann::detail {

/// Applies a non-leaf operator to already evaluated arguments. Throws
/// EvaluationError on division by zero or a logarithm of zero.
Complex apply(Op op, std::span<const Complex> args);

}  // namespace kosmann::detail
