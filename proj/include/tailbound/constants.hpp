#pragma once

#include <cmath>
#include <numbers>

namespace tailbound {

// lambda = ln(2 e^3 / 9), computed as 3 - ln(4.5) to minimize roundings.
inline const double kLambda = 3.0 - std::log(4.5);
inline const double kExpLambda = std::exp(kLambda);
inline const double kSqrtLambda = std::sqrt(kLambda);

inline constexpr double kSqrtTwoPi = 2.506628274631000502415765284811;
inline constexpr double kInvSqrtTwoPi = 0.39894228040143267793994605993438;
inline constexpr double kSqrtTwo = std::numbers::sqrt2;

}  // namespace tailbound
