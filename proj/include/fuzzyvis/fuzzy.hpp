#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzyvis {

/// Selects a t-norm together with its dual t-conorm.
enum class Family { product, goedel, lukasiewicz };

std::string_view to_string(Family family);
/// Accepts `product|goedel|lukasiewicz`; throws InvalidParams otherwise.
Family parse_family(std::string_view token);

/// The operator triple used by one session. Negation is always standard.
struct FuzzyConfig {
  Family family = Family::product;

  bool operator==(const FuzzyConfig&) const = default;
};

/// A membership degree in [0, 1]. Construction rejects anything else,
/// including NaN.
class Degree {
 public:
  constexpr Degree() = default;
  explicit Degree(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

 private:
  double value_ = 0.0;
};

/// Raw-double kernels; callers guarantee inputs in [0, 1].
///
/// Operands are ordered before evaluation so every kernel is exactly
/// commutative. Rounded results satisfy t-norm <= min(a,b) and
/// t-conorm >= max(a,b) with no epsilon.
namespace ops {

inline double tnorm(Family f, double a, double b) noexcept {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  switch (f) {
    case Family::product: return lo * hi;
    case Family::goedel: return lo;
    case Family::lukasiewicz: return std::min(lo, std::max(0.0, (lo + hi) - 1.0));
  }
  return 0.0;
}

inline double tconorm(Family f, double a, double b) noexcept {
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  switch (f) {
    // a + b - ab, rearranged so rounding cannot drop below hi or exceed 1
    case Family::product: return hi + lo * (1.0 - hi);
    case Family::goedel: return hi;
    case Family::lukasiewicz: return std::min(1.0, lo + hi);
  }
  return 0.0;
}

inline double negate(double a) noexcept { return 1.0 - a; }

}  // namespace ops

Degree tnorm(const FuzzyConfig& config, Degree a, Degree b);
Degree tconorm(const FuzzyConfig& config, Degree a, Degree b);
Degree negate(const FuzzyConfig& config, Degree a);

/// Left folds. Throw EmptyList.
Degree fold_tnorm(const FuzzyConfig& config, std::span<const Degree> values);
Degree fold_tconorm(const FuzzyConfig& config, std::span<const Degree> values);

enum class ElementwiseOp { tnorm, tconorm, negate };

/// Throws DimensionMismatch when lengths differ, InvalidParams when the
/// operand count does not fit the operator.
std::vector<double> elementwise(const FuzzyConfig& config, ElementwiseOp op,
                                std::span<const double> lhs, std::span<const double> rhs = {});

/// In-place `acc[i] = op(acc[i], rhs[i])` for the binary operators.
void elementwise_accumulate(const FuzzyConfig& config, ElementwiseOp op, std::span<double> acc,
                            std::span<const double> rhs);

}  // namespace fuzzyvis
