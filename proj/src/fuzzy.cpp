#include "fuzzyvis/fuzzy.hpp"

#include <cmath>

#include "fuzzyvis/error.hpp"
#include "fuzzyvis/text.hpp"

namespace fuzzyvis {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::product: return "product";
    case Family::goedel: return "goedel";
    case Family::lukasiewicz: return "lukasiewicz";
  }
  return "product";
}

Family parse_family(std::string_view token) {
  if (token == "product") return Family::product;
  if (token == "goedel") return Family::goedel;
  if (token == "lukasiewicz") return Family::lukasiewicz;
  throw Error(ErrorCode::InvalidParams,
              "unknown fuzzy family '" + std::string(token) +
                  "' (expected product, goedel or lukasiewicz)",
              {std::string(token)});
}

Degree::Degree(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw Error(ErrorCode::InvalidDegree, "degree " + format_double(value) + " outside [0, 1]");
}

Degree tnorm(const FuzzyConfig& config, Degree a, Degree b) {
  return Degree(ops::tnorm(config.family, a, b));
}

Degree tconorm(const FuzzyConfig& config, Degree a, Degree b) {
  return Degree(ops::tconorm(config.family, a, b));
}

Degree negate(const FuzzyConfig&, Degree a) { return Degree(ops::negate(a)); }

namespace {

template <class Op>
Degree fold(std::span<const Degree> values, Op op) {
  if (values.empty()) throw Error(ErrorCode::EmptyList, "cannot fold an empty list of degrees");
  double acc = values.front();
  for (std::size_t i = 1; i < values.size(); ++i) acc = op(acc, values[i].value());
  return Degree(acc);
}

}  // namespace

Degree fold_tnorm(const FuzzyConfig& config, std::span<const Degree> values) {
  return fold(values, [f = config.family](double a, double b) { return ops::tnorm(f, a, b); });
}

Degree fold_tconorm(const FuzzyConfig& config, std::span<const Degree> values) {
  return fold(values, [f = config.family](double a, double b) { return ops::tconorm(f, a, b); });
}

std::vector<double> elementwise(const FuzzyConfig& config, ElementwiseOp op,
                                std::span<const double> lhs, std::span<const double> rhs) {
  if (op == ElementwiseOp::negate) {
    if (!rhs.empty())
      throw Error(ErrorCode::InvalidParams, "negation takes exactly one vector");
    std::vector<double> out(lhs.size());
    for (std::size_t i = 0; i < lhs.size(); ++i) out[i] = ops::negate(lhs[i]);
    return out;
  }
  std::vector<double> out(lhs.begin(), lhs.end());
  elementwise_accumulate(config, op, out, rhs);
  return out;
}

void elementwise_accumulate(const FuzzyConfig& config, ElementwiseOp op, std::span<double> acc,
                            std::span<const double> rhs) {
  if (acc.size() != rhs.size())
    throw Error(ErrorCode::DimensionMismatch,
                "vector lengths differ: " + std::to_string(acc.size()) + " vs " +
                    std::to_string(rhs.size()));
  const Family f = config.family;
  switch (op) {
    case ElementwiseOp::tnorm:
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = ops::tnorm(f, acc[i], rhs[i]);
      break;
    case ElementwiseOp::tconorm:
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = ops::tconorm(f, acc[i], rhs[i]);
      break;
    case ElementwiseOp::negate:
      throw Error(ErrorCode::InvalidParams, "negation is unary");
  }
}

}  // namespace fuzzyvis
