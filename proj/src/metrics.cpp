#include "relgraph/metrics.hpp"

#include <cmath>

namespace relgraph {

double mae(const std::vector<double>& predicted, const std::vector<double>& actual) {
  if (predicted.size() != actual.size() || predicted.empty())
    throw LengthMismatchError("mae: inputs must be non-empty and equally long");
  double sum = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i) sum += std::abs(predicted[i] - actual[i]);
  return sum / static_cast<double>(predicted.size());
}

double mape(const std::vector<double>& predicted, const std::vector<double>& actual) {
  if (predicted.size() != actual.size() || predicted.empty())
    throw LengthMismatchError("mape: inputs must be non-empty and equally long");
  double sum = 0.0;
  for (size_t i = 0; i < predicted.size(); ++i) {
    if (actual[i] == 0.0)
      throw ZeroTrueValueError("mape: undefined for a zero actual value");
    sum += std::abs((predicted[i] - actual[i]) / actual[i]);
  }
  return 100.0 * sum / static_cast<double>(predicted.size());
}

}  // namespace relgraph
