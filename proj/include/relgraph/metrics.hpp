#pragma once

#include <vector>

#include "relgraph/errors.hpp"

namespace relgraph {

// Mean absolute error. Throws LengthMismatchError on unequal or empty input.
double mae(const std::vector<double>& predicted, const std::vector<double>& actual);

// Mean absolute percentage error, in percent. Throws ZeroTrueValueError if
// any actual value is zero.
double mape(const std::vector<double>& predicted, const std::vector<double>& actual);

}  // namespace relgraph
