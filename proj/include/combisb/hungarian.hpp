#pragma once

#include <vector>

namespace combisb {

// Maximum-weight assignment on a rows x cols profit matrix (rows <= cols is not
// required). Returns, for each row, the assigned column or -1. Every row gets a
// column when rows <= cols; the caller drops pairs it does not want.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& profit);

}  // namespace combisb
