#include "combisb/hungarian.hpp"

#include <limits>

namespace combisb {

namespace {

// Shortest augmenting path Kuhn-Munkres on an n x m cost matrix, n <= m.
// Returns the column of each row.
std::vector<int> min_cost_rows(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const int m = n == 0 ? 0 : static_cast<int>(cost[0].size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& profit) {
  const int rows = static_cast<int>(profit.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(profit[0].size());
  if (cols == 0) return std::vector<int>(rows, -1);
  if (rows <= cols) {
    std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) cost[i][j] = -profit[i][j];
    return min_cost_rows(cost);
  }
  std::vector<std::vector<double>> cost(cols, std::vector<double>(rows));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) cost[j][i] = -profit[i][j];
  const auto col_to_row = min_cost_rows(cost);
  std::vector<int> row_to_col(rows, -1);
  for (int j = 0; j < cols; ++j) row_to_col[col_to_row[j]] = j;
  return row_to_col;
}

}  // namespace combisb
