#include "combisb/oracle.hpp"

#include <cmath>

#include "combisb/errors.hpp"

namespace combisb {

namespace {

// Keeps the first maximizer in support order.
template <class Score>
std::optional<Solution> scan(const DecisionFamily& family, std::size_t cap, Score score) {
  std::optional<Solution> best;
  for (auto& x : enumerate(family, cap)) {
    const std::optional<double> v = score(x);
    if (!v) continue;
    if (!best || *v > best->value ||
        (*v == best->value && support_less(x, best->decision))) {
      best = Solution{std::move(x), *v};
    }
  }
  return best;
}

}  // namespace

Solution brute_p1(const DecisionFamily& family, std::span<const double> w, std::size_t cap) {
  require(static_cast<int>(w.size()) == family.dim(), "weight dimension mismatch");
  auto best = scan(family, cap, [&](const DecisionVector& x) -> std::optional<double> {
    return x.dot(w);
  });
  if (!best) throw Infeasible("empty decision set");
  return *best;
}

Solution brute_p2(const DecisionFamily& family, std::span<const double> a,
                  std::span<const double> b, std::size_t cap) {
  require(static_cast<int>(a.size()) == family.dim() && static_cast<int>(b.size()) == family.dim(),
          "vector dimension mismatch");
  for (double v : b) require(v >= 0.0, "brute_p2 requires b >= 0");
  auto best = scan(family, cap, [&](const DecisionVector& x) -> std::optional<double> {
    return x.dot(a) + std::sqrt(x.dot(b));
  });
  if (!best) throw Infeasible("empty decision set");
  return *best;
}

std::optional<Solution> brute_p3(const DecisionFamily& family, std::span<const double> a,
                                 std::span<const double> b, double s, std::size_t cap) {
  require(static_cast<int>(a.size()) == family.dim() && static_cast<int>(b.size()) == family.dim(),
          "vector dimension mismatch");
  return scan(family, cap, [&](const DecisionVector& x) -> std::optional<double> {
    if (x.dot(a) < s) return std::nullopt;
    return x.dot(b);
  });
}

}  // namespace combisb
