#include "combisb/decision.hpp"

#include <algorithm>

#include "combisb/errors.hpp"

namespace combisb {

DecisionVector DecisionVector::from_support(std::size_t dim, std::span<const int> items) {
  DecisionVector x(dim);
  for (int i : items) {
    require(i >= 0 && static_cast<std::size_t>(i) < dim, "item index out of range");
    x.set(static_cast<std::size_t>(i));
  }
  return x;
}

std::size_t DecisionVector::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<int> DecisionVector::support() const {
  std::vector<int> s;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) s.push_back(static_cast<int>(i));
  return s;
}

double DecisionVector::dot(std::span<const double> w) const {
  require(w.size() == bits_.size(), "dimension mismatch in dot product");
  double total = 0.0;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) total += w[i];
  return total;
}

DecisionVector DecisionVector::operator^(const DecisionVector& o) const {
  require(dim() == o.dim(), "dimension mismatch");
  DecisionVector r(dim());
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] ^ o.bits_[i];
  return r;
}

DecisionVector DecisionVector::operator|(const DecisionVector& o) const {
  require(dim() == o.dim(), "dimension mismatch");
  DecisionVector r(dim());
  for (std::size_t i = 0; i < bits_.size(); ++i) r.bits_[i] = bits_[i] | o.bits_[i];
  return r;
}

std::string DecisionVector::to_string() const {
  std::string out = "{";
  bool first = true;
  for (int i : support()) {
    if (!first) out += ',';
    out += std::to_string(i);
    first = false;
  }
  return out + "}";
}

bool support_less(const DecisionVector& x, const DecisionVector& y) {
  const auto sx = x.support();
  const auto sy = y.support();
  return std::lexicographical_compare(sx.begin(), sx.end(), sy.begin(), sy.end());
}

}  // namespace combisb
