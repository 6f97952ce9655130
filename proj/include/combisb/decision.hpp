#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace combisb {

// A binary vector in {0,1}^d; item i is selected iff bit i is set.
class DecisionVector {
 public:
  DecisionVector() = default;
  explicit DecisionVector(std::size_t dim) : bits_(dim, 0) {}

  static DecisionVector from_support(std::size_t dim, std::span<const int> items);
  static DecisionVector from_support(std::size_t dim, std::initializer_list<int> items) {
    return from_support(dim, std::span<const int>(items.begin(), items.size()));
  }

  std::size_t dim() const { return bits_.size(); }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool on = true) { bits_[i] = on ? 1 : 0; }
  void flip(std::size_t i) { bits_[i] ^= 1; }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<int> support() const;

  double dot(std::span<const double> w) const;

  DecisionVector operator^(const DecisionVector& o) const;
  DecisionVector operator|(const DecisionVector& o) const;

  bool operator==(const DecisionVector&) const = default;

  std::string to_string() const;  // "{0,2,5}"

 private:
  std::vector<std::uint8_t> bits_;
};

// Strict order on supports: lexicographic comparison of the sorted item lists,
// a proper prefix being smaller. The empty decision is the minimum.
bool support_less(const DecisionVector& x, const DecisionVector& y);

}  // namespace combisb
