#pragma once

// L1 discretization of the Caputo time derivative.
//
// With weights w_{k,j} = (k+1-j)^{1-alpha} - (k-j)^{1-alpha}, the explicit scheme
// subtracts the memory term  sum_{j<k} w_{k,j} (U^{j+1} - U^j)  from U^k. For
// alpha = 1 every weight is exactly zero and the scheme is the classical one.

#include <cstddef>
#include <span>
#include <vector>

#include "fracar/model.hpp"

namespace fracar {

// Throws DomainError unless alpha is in (0, 1].
void validate_alpha(double alpha);

struct L1Weights {
  double alpha = 1.0;
  std::vector<double> coefficients;  // j = 0 .. k-1, nondecreasing in j
};

L1Weights l1_weights(std::size_t k, double alpha);

// Writes w_{k,j} for j = 0..k-1 into out (out.size() == k). No allocation.
void fill_l1_weights(std::size_t k, double alpha, std::span<double> out);

// Increments U^{j+1} - U^j, stored contiguously step by step.
class HistoryBuffer {
 public:
  HistoryBuffer() = default;
  explicit HistoryBuffer(std::size_t cell_count) : cell_count_(cell_count) {}

  std::size_t cell_count() const { return cell_count_; }
  std::size_t step_count() const { return cell_count_ == 0 ? 0 : data_.size() / cell_count_; }
  bool empty() const { return data_.empty(); }

  // Throws InvariantViolation on a cell-count mismatch.
  void append(std::span<const Vec4> increment);
  std::span<const Vec4> increment(std::size_t j) const;

  void reserve_steps(std::size_t steps) { data_.reserve(steps * cell_count_); }
  void clear() { data_.clear(); }

 private:
  std::size_t cell_count_ = 0;
  std::vector<Vec4> data_;
};

// Per-cell weighted sum of the stored increments with l1_weights(k, alpha),
// k = history.step_count(). Zero for alpha = 1 or an empty history.
std::vector<Vec4> memory_term(const HistoryBuffer& history, double alpha);

// Same, into a caller-owned buffer; throws InvariantViolation if out.size()
// differs from the history's cell count. `weights` is scratch space.
void memory_term(const HistoryBuffer& history, double alpha, std::span<Vec4> out,
                 std::vector<double>& weights);

// L1 approximation of the Caputo derivative at the last sample time, for
// samples f(j dt), j = 0..n.
double caputo_l1_scalar(std::span<const double> samples, double dt, double alpha);

// b_k^{-1} / k^alpha with b_k = (k+1)^{1-alpha} - k^{1-alpha}; tends to 1/(1-alpha).
double coefficient_limit_check(std::size_t k, double alpha);

}  // namespace fracar
