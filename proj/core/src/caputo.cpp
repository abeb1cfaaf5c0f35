#include "fracar/caputo.hpp"

#include <cmath>
#include <string>

#include "fracar/errors.hpp"

namespace fracar {

void validate_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must lie in (0, 1], got " + std::to_string(alpha));
  }
}

void fill_l1_weights(std::size_t k, double alpha, std::span<double> out) {
  validate_alpha(alpha);
  if (out.size() != k) {
    throw InvariantViolation("l1 weight buffer has length " + std::to_string(out.size()) +
                             ", expected " + std::to_string(k));
  }
  const double beta = 1.0 - alpha;
  // w_{k,j} depends only on m = k - j; walk m upwards from the newest step.
  double upper = std::pow(1.0, beta);
  for (std::size_t m = 1; m <= k; ++m) {
    const double lower = upper;
    upper = std::pow(static_cast<double>(m + 1), beta);
    out[k - m] = upper - lower;
  }
}

L1Weights l1_weights(std::size_t k, double alpha) {
  if (k < 1) throw DomainError("l1_weights: step index k must be >= 1");
  L1Weights w{alpha, std::vector<double>(k)};
  fill_l1_weights(k, alpha, w.coefficients);
  return w;
}

void HistoryBuffer::append(std::span<const Vec4> increment) {
  if (increment.size() != cell_count_) {
    throw InvariantViolation("history increment has " + std::to_string(increment.size()) +
                             " cells, buffer expects " + std::to_string(cell_count_));
  }
  data_.insert(data_.end(), increment.begin(), increment.end());
}

std::span<const Vec4> HistoryBuffer::increment(std::size_t j) const {
  return std::span<const Vec4>(data_).subspan(j * cell_count_, cell_count_);
}

void memory_term(const HistoryBuffer& history, double alpha, std::span<Vec4> out,
                 std::vector<double>& weights) {
  validate_alpha(alpha);
  if (out.size() != history.cell_count()) {
    throw InvariantViolation("memory term output has " + std::to_string(out.size()) +
                             " cells, history has " + std::to_string(history.cell_count()));
  }
  for (Vec4& m : out) m = Vec4{};
  const std::size_t k = history.step_count();
  if (k == 0 || alpha == 1.0) return;

  weights.resize(k);
  fill_l1_weights(k, alpha, weights);
  // O(k * cells): the hot loop of a fractional run.
  for (std::size_t j = 0; j < k; ++j) {
    const double w = weights[j];
    const std::span<const Vec4> inc = history.increment(j);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t c = 0; c < 4; ++c) out[i].v[c] += w * inc[i].v[c];
    }
  }
}

std::vector<Vec4> memory_term(const HistoryBuffer& history, double alpha) {
  std::vector<Vec4> out(history.cell_count());
  std::vector<double> weights;
  memory_term(history, alpha, out, weights);
  return out;
}

double caputo_l1_scalar(std::span<const double> samples, double dt, double alpha) {
  validate_alpha(alpha);
  if (samples.size() < 2) throw DomainError("caputo_l1_scalar: need at least 2 samples");
  if (!(dt > 0.0)) throw DomainError("caputo_l1_scalar: dt must be positive");
  const std::size_t n = samples.size() - 1;
  const double beta = 1.0 - alpha;
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::pow(static_cast<double>(n - j), beta) -
                     std::pow(static_cast<double>(n - j - 1), beta);
    sum += w * (samples[j + 1] - samples[j]);
  }
  return std::pow(dt, -alpha) / std::tgamma(2.0 - alpha) * sum;
}

double coefficient_limit_check(std::size_t k, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("coefficient_limit_check requires alpha in (0, 1), got " +
                      std::to_string(alpha));
  }
  if (k < 1) throw DomainError("coefficient_limit_check: k must be >= 1");
  const double kd = static_cast<double>(k);
  // (k+1)^b - k^b = k^b expm1(b log1p(1/k)), which avoids cancellation at large k.
  const double b_k = std::pow(kd, 1.0 - alpha) * std::expm1((1.0 - alpha) * std::log1p(1.0 / kd));
  return 1.0 / (b_k * std::pow(kd, alpha));
}

}  // namespace fracar
