#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace orlicz {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Geometric sampling grid on [lo, hi]. Points below x0 are dropped, so x0 = 0
// means the whole grid; a nonzero x0 records the threshold above which a
// condition was checked.
struct SamplingGrid {
  double lo = 0x1p-10;
  double hi = 0x1p20;
  int points = 128;
  double x0 = 0.0;

  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
      if (lo >= x0) out.push_back(lo);
      return out;
    }
    const double ratio = std::log(hi / lo) / (points - 1);
    for (int i = 0; i < points; ++i) {
      const double x = lo * std::exp(ratio * i);
      if (x >= x0) out.push_back(x);
    }
    return out;
  }
};

enum class TailClass { Stabilized, Growing, Diverged };

// Streaming classifier for a nonnegative series over a truncated family.
// Diverged: the running sum crossed `threshold`. Growing: the final-decade
// increment did not decay against the decade before it, so the tail shows no
// sign of convergence at the budget. Stabilized otherwise. Families with
// fewer than 100 planned terms are complete enumerations and stabilize.
class SumProbe {
 public:
  SumProbe(std::int64_t planned, double threshold)
      : planned_(planned), threshold_(threshold), c1_(planned / 100), c2_(planned / 10) {}

  void add(double term) {
    ++count_;
    if (!std::isinf(sum_)) {
      sum_ += term;
      if (!(sum_ <= threshold_) && crossed_at_ < 0) {
        crossed_at_ = count_;
        sum_ = kInf;
      }
    }
    if (count_ == c1_) at_c1_ = sum_;
    if (count_ == c2_) at_c2_ = sum_;
    if (count_ == next_checkpoint_ || count_ == planned_) {
      trace_.push_back(sum_);
      if (count_ == next_checkpoint_) next_checkpoint_ *= 10;
    }
  }

  [[nodiscard]] double value() const { return sum_; }
  [[nodiscard]] std::int64_t crossed_at() const { return crossed_at_; }
  [[nodiscard]] const std::vector<double>& trace() const { return trace_; }

  [[nodiscard]] TailClass classify() const {
    if (crossed_at_ >= 0) return TailClass::Diverged;
    if (planned_ < 100 || count_ < planned_) return TailClass::Stabilized;
    const double d1 = at_c2_ - at_c1_;
    const double d2 = sum_ - at_c2_;
    // The ratio test carries the decision; the floor only mutes increments
    // at relative roundoff scale. Terms of a nonnegative series cannot be
    // cancellation noise, so growth counts no matter how small the sum is.
    if (d2 > 0.5 * d1 && d2 > 1e-13 * sum_) return TailClass::Growing;
    return TailClass::Stabilized;
  }

 private:
  std::int64_t planned_;
  double threshold_;
  std::int64_t c1_;
  std::int64_t c2_;
  std::int64_t count_ = 0;
  std::int64_t next_checkpoint_ = 10;
  std::int64_t crossed_at_ = -1;
  double sum_ = 0.0;
  double at_c1_ = 0.0;
  double at_c2_ = 0.0;
  std::vector<double> trace_;
};

// Streaming classifier for running suprema. Diverged: the sup exceeds
// `threshold` while still increasing over the final decade. Stabilized: the
// relative change over the final decade is below rtol.
class SupProbe {
 public:
  SupProbe(std::int64_t planned, double threshold, double rtol = 1e-9)
      : planned_(planned), threshold_(threshold), rtol_(rtol), c2_(planned / 10) {}

  void add(double value) {
    ++count_;
    sup_ = std::max(sup_, value);
    if (count_ == c2_) at_c2_ = sup_;
    if (count_ == next_checkpoint_ || count_ == planned_) {
      trace_.push_back(sup_);
      if (count_ == next_checkpoint_) next_checkpoint_ *= 10;
    }
  }

  [[nodiscard]] double sup() const { return sup_; }
  [[nodiscard]] const std::vector<double>& trace() const { return trace_; }

  [[nodiscard]] TailClass classify() const {
    if (planned_ < 100 || count_ < planned_) {
      return sup_ > threshold_ ? TailClass::Diverged : TailClass::Stabilized;
    }
    const bool still_rising = sup_ - at_c2_ > rtol_ * std::max(1.0, sup_);
    if (sup_ > threshold_ && still_rising) return TailClass::Diverged;
    if (!still_rising) return TailClass::Stabilized;
    return TailClass::Growing;
  }

 private:
  std::int64_t planned_;
  double threshold_;
  double rtol_;
  std::int64_t c2_;
  std::int64_t count_ = 0;
  std::int64_t next_checkpoint_ = 10;
  double sup_ = 0.0;
  double at_c2_ = 0.0;
  std::vector<double> trace_;
};

}  // namespace orlicz
