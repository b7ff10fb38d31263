#include "orlicz/young.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace orlicz {
namespace {

// e^u - u - 1 without cancellation near zero.
double expm1mx(double u) {
  if (u < 1e-4) return u * u * (0.5 + u / 6.0 + u * u / 24.0);
  if (u > 709.0) return kInf;
  return std::expm1(u) - u;
}

// (1+u) log(1+u) - u without cancellation near zero.
double xlogx1p(double u) {
  if (u < 1e-4) return u * u * (0.5 - u / 6.0 + u * u / 12.0);
  if (std::isinf(u)) return kInf;
  return (1.0 + u) * std::log1p(u) - u;
}

double pow_checked(double x, double p) {
  const double v = std::pow(x, p);
  return std::isnan(v) ? kInf : v;
}

}  // namespace

YoungFunction YoungFunction::power(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("power catalog entry requires p > 1");
  return YoungFunction(YoungKind::Power, p, "power(p=" + std::to_string(p) + ")", {});
}

YoungFunction YoungFunction::exp_power(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("exp_power catalog entry requires p >= 1");
  return YoungFunction(YoungKind::ExpPower, p, "exp_power(p=" + std::to_string(p) + ")", {});
}

YoungFunction YoungFunction::l_log_l(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("l_log_l catalog entry requires p >= 1");
  return YoungFunction(YoungKind::LLogL, p, "l_log_l(p=" + std::to_string(p) + ")", {});
}

YoungFunction YoungFunction::custom(std::string name, std::function<double(double)> eval) {
  if (!eval) throw std::invalid_argument("custom catalog entry requires an evaluator");
  return YoungFunction(YoungKind::Custom, 0.0, std::move(name), std::move(eval));
}

double YoungFunction::operator()(double x) const {
  x = std::abs(x);
  switch (kind_) {
    case YoungKind::Power:
      return pow_checked(x, p_) / p_;
    case YoungKind::ExpPower:
      return expm1mx(pow_checked(x, p_));
    case YoungKind::LLogL:
      return xlogx1p(pow_checked(x, p_));
    case YoungKind::Custom: {
      const double v = eval_(x);
      return std::isnan(v) ? kInf : v;
    }
  }
  return kInf;
}

double YoungFunction::log_value(double t) const {
  switch (kind_) {
    case YoungKind::Power:
      return p_ * t - std::log(p_);
    case YoungKind::ExpPower: {
      const double pt = p_ * t;
      if (pt > 709.0) return kInf;            // log Phi itself overflows
      const double u = std::exp(pt);
      if (u > 40.0) return u + std::log1p(-(u + 1.0) * std::exp(-u));
      if (u < 1e-4) return 2.0 * pt + std::log(0.5 + u / 6.0 + u * u / 24.0);
      return std::log(expm1mx(u));
    }
    case YoungKind::LLogL: {
      const double pt = p_ * t;
      if (pt > 30.0) {
        // Phi(u) ~ u (log u - 1) + log u + 1 for large u = e^{pt}.
        const double w = pt;
        double corr = 0.0;
        if (pt < 700.0) corr = (w + 1.0) / (std::exp(pt) * (w - 1.0));
        return w + std::log(w - 1.0) + corr;
      }
      const double u = std::exp(pt);
      if (u < 1e-4) return 2.0 * pt + std::log(0.5 - u / 6.0 + u * u / 12.0);
      return std::log(xlogx1p(u));
    }
    case YoungKind::Custom: {
      const double v = (*this)(std::exp(t));
      return std::log(v);
    }
  }
  return kInf;
}

double conjugate(const YoungFunction& phi, double y, double tol, double bracket_cap) {
  y = std::abs(y);
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return kInf;
  const auto g = [&](double x) {
    const double v = phi(x);
    return std::isinf(v) ? -kInf : x * y - v;
  };

  double best = 0.0;  // g(0) = 0 is always attainable
  double hi = 1.0;
  double prev = g(1.0);
  best = std::max(best, prev);
  int falls = 0;
  while (falls < 3) {
    hi *= 2.0;
    if (hi > bracket_cap) {
      throw ConjugateBracketError("conjugate: bracket exceeded cap at y=" + std::to_string(y),
                                  best);
    }
    const double gx = g(hi);
    falls = (gx < prev) ? falls + 1 : 0;
    best = std::max(best, gx);
    prev = gx;
  }

  double lo = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double h = std::max(mid * 1e-9, 1e-300);
    if (g(mid + h) > g(mid - h)) {
      lo = mid;
    } else {
      hi = mid;
    }
    best = std::max(best, g(mid));
    if (hi - lo <= tol * std::max(1.0, std::abs(best))) break;
  }
  return best;
}

double inverse(const YoungFunction& phi, double y, double tol) {
  if (y < 0.0 || std::isnan(y)) throw std::invalid_argument("inverse: y must be nonnegative");
  if (y == 0.0) return 0.0;
  if (std::isinf(y)) return kInf;
  if (phi.kind() == YoungKind::Power) return std::pow(phi.param() * y, 1.0 / phi.param());

  double hi = 1.0;
  while (phi(hi) < y) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  double lo = hi > 1.0 ? hi * 0.5 : 0.0;
  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double v = phi(mid);
    if (std::abs(v - y) <= tol * y) return mid;
    if (hi - lo <= 1e-16 * lo) break;
    if (v < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

namespace {

// Log-log tabulation of a monotone positive function on a geometric range,
// with slope extrapolation beyond either end. Immutable after construction.
class LogLogTable {
 public:
  LogLogTable(const std::function<double(double)>& fn, double t_lo, double t_hi, int n) {
    ts_.reserve(n);
    vs_.reserve(n);
    const double step = (t_hi - t_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
      const double t = t_lo + step * i;
      const double v = fn(std::exp(t));
      if (v > 0.0 && std::isfinite(v)) {
        ts_.push_back(t);
        vs_.push_back(std::log(v));
      }
    }
    if (ts_.size() < 2) throw std::runtime_error("tabulation produced too few finite samples");
  }

  [[nodiscard]] double eval(double x) const {
    if (x == 0.0) return 0.0;
    const double t = std::log(x);
    std::size_t j;
    if (t <= ts_.front()) {
      j = 1;
    } else if (t >= ts_.back()) {
      j = ts_.size() - 1;
    } else {
      j = static_cast<std::size_t>(std::upper_bound(ts_.begin(), ts_.end(), t) - ts_.begin());
    }
    const double slope = (vs_[j] - vs_[j - 1]) / (ts_[j] - ts_[j - 1]);
    return std::exp(vs_[j - 1] + slope * (t - ts_[j - 1]));
  }

 private:
  std::vector<double> ts_;
  std::vector<double> vs_;
};

YoungFunction tabulated(const std::string& name, const std::function<double(double)>& fn) {
  auto table = std::make_shared<const LogLogTable>(fn, std::log(0x1p-60), std::log(0x1p60), 4096);
  return YoungFunction::custom(name, [table](double x) { return table->eval(x); });
}

}  // namespace

YoungFunction conjugate_function(const YoungFunction& phi, double tol) {
  switch (phi.kind()) {
    case YoungKind::Power: {
      const double q = phi.param() / (phi.param() - 1.0);
      return YoungFunction::power(q);
    }
    case YoungKind::ExpPower:
      if (phi.param() == 1.0) return YoungFunction::l_log_l(1.0);
      break;
    case YoungKind::LLogL:
      if (phi.param() == 1.0) return YoungFunction::exp_power(1.0);
      break;
    case YoungKind::Custom:
      break;
  }
  return tabulated("conjugate(" + phi.name() + ")",
                   [phi, tol](double y) { return conjugate(phi, y, tol); });
}

YoungFunction compose_with_inverse(const YoungFunction& outer, const YoungFunction& inner) {
  return YoungFunction::custom(
      outer.name() + "∘" + inner.name() + "⁻¹",
      [outer, inner](double x) { return outer(inverse(inner, x)); });
}

YoungFunction dual_composite(const YoungFunction& phi1, const YoungFunction& phi2) {
  auto psi1 = std::make_shared<const YoungFunction>(conjugate_function(phi1));
  auto psi2 = std::make_shared<const YoungFunction>(conjugate_function(phi2));
  auto eval = [psi1, psi2](double y) {
    const double s = (*psi1)(y);
    if (s == 0.0) return 0.0;
    if (std::isinf(s)) return kInf;
    const auto h = [&](double t) {
      const double b = (*psi2)(t);
      return std::isinf(b) ? -kInf : (*psi1)(t) * s - b;
    };

    double hi = 1.0;
    double prev = h(1.0);
    double best = std::max(0.0, prev);
    int falls = 0;
    while (falls < 3 && hi < 1e150) {
      hi *= 2.0;
      const double v = h(hi);
      falls = (v < prev) ? falls + 1 : 0;
      best = std::max(best, v);
      prev = v;
    }
    double lo = 0.0;
    for (int i = 0; i < 160; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double step = std::max(mid * 1e-9, 1e-300);
      if (h(mid + step) > h(mid - step)) {
        lo = mid;
      } else {
        hi = mid;
      }
      best = std::max(best, h(mid));
    }
    return best;
  };
  return YoungFunction::custom("dual(" + phi1.name() + "," + phi2.name() + ")", std::move(eval));
}

namespace {

bool delta_pair_violates(GrowthCondition condition, const YoungFunction& phi, double constant,
                         double x, double y) {
  switch (condition) {
    case GrowthCondition::Delta2: {
      const double lhs = phi(2.0 * x);
      const double rhs = constant * phi(x);
      if (std::isinf(lhs) && std::isinf(rhs)) return false;
      return lhs > rhs * (1.0 + 1e-12);
    }
    case GrowthCondition::DeltaPrime: {
      const double lhs = phi(x * y);
      const double rhs = constant * phi(x) * phi(y);
      if (std::isinf(lhs) && std::isinf(rhs)) return false;
      return lhs > rhs * (1.0 + 1e-12);
    }
    case GrowthCondition::NablaPrime: {
      const double lhs = phi(constant * x * y);
      const double rhs = phi(x) * phi(y);
      if (std::isinf(lhs)) return false;
      if (std::isinf(rhs)) return true;
      return lhs * (1.0 + 1e-12) < rhs;
    }
  }
  return false;
}

}  // namespace

GrowthCertificate check_growth(const YoungFunction& phi, GrowthCondition condition,
                               SamplingGrid grid, double cap) {
  GrowthCertificate cert;
  cert.condition = condition;
  cert.grid = grid;
  cert.threshold = grid.x0;
  cert.cap = cap;
  const std::vector<double> pts = grid.values();

  if (condition == GrowthCondition::Delta2) {
    double k = 0.0;
    double arg = 0.0;
    for (double x : pts) {
      const double denom = phi(x);
      const double numer = phi(2.0 * x);
      if (!(denom > 0.0) || std::isinf(denom)) continue;
      const double ratio = numer / denom;
      if (ratio > k) {
        k = ratio;
        arg = x;
      }
    }
    if (k <= cap) {
      cert.holds = true;
      cert.constant = k;
    } else {
      cert.counterexample = {arg, 2.0 * arg};
    }
    return cert;
  }

  if (condition == GrowthCondition::DeltaPrime) {
    double c = 0.0;
    std::pair<double, double> arg{0.0, 0.0};
    for (double x : pts) {
      for (double y : pts) {
        const double denom = phi(x) * phi(y);
        if (!(denom > 0.0) || std::isinf(denom)) continue;
        const double ratio = phi(x * y) / denom;
        if (ratio > c) {
          c = ratio;
          arg = {x, y};
        }
      }
    }
    if (c <= cap) {
      cert.holds = true;
      cert.constant = c;
    } else {
      cert.counterexample = arg;
    }
    return cert;
  }

  // NablaPrime: smallest b on a power-of-two ladder with no violating pair.
  std::pair<double, double> last_violation{0.0, 0.0};
  for (int e = -8; e <= 8; ++e) {
    const double b = std::ldexp(1.0, e);
    if (b > cap) break;
    cert.constant = b;  // last ladder value tried, kept on failure
    bool ok = true;
    for (double x : pts) {
      for (double y : pts) {
        if (delta_pair_violates(condition, phi, b, x, y)) {
          ok = false;
          last_violation = {x, y};
          break;
        }
      }
      if (!ok) break;
    }
    if (ok) {
      cert.holds = true;
      cert.constant = b;
      return cert;
    }
  }
  cert.counterexample = last_violation;
  return cert;
}

bool reverify(const GrowthCertificate& cert, const YoungFunction& phi) {
  const std::vector<double> pts = cert.grid.values();
  if (cert.holds) {
    if (cert.condition == GrowthCondition::Delta2) {
      for (double x : pts) {
        if (delta_pair_violates(cert.condition, phi, cert.constant, x, 0.0)) return false;
      }
      return true;
    }
    for (double x : pts) {
      for (double y : pts) {
        if (delta_pair_violates(cert.condition, phi, cert.constant, x, y)) return false;
      }
    }
    return true;
  }
  if (!cert.counterexample) return false;
  const auto [x, y] = *cert.counterexample;
  if (cert.condition == GrowthCondition::Delta2) {
    return phi(2.0 * x) > cert.cap * phi(x);
  }
  if (cert.condition == GrowthCondition::DeltaPrime) {
    return phi(x * y) > cert.cap * phi(x) * phi(y);
  }
  return delta_pair_violates(cert.condition, phi, cert.constant, x, y);
}

namespace {

// log Phi1(a x) - log Phi2(x); nonnegative means the domination inequality
// holds at x. Log space keeps the comparison meaningful where the direct
// values overflow.
double domination_margin(const YoungFunction& phi1, const YoungFunction& phi2, double a,
                         double x) {
  const double t = std::log(x);
  return phi1.log_value(std::log(a) + t) - phi2.log_value(t);
}

}  // namespace

DominationCertificate dominates(const YoungFunction& phi1, const YoungFunction& phi2,
                                SamplingGrid grid) {
  DominationCertificate cert;
  cert.grid = grid;
  const std::vector<double> pts = grid.values();
  const std::size_t tail_points = 16;
  const double slack = 1e-12;

  for (int e = -10; e <= 20; ++e) {
    const double a = std::ldexp(1.0, e);
    std::ptrdiff_t last_bad = -1;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double m = domination_margin(phi1, phi2, a, pts[i]);
      if (std::isnan(m)) continue;  // both sides saturated, indeterminate
      if (m < -slack) last_bad = static_cast<std::ptrdiff_t>(i);
    }
    const std::size_t cut = static_cast<std::size_t>(last_bad + 1);
    if (cut + tail_points > pts.size()) {
      if (last_bad >= 0) cert.worst = {a, pts[static_cast<std::size_t>(last_bad)]};
      continue;
    }
    // A crossover pushed just past the grid by a large constant shows up as
    // a margin that shrinks toward the top; genuine domination widens or
    // holds the margin.
    const double m_first = domination_margin(phi1, phi2, a, pts[pts.size() - tail_points]);
    const double m_last = domination_margin(phi1, phi2, a, pts.back());
    if (std::isnan(m_last) || m_last >= m_first - 1e-9 * std::max(1.0, std::abs(m_first))) {
      cert.holds = true;
      cert.a = a;
      cert.threshold = cut == 0 ? 0.0 : pts[cut];
      cert.worst.reset();
      return cert;
    }
    cert.worst = {a, pts.back()};
  }
  return cert;
}

bool reverify(const DominationCertificate& cert, const YoungFunction& phi1,
              const YoungFunction& phi2) {
  const DominationCertificate again = dominates(phi1, phi2, cert.grid);
  if (again.holds != cert.holds) return false;
  if (cert.holds) {
    for (double x : cert.grid.values()) {
      if (x < cert.threshold) continue;
      const double m = domination_margin(phi1, phi2, cert.a, x);
      if (!std::isnan(m) && m < -1e-9) return false;
    }
  }
  return true;
}

TripleCertificate check_triple_inequality(const YoungFunction& phi1, const YoungFunction& phi2,
                                          const YoungFunction& phi3, TripleDirection direction,
                                          SamplingGrid grid) {
  TripleCertificate cert;
  cert.direction = direction;
  cert.grid = grid;
  const YoungFunction& left = direction == TripleDirection::Phi2Left ? phi2 : phi1;
  const YoungFunction& right = direction == TripleDirection::Phi2Left ? phi1 : phi2;

  std::vector<double> pts = grid.values();
  pts.insert(pts.begin(), 0.0);
  for (double x : pts) {
    for (double y : pts) {
      const double lhs = left(x * y);
      const double rhs = right(x) + phi3(y);
      if (std::isinf(rhs)) continue;
      if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) {
        cert.violation = {x, y};
        return cert;
      }
    }
  }
  cert.holds = true;
  return cert;
}

bool reverify(const TripleCertificate& cert, const YoungFunction& phi1, const YoungFunction& phi2,
              const YoungFunction& phi3) {
  TripleCertificate again = check_triple_inequality(phi1, phi2, phi3, cert.direction, cert.grid);
  return again.holds == cert.holds;
}

ValidityReport validate_young(const YoungFunction& phi, SamplingGrid grid) {
  ValidityReport report;
  const auto fail = [&](std::string why) {
    report.valid = false;
    report.failure = std::move(why);
    return report;
  };

  if (phi(0.0) != 0.0) return fail("value at zero is nonzero");
  const std::vector<double> pts = grid.values();
  double prev_slope = 0.0;
  double first_slope = -1.0;
  bool have_prev = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i];
    const double v = phi(x);
    if (std::isnan(v)) return fail("not evaluable at " + std::to_string(x));
    if (std::isinf(v)) break;  // saturated tail, nothing more to check
    if (!(v > 0.0)) return fail("nonpositive at " + std::to_string(x));
    const double slope = v / x;
    if (have_prev && slope < prev_slope * (1.0 - 1e-9)) {
      return fail("Phi(x)/x decreases at " + std::to_string(x));
    }
    if (!have_prev) first_slope = slope;
    prev_slope = slope;
    have_prev = true;
    if (i + 1 < pts.size()) {
      const double y = pts[i + 1];
      const double mid = 0.5 * (x + y);
      const double lhs = phi(mid);
      const double rhs = 0.5 * (phi(x) + phi(y));
      if (std::isfinite(rhs) && lhs > rhs * (1.0 + 1e-9)) {
        return fail("midpoint convexity fails at " + std::to_string(mid));
      }
    }
  }
  if (have_prev && !(prev_slope > first_slope * (1.0 + 1e-6))) {
    return fail("Phi(x)/x shows no growth across the grid");
  }
  return report;
}

}  // namespace orlicz
