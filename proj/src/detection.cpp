#include "oobsense/detection.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace oobsense {

namespace {

constexpr double kBracketLo = -10.0;
constexpr double kBracketHi = 10.0;

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream os;
    os << what << " must lie strictly between 0 and 1 (got " << p << ")";
    throw std::domain_error(os.str());
  }
}

}  // namespace

void DetectorParams::validate() const {
  if (!(sigma_u2 > 0.0)) throw std::invalid_argument("sigma_u2 must be > 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}

SenseWindow::SenseWindow(double duration, double f_s) : duration_(duration), f_s_(f_s) {
  if (!(duration > 0.0) || !std::isfinite(duration))
    throw std::invalid_argument("sense window duration must be > 0");
  if (!(f_s > 0.0) || !std::isfinite(f_s))
    throw std::invalid_argument("sampling frequency must be > 0");
  // Products like 1e-3 * 6e6 land a few ulps either side of the integer.
  n_samples_ = static_cast<std::int64_t>(std::floor(duration * f_s * (1.0 + 1e-12)));
  if (n_samples_ < 1) throw std::invalid_argument("sense window holds no complete sample");
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inverse(double p) {
  require_probability(p, "q_inverse argument");
  // Q is decreasing: Q(lo) > p > Q(hi) is kept throughout.
  double lo = kBracketLo;
  double hi = kBracketHi;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (q_function(mid) > p)
      lo = mid;
    else
      hi = mid;
  }
  return std::abs(q_function(lo) - p) <= std::abs(q_function(hi) - p) ? lo : hi;
}

double prob_detection(const DetectorParams& params, const SenseWindow& window) {
  const double n = static_cast<double>(window.n_samples());
  const double g = params.gamma;
  return q_function((params.epsilon / params.sigma_u2 - g - 1.0) * std::sqrt(n / (2.0 * g + 1.0)));
}

double prob_false_alarm(const DetectorParams& params, const SenseWindow& window) {
  const double n = static_cast<double>(window.n_samples());
  return q_function((params.epsilon / params.sigma_u2 - 1.0) * std::sqrt(n));
}

double threshold_for_false_alarm(double target_pf, const SenseWindow& window, double sigma_u2) {
  require_probability(target_pf, "target false-alarm probability");
  const double n = static_cast<double>(window.n_samples());
  return sigma_u2 * (1.0 + q_inverse(target_pf) / std::sqrt(n));
}

double threshold_for_detection(double target_pd, const SenseWindow& window, double sigma_u2,
                               double gamma) {
  require_probability(target_pd, "target detection probability");
  if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
  const double n = static_cast<double>(window.n_samples());
  return sigma_u2 * (gamma + 1.0 + q_inverse(target_pd) * std::sqrt((2.0 * gamma + 1.0) / n));
}

}  // namespace oobsense
