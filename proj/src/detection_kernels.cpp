// Sample-level energy detector. count_h1_serial is the reference the OpenMP
// kernel is tested against; both must return identical counts.
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oobsense/detection.hpp"
#include "oobsense/rng.hpp"

namespace oobsense {

namespace {

constexpr double kInvTwo31 = 0x1.0p-31;

std::mt19937_64 trial_engine(std::uint64_t seed, std::int64_t trial) {
  return std::mt19937_64(
      rng::substream(seed, {rng::key(rng::Stream::detector_trial), static_cast<std::uint64_t>(trial)}));
}

}  // namespace

void draw_samples(std::span<std::complex<double>> out, double sigma_u2, double gamma,
                  bool pu_present, std::mt19937_64& engine) {
  // Marsaglia polar method on the two 32-bit halves of one draw; each
  // quadrature component ends up with variance sigma_u2 / 2.
  const double amp = std::sqrt(gamma * sigma_u2) * std::numbers::sqrt2 / 2.0;
  std::uint64_t symbols = 0;
  for (std::size_t n = 0; n < out.size(); ++n) {
    double u, v, s;
    do {
      const std::uint64_t bits = engine();
      u = (static_cast<double>(bits >> 32) + 0.5) * kInvTwo31 - 1.0;
      v = (static_cast<double>(bits & 0xffffffffULL) + 0.5) * kInvTwo31 - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0);
    const double scale = std::sqrt(-std::log(s) / s * sigma_u2);
    std::complex<double> y(u * scale, v * scale);
    if (pu_present) {
      if (n % 32 == 0) symbols = engine();
      const int sym = static_cast<int>(symbols & 3U);
      symbols >>= 2;
      // QPSK constellation (+-1 +-j) / sqrt(2) scaled to the signal power.
      y += std::complex<double>((sym & 1) ? -amp : amp, (sym & 2) ? -amp : amp);
    }
    out[n] = y;
  }
}

double energy_statistic(std::span<const std::complex<double>> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& y : samples) acc += std::norm(y);
  return acc / static_cast<double>(samples.size());
}

DetectionOutcome sense_once(const DetectorParams& params, const SenseWindow& window,
                            bool pu_present, std::mt19937_64& engine) {
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(window.n_samples()));
  draw_samples(buf, params.sigma_u2, params.gamma, pu_present, engine);
  const double t = energy_statistic(buf);
  return {t, t >= params.epsilon};
}

namespace kernels {

std::int64_t count_h1_serial(const DetectorParams& params, const SenseWindow& window,
                             bool pu_present, std::int64_t trials, std::uint64_t seed) {
  std::vector<std::complex<double>> buf(static_cast<std::size_t>(window.n_samples()));
  std::int64_t hits = 0;
  for (std::int64_t k = 0; k < trials; ++k) {
    auto engine = trial_engine(seed, k);
    draw_samples(buf, params.sigma_u2, params.gamma, pu_present, engine);
    if (energy_statistic(buf) >= params.epsilon) ++hits;
  }
  return hits;
}

std::int64_t count_h1_parallel(const DetectorParams& params, const SenseWindow& window,
                               bool pu_present, std::int64_t trials, std::uint64_t seed) {
  std::int64_t hits = 0;
#pragma omp parallel reduction(+ : hits)
  {
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(window.n_samples()));
#pragma omp for schedule(static)
    for (std::int64_t k = 0; k < trials; ++k) {
      auto engine = trial_engine(seed, k);
      draw_samples(buf, params.sigma_u2, params.gamma, pu_present, engine);
      if (energy_statistic(buf) >= params.epsilon) ++hits;
    }
  }
  return hits;
}

}  // namespace kernels

double simulate_detection(const DetectorParams& params, const SenseWindow& window,
                          bool pu_present, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  // epsilon = 0 is accepted here: every trial then decides H1.
  if (!(params.sigma_u2 > 0.0) || !(params.gamma >= 0.0) || !(params.epsilon >= 0.0))
    throw std::invalid_argument("detector parameters out of range");
  return static_cast<double>(kernels::count_h1_parallel(params, window, pu_present, trials, seed)) /
         static_cast<double>(trials);
}

}  // namespace oobsense
