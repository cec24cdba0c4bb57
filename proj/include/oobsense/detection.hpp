// detection.hpp -- energy detection statistics
//
// Closed-form detection / false-alarm probabilities for an energy detector
// observing a constant-modulus (PSK) primary signal in circularly-symmetric
// complex Gaussian noise, the thresholds that invert them, and a sample-level
// Monte-Carlo detector used to check the closed forms empirically.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>

namespace oobsense {

struct DetectorParams {
  double sigma_u2 = 1.0;  // noise power
  double gamma = 0.0;     // primary SNR at the SU, linear
  double epsilon = 1.0;   // threshold on the average sample power

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// A sensing period of `duration` seconds sampled at `f_s` Hz.
class SenseWindow {
 public:
  /// Throws std::invalid_argument for non-positive inputs or a window that
  /// holds no complete sample.
  SenseWindow(double duration, double f_s);

  double duration() const { return duration_; }
  double f_s() const { return f_s_; }
  std::int64_t n_samples() const { return n_samples_; }

 private:
  double duration_;
  double f_s_;
  std::int64_t n_samples_;
};

struct DetectionOutcome {
  double statistic = 0.0;
  bool decided_h1 = false;
};

/// Gaussian tail probability Q(x) = P(Z > x).
double q_function(double x);

/// Inverse of q_function by bisection on [-10, 10].
/// Throws std::domain_error unless 0 < p < 1.
double q_inverse(double p);

double prob_detection(const DetectorParams& params, const SenseWindow& window);
double prob_false_alarm(const DetectorParams& params, const SenseWindow& window);

/// Threshold giving the requested false-alarm rate on `window`.
double threshold_for_false_alarm(double target_pf, const SenseWindow& window, double sigma_u2);

/// Threshold giving the requested detection rate for a primary at SNR `gamma`.
double threshold_for_detection(double target_pd, const SenseWindow& window, double sigma_u2,
                               double gamma);

// ---------------------------------------------------------------------------
// Sample-level detector
// ---------------------------------------------------------------------------

/// Fills `out` with received samples: CSCG noise of power sigma_u2, plus a
/// unit-modulus QPSK stream scaled to power gamma * sigma_u2 when
/// `pu_present`.
void draw_samples(std::span<std::complex<double>> out, double sigma_u2, double gamma,
                  bool pu_present, std::mt19937_64& engine);

/// Average sample power (1/N) * sum |y(n)|^2.
double energy_statistic(std::span<const std::complex<double>> samples);

/// One sensing event: draws a window of samples and applies the threshold.
DetectionOutcome sense_once(const DetectorParams& params, const SenseWindow& window,
                            bool pu_present, std::mt19937_64& engine);

/// Fraction of `trials` independent sensing events that decide H1. Trial k
/// draws from a substream derived from (seed, k), so the result is the same
/// for any number of OpenMP threads.
double simulate_detection(const DetectorParams& params, const SenseWindow& window,
                          bool pu_present, std::int64_t trials, std::uint64_t seed);

namespace kernels {

/// Number of trials in [0, trials) deciding H1, single-threaded reference.
std::int64_t count_h1_serial(const DetectorParams& params, const SenseWindow& window,
                             bool pu_present, std::int64_t trials, std::uint64_t seed);

/// Same count with trials split across OpenMP threads.
std::int64_t count_h1_parallel(const DetectorParams& params, const SenseWindow& window,
                               bool pu_present, std::int64_t trials, std::uint64_t seed);

}  // namespace kernels

}  // namespace oobsense
