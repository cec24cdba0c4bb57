#include "oobsense/detection.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace {

using namespace oobsense;

// Composite Simpson quadrature of the standard normal density over
// [x, x + 40]; independent of std::erfc.
double q_quadrature(double x) {
  if (x < 0.0) return 1.0 - q_quadrature(-x);
  const int n = 400000;
  const double h = 40.0 / n;
  auto phi = [](double t) { return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi); };
  double acc = phi(x) + phi(x + 40.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * phi(x + i * h);
  return acc * h / 3.0;
}

// Bisection against the quadrature oracle.
double q_inverse_oracle(double p) {
  double lo = -10.0, hi = 10.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (q_quadrature(mid) > p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const double kGamma15dB = std::pow(10.0, -1.5);
const SenseWindow kWindow6000(1e-3, 6e6);

TEST(QFunction, ZeroIsOneHalf) { EXPECT_DOUBLE_EQ(q_function(0.0), 0.5); }

TEST(QFunction, MatchesQuadratureOracle) {
  EXPECT_NEAR(q_function(1.2816), 0.1, 1e-4);
  for (double x : {-3.0, -1.0, 0.25, 0.7, 1.2816, 2.5, 4.0, 6.0})
    EXPECT_NEAR(q_function(x), q_quadrature(x), 1e-12) << "x=" << x;
}

TEST(QFunction, ReflectionIdentity) {
  EXPECT_NEAR(q_function(-0.7), 1.0 - q_function(0.7), 1e-15);
  for (double x = -8.0; x <= 8.0; x += 0.01) EXPECT_NEAR(q_function(x) + q_function(-x), 1.0, 1e-12);
}

TEST(QFunction, StrictlyDecreasing) {
  double prev = q_function(-8.0);
  for (double x = -7.95; x <= 8.0; x += 0.05) {
    const double q = q_function(x);
    EXPECT_LT(q, prev) << "x=" << x;
    prev = q;
  }
}

TEST(QInverse, KnownPoints) {
  EXPECT_NEAR(q_inverse(0.5), 0.0, 1e-12);
  EXPECT_NEAR(q_inverse(0.1), 1.2816, 1e-4);
  EXPECT_NEAR(q_inverse(0.1), q_inverse_oracle(0.1), 1e-9);
  EXPECT_NEAR(q_inverse(0.9), -q_inverse_oracle(0.1), 1e-9);
}

TEST(QInverse, Roundtrip) {
  EXPECT_NEAR(q_function(q_inverse(0.9)), 0.9, 1e-10);
  for (double p : {1e-9, 1e-6, 0.01, 0.3, 0.75, 0.99, 1.0 - 1e-6}) EXPECT_NEAR(q_function(q_inverse(p)), p, 1e-10);
}

TEST(QInverse, RejectsOutOfDomain) {
  for (double p : {0.0, 1.0, -0.1, 1.5, std::nan("")}) EXPECT_THROW(q_inverse(p), std::domain_error) << p;
}

TEST(SenseWindow, FloorsSampleCount) {
  EXPECT_EQ(kWindow6000.n_samples(), 6000);
  EXPECT_EQ(SenseWindow(2.5e-6, 1e6).n_samples(), 2);
  EXPECT_THROW(SenseWindow(1e-7, 1e6), std::invalid_argument);
  EXPECT_THROW(SenseWindow(0.0, 1e6), std::invalid_argument);
  EXPECT_THROW(SenseWindow(1e-3, -1.0), std::invalid_argument);
}

TEST(ClosedForm, QOfZeroCases) {
  const double g = 0.4;
  for (double d : {1e-4, 1e-3, 5e-3}) {
    const SenseWindow w(d, 6e6);
    EXPECT_NEAR(prob_detection({2.0, g, 2.0 * (1.0 + g)}, w), 0.5, 1e-13);
    EXPECT_DOUBLE_EQ(prob_false_alarm({2.0, g, 2.0}, w), 0.5);
  }
}

TEST(ClosedForm, ThresholdForFalseAlarm) {
  EXPECT_DOUBLE_EQ(threshold_for_false_alarm(0.5, kWindow6000, 1.7), 1.7);
  EXPECT_NEAR(threshold_for_false_alarm(0.1, kWindow6000, 1.0), 1.0165447596, 1e-9);
  EXPECT_NEAR(threshold_for_false_alarm(0.1, kWindow6000, 1.0), 1.01655, 1e-5);
  EXPECT_GT(threshold_for_false_alarm(0.01, kWindow6000, 1.0),
            threshold_for_false_alarm(0.1, kWindow6000, 1.0));
  const double eps = threshold_for_false_alarm(0.1, kWindow6000, 1.0);
  EXPECT_NEAR(prob_false_alarm({1.0, 0.0, eps}, kWindow6000), 0.1, 1e-9);
  EXPECT_THROW(threshold_for_false_alarm(0.0, kWindow6000, 1.0), std::domain_error);
  EXPECT_THROW(threshold_for_false_alarm(1.0, kWindow6000, 1.0), std::domain_error);
}

TEST(ClosedForm, ThresholdForDetection) {
  EXPECT_DOUBLE_EQ(threshold_for_detection(0.5, kWindow6000, 2.0, 0.3), 2.0 * 1.3);
  EXPECT_NEAR(threshold_for_detection(0.9, kWindow6000, 1.0, kGamma15dB), 1.0145628465, 1e-9);
  EXPECT_NEAR(threshold_for_detection(0.9, kWindow6000, 1.0, kGamma15dB), 1.014563, 1e-6);
  for (double p : {0.75, 0.9, 0.2}) {
    const double eps = threshold_for_detection(p, kWindow6000, 1.0, kGamma15dB);
    EXPECT_NEAR(prob_detection({1.0, kGamma15dB, eps}, kWindow6000), p, 1e-9);
  }
  EXPECT_THROW(threshold_for_detection(1.2, kWindow6000, 1.0, 0.1), std::domain_error);
}

TEST(ClosedForm, MonotoneInThreshold) {
  double prev_pd = 1.0, prev_pf = 1.0;
  for (double eps = 0.95; eps <= 1.08; eps += 0.002) {
    const DetectorParams d{1.0, kGamma15dB, eps};
    const double pd = prob_detection(d, kWindow6000);
    const double pf = prob_false_alarm(d, kWindow6000);
    EXPECT_LT(pd, prev_pd);
    EXPECT_LT(pf, prev_pf);
    if (eps > 1.0) EXPECT_GT(pd, pf) << "eps=" << eps;
    prev_pd = pd;
    prev_pf = pf;
  }
}

TEST(ClosedForm, FalseAlarmIgnoresGamma) {
  for (double g : {0.0, 0.01, 1.0, 100.0})
    EXPECT_DOUBLE_EQ(prob_false_alarm({1.0, g, 1.01}, kWindow6000),
                     prob_false_alarm({1.0, 0.0, 1.01}, kWindow6000));
}

TEST(ClosedForm, MoreSamplesLowerFalseAlarm) {
  double prev = 1.0;
  for (double d : {1e-4, 2e-4, 5e-4, 1e-3, 2e-3}) {
    const double pf = prob_false_alarm({1.0, 0.0, 1.01}, SenseWindow(d, 6e6));
    EXPECT_LT(pf, prev);
    prev = pf;
  }
}

TEST(SampleDetector, EnergyStatistic) {
  const std::vector<std::complex<double>> y{{3.0, 4.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, 0.0}};
  EXPECT_DOUBLE_EQ(energy_statistic(y), (25.0 + 1.0 + 1.0) / 4.0);
}

TEST(SampleDetector, SamplePowerMatchesModel) {
  std::mt19937_64 engine(11);
  std::vector<std::complex<double>> buf(1 << 20);
  draw_samples(buf, 2.0, 0.0, false, engine);
  EXPECT_NEAR(energy_statistic(buf), 2.0, 0.01);
  draw_samples(buf, 2.0, 0.5, true, engine);
  EXPECT_NEAR(energy_statistic(buf), 2.0 * 1.5, 0.015);

  // Each quadrature component carries half the noise power.
  draw_samples(buf, 1.0, 0.0, false, engine);
  double re2 = 0.0;
  for (const auto& y : buf) re2 += y.real() * y.real();
  EXPECT_NEAR(re2 / static_cast<double>(buf.size()), 0.5, 0.005);
}

TEST(SampleDetector, ZeroThresholdAlwaysDecidesH1) {
  const SenseWindow w(1e-5, 6e6);
  EXPECT_DOUBLE_EQ(simulate_detection({1.0, 0.0, 0.0}, w, false, 500, 3), 1.0);
  EXPECT_DOUBLE_EQ(simulate_detection({1.0, 2.0, 0.0}, w, true, 500, 3), 1.0);
}

TEST(SampleDetector, DeterministicForSeed) {
  const SenseWindow w(1e-4, 6e6);
  const DetectorParams d{1.0, 0.1, 1.02};
  EXPECT_EQ(simulate_detection(d, w, true, 2000, 42), simulate_detection(d, w, true, 2000, 42));
  EXPECT_NE(simulate_detection(d, w, true, 2000, 42), simulate_detection(d, w, true, 2000, 43));
}

TEST(SampleDetector, ParallelKernelMatchesSerialReference) {
  const SenseWindow w(2e-4, 6e6);
  const DetectorParams d{1.0, kGamma15dB, threshold_for_false_alarm(0.2, w, 1.0)};
  for (bool pu : {false, true})
    EXPECT_EQ(kernels::count_h1_parallel(d, w, pu, 3001, 9), kernels::count_h1_serial(d, w, pu, 3001, 9));
}

TEST(SampleDetector, RejectsBadInputs) {
  EXPECT_THROW(simulate_detection({1.0, 0.0, 1.0}, kWindow6000, false, 0, 1), std::invalid_argument);
  EXPECT_THROW(simulate_detection({0.0, 0.0, 1.0}, kWindow6000, false, 10, 1), std::invalid_argument);
}

// 1e5-trial checks against the closed forms; |error| <= 0.01 is about 3
// binomial standard deviations at p in [0.1, 0.9].
TEST(SampleDetectorMonteCarlo, FalseAlarmAtExplicitThreshold) {
  const DetectorParams d{1.0, kGamma15dB, 1.0236};
  const double closed = prob_false_alarm(d, kWindow6000);
  EXPECT_NEAR(closed, 0.0337712, 1e-6);
  EXPECT_NEAR(simulate_detection(d, kWindow6000, false, 100000, 5), closed, 0.01);
}

TEST(SampleDetectorMonteCarlo, DetectionAtFalseAlarmThreshold) {
  const DetectorParams d{1.0, kGamma15dB, threshold_for_false_alarm(0.1, kWindow6000, 1.0)};
  const double closed = prob_detection(d, kWindow6000);
  EXPECT_NEAR(closed, 0.8713234, 1e-6);
  EXPECT_NEAR(simulate_detection(d, kWindow6000, true, 100000, 6), closed, 0.01);
}

}  // namespace
