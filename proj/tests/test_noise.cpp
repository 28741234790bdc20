// Seeded noise stream tests.
#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "physguard/noise.hpp"

using namespace physguard;

TEST(NoiseSpec, ValidatesFamilies) {
    EXPECT_THROW(NoiseSpec::gaussian(0.0, -1.0, 1), InvalidParameter);
    EXPECT_THROW(NoiseSpec::uniform(1.0, 0.0, 1), InvalidParameter);
    EXPECT_THROW(NoiseSpec::mixture({}, 1), InvalidParameter);
    EXPECT_THROW(NoiseSpec::mixture({{0.6, 0.0, 1.0}, {0.6, 1.0, 1.0}}, 1), InvalidParameter);
    EXPECT_THROW(NoiseSpec::mixture({{-0.5, 0.0, 1.0}, {1.5, 1.0, 1.0}}, 1), InvalidParameter);
    EXPECT_NO_THROW(NoiseSpec::mixture({{0.5, -1.0, 0.1}, {0.5, 1.0, 0.2}}, 1));
}

TEST(SampleNoise, DegenerateGaussianReturnsMeanExactly) {
    for (std::uint64_t seed : {0ull, 1ull, 987654321ull}) {
        NoiseStream stream(NoiseSpec::gaussian(3.25, 0.0, seed), kProcessNoiseStream);
        for (int i = 0; i < 10; ++i) EXPECT_EQ(stream.next(), 3.25);
    }
}

TEST(SampleNoise, SameSpecAndSeedReproduceBitIdenticalSequences) {
    const NoiseSpec spec = NoiseSpec::gaussian(0.0, 1.0, 12345);
    NoiseStream a(spec, kMeasurementNoiseStream);
    NoiseStream b(spec, kMeasurementNoiseStream);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(SampleNoise, DistinctStreamIdsDecorrelate) {
    const NoiseSpec spec = NoiseSpec::gaussian(0.0, 1.0, 12345);
    NoiseStream a(spec, kProcessNoiseStream);
    NoiseStream b(spec, kMeasurementNoiseStream);
    int equal = 0;
    for (int i = 0; i < 1000; ++i) {
        if (a.next() == b.next()) ++equal;
    }
    EXPECT_EQ(equal, 0);
}

// Law-of-large-numbers bounds for the standard normal draw.
TEST(SampleNoise, GaussianMomentsWithinStandardErrorBounds) {
    NoiseStream stream(NoiseSpec::gaussian(0.0, 1.0, 777), kProcessNoiseStream);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = stream.next();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double variance = (sum_sq - n * mean * mean) / (n - 1);
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_GE(std::sqrt(variance), 0.99);
    EXPECT_LE(std::sqrt(variance), 1.01);
}

TEST(SampleNoise, UniformStaysInRangeWithMatchingMoments) {
    NoiseStream stream(NoiseSpec::uniform(-0.2, 0.6, 99), kAttackNoiseStream);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = stream.next();
        ASSERT_GE(x, -0.2);
        ASSERT_LT(x, 0.6);
        sum += x;
    }
    EXPECT_NEAR(sum / n, 0.2, 0.005);
}

TEST(SampleNoise, MixtureMatchesAnalyticVariance) {
    const NoiseSpec spec = NoiseSpec::mixture({{0.3, -1.0, 0.05}, {0.7, 1.0, 0.10}}, 4242);
    NoiseStream stream(spec, kProcessNoiseStream);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = stream.next();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double variance = sum_sq / n - mean * mean;
    EXPECT_NEAR(variance, noise_variance(spec), 0.02);
    EXPECT_NEAR(mean, 0.3 * -1.0 + 0.7 * 1.0, 0.01);
}

TEST(NoiseVariance, ClosedForms) {
    EXPECT_DOUBLE_EQ(noise_variance(NoiseSpec::gaussian(5.0, 0.25, 1)), 0.0625);
    EXPECT_NEAR(noise_variance(NoiseSpec::uniform(0.0, 1.0, 1)), 1.0 / 12.0, 1e-15);
}
