// Seeded noise specifications used for process/measurement noise and spoofed sensors.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "physguard/errors.hpp"
#include "physguard/rng.hpp"

namespace physguard {

enum class NoiseFamily { gaussian, gaussian_mixture, uniform };

struct MixtureComponent {
    double weight = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;
};

struct NoiseSpec {
    NoiseFamily family = NoiseFamily::gaussian;
    double mean = 0.0;     // gaussian
    double std_dev = 0.0;  // gaussian
    double low = 0.0;      // uniform
    double high = 0.0;     // uniform
    std::vector<MixtureComponent> components;  // gaussian_mixture
    std::uint64_t seed = 0;

    static NoiseSpec gaussian(double mean, double std_dev, std::uint64_t seed) {
        NoiseSpec spec;
        spec.family = NoiseFamily::gaussian;
        spec.mean = mean;
        spec.std_dev = std_dev;
        spec.seed = seed;
        spec.validate();
        return spec;
    }

    static NoiseSpec mixture(std::vector<MixtureComponent> components, std::uint64_t seed) {
        NoiseSpec spec;
        spec.family = NoiseFamily::gaussian_mixture;
        spec.components = std::move(components);
        spec.seed = seed;
        spec.validate();
        return spec;
    }

    static NoiseSpec uniform(double low, double high, std::uint64_t seed) {
        NoiseSpec spec;
        spec.family = NoiseFamily::uniform;
        spec.low = low;
        spec.high = high;
        spec.seed = seed;
        spec.validate();
        return spec;
    }

    void validate() const {
        switch (family) {
            case NoiseFamily::gaussian:
                if (!(std_dev >= 0.0)) throw InvalidParameter("NoiseSpec: std must be >= 0");
                break;
            case NoiseFamily::gaussian_mixture: {
                if (components.empty()) throw InvalidParameter("NoiseSpec: mixture needs components");
                double total = 0.0;
                for (const auto& c : components) {
                    if (!(c.weight > 0.0)) throw InvalidParameter("NoiseSpec: mixture weights must be > 0");
                    if (!(c.std_dev >= 0.0)) throw InvalidParameter("NoiseSpec: mixture std must be >= 0");
                    total += c.weight;
                }
                if (std::abs(total - 1.0) > 1e-9) {
                    throw InvalidParameter("NoiseSpec: mixture weights must sum to 1");
                }
                break;
            }
            case NoiseFamily::uniform:
                if (!(low <= high)) throw InvalidParameter("NoiseSpec: uniform low must be <= high");
                break;
        }
    }
};

// Stream ids; distinct ids keep the sub-streams independent so that adding an
// attack never perturbs the plant noise sequence.
inline constexpr std::uint64_t kProcessNoiseStream = 1;
inline constexpr std::uint64_t kMeasurementNoiseStream = 2;
inline constexpr std::uint64_t kAttackNoiseStream = 3;

// A single draw; the value depends only on the spec and the stream's draw index.
inline double sample_noise(const NoiseSpec& spec, rng::Stream& stream) {
    switch (spec.family) {
        case NoiseFamily::gaussian:
            return spec.mean + spec.std_dev * stream.next_gaussian();
        case NoiseFamily::gaussian_mixture: {
            double total = 0.0;
            for (const auto& c : spec.components) total += c.weight;
            const double u = stream.next_unit() * total;
            double cum = 0.0;
            const MixtureComponent* chosen = &spec.components.back();
            for (const auto& c : spec.components) {
                cum += c.weight;
                if (u < cum) {
                    chosen = &c;
                    break;
                }
            }
            return chosen->mean + chosen->std_dev * stream.next_gaussian();
        }
        case NoiseFamily::uniform:
            return spec.low + (spec.high - spec.low) * stream.next_unit();
    }
    throw InvalidParameter("NoiseSpec: unknown family");
}

// Analytic variance of a spec; used to derive estimator covariance defaults.
inline double noise_variance(const NoiseSpec& spec) {
    switch (spec.family) {
        case NoiseFamily::gaussian:
            return spec.std_dev * spec.std_dev;
        case NoiseFamily::gaussian_mixture: {
            double total = 0.0;
            for (const auto& c : spec.components) total += c.weight;
            double mean = 0.0;
            double second = 0.0;
            for (const auto& c : spec.components) {
                const double w = c.weight / total;
                mean += w * c.mean;
                second += w * (c.std_dev * c.std_dev + c.mean * c.mean);
            }
            return second - mean * mean;
        }
        case NoiseFamily::uniform: {
            const double width = spec.high - spec.low;
            return width * width / 12.0;
        }
    }
    throw InvalidParameter("NoiseSpec: unknown family");
}

class NoiseStream {
public:
    NoiseStream() = default;
    NoiseStream(NoiseSpec spec, std::uint64_t stream_id)
        : spec_(std::move(spec)), stream_(spec_.seed, stream_id) {
        spec_.validate();
    }

    double next() { return sample_noise(spec_, stream_); }
    const NoiseSpec& spec() const { return spec_; }

private:
    NoiseSpec spec_;
    rng::Stream stream_;
};

}  // namespace physguard
