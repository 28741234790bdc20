// Sensor fingerprinting from measurement noise: chunking, time/frequency
// features, per-sensor profiles, identification, and open-set authentication.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "physguard/errors.hpp"
#include "physguard/numeric.hpp"

namespace physguard {

inline constexpr std::size_t kDefaultChunkLen = 300;
inline constexpr std::size_t kMinChunkLen = 8;
inline constexpr double kScaleEpsilon = 1e-12;

struct NoiseChunk {
    std::vector<double> samples;
    std::optional<std::string> source_label;

    void validate() const {
        if (samples.size() < kMinChunkLen) throw InvalidParameter("NoiseChunk: need at least 8 samples");
        for (double s : samples) {
            if (!std::isfinite(s)) throw InvalidParameter("NoiseChunk: samples must be finite");
        }
    }
};

// Time-domain moments plus coarse spectral shape of one chunk.
// Band energies are fractions of the total AC power (DC bin excluded) in the
// lowest/middle/highest thirds of the one-sided spectrum; they sum to 1.
struct FeatureVector {
    double mean = 0.0;
    double variance = 0.0;            // unbiased
    double std_dev = 0.0;
    double mean_abs_deviation = 0.0;  // around the mean, divisor n
    double skewness = 0.0;            // adjusted Fisher-Pearson G1
    double excess_kurtosis = 0.0;     // bias-corrected G2
    double rms = 0.0;
    double peak_to_peak = 0.0;
    double spectral_centroid = 0.0;   // DFT bin index units
    double spectral_std = 0.0;
    double band_energy_low = 0.0;
    double band_energy_mid = 0.0;
    double band_energy_high = 0.0;

    static constexpr std::size_t kCount = 13;

    static const std::array<const char*, kCount>& names() {
        static const std::array<const char*, kCount> kNames = {
            "mean",               "variance",        "std",
            "mean_abs_deviation", "skewness",        "excess_kurtosis",
            "rms",                "peak_to_peak",    "spectral_centroid",
            "spectral_std",       "band_energy_low", "band_energy_mid",
            "band_energy_high"};
        return kNames;
    }

    std::array<double, kCount> values() const {
        return {mean,          variance,      std_dev,       mean_abs_deviation, skewness,
                excess_kurtosis, rms,         peak_to_peak,  spectral_centroid,  spectral_std,
                band_energy_low, band_energy_mid, band_energy_high};
    }

    static FeatureVector from_values(const std::array<double, kCount>& v) {
        FeatureVector fv;
        fv.mean = v[0];
        fv.variance = v[1];
        fv.std_dev = v[2];
        fv.mean_abs_deviation = v[3];
        fv.skewness = v[4];
        fv.excess_kurtosis = v[5];
        fv.rms = v[6];
        fv.peak_to_peak = v[7];
        fv.spectral_centroid = v[8];
        fv.spectral_std = v[9];
        fv.band_energy_low = v[10];
        fv.band_energy_mid = v[11];
        fv.band_energy_high = v[12];
        return fv;
    }

    bool operator==(const FeatureVector&) const = default;
};

namespace detail {

// One-sided power spectrum |X_j|^2 for bins j = 1..n/2 (DC excluded), via a
// direct DFT over a precomputed root-of-unity table. Deterministic and fast
// enough for the chunk sizes used here.
inline std::vector<double> half_spectrum_power(std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t m = n / 2;
    std::vector<double> cos_t(n), sin_t(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
        cos_t[t] = std::cos(angle);
        sin_t[t] = std::sin(angle);
    }
    std::vector<double> power(m, 0.0);
    for (std::size_t j = 1; j <= m; ++j) {
        double re = 0.0;
        double im = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            const std::size_t idx = (j * t) % n;
            re += x[t] * cos_t[idx];
            im -= x[t] * sin_t[idx];
        }
        power[j - 1] = re * re + im * im;
    }
    return power;
}

}  // namespace detail

// Partitions a constant-setpoint series into non-overlapping chunks and
// removes each chunk's own mean; the trailing remainder is discarded.
inline std::vector<NoiseChunk> extract_noise_constant(std::span<const double> series, std::size_t chunk_len,
                                                      std::optional<std::string> label = std::nullopt) {
    if (chunk_len < kMinChunkLen) throw InvalidParameter("extract_noise_constant: chunk_len must be >= 8");
    if (series.size() < chunk_len) throw SeriesTooShort("extract_noise_constant: series shorter than one chunk");
    std::vector<NoiseChunk> chunks;
    chunks.reserve(series.size() / chunk_len);
    for (std::size_t start = 0; start + chunk_len <= series.size(); start += chunk_len) {
        NoiseChunk chunk;
        chunk.samples.assign(series.begin() + start, series.begin() + start + chunk_len);
        const double mean = numeric::mean(chunk.samples);
        for (double& s : chunk.samples) s -= mean;
        chunk.source_label = label;
        chunk.validate();
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

// As above for estimator residuals, which are already zero-mean under normal
// operation; no mean subtraction.
inline std::vector<NoiseChunk> extract_noise_residual(std::span<const double> residuals, std::size_t chunk_len,
                                                      std::optional<std::string> label = std::nullopt) {
    if (chunk_len < kMinChunkLen) throw InvalidParameter("extract_noise_residual: chunk_len must be >= 8");
    if (residuals.size() < chunk_len) throw SeriesTooShort("extract_noise_residual: series shorter than one chunk");
    std::vector<NoiseChunk> chunks;
    chunks.reserve(residuals.size() / chunk_len);
    for (std::size_t start = 0; start + chunk_len <= residuals.size(); start += chunk_len) {
        NoiseChunk chunk;
        chunk.samples.assign(residuals.begin() + start, residuals.begin() + start + chunk_len);
        chunk.source_label = label;
        chunk.validate();
        chunks.push_back(std::move(chunk));
    }
    return chunks;
}

inline FeatureVector compute_features(const NoiseChunk& chunk) {
    chunk.validate();
    const auto& x = chunk.samples;
    const double n = static_cast<double>(x.size());

    FeatureVector fv;
    fv.mean = numeric::mean(x);

    double sum_sq = 0.0, sum_abs = 0.0, sum_cu = 0.0, sum_qu = 0.0, sum_raw_sq = 0.0;
    double lo = x[0], hi = x[0];
    for (double s : x) {
        const double d = s - fv.mean;
        sum_sq += d * d;
        sum_abs += std::abs(d);
        sum_cu += d * d * d;
        sum_qu += d * d * d * d;
        sum_raw_sq += s * s;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    fv.variance = sum_sq / (n - 1.0);
    fv.std_dev = std::sqrt(fv.variance);
    fv.mean_abs_deviation = sum_abs / n;
    fv.rms = std::sqrt(sum_raw_sq / n);
    fv.peak_to_peak = hi - lo;
    if (fv.std_dev > 0.0) {
        const double s3 = fv.std_dev * fv.std_dev * fv.std_dev;
        fv.skewness = (n / ((n - 1.0) * (n - 2.0))) * sum_cu / s3;
        const double s4 = fv.variance * fv.variance;
        fv.excess_kurtosis = (n * (n + 1.0) / ((n - 1.0) * (n - 2.0) * (n - 3.0))) * sum_qu / s4 -
                             3.0 * (n - 1.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0));
    }

    const std::vector<double> power = detail::half_spectrum_power(x);
    double total = 0.0;
    for (double p : power) total += p;
    const std::size_t m = power.size();
    if (total > 0.0) {
        double centroid = 0.0;
        for (std::size_t j = 0; j < m; ++j) centroid += static_cast<double>(j + 1) * power[j];
        centroid /= total;
        double spread = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = static_cast<double>(j + 1) - centroid;
            spread += d * d * power[j];
        }
        fv.spectral_centroid = centroid;
        fv.spectral_std = std::sqrt(spread / total);
        const std::size_t b1 = m / 3;
        const std::size_t b2 = 2 * m / 3;
        double low = 0.0, mid = 0.0, high = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            if (j < b1) {
                low += power[j];
            } else if (j < b2) {
                mid += power[j];
            } else {
                high += power[j];
            }
        }
        fv.band_energy_low = low / total;
        fv.band_energy_mid = mid / total;
        fv.band_energy_high = high / total;
    } else {
        // Degenerate spectrum: keep the band-energy sum at 1.
        fv.band_energy_low = fv.band_energy_mid = fv.band_energy_high = 1.0 / 3.0;
    }
    return fv;
}

// Per-sensor feature profile: centroid and per-feature scale (std across the
// sensor's training chunks, floored at kScaleEpsilon).
struct SensorProfile {
    std::string label;
    FeatureVector centroid;
    FeatureVector scale;
};

struct FingerprintModel {
    std::vector<SensorProfile> profiles;  // sorted by label
    double accept_threshold = 0.0;
    std::size_t chunk_len = kDefaultChunkLen;

    const SensorProfile* find(const std::string& label) const {
        for (const auto& p : profiles) {
            if (p.label == label) return &p;
        }
        return nullptr;
    }
};

// Normalized Euclidean distance between a feature vector and a profile.
inline double profile_distance(const FeatureVector& fv, const SensorProfile& profile) {
    const auto v = fv.values();
    const auto c = profile.centroid.values();
    const auto s = profile.scale.values();
    double acc = 0.0;
    for (std::size_t f = 0; f < FeatureVector::kCount; ++f) {
        const double z = (v[f] - c[f]) / s[f];
        acc += z * z;
    }
    return std::sqrt(acc);
}

// Trains per-sensor profiles from labeled chunks. Scale falls back to the
// pooled per-feature std over all training chunks where a label's own std is
// degenerate. The accept threshold is the accept_quantile quantile of the
// training chunks' distance to their own profile.
inline FingerprintModel train(const std::vector<NoiseChunk>& chunks, double accept_quantile) {
    if (!(accept_quantile > 0.0 && accept_quantile <= 1.0)) {
        throw InvalidParameter("train: accept_quantile must lie in (0, 1]");
    }
    std::map<std::string, std::vector<std::array<double, FeatureVector::kCount>>> by_label;
    std::size_t chunk_len = 0;
    for (const auto& chunk : chunks) {
        if (!chunk.source_label) throw InvalidParameter("train: every training chunk needs a label");
        by_label[*chunk.source_label].push_back(compute_features(chunk).values());
        chunk_len = std::max(chunk_len, chunk.samples.size());
    }
    if (by_label.size() < 2) throw InvalidParameter("train: identification needs at least 2 labels");
    for (const auto& [label, feats] : by_label) {
        if (feats.size() < 5) throw InsufficientData("train: need at least 5 chunks for label " + label);
    }

    // Pooled per-feature std across the whole training set.
    std::array<double, FeatureVector::kCount> pooled_scale{};
    {
        std::vector<double> column;
        for (std::size_t f = 0; f < FeatureVector::kCount; ++f) {
            column.clear();
            for (const auto& [label, feats] : by_label) {
                for (const auto& v : feats) column.push_back(v[f]);
            }
            pooled_scale[f] = std::sqrt(numeric::variance(column));
        }
    }

    FingerprintModel model;
    model.chunk_len = chunk_len;
    for (const auto& [label, feats] : by_label) {
        std::array<double, FeatureVector::kCount> centroid{};
        std::array<double, FeatureVector::kCount> scale{};
        std::vector<double> column(feats.size());
        for (std::size_t f = 0; f < FeatureVector::kCount; ++f) {
            for (std::size_t i = 0; i < feats.size(); ++i) column[i] = feats[i][f];
            const double mu = numeric::mean(column);
            centroid[f] = mu;
            double sd = std::sqrt(numeric::variance(column, mu));
            if (sd < kScaleEpsilon) sd = std::max(pooled_scale[f], kScaleEpsilon);
            scale[f] = sd;
        }
        model.profiles.push_back(SensorProfile{label, FeatureVector::from_values(centroid),
                                               FeatureVector::from_values(scale)});
    }

    std::vector<double> self_distances;
    self_distances.reserve(chunks.size());
    for (const auto& [label, feats] : by_label) {
        const SensorProfile* profile = model.find(label);
        for (const auto& v : feats) {
            self_distances.push_back(profile_distance(FeatureVector::from_values(v), *profile));
        }
    }
    std::sort(self_distances.begin(), self_distances.end());
    model.accept_threshold = numeric::quantile_sorted(self_distances, accept_quantile);
    return model;
}

struct Classification {
    std::string label;
    double distance = 0.0;
};

// Nearest profile by normalized distance; ties go to the lexicographically
// smallest label (profiles are kept label-sorted).
inline Classification classify(const FingerprintModel& model, const FeatureVector& fv) {
    if (model.profiles.empty()) throw InvalidParameter("classify: model has no profiles");
    Classification best{model.profiles.front().label, profile_distance(fv, model.profiles.front())};
    for (std::size_t i = 1; i < model.profiles.size(); ++i) {
        const double d = profile_distance(fv, model.profiles[i]);
        if (d < best.distance) {
            best.label = model.profiles[i].label;
            best.distance = d;
        }
    }
    return best;
}

struct AuthDecision {
    bool accepted = false;
    double distance = 0.0;
};

// Open-set authentication: accept iff the chunk's distance to the claimed
// profile is within the model's accept threshold.
inline AuthDecision authenticate(const FingerprintModel& model, const std::string& claimed_label,
                                 const NoiseChunk& chunk) {
    const SensorProfile* profile = model.find(claimed_label);
    if (!profile) throw UnknownLabel("authenticate: unknown label " + claimed_label);
    const double d = profile_distance(compute_features(chunk), *profile);
    return AuthDecision{d <= model.accept_threshold, d};
}

struct EvalReport {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> confusion;  // [true][predicted]
    double accuracy = 0.0;
    std::vector<double> true_positive_rate;   // per class, one-vs-rest
    std::vector<double> false_positive_rate;  // per class, one-vs-rest
};

inline EvalReport evaluate(const FingerprintModel& model, const std::vector<NoiseChunk>& test_chunks) {
    EvalReport report;
    for (const auto& p : model.profiles) report.labels.push_back(p.label);
    const std::size_t n = report.labels.size();
    report.confusion.assign(n, std::vector<std::size_t>(n, 0));

    auto index_of = [&](const std::string& label) {
        for (std::size_t i = 0; i < n; ++i) {
            if (report.labels[i] == label) return i;
        }
        throw UnknownLabel("evaluate: unknown label " + label);
    };

    std::size_t correct = 0;
    for (const auto& chunk : test_chunks) {
        if (!chunk.source_label) throw InvalidParameter("evaluate: every test chunk needs a label");
        const std::size_t truth = index_of(*chunk.source_label);
        const std::size_t predicted = index_of(classify(model, compute_features(chunk)).label);
        report.confusion[truth][predicted]++;
        if (truth == predicted) ++correct;
    }
    const std::size_t total = test_chunks.size();
    report.accuracy = total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);

    report.true_positive_rate.assign(n, 0.0);
    report.false_positive_rate.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t row_sum = 0, col_sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            row_sum += report.confusion[i][j];
            col_sum += report.confusion[j][i];
        }
        if (row_sum > 0) {
            report.true_positive_rate[i] =
                static_cast<double>(report.confusion[i][i]) / static_cast<double>(row_sum);
        }
        const std::size_t negatives = total - row_sum;
        if (negatives > 0) {
            report.false_positive_rate[i] =
                static_cast<double>(col_sum - report.confusion[i][i]) / static_cast<double>(negatives);
        }
    }
    return report;
}

}  // namespace physguard
