#pragma once

#include <array>
#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swmon/types.hpp"

namespace swmon {

// The fixed candidate feature bank: 12 time-domain and 9 frequency-domain
// kinds. Frequency statistics (SpectralMean .. SpectralFlatness) are the
// same moments as the time-domain ones, computed over the bin-power
// sequence of the one-sided power spectrum.
enum class FeatureKind {
    TimeMean,
    TimeVariance,
    TimeSkew,
    TimeKurtosis,
    TimePower,
    TimeFlatness,
    Rms,
    AbsMean,
    Maximum,
    Minimum,
    DynamicRange,
    CrestFactor,
    SpectralMean,
    SpectralVariance,
    SpectralSkew,
    SpectralKurtosis,
    SpectralPower,
    SpectralFlatness,
    SpectralCentroid,
    DominantFrequency,
    MedianFrequency,
};

inline constexpr std::size_t kFeatureKindCount = 21;

const std::array<FeatureKind, kFeatureKindCount>& all_feature_kinds();
std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& name);

// Identity of one candidate feature: (kind, optional low-pass cutoff,
// channel index). cutoff without a value means the unfiltered signal.
struct FeatureDescriptor {
    FeatureKind kind;
    std::optional<double> cutoff;  // Hz
    std::size_t channel = 0;

    bool operator==(const FeatureDescriptor&) const = default;
    std::string to_string() const;
};

// Deterministic bank order: kind, then cutoff ascending with unfiltered
// last, then channel.
bool descriptor_less(const FeatureDescriptor& a, const FeatureDescriptor& b);

struct FeatureMatrix {
    std::vector<FeatureDescriptor> descriptors;
    std::vector<std::vector<double>> rows;  // one vector per event
    std::vector<std::optional<std::string>> labels;

    std::size_t column_of(const FeatureDescriptor& d) const;  // throws if absent
};

// z-score statistics fitted on training data. Zero-variance descriptors are
// flagged degenerate and normalize to 0.
struct Normalizer {
    std::vector<FeatureDescriptor> descriptors;
    std::vector<double> mean;
    std::vector<double> stddev;      // population std, >= 0
    std::vector<bool> degenerate;

    double apply_one(std::size_t col, double value) const {
        return degenerate[col] ? 0.0 : (value - mean[col]) / stddev[col];
    }
};

// One feature value from a single-channel segment. Requires length >= 4.
double compute_feature(FeatureKind kind, std::span<const double> samples,
                       double sample_rate);

// Same, reusing a precomputed spectrum for the frequency-domain kinds.
double compute_feature(FeatureKind kind, std::span<const double> samples,
                       double sample_rate, const Spectrum& spectrum);

// Full candidate bank over kinds x (cutoffs + unfiltered) x channels for a
// set of equal-duration event segments with samples filled in.
FeatureMatrix extract_candidates(const std::vector<EventSegment>& events,
                                 const std::vector<double>& cutoffs,
                                 const std::vector<FeatureKind>& kinds);

Normalizer fit_normalizer(const FeatureMatrix& training);
FeatureMatrix apply_normalizer(const Normalizer& norm, const FeatureMatrix& matrix);

}  // namespace swmon
