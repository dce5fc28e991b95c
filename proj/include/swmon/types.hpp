#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace swmon {

// Multi-channel sampled signal. All channels have the same length.
struct TimeSeries {
    std::vector<std::vector<double>> channels;
    double sample_rate = 0.0;  // Hz
    std::vector<std::string> channel_names;

    std::size_t length() const { return channels.empty() ? 0 : channels.front().size(); }
    std::size_t channel_count() const { return channels.size(); }
    double duration() const { return sample_rate > 0 ? static_cast<double>(length()) / sample_rate : 0.0; }

    // Throws std::invalid_argument if the invariants do not hold.
    void validate() const;
};

// Per-interval total signal power, the compressed stream used for detection.
struct IntervalPsdSeries {
    std::vector<double> values;   // power per interval, >= 0
    double interval_len = 0.0;    // seconds
    std::string channel;          // source channel id
};

// One-sided power spectrum. Sum of bin_powers equals the mean squared
// sample value of the source segment (Parseval convention).
struct Spectrum {
    std::vector<double> bin_frequencies;  // Hz, ascending from 0 to Nyquist
    std::vector<double> bin_powers;       // >= 0
    double resolution = 0.0;              // Hz
};

// A detected actuation window. samples holds the per-channel excerpt of the
// source recording once filled in; label is set during training.
struct EventSegment {
    double start = 0.0;  // seconds
    double end = 0.0;    // seconds
    std::optional<std::string> label;
    std::vector<std::vector<double>> samples;  // one excerpt per channel
    double sample_rate = 0.0;
    std::vector<std::string> channel_names;

    double duration() const { return end - start; }
};

}  // namespace swmon
