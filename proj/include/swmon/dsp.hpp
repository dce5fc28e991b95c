#pragma once

#include <span>

#include "swmon/types.hpp"

namespace swmon {

// One-sided power spectrum of a segment (rectangular window periodogram).
// Normalized so that sum(bin_powers) == mean(x^2). Requires length >= 4.
Spectrum segment_spectrum(std::span<const double> samples, double sample_rate);

// Compress a single channel into per-interval power values: each value is
// the sum of the interval's periodogram bins, i.e. the interval's mean
// squared sample value. A trailing partial interval is discarded.
IntervalPsdSeries compute_interval_psd(std::span<const double> samples,
                                       double sample_rate,
                                       double interval_len,
                                       const std::string& channel = {});

// Zero-phase low-pass: spectral bins above the cutoff are removed.
// cutoff >= Nyquist returns the input unchanged. Output length equals
// input length.
std::vector<double> lowpass_channel(std::span<const double> samples,
                                    double sample_rate, double cutoff);

// lowpass_channel applied to every channel of a series.
TimeSeries lowpass(const TimeSeries& series, double cutoff);

}  // namespace swmon
