#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "swmon/types.hpp"

namespace swmon {

// One spring-drive actuation: a sum of exponentially damped sinusoids with
// an optional delayed second burst (spring re-tension peak).
struct ActuationSpec {
    double dominant_freq = 400.0;  // Hz, < Nyquist
    std::vector<std::pair<double, double>> secondary_freqs;  // (Hz, relative amplitude)
    double damping = 30.0;         // 1/s, > 0
    double duration = 0.5;         // seconds, > 0
    double amplitude = 1.0;
    struct DoublePeak {
        double delay = 0.2;            // seconds after the event start
        double relative_amplitude = 0.6;
    };
    std::optional<DoublePeak> double_peak;
};

struct ScenarioSpec {
    std::string label;
    ActuationSpec actuation;
    // linear dominant-frequency trajectory over the global event index
    std::optional<double> drift_dominant_freq_to;
};

struct CorpusSpec {
    std::vector<ScenarioSpec> scenarios;  // cycle order for alternating events
    std::size_t event_count = 0;
    double gap = 1.0;          // seconds between event end and next start
    double lead_in = 3.0;      // actuation-free seconds before the first event
    double snr_db = 20.0;      // event power over noise power
    double sample_rate = 48000.0;
    std::uint64_t seed = 1;
    std::string channel_name = "ch0";
};

std::vector<double> generate_event(const ActuationSpec& spec, double sample_rate);

// The stock two-class benchmark: "on" at 400 Hz vs "off" at 700 Hz,
// damping 30 /s, 0.5 s events at 48 kHz, 20 dB SNR.
CorpusSpec default_benchmark_spec(std::size_t event_count, std::uint64_t seed = 1);

struct Corpus {
    TimeSeries recording;                // single channel, events in noise
    std::vector<EventSegment> truth;     // exact starts and labels, no samples
};

// Events embedded in white Gaussian noise scaled to the requested SNR.
// Labels alternate through the scenario cycle starting at scenarios[0].
Corpus generate_corpus(const CorpusSpec& spec);

}  // namespace swmon
