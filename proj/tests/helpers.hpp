#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "swmon/detector.hpp"
#include "swmon/dsp.hpp"
#include "swmon/model_io.hpp"
#include "swmon/selector.hpp"
#include "swmon/synth.hpp"

namespace testutil {

inline std::vector<double> make_sine(double freq, double sample_rate, std::size_t n,
                                     double amplitude = 1.0, double phase = 0.0) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = amplitude *
                 std::sin(2.0 * std::numbers::pi * freq * static_cast<double>(i) / sample_rate +
                          phase);
    return out;
}

inline std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n,
                                         double scale = 1.0) {
    std::normal_distribution<double> gauss(0.0, scale);
    std::vector<double> out(n);
    for (auto& v : out) v = gauss(rng);
    return out;
}

inline double rms(const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

// Train on the stock 400/700 Hz benchmark: calibrates the detector on the
// lead-in, detects and auto-labels the training events, runs selection.
inline swmon::ModelFile train_benchmark_model(const swmon::Corpus& corpus,
                                              const swmon::RunConfig& config) {
    const auto& trigger = corpus.recording.channels[config.trigger_channel];
    const auto noise_samples =
        static_cast<std::size_t>(config.noise_seconds * corpus.recording.sample_rate);
    const auto noise_psd = swmon::compute_interval_psd(
        std::span(trigger.data(), noise_samples), corpus.recording.sample_rate,
        config.interval_len);
    const std::vector<double> durations = {config.switching_duration};
    const auto calib = swmon::calibrate(noise_psd, config.margin_k, durations);

    auto events = swmon::detect_events(corpus.recording, calib, config.interval_len,
                                       config.trigger_channel);
    const std::size_t required = config.cycle.size() * config.train_per_scenario;
    if (events.size() < required) throw std::runtime_error("benchmark: too few events detected");
    events.resize(required);
    events = swmon::auto_label(std::move(events), config.cycle, config.cycle.front());

    swmon::TrainOptions options;
    options.cutoffs = config.usable_cutoffs(corpus.recording.sample_rate);
    options.kinds = config.kinds;
    options.m = config.m;
    options.calibration = calib;
    options.cycle = config.cycle;
    const auto result = swmon::train(events, options);

    swmon::ModelFile file;
    file.config = config;
    file.model = result.model;
    return file;
}

}  // namespace testutil
