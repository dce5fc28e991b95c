#include <doctest.h>

#include <cmath>

#include "swmon/detector.hpp"
#include "swmon/dsp.hpp"
#include "swmon/features.hpp"
#include "swmon/synth.hpp"
#include "helpers.hpp"

using namespace swmon;

TEST_CASE("generate_event with zero amplitude is silent") {
    ActuationSpec spec;
    spec.amplitude = 0.0;
    const auto x = generate_event(spec, 8000.0);
    CHECK(x.size() == 4000);
    for (double v : x) CHECK(v == 0.0);
}

TEST_CASE("generate_event decays with the damping constant") {
    ActuationSpec spec;
    spec.dominant_freq = 400.0;
    spec.damping = 30.0;
    const auto x = generate_event(spec, 48000.0);
    const auto head = std::vector<double>(x.begin(), x.begin() + 4800);
    const auto tail = std::vector<double>(x.end() - 4800, x.end());
    CHECK(testutil::rms(head) > 100.0 * testutil::rms(tail));
}

TEST_CASE("same seed reproduces the corpus exactly") {
    const auto a = generate_corpus(default_benchmark_spec(6, 77));
    const auto b = generate_corpus(default_benchmark_spec(6, 77));
    CHECK(a.recording.channels == b.recording.channels);
    REQUIRE(a.truth.size() == b.truth.size());
    for (std::size_t i = 0; i < a.truth.size(); ++i) {
        CHECK(a.truth[i].start == b.truth[i].start);
        CHECK(*a.truth[i].label == *b.truth[i].label);
    }
    const auto c = generate_corpus(default_benchmark_spec(6, 78));
    CHECK(a.recording.channels != c.recording.channels);
}

TEST_CASE("truth events alternate through the cycle on a regular grid") {
    auto spec = default_benchmark_spec(8, 3);
    const auto corpus = generate_corpus(spec);
    REQUIRE(corpus.truth.size() == 8);
    CHECK(corpus.truth[0].start == doctest::Approx(spec.lead_in));
    for (std::size_t i = 0; i < 8; ++i)
        CHECK(*corpus.truth[i].label == (i % 2 == 0 ? "on" : "off"));
    const double slot = corpus.truth[1].start - corpus.truth[0].start;
    CHECK(slot >= 0.5 + spec.gap - 1e-9);
    for (std::size_t i = 1; i < 8; ++i)
        CHECK(corpus.truth[i].start - corpus.truth[i - 1].start ==
              doctest::Approx(slot).epsilon(1e-12));
}

TEST_CASE("the realized SNR matches the requested 20 dB") {
    auto spec = default_benchmark_spec(20, 19);
    const auto corpus = generate_corpus(spec);
    const auto& x = corpus.recording.channels[0];
    const double rate = corpus.recording.sample_rate;

    const std::size_t noise_n = static_cast<std::size_t>(2.0 * rate);
    double noise_power = 0.0;
    for (std::size_t i = 0; i < noise_n; ++i) noise_power += x[i] * x[i];
    noise_power /= static_cast<double>(noise_n);

    double event_power = 0.0;
    std::size_t event_n = 0;
    for (const auto& t : corpus.truth) {
        const auto first = static_cast<std::size_t>(t.start * rate);
        const auto last = static_cast<std::size_t>(t.end * rate);
        for (std::size_t i = first; i < last; ++i) event_power += x[i] * x[i];
        event_n += last - first;
    }
    event_power /= static_cast<double>(event_n);

    const double snr_db = 10.0 * std::log10((event_power - noise_power) / noise_power);
    CHECK(std::abs(snr_db - 20.0) < 0.5);
}

TEST_CASE("a double-peak actuation shows two bursts but detects as one event") {
    ActuationSpec act;
    act.dominant_freq = 400.0;
    act.double_peak = ActuationSpec::DoublePeak{.delay = 0.2, .relative_amplitude = 0.8};
    const double rate = 48000.0;
    const auto x = generate_event(act, rate);

    const auto psd = compute_interval_psd(x, rate, 0.01);
    // local maxima at the two burst onsets, 0.2 s apart
    const std::size_t first_peak = 0;
    std::size_t second_peak = 10;
    for (std::size_t i = 12; i < psd.values.size(); ++i)
        if (psd.values[i] > psd.values[second_peak] && i >= 18) second_peak = i;
    CHECK(psd.values[first_peak] > psd.values[5]);
    CHECK(std::abs(static_cast<double>(second_peak) * 0.01 - 0.2) < 0.02);
    CHECK(psd.values[second_peak] > psd.values[second_peak - 2]);

    DetectionCalibration calib{.threshold = psd.values[second_peak] * 0.5, .refractory = 0.5};
    const auto events = detect(psd, calib);
    CHECK(events.size() == 1);
}

TEST_CASE("dominant-frequency drift is monotone over a scenario's events") {
    auto spec = default_benchmark_spec(12, 9);
    spec.scenarios[0].drift_dominant_freq_to = 500.0;
    const auto corpus = generate_corpus(spec);
    const auto excerpts = excerpt(corpus.recording, corpus.truth);
    REQUIRE(excerpts.size() == 12);
    std::vector<double> freqs;
    for (const auto& e : excerpts)
        if (*e.label == "on")
            freqs.push_back(compute_feature(FeatureKind::DominantFrequency, e.samples[0],
                                            corpus.recording.sample_rate));
    REQUIRE(freqs.size() == 6);
    CHECK(freqs.front() < 420.0);
    CHECK(freqs.back() > 470.0);
    for (std::size_t i = 1; i < freqs.size(); ++i) CHECK(freqs[i] > freqs[i - 1]);
}

TEST_CASE("zero events gives pure noise and an empty truth list") {
    auto spec = default_benchmark_spec(0, 4);
    const auto corpus = generate_corpus(spec);
    CHECK(corpus.truth.empty());
    CHECK(corpus.recording.channels[0].size() ==
          static_cast<std::size_t>((spec.lead_in + spec.gap) * spec.sample_rate));
    CHECK(testutil::rms(corpus.recording.channels[0]) > 0.0);
}

TEST_CASE("generate_corpus validates its inputs") {
    auto spec = default_benchmark_spec(2, 1);
    spec.gap = 0.1;  // shorter than the event duration
    CHECK_THROWS_AS(generate_corpus(spec), std::invalid_argument);
    auto empty = default_benchmark_spec(2, 1);
    empty.scenarios.clear();
    CHECK_THROWS_AS(generate_corpus(empty), std::invalid_argument);
}
