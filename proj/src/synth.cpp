#include "swmon/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace swmon {
namespace {

void validate(const ActuationSpec& spec, double sample_rate) {
    if (sample_rate <= 0) throw std::invalid_argument("generate_event: sample_rate must be > 0");
    if (spec.dominant_freq <= 0 || spec.dominant_freq >= sample_rate / 2.0)
        throw std::invalid_argument("generate_event: dominant_freq must be in (0, Nyquist)");
    for (const auto& [f, a] : spec.secondary_freqs)
        if (f <= 0 || f >= sample_rate / 2.0)
            throw std::invalid_argument("generate_event: secondary frequency out of range");
    if (spec.damping <= 0) throw std::invalid_argument("generate_event: damping must be > 0");
    if (spec.duration <= 0) throw std::invalid_argument("generate_event: duration must be > 0");
    if (spec.amplitude < 0) throw std::invalid_argument("generate_event: amplitude must be >= 0");
    if (spec.double_peak && (spec.double_peak->delay < 0 ||
                             spec.double_peak->delay >= spec.duration))
        throw std::invalid_argument("generate_event: double-peak delay out of range");
}

double burst_sample(const ActuationSpec& spec, double t) {
    const double env = std::exp(-spec.damping * t);
    double v = std::sin(2.0 * std::numbers::pi * spec.dominant_freq * t);
    for (const auto& [f, a] : spec.secondary_freqs)
        v += a * std::sin(2.0 * std::numbers::pi * f * t);
    return env * v;
}

}  // namespace

std::vector<double> generate_event(const ActuationSpec& spec, double sample_rate) {
    validate(spec, sample_rate);
    const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration * sample_rate));
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate;
        double v = burst_sample(spec, t);
        if (spec.double_peak && t >= spec.double_peak->delay)
            v += spec.double_peak->relative_amplitude *
                 burst_sample(spec, t - spec.double_peak->delay);
        out[i] = spec.amplitude * v;
    }
    return out;
}

CorpusSpec default_benchmark_spec(std::size_t event_count, std::uint64_t seed) {
    CorpusSpec spec;
    ActuationSpec on;
    on.dominant_freq = 400.0;
    on.secondary_freqs = {{800.0, 0.3}};
    ActuationSpec off;
    off.dominant_freq = 700.0;
    off.secondary_freqs = {{1400.0, 0.3}};
    spec.scenarios = {{"on", on, std::nullopt}, {"off", off, std::nullopt}};
    spec.event_count = event_count;
    spec.seed = seed;
    return spec;
}

Corpus generate_corpus(const CorpusSpec& spec) {
    if (spec.scenarios.empty())
        throw std::invalid_argument("generate_corpus: need >= 1 scenario");
    if (spec.sample_rate <= 0)
        throw std::invalid_argument("generate_corpus: sample_rate must be > 0");
    if (spec.lead_in < 0 || spec.gap < 0)
        throw std::invalid_argument("generate_corpus: lead_in and gap must be >= 0");
    double max_duration = 0.0;
    for (const auto& s : spec.scenarios) {
        validate(s.actuation, spec.sample_rate);
        max_duration = std::max(max_duration, s.actuation.duration);
    }
    if (spec.event_count > 0 && spec.gap <= max_duration)
        throw std::invalid_argument("generate_corpus: gap must exceed the longest event");

    const double slot = max_duration + spec.gap;
    const double total =
        spec.lead_in + static_cast<double>(spec.event_count) * slot + spec.gap;
    const std::size_t n = static_cast<std::size_t>(std::llround(total * spec.sample_rate));

    Corpus corpus;
    corpus.recording.sample_rate = spec.sample_rate;
    corpus.recording.channel_names = {spec.channel_name};
    corpus.recording.channels.emplace_back(n, 0.0);
    auto& samples = corpus.recording.channels.front();

    double event_power_sum = 0.0;
    std::size_t event_sample_count = 0;
    for (std::size_t e = 0; e < spec.event_count; ++e) {
        const auto& scenario = spec.scenarios[e % spec.scenarios.size()];
        ActuationSpec act = scenario.actuation;
        if (scenario.drift_dominant_freq_to && spec.event_count > 1) {
            const double frac =
                static_cast<double>(e) / static_cast<double>(spec.event_count - 1);
            act.dominant_freq += frac * (*scenario.drift_dominant_freq_to - act.dominant_freq);
        }
        const double start = spec.lead_in + static_cast<double>(e) * slot;
        const auto burst = generate_event(act, spec.sample_rate);
        const std::size_t first = static_cast<std::size_t>(std::llround(start * spec.sample_rate));
        for (std::size_t i = 0; i < burst.size() && first + i < n; ++i) {
            samples[first + i] += burst[i];
            event_power_sum += burst[i] * burst[i];
            ++event_sample_count;
        }
        EventSegment truth;
        truth.start = start;
        truth.end = start + act.duration;
        truth.label = scenario.label;
        corpus.truth.push_back(std::move(truth));
    }

    const double event_power =
        event_sample_count > 0 ? event_power_sum / static_cast<double>(event_sample_count) : 1.0;
    const double noise_power = event_power / std::pow(10.0, spec.snr_db / 10.0);
    const double noise_std = std::sqrt(noise_power);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : samples) v += noise_std * gauss(rng);
    return corpus;
}

}  // namespace swmon
