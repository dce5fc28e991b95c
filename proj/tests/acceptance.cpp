// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "swmon/classifier.hpp"
#include "swmon/detector.hpp"
#include "swmon/dsp.hpp"
#include "swmon/model_io.hpp"
#include "swmon/monitor.hpp"
#include "swmon/selector.hpp"
#include "swmon/synth.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace swmon;

namespace {

struct Check {
    std::string name;
    std::function<bool(std::string&)> run;
    double time_limit = 0.0;  // seconds; 0 = unlimited
};

bool match_events(const std::vector<EventSegment>& detected,
                  const std::vector<EventSegment>& truth, double tol,
                  std::size_t& matched, std::size_t& correct_labels,
                  const std::vector<std::string>* predicted = nullptr) {
    matched = 0;
    correct_labels = 0;
    std::vector<bool> used(detected.size(), false);
    for (const auto& t : truth) {
        for (std::size_t i = 0; i < detected.size(); ++i) {
            if (used[i] || std::abs(detected[i].start - t.start) > tol) continue;
            used[i] = true;
            ++matched;
            if (predicted && (*predicted)[i] == *t.label) ++correct_labels;
            break;
        }
    }
    return matched > 0;
}

// criterion 1: feature-quality score against an independent brute-force oracle
bool check_fc_oracle(std::string& detail) {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    double worst = 0.0;
    for (int trial = 0; trial < 150; ++trial) {
        const std::size_t n_clusters = 2 + static_cast<std::size_t>(trial % 3);
        std::vector<std::vector<double>> clusters(n_clusters);
        std::vector<double> centers(n_clusters);
        std::vector<double> values;
        std::vector<std::string> labels;
        std::vector<std::string> scenarios;
        std::uniform_int_distribution<std::size_t> size(1, 20);
        for (std::size_t i = 0; i < n_clusters; ++i) {
            scenarios.push_back("s" + std::to_string(i));
            const std::size_t points = size(rng);
            double sum = 0.0;
            for (std::size_t p = 0; p < points; ++p) {
                const double v = value(rng);
                clusters[i].push_back(v);
                values.push_back(v);
                labels.push_back(scenarios[i]);
                sum += v;
            }
            centers[i] = sum / static_cast<double>(points);
        }
        const double got = feature_quality(values, labels, centers, scenarios);
        const double expected = testutil::brute_force_fc(clusters, centers);
        worst = std::max(worst, std::abs(got - expected));
    }
    detail = "max |fc - oracle| = " + std::to_string(worst) + " over 150 instances";
    return worst < 1e-9;
}

// criterion 2: hand-derived golden case
bool check_fc_golden(std::string& detail) {
    const double fc = feature_quality({0.0, 2.0, 10.0, 12.0}, {"A", "A", "B", "B"},
                                      {1.0, 11.0}, {"A", "B"});
    detail = "fc({0,2} vs {10,12}) = " + std::to_string(fc);
    return std::abs(fc - 0.9) < 1e-12;
}

// criterion 3: detection precision/recall at 20 dB SNR + double-peak
bool check_detection(std::string& detail) {
    auto spec = default_benchmark_spec(220, 301);
    const auto corpus = generate_corpus(spec);
    RunConfig config;
    const auto& trigger = corpus.recording.channels[0];
    const auto noise_n = static_cast<std::size_t>(config.noise_seconds *
                                                  corpus.recording.sample_rate);
    const auto noise_psd = compute_interval_psd(std::span(trigger.data(), noise_n),
                                                corpus.recording.sample_rate,
                                                config.interval_len);
    const std::vector<double> durations = {config.switching_duration};
    const auto calib = calibrate(noise_psd, config.margin_k, durations);
    const auto psd = compute_interval_psd(trigger, corpus.recording.sample_rate,
                                          config.interval_len);
    const auto detected = detect(psd, calib);

    std::size_t matched = 0, correct = 0;
    match_events(detected, corpus.truth, 1.5 * config.interval_len, matched, correct);
    const double precision = static_cast<double>(matched) /
                             static_cast<double>(detected.size());
    const double recall = static_cast<double>(matched) /
                          static_cast<double>(corpus.truth.size());

    auto dp_spec = default_benchmark_spec(20, 303);
    for (auto& s : dp_spec.scenarios)
        s.actuation.double_peak = ActuationSpec::DoublePeak{.delay = 0.2,
                                                            .relative_amplitude = 0.6};
    const auto dp = generate_corpus(dp_spec);
    const auto dp_psd = compute_interval_psd(dp.recording.channels[0],
                                             dp.recording.sample_rate, config.interval_len);
    const auto dp_events = detect(dp_psd, calibrate(
        compute_interval_psd(std::span(dp.recording.channels[0].data(), noise_n),
                             dp.recording.sample_rate, config.interval_len),
        config.margin_k, durations));

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "precision %.4f, recall %.4f on 220 events; double-peak: %zu events "
                  "for %zu actuations", precision, recall, dp_events.size(), dp.truth.size());
    detail = buf;
    return precision >= 0.99 && recall >= 0.99 && dp_events.size() == dp.truth.size();
}

struct BenchmarkRun {
    ModelFile file;
    std::vector<EventSegment> held_out;        // detected + excerpted
    std::vector<std::string> truth_labels;     // aligned with held_out
};

BenchmarkRun run_benchmark(std::size_t held_out_events, std::uint64_t train_seed,
                           std::uint64_t test_seed) {
    RunConfig config;
    const auto train_corpus = generate_corpus(default_benchmark_spec(
        config.cycle.size() * config.train_per_scenario, train_seed));
    BenchmarkRun out;
    out.file = testutil::train_benchmark_model(train_corpus, config);

    const auto test_corpus = generate_corpus(default_benchmark_spec(held_out_events, test_seed));
    auto detected = detect_events(test_corpus.recording, out.file.model.calibration,
                                  config.interval_len, config.trigger_channel);
    for (auto& e : detected) {
        for (const auto& t : test_corpus.truth) {
            if (std::abs(e.start - t.start) <= 1.5 * config.interval_len) {
                out.held_out.push_back(std::move(e));
                out.truth_labels.push_back(*t.label);
                break;
            }
        }
    }
    return out;
}

double accuracy(const BenchmarkRun& run, VoteMode mode) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < run.held_out.size(); ++i)
        if (infer(run.held_out[i], run.file.model, nullptr, mode).estimate.scenario ==
            run.truth_labels[i])
            ++correct;
    return static_cast<double>(correct) / static_cast<double>(run.held_out.size());
}

BenchmarkRun& shared_benchmark() {
    static BenchmarkRun run = run_benchmark(210, 401, 402);
    return run;
}

// criterion 4: end-to-end accuracy + dominant frequency selected
bool check_end_to_end(std::string& detail) {
    auto& run = shared_benchmark();
    if (run.held_out.size() < 200) {
        detail = "only " + std::to_string(run.held_out.size()) + " held-out events matched";
        return false;
    }
    const double acc = accuracy(run, VoteMode::Equal);
    bool has_dominant = false;
    for (const auto& d : run.file.model.descriptors)
        if (d.kind == FeatureKind::DominantFrequency) has_dominant = true;
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "accuracy %.4f on %zu held-out events; dominant frequency selected: %s",
                  acc, run.held_out.size(), has_dominant ? "yes" : "no");
    detail = buf;
    return acc >= 0.95 && has_dominant &&
           run.file.model.descriptors.size() == 5;
}

// criterion 5: vote-mode spread
bool check_vote_spread(std::string& detail) {
    auto& run = shared_benchmark();
    const double eq = accuracy(run, VoteMode::Equal);
    const double fc = accuracy(run, VoteMode::FcWeighted);
    const double pw = accuracy(run, VoteMode::ProbWeighted);
    const double spread = std::max({eq, fc, pw}) - std::min({eq, fc, pw});
    char buf[160];
    std::snprintf(buf, sizeof buf, "equal %.4f, fc %.4f, prob %.4f; spread %.4f",
                  eq, fc, pw, spread);
    detail = buf;
    return spread <= 0.02;
}

// criterion 6: EWMA drift tracking beats static centers, alarm fires
bool check_drift(std::string& detail) {
    RunConfig config;
    const auto train_corpus = generate_corpus(default_benchmark_spec(10, 501));
    const auto file = testutil::train_benchmark_model(train_corpus, config);

    auto spec = default_benchmark_spec(500, 502);
    spec.scenarios[0].drift_dominant_freq_to = 500.0;
    const auto corpus = generate_corpus(spec);
    const auto events = detect_events(corpus.recording, file.model.calibration,
                                      config.interval_len, config.trigger_channel);

    std::vector<std::string> truth;
    std::vector<EventSegment> matched;
    for (const auto& e : events)
        for (const auto& t : corpus.truth)
            if (std::abs(e.start - t.start) <= 1.5 * config.interval_len) {
                matched.push_back(e);
                truth.push_back(*t.label);
                break;
            }

    std::size_t static_correct = 0, updated_correct = 0;
    auto state = make_drift_state(file.model, config.drift_options());
    bool alarmed = false;
    double alarm_time = -1.0;
    for (std::size_t i = 0; i < matched.size(); ++i) {
        if (infer(matched[i], file.model, nullptr, VoteMode::Equal).estimate.scenario ==
            truth[i])
            ++static_correct;
        const auto res = infer(matched[i], file.model, &state, VoteMode::Equal);
        if (res.estimate.scenario == truth[i]) ++updated_correct;
        if (!res.new_alarms.empty() && !alarmed) {
            alarmed = true;
            alarm_time = matched[i].start;
        }
    }
    const double n = static_cast<double>(matched.size());
    const double acc_static = static_cast<double>(static_correct) / n;
    const double acc_updated = static_cast<double>(updated_correct) / n;
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "static %.4f vs updated %.4f over %zu events; alarm %s (t = %.1f s)",
                  acc_static, acc_updated, matched.size(),
                  alarmed ? "triggered" : "missing", alarm_time);
    detail = buf;
    return matched.size() >= 480 && acc_updated >= acc_static && alarmed;
}

// criterion 7: EWMA exactness and outlier rejection
bool check_ewma(std::string& detail) {
    DriftState st;
    st.descriptors = {{FeatureKind::Rms, std::nullopt, 0}};
    st.scenarios = {"A", "B"};
    st.current = {{0.3}, {9.0}};
    st.initial = st.current;
    st.gate_sigma = {{10.0}, {10.0}};
    st.alarm_offset = {{30.0}, {30.0}};
    st.alarm = {{false}, {false}};
    st.alarm_time = {{-1.0}, {-1.0}};
    st.alpha = 0.05;

    const double f = 4.0, c0 = 0.3;
    double worst = 0.0;
    for (int n = 1; n <= 200; ++n) {
        update_centers(st, "A", {f});
        const double expected = std::pow(1.0 - 0.05, n) * std::abs(c0 - f);
        worst = std::max(worst, std::abs(std::abs(st.current[0][0] - f) - expected));
    }
    const double before = st.current[0][0];
    DriftState outlier = st;
    outlier.gate_sigma = {{1.0}, {1.0}};
    update_centers(outlier, "A", {before + 3.5});  // > 3 sigma away
    const bool unchanged = outlier.current == st.current;
    detail = "max EWMA deviation " + std::to_string(worst) +
             std::string(unchanged ? "; outlier rejected" : "; outlier moved a center");
    return worst < 1e-9 && unchanged;
}

// criterion 8: Parseval + low-pass passband/stopband
bool check_dsp(std::string& detail) {
    std::mt19937_64 rng(601);
    double worst_rel = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<std::size_t> len(5, 1000);
        const auto x = testutil::random_signal(rng, len(rng));
        const auto s = segment_spectrum(x, 48000.0);
        double spectral = 0.0;
        for (double p : s.bin_powers) spectral += p;
        double ms = 0.0;
        for (double v : x) ms += v * v;
        ms /= static_cast<double>(x.size());
        worst_rel = std::max(worst_rel, std::abs(spectral - ms) / ms);
    }

    const double rate = 8000.0, cutoff = 1000.0;
    const std::size_t n = 65536;
    const auto pass_tone = testutil::make_sine(0.8 * cutoff * 0.99, rate, n);
    const double pass_db = 20.0 * std::log10(
        testutil::rms(lowpass_channel(pass_tone, rate, cutoff)) / testutil::rms(pass_tone));
    const auto stop_tone = testutil::make_sine(2.0 * cutoff + 0.37, rate, n);
    const double stop_db = 20.0 * std::log10(
        testutil::rms(lowpass_channel(stop_tone, rate, cutoff)) / testutil::rms(stop_tone));

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "Parseval worst rel err %.2e; passband %.3f dB, stopband %.1f dB",
                  worst_rel, pass_db, stop_db);
    detail = buf;
    return worst_rel < 1e-6 && pass_db >= -1.0 && pass_db <= 1.0 && stop_db <= -40.0;
}

// criterion 9: probability contract
bool check_probability(std::string& detail) {
    const auto at_center = classify_one(2.0, 2.0, 9.0, "A", "B");
    const auto midpoint = classify_one(5.5, 2.0, 9.0, "A", "B");
    bool ok = std::abs(at_center.second - 1.0) < 1e-12 &&
              std::abs(midpoint.second - 0.5) < 1e-12;
    std::mt19937_64 rng(701);
    std::uniform_real_distribution<double> value(-100.0, 100.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = value(rng), b = value(rng), v = value(rng);
        const double p = classify_one(v, a, b, "A", "B").second;
        if (p < 0.0 || p > 1.0) ok = false;
    }
    detail = "center P = 1, midpoint P = 0.5, 1000 random configs in [0, 1]";
    return ok;
}

// criterion 10: save/load round trip, bit-identical inference
bool check_persistence(std::string& detail) {
    auto& run = shared_benchmark();
    const auto text = model_to_json(run.file);
    const auto loaded = model_from_json(text);

    std::mt19937_64 rng(801);
    std::size_t identical = 0;
    const std::size_t trials = 100;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        EventSegment e;
        e.sample_rate = 48000.0;
        e.samples = {testutil::random_signal(rng, 24000, 0.3)};
        e.end = 0.5;
        const auto a = infer(e, run.file.model, nullptr, VoteMode::Equal);
        const auto b = infer(e, loaded.model, nullptr, VoteMode::Equal);
        if (a.estimate.scenario == b.estimate.scenario &&
            a.estimate.probability == b.estimate.probability &&
            a.normalized_values == b.normalized_values)
            ++identical;
    }
    detail = std::to_string(identical) + "/" + std::to_string(trials) +
             " random events bit-identical after round trip";
    return identical == trials;
}

}  // namespace

int main() {
    const std::vector<Check> checks = {
        {"1 feature-quality oracle equivalence", check_fc_oracle, 5.0},
        {"2 feature-quality golden case", check_fc_golden, 0.0},
        {"3 detection precision/recall at 20 dB", check_detection, 30.0},
        {"4 end-to-end classification", check_end_to_end, 60.0},
        {"5 vote-mode spread", check_vote_spread, 0.0},
        {"6 drift tracking and aging alarm", check_drift, 60.0},
        {"7 EWMA exactness", check_ewma, 0.0},
        {"8 DSP invariants", check_dsp, 0.0},
        {"9 probability contract", check_probability, 0.0},
        {"10 model persistence", check_persistence, 0.0},
    };

    int failures = 0;
    for (const auto& check : checks) {
        std::string detail;
        bool ok = false;
        double elapsed = 0.0;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            ok = check.run(detail);
            elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                          .count();
            if (check.time_limit > 0.0 && elapsed > check.time_limit) {
                ok = false;
                detail += " [exceeded " + std::to_string(check.time_limit) + " s limit]";
            }
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("%s  criterion %s (%.1f s): %s\n", ok ? "PASS" : "FAIL",
                    check.name.c_str(), elapsed, detail.c_str());
        if (!ok) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
