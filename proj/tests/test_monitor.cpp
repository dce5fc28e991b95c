#include <doctest.h>

#include "swmon/monitor.hpp"
#include "swmon/synth.hpp"
#include "helpers.hpp"

using namespace swmon;

namespace {

std::vector<MonitorRecord> run_monitor(const ModelFile& file, const TimeSeries& rec,
                                       std::size_t chunk_frames, bool update = false) {
    StreamMonitor monitor(file, rec.sample_rate, rec.channels.size(), update,
                          file.config.vote_mode);
    std::vector<MonitorRecord> records;
    const std::size_t total = rec.channels[0].size();
    for (std::size_t at = 0; at < total; at += chunk_frames) {
        const std::size_t n = std::min(chunk_frames, total - at);
        std::vector<std::vector<double>> chunk(rec.channels.size());
        for (std::size_t c = 0; c < rec.channels.size(); ++c)
            chunk[c].assign(rec.channels[c].begin() + static_cast<std::ptrdiff_t>(at),
                            rec.channels[c].begin() + static_cast<std::ptrdiff_t>(at + n));
        for (auto& r : monitor.push(chunk)) records.push_back(std::move(r));
    }
    for (auto& r : monitor.finish()) records.push_back(std::move(r));
    return records;
}

}  // namespace

TEST_CASE("stream monitor output does not depend on the chunking") {
    const auto corpus = generate_corpus(default_benchmark_spec(14, 47));
    RunConfig config;
    const auto file = testutil::train_benchmark_model(corpus, config);

    const auto baseline = run_monitor(file, corpus.recording, corpus.recording.channels[0].size());
    REQUIRE(baseline.size() >= 14);
    for (std::size_t chunk : {1583ul, 48000ul, 100000ul}) {
        const auto got = run_monitor(file, corpus.recording, chunk);
        REQUIRE(got.size() == baseline.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].time == baseline[i].time);
            CHECK(got[i].scenario == baseline[i].scenario);
            CHECK(got[i].probability == baseline[i].probability);
            CHECK(got[i].normalized_values == baseline[i].normalized_values);
        }
    }
}

TEST_CASE("stream monitor agrees with batch detection and inference") {
    const auto corpus = generate_corpus(default_benchmark_spec(12, 53));
    RunConfig config;
    const auto file = testutil::train_benchmark_model(corpus, config);

    const auto records = run_monitor(file, corpus.recording, 30000);
    const auto events = detect_events(corpus.recording, file.model.calibration,
                                      config.interval_len, config.trigger_channel);
    REQUIRE(records.size() == events.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].time == doctest::Approx(events[i].start).epsilon(1e-9));
        const auto batch = infer(events[i], file.model, nullptr, VoteMode::Equal);
        CHECK(records[i].scenario == batch.estimate.scenario);
        CHECK(records[i].probability == doctest::Approx(batch.estimate.probability));
    }
}

TEST_CASE("stream monitor on silence emits nothing") {
    const auto corpus = generate_corpus(default_benchmark_spec(10, 59));
    RunConfig config;
    const auto file = testutil::train_benchmark_model(corpus, config);

    TimeSeries silence;
    silence.sample_rate = corpus.recording.sample_rate;
    silence.channels = {std::vector<double>(48000, 0.0)};
    CHECK(run_monitor(file, silence, 10000).empty());

    TimeSeries empty;
    empty.sample_rate = corpus.recording.sample_rate;
    empty.channels = {{}};
    CHECK(run_monitor(file, empty, 10000).empty());
}

TEST_CASE("monitor records serialize to one json line each") {
    MonitorRecord r;
    r.time = 3.3;
    r.scenario = "on";
    r.probability = 0.9;
    r.votes = {{"on", 0.9, 0.5}};
    const auto line = record_to_json_line(r);
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("\"on\"") != std::string::npos);
    CHECK(line.find("schema_version") != std::string::npos);
}

TEST_CASE("evaluate scores a clean corpus perfectly") {
    const auto corpus = generate_corpus(default_benchmark_spec(16, 67));
    RunConfig config;
    const auto file = testutil::train_benchmark_model(corpus, config);
    const auto report = evaluate(corpus.recording, corpus.truth, file);
    CHECK(report.truth_count == 16);
    CHECK(report.recall == doctest::Approx(1.0));
    CHECK(report.precision == doctest::Approx(1.0));
    CHECK(report.accuracy_equal == doctest::Approx(1.0));
    CHECK(report.accuracy_updated_centers >= report.accuracy_equal - 1e-12);
    const auto text = format_report(report);
    CHECK(text.find("recall") != std::string::npos);
}

TEST_CASE("evaluate reports zero accuracy when the truth labels are flipped") {
    const auto corpus = generate_corpus(default_benchmark_spec(10, 71));
    RunConfig config;
    const auto file = testutil::train_benchmark_model(corpus, config);
    auto flipped = corpus.truth;
    for (auto& t : flipped) t.label = (*t.label == "on") ? "off" : "on";
    const auto report = evaluate(corpus.recording, flipped, file);
    CHECK(report.recall == doctest::Approx(1.0));
    CHECK(report.accuracy_equal == doctest::Approx(0.0));
    CHECK(report.accuracy_single_best == doctest::Approx(0.0));
}
