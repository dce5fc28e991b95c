#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "swmon/dsp.hpp"
#include "swmon/io.hpp"
#include "swmon/model_io.hpp"
#include "swmon/monitor.hpp"
#include "swmon/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitModel = 3;

struct ConfigCli {
    std::string config_path;
    swmon::RunConfig config;

    void attach(CLI::App& app) {
        app.add_option("--config", config_path, "JSON config file (flags override it)");
        app.add_option("--interval-len", config.interval_len, "detection interval length [s]");
        app.add_option("--margin-k", config.margin_k, "threshold margin in noise sigmas");
        app.add_option("--cutoffs", config.cutoffs, "low-pass cutoff set [Hz]")->delimiter(',');
        app.add_option("--m", config.m, "number of selected features");
        app.add_option("--alpha", config.alpha, "EWMA weight for center updates");
        app.add_option("--alarm-threshold", config.alarm_threshold,
                       "alarm threshold in gating sigmas");
        app.add_option("--sigma-floor", config.sigma_floor,
                       "gating sigma floor [normalized units]");
        app.add_option("--trigger-channel", config.trigger_channel, "detection channel index");
        app.add_option("--cycle", config.cycle, "scenario cycle for auto-labeling")
            ->delimiter(',');
        app.add_option("--seed", config.seed, "random seed");
        app.add_option("--noise-seconds", config.noise_seconds,
                       "leading actuation-free span used for calibration [s]");
        app.add_option("--switching-duration", config.switching_duration,
                       "average actuation duration [s]");
        app.add_option("--train-per-scenario", config.train_per_scenario,
                       "training events per scenario");
    }

    // Load the config file as the base, then re-apply explicitly set flags.
    swmon::RunConfig resolve(const CLI::App& app) const {
        if (config_path.empty()) return config;
        swmon::RunConfig base = swmon::load_config(config_path);
        auto take = [&](const std::string& flag, auto member) {
            if (app.count(flag)) base.*member = config.*member;
        };
        take("--interval-len", &swmon::RunConfig::interval_len);
        take("--margin-k", &swmon::RunConfig::margin_k);
        take("--cutoffs", &swmon::RunConfig::cutoffs);
        take("--m", &swmon::RunConfig::m);
        take("--alpha", &swmon::RunConfig::alpha);
        take("--alarm-threshold", &swmon::RunConfig::alarm_threshold);
        take("--sigma-floor", &swmon::RunConfig::sigma_floor);
        take("--trigger-channel", &swmon::RunConfig::trigger_channel);
        take("--cycle", &swmon::RunConfig::cycle);
        take("--seed", &swmon::RunConfig::seed);
        take("--noise-seconds", &swmon::RunConfig::noise_seconds);
        take("--switching-duration", &swmon::RunConfig::switching_duration);
        take("--train-per-scenario", &swmon::RunConfig::train_per_scenario);
        return base;
    }
};

int cmd_train(const std::string& input, const std::string& output,
              const std::string& created, const swmon::RunConfig& config) {
    const swmon::TimeSeries recording = swmon::read_recording(input);
    if (config.trigger_channel >= recording.channel_count())
        throw std::invalid_argument("trigger channel out of range");
    const auto& trigger = recording.channels[config.trigger_channel];

    const auto noise_samples =
        static_cast<std::size_t>(config.noise_seconds * recording.sample_rate);
    if (noise_samples > trigger.size())
        throw std::invalid_argument("recording shorter than the noise calibration span");
    const auto noise_psd = swmon::compute_interval_psd(
        std::span(trigger.data(), noise_samples), recording.sample_rate, config.interval_len);
    const std::vector<double> durations = {config.switching_duration};
    const auto calib = swmon::calibrate(noise_psd, config.margin_k, durations);

    auto events = swmon::detect_events(recording, calib, config.interval_len,
                                       config.trigger_channel);
    const std::size_t required = config.cycle.size() * config.train_per_scenario;
    if (events.size() < required)
        throw std::invalid_argument("insufficient events: detected " +
                                    std::to_string(events.size()) + ", required " +
                                    std::to_string(required));
    events.resize(required);
    events = swmon::auto_label(std::move(events), config.cycle, config.cycle.front());

    swmon::TrainOptions options;
    options.cutoffs = config.usable_cutoffs(recording.sample_rate);
    options.kinds = config.kinds;
    options.m = config.m;
    options.calibration = calib;
    options.cycle = config.cycle;
    options.created = created;
    const auto result = swmon::train(events, options);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

    swmon::ModelFile file;
    file.created = created;
    file.config = config;
    file.model = result.model;
    swmon::save_model(output, file);

    std::cout << "trained on " << required << " events (" << config.cycle.size()
              << " scenarios), model written to " << output << "\n\n";
    std::cout << "feature quality ranking (top " << std::min<std::size_t>(15, result.report.descriptors.size())
              << " of " << result.report.descriptors.size() << "):\n";
    std::cout << "  rank  fc        descriptor\n";
    for (std::size_t i = 0; i < result.report.ranking.size() && i < 15; ++i) {
        const std::size_t idx = result.report.ranking[i];
        const bool selected = i < config.m;
        std::printf("  %-4zu  %+.5f  %s%s\n", i + 1, result.report.fc[idx],
                    result.report.descriptors[idx].to_string().c_str(),
                    selected ? "  [selected]" : "");
    }
    return kExitOk;
}

int cmd_monitor(const std::string& input, const std::string& model_path,
                const std::string& log_path, bool update_centers,
                const std::optional<std::string>& vote_mode) {
    swmon::ModelFile file = swmon::load_model(model_path);
    const swmon::VoteMode mode =
        vote_mode ? swmon::vote_mode_from_string(*vote_mode) : file.config.vote_mode;

    std::ofstream log_file;
    std::ostream* log = &std::cout;
    if (!log_path.empty()) {
        log_file.open(log_path);
        if (!log_file) throw std::invalid_argument("cannot write " + log_path);
        log = &log_file;
    }

    auto emit = [&](const std::vector<swmon::MonitorRecord>& records) {
        for (const auto& rec : records) *log << swmon::record_to_json_line(rec) << "\n";
    };

    const bool is_wav = input.size() >= 4 && input.compare(input.size() - 4, 4, ".wav") == 0;
    if (is_wav) {
        swmon::WavStreamReader reader(input);
        swmon::StreamMonitor monitor(file, reader.sample_rate(), reader.channel_count(),
                                     update_centers, mode);
        constexpr std::size_t kChunkFrames = 1 << 18;
        for (;;) {
            auto chunk = reader.read(kChunkFrames);
            if (chunk.front().empty()) break;
            emit(monitor.push(chunk));
        }
        emit(monitor.finish());
    } else {
        const swmon::TimeSeries recording = swmon::read_recording(input);
        swmon::StreamMonitor monitor(file, recording.sample_rate, recording.channel_count(),
                                     update_centers, mode);
        emit(monitor.push(recording.channels));
        emit(monitor.finish());
    }
    return kExitOk;
}

int cmd_synth(const std::string& spec_path, std::size_t benchmark_events,
              std::uint64_t seed, const std::string& output,
              const std::string& truth_path) {
    const swmon::CorpusSpec spec =
        spec_path.empty() ? swmon::default_benchmark_spec(benchmark_events, seed)
                          : swmon::load_corpus_spec(spec_path);
    const swmon::Corpus corpus = swmon::generate_corpus(spec);

    // normalize so the 16-bit PCM path keeps full event headroom
    swmon::TimeSeries scaled = corpus.recording;
    if (output.size() >= 4 && output.compare(output.size() - 4, 4, ".wav") == 0) {
        double peak = 0.0;
        for (const auto& ch : scaled.channels)
            for (double v : ch) peak = std::max(peak, std::abs(v));
        if (peak > 0.0)
            for (auto& ch : scaled.channels)
                for (auto& v : ch) v *= 0.9 / peak;
    }
    swmon::write_recording(output, scaled);
    swmon::save_truth(truth_path, corpus.truth);
    std::cout << "wrote " << corpus.truth.size() << " events (" << scaled.duration()
              << " s) to " << output << ", truth to " << truth_path << "\n";
    return kExitOk;
}

int cmd_eval(const std::string& input, const std::string& truth_path,
             const std::string& model_path) {
    const swmon::ModelFile file = swmon::load_model(model_path);
    const swmon::TimeSeries recording = swmon::read_recording(input);
    const auto truth = swmon::load_truth(truth_path);
    const auto report = swmon::evaluate(recording, truth, file);
    std::cout << swmon::format_report(report);
    return kExitOk;
}

int cmd_inspect(const std::string& model_path) {
    const swmon::ModelFile file = swmon::load_model(model_path);
    std::cout << "schema version: " << file.schema_version << "\n";
    if (!file.created.empty()) std::cout << "created: " << file.created << "\n";
    std::cout << "scenarios:";
    for (const auto& s : file.model.centers.scenarios) std::cout << " " << s;
    std::cout << "\ndetection: threshold=" << file.model.calibration.threshold
              << " refractory=" << file.model.calibration.refractory << " s\n";
    std::cout << "selected descriptors:\n";
    for (std::size_t i = 0; i < file.model.descriptors.size(); ++i) {
        std::printf("  %-40s fc=%+.5f  centers:", file.model.descriptors[i].to_string().c_str(),
                    file.model.fc[i]);
        for (std::size_t s = 0; s < file.model.centers.scenarios.size(); ++s)
            std::printf(" %s=%+.4f", file.model.centers.scenarios[s].c_str(),
                        file.model.centers.centers[s][i]);
        std::printf("\n");
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"On-site actuation monitoring: event detection, online feature "
                 "selection, classification and drift tracking"};
    app.require_subcommand(1);

    auto* train = app.add_subcommand("train", "train a model from a labeled-by-cycle recording");
    std::string train_input, train_output = "model.json", train_created;
    ConfigCli train_cfg;
    train->add_option("input", train_input, "recording (.wav or .csv)")->required();
    train->add_option("-o,--output", train_output, "model file to write");
    train->add_option("--created", train_created, "creation metadata string");
    train_cfg.attach(*train);

    auto* monitor = app.add_subcommand("monitor", "classify actuations in a recording");
    std::string mon_input, mon_model, mon_log;
    bool mon_update = false;
    std::optional<std::string> mon_mode;
    monitor->add_option("input", mon_input, "recording (.wav or .csv)")->required();
    monitor->add_option("--model", mon_model, "model file")->required();
    monitor->add_option("-o,--log", mon_log, "event log file (default: stdout)");
    monitor->add_flag("--update-centers", mon_update, "apply EWMA center updates");
    monitor->add_option("--vote-mode", mon_mode, "equal | fc_weighted | prob_weighted");

    auto* synth = app.add_subcommand("synth", "generate a synthetic benchmark corpus");
    std::string synth_spec, synth_output = "corpus.wav", synth_truth = "truth.json";
    std::size_t synth_benchmark = 0;
    std::uint64_t synth_seed = 1;
    auto* synth_spec_opt = synth->add_option("spec", synth_spec, "corpus spec (JSON)");
    synth->add_option("--benchmark", synth_benchmark,
                      "skip the spec file: stock 400/700 Hz benchmark with N events")
        ->excludes(synth_spec_opt);
    synth->add_option("--seed", synth_seed, "seed for --benchmark");
    synth->add_option("-o,--output", synth_output, "recording to write (.wav or .csv)");
    synth->add_option("--truth", synth_truth, "ground-truth file to write");

    auto* eval = app.add_subcommand("eval", "score a model against ground truth");
    std::string eval_input, eval_truth, eval_model;
    eval->add_option("input", eval_input, "recording (.wav or .csv)")->required();
    eval->add_option("--truth", eval_truth, "ground-truth file")->required();
    eval->add_option("--model", eval_model, "model file")->required();

    auto* inspect = app.add_subcommand("inspect-model", "print a model summary");
    std::string inspect_model;
    inspect->add_option("model", inspect_model, "model file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }
    if (*synth && synth_spec.empty() && synth_benchmark == 0) {
        std::cerr << "error: synth needs a spec file or --benchmark\n";
        return kExitUsage;
    }

    try {
        if (*train) return cmd_train(train_input, train_output, train_created,
                                     train_cfg.resolve(*train));
        if (*monitor) return cmd_monitor(mon_input, mon_model, mon_log, mon_update, mon_mode);
        if (*synth) return cmd_synth(synth_spec, synth_benchmark, synth_seed, synth_output,
                                     synth_truth);
        if (*eval) return cmd_eval(eval_input, eval_truth, eval_model);
        if (*inspect) return cmd_inspect(inspect_model);
    } catch (const swmon::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
