#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "swmon/classifier.hpp"
#include "swmon/selector.hpp"
#include "swmon/synth.hpp"

namespace swmon {

inline constexpr int kModelSchemaVersion = 1;

// Model file with an unknown or incompatible schema version.
class SchemaError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// All pipeline tunables. Defaults: 33 ms detection intervals, top 5
// features, EWMA alpha 0.05, 5 training events per scenario.
struct RunConfig {
    double interval_len = 0.033;     // seconds
    double margin_k = 6.0;
    std::vector<double> cutoffs = {500.0, 1000.0, 2000.0, 5000.0, 10000.0};  // Hz
    std::vector<FeatureKind> kinds{all_feature_kinds().begin(), all_feature_kinds().end()};
    std::size_t m = 5;
    double alpha = 0.05;
    VoteMode vote_mode = VoteMode::Equal;
    double alarm_threshold = 3.0;    // multiples of the gating sigma
    double sigma_floor = 0.05;       // normalized units
    std::size_t trigger_channel = 0;
    std::vector<std::string> cycle = {"on", "off"};
    std::uint64_t seed = 1;
    double noise_seconds = 2.0;      // leading actuation-free span used for calibration
    double switching_duration = 0.5; // seconds, average actuation length
    std::size_t train_per_scenario = 5;

    DriftOptions drift_options() const { return {alpha, alarm_threshold, sigma_floor}; }
    // configured cutoffs restricted to (0, Nyquist)
    std::vector<double> usable_cutoffs(double sample_rate) const;
};

std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);
void save_config(const std::string& path, const RunConfig& config);
RunConfig load_config(const std::string& path);

struct ModelFile {
    int schema_version = kModelSchemaVersion;
    std::string created;
    RunConfig config;
    Model model;
};

std::string model_to_json(const ModelFile& file);
ModelFile model_from_json(const std::string& text);
void save_model(const std::string& path, const ModelFile& file);
ModelFile load_model(const std::string& path);

// Ground-truth event lists (start/end/label, no samples).
void save_truth(const std::string& path, const std::vector<EventSegment>& truth);
std::vector<EventSegment> load_truth(const std::string& path);

// Corpus specification files for the synth command.
std::string corpus_spec_to_json(const CorpusSpec& spec);
CorpusSpec corpus_spec_from_json(const std::string& text);
CorpusSpec load_corpus_spec(const std::string& path);

}  // namespace swmon
