#pragma once

#include <string>
#include <vector>

#include "swmon/selector.hpp"

namespace swmon {

enum class VoteMode { Equal, FcWeighted, ProbWeighted };

std::string to_string(VoteMode mode);
VoteMode vote_mode_from_string(const std::string& name);

// One per-descriptor decision feeding the majority vote.
struct FeatureVote {
    std::string scenario;
    double probability = 0.0;  // in [0, 1]
    double fc_weight = 0.0;
};

struct ScenarioEstimate {
    std::string scenario;
    double probability = 0.0;  // winning weight share, in [0, 1]
    std::vector<FeatureVote> votes;
    VoteMode mode = VoteMode::Equal;
};

// Online center tracking for one monitored asset. Centers start at the
// model's training centers and follow EWMA updates gated to the
// +-3 sigma band; an alarm latches once a center's displacement from its
// initial position exceeds its threshold.
struct DriftState {
    std::vector<FeatureDescriptor> descriptors;
    std::vector<std::string> scenarios;
    std::vector<std::vector<double>> current;       // [scenario][descriptor]
    std::vector<std::vector<double>> initial;
    std::vector<std::vector<double>> gate_sigma;    // effective gating sigma, > 0
    std::vector<std::vector<double>> alarm_offset;  // normalized units, > 0
    std::vector<std::vector<bool>> alarm;           // latched flags
    std::vector<std::vector<double>> alarm_time;    // first-trigger timestamps, -1 if none
    double alpha = 0.05;
};

struct AlarmEvent {
    std::string scenario;
    FeatureDescriptor descriptor;
    double displacement = 0.0;  // normalized units
    double threshold = 0.0;
    double time = 0.0;
};

struct DriftOptions {
    double alpha = 0.05;
    // alarm threshold and the gating band are expressed as multiples of
    // the per-(scenario, descriptor) training sigma
    double alarm_threshold = 3.0;
    // floor on the gating sigma in normalized units; quantized features
    // (e.g. dominant frequency) can have zero sample variance in training
    double sigma_floor = 0.05;
};

DriftState make_drift_state(const Model& model, const DriftOptions& options = {});

// Scenario assignment for one normalized feature value against its two
// relevant centers: the nearer center wins with probability
// clamp(1 - d_own / d, 0, 1). Coincident centers give the first scenario
// (by id order) at probability 0.5.
std::pair<std::string, double> classify_one(double value, double center_a, double center_b,
                                            const std::string& scenario_a,
                                            const std::string& scenario_b);

// With more than two scenarios, the two centers nearest to the value are
// compared.
std::pair<std::string, double> classify_one(double value,
                                            const std::vector<double>& centers,
                                            const std::vector<std::string>& scenarios);

ScenarioEstimate majority_vote(const std::vector<FeatureVote>& votes, VoteMode mode);

// EWMA update of the assigned scenario's centers with the gated values.
void update_centers(DriftState& state, const std::string& scenario,
                    const std::vector<double>& normalized_values);

// Latch and return alarms for centers displaced past their threshold
// (strict inequality). Already-latched alarms are not re-reported.
std::vector<AlarmEvent> check_alarms(DriftState& state, double time = 0.0);

struct InferResult {
    ScenarioEstimate estimate;
    std::vector<AlarmEvent> new_alarms;
    std::vector<double> normalized_values;  // per selected descriptor
};

// Full inference on one detected event: extract only the selected
// descriptors, normalize, classify per descriptor against the current
// centers, vote, then (if a drift state is supplied) update centers and
// evaluate alarms.
InferResult infer(const EventSegment& event, const Model& model, DriftState* state,
                  VoteMode mode);

}  // namespace swmon
