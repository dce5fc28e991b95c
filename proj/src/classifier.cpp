#include "swmon/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "swmon/dsp.hpp"

namespace swmon {

std::string to_string(VoteMode mode) {
    switch (mode) {
        case VoteMode::Equal: return "equal";
        case VoteMode::FcWeighted: return "fc_weighted";
        case VoteMode::ProbWeighted: return "prob_weighted";
    }
    return "equal";
}

VoteMode vote_mode_from_string(const std::string& name) {
    if (name == "equal") return VoteMode::Equal;
    if (name == "fc_weighted") return VoteMode::FcWeighted;
    if (name == "prob_weighted") return VoteMode::ProbWeighted;
    throw std::invalid_argument("unknown vote mode: " + name);
}

std::pair<std::string, double> classify_one(double value, double center_a, double center_b,
                                            const std::string& scenario_a,
                                            const std::string& scenario_b) {
    const double d = std::abs(center_a - center_b);
    if (d == 0.0)
        return {std::min(scenario_a, scenario_b), 0.5};
    const double da = std::abs(value - center_a);
    const double db = std::abs(value - center_b);
    const bool a_wins = da < db || (da == db && scenario_a < scenario_b);
    const double d_own = a_wins ? da : db;
    const double p = std::clamp(1.0 - d_own / d, 0.0, 1.0);
    return {a_wins ? scenario_a : scenario_b, p};
}

std::pair<std::string, double> classify_one(double value,
                                            const std::vector<double>& centers,
                                            const std::vector<std::string>& scenarios) {
    if (centers.size() != scenarios.size() || centers.size() < 2)
        throw std::invalid_argument("classify_one: need >= 2 centers");
    if (centers.size() == 2)
        return classify_one(value, centers[0], centers[1], scenarios[0], scenarios[1]);
    // two centers nearest to the value
    std::size_t a = 0, b = 1;
    if (std::abs(value - centers[b]) < std::abs(value - centers[a])) std::swap(a, b);
    for (std::size_t i = 2; i < centers.size(); ++i) {
        const double d = std::abs(value - centers[i]);
        if (d < std::abs(value - centers[a])) {
            b = a;
            a = i;
        } else if (d < std::abs(value - centers[b])) {
            b = i;
        }
    }
    return classify_one(value, centers[a], centers[b], scenarios[a], scenarios[b]);
}

ScenarioEstimate majority_vote(const std::vector<FeatureVote>& votes, VoteMode mode) {
    if (votes.empty()) throw std::invalid_argument("majority_vote: no votes");
    std::map<std::string, double> weight, prob_sum;
    double total_weight = 0.0;
    for (const auto& v : votes) {
        double w = 1.0;
        if (mode == VoteMode::FcWeighted) w = std::max(v.fc_weight, 0.0);
        if (mode == VoteMode::ProbWeighted) w = v.probability;
        weight[v.scenario] += w;
        prob_sum[v.scenario] += v.probability;
        total_weight += w;
    }
    // winner by weight, ties by summed probability, then scenario-id order
    std::string winner;
    for (const auto& [scenario, w] : weight) {
        if (winner.empty()) {
            winner = scenario;
            continue;
        }
        if (w > weight[winner] ||
            (w == weight[winner] && prob_sum[scenario] > prob_sum[winner]))
            winner = scenario;
    }
    ScenarioEstimate est;
    est.scenario = winner;
    est.mode = mode;
    est.votes = votes;
    if (total_weight > 0.0) {
        est.probability = weight[winner] / total_weight;
    } else {
        double total_prob = 0.0;
        for (const auto& [scenario, p] : prob_sum) total_prob += p;
        est.probability = total_prob > 0.0 ? prob_sum[winner] / total_prob
                                           : 1.0 / static_cast<double>(weight.size());
    }
    return est;
}

DriftState make_drift_state(const Model& model, const DriftOptions& options) {
    if (options.alpha < 0.0 || options.alpha > 1.0)
        throw std::invalid_argument("make_drift_state: alpha must be in [0, 1]");
    if (options.alarm_threshold <= 0.0)
        throw std::invalid_argument("make_drift_state: alarm threshold must be > 0");
    DriftState st;
    st.descriptors = model.descriptors;
    st.scenarios = model.centers.scenarios;
    st.current = model.centers.centers;
    st.initial = model.centers.centers;
    st.alpha = options.alpha;
    for (const auto& sigma_row : model.centers.sigma) {
        std::vector<double> gate, offset;
        for (double s : sigma_row) {
            const double eff = std::max(s, options.sigma_floor);
            gate.push_back(eff);
            offset.push_back(options.alarm_threshold * eff);
        }
        st.gate_sigma.push_back(std::move(gate));
        st.alarm_offset.push_back(std::move(offset));
    }
    st.alarm.assign(st.scenarios.size(),
                    std::vector<bool>(st.descriptors.size(), false));
    st.alarm_time.assign(st.scenarios.size(),
                         std::vector<double>(st.descriptors.size(), -1.0));
    return st;
}

void update_centers(DriftState& state, const std::string& scenario,
                    const std::vector<double>& normalized_values) {
    const auto it = std::find(state.scenarios.begin(), state.scenarios.end(), scenario);
    if (it == state.scenarios.end())
        throw std::invalid_argument("update_centers: unknown scenario " + scenario);
    const std::size_t s = static_cast<std::size_t>(it - state.scenarios.begin());
    if (normalized_values.size() != state.descriptors.size())
        throw std::invalid_argument("update_centers: value count mismatch");
    for (std::size_t d = 0; d < normalized_values.size(); ++d) {
        const double f = normalized_values[d];
        const double c = state.current[s][d];
        if (std::abs(f - c) <= 3.0 * state.gate_sigma[s][d])
            state.current[s][d] = state.alpha * f + (1.0 - state.alpha) * c;
    }
}

std::vector<AlarmEvent> check_alarms(DriftState& state, double time) {
    std::vector<AlarmEvent> events;
    for (std::size_t s = 0; s < state.scenarios.size(); ++s)
        for (std::size_t d = 0; d < state.descriptors.size(); ++d) {
            if (state.alarm[s][d]) continue;
            const double disp = std::abs(state.current[s][d] - state.initial[s][d]);
            if (disp > state.alarm_offset[s][d]) {
                state.alarm[s][d] = true;
                state.alarm_time[s][d] = time;
                events.push_back({state.scenarios[s], state.descriptors[d], disp,
                                  state.alarm_offset[s][d], time});
            }
        }
    return events;
}

InferResult infer(const EventSegment& event, const Model& model, DriftState* state,
                  VoteMode mode) {
    model.validate();
    if (event.samples.empty() || event.sample_rate <= 0)
        throw std::invalid_argument("infer: event has no samples");

    // filter and transform each (channel, cutoff) pair at most once
    std::map<std::pair<std::size_t, double>, std::vector<double>> filtered;
    std::map<std::pair<std::size_t, double>, Spectrum> spectra;

    InferResult result;
    std::vector<FeatureVote> votes;
    for (std::size_t i = 0; i < model.descriptors.size(); ++i) {
        const auto& desc = model.descriptors[i];
        if (desc.channel >= event.samples.size())
            throw std::invalid_argument("infer: descriptor channel out of range");
        const auto key = std::make_pair(desc.channel, desc.cutoff.value_or(-1.0));
        auto fit = filtered.find(key);
        if (fit == filtered.end()) {
            auto sig = desc.cutoff
                           ? lowpass_channel(event.samples[desc.channel], event.sample_rate,
                                             *desc.cutoff)
                           : event.samples[desc.channel];
            fit = filtered.emplace(key, std::move(sig)).first;
        }
        double raw;
        if (static_cast<int>(desc.kind) >= static_cast<int>(FeatureKind::SpectralMean)) {
            auto sit = spectra.find(key);
            if (sit == spectra.end())
                sit = spectra.emplace(key, segment_spectrum(fit->second, event.sample_rate)).first;
            raw = compute_feature(desc.kind, fit->second, event.sample_rate, sit->second);
        } else {
            raw = compute_feature(desc.kind, fit->second, event.sample_rate);
        }
        const double value = model.normalizer.apply_one(i, raw);
        result.normalized_values.push_back(value);

        const auto& centers_src = state ? state->current : model.centers.centers;
        std::vector<double> centers_col(centers_src.size());
        for (std::size_t s = 0; s < centers_src.size(); ++s) centers_col[s] = centers_src[s][i];
        const auto [scenario, prob] = classify_one(value, centers_col, model.centers.scenarios);
        votes.push_back({scenario, prob, model.fc[i]});
    }
    result.estimate = majority_vote(votes, mode);
    if (state) {
        update_centers(*state, result.estimate.scenario, result.normalized_values);
        result.new_alarms = check_alarms(*state, event.start);
    }
    return result;
}

}  // namespace swmon
