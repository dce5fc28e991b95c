#include "swmon/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "swmon/dsp.hpp"

namespace swmon {

using nlohmann::json;

std::string record_to_json_line(const MonitorRecord& record) {
    json j;
    j["schema_version"] = kModelSchemaVersion;
    j["time"] = record.time;
    j["scenario"] = record.scenario;
    j["probability"] = record.probability;
    json votes = json::array();
    for (const auto& v : record.votes)
        votes.push_back({{"scenario", v.scenario},
                         {"probability", v.probability},
                         {"fc", v.fc_weight}});
    j["votes"] = votes;
    j["normalized_values"] = record.normalized_values;
    j["center_displacement"] = record.center_displacement;
    json alarms = json::array();
    for (const auto& a : record.alarms)
        alarms.push_back({{"scenario", a.scenario},
                          {"descriptor", a.descriptor.to_string()},
                          {"displacement", a.displacement},
                          {"threshold", a.threshold},
                          {"time", a.time}});
    j["alarms"] = alarms;
    return j.dump();
}

StreamMonitor::StreamMonitor(const ModelFile& file, double sample_rate,
                             std::size_t channel_count, bool update_centers, VoteMode mode)
    : file_(file),
      sample_rate_(sample_rate),
      channel_count_(channel_count),
      update_centers_(update_centers),
      mode_(mode),
      interval_samples_(static_cast<std::size_t>(file.config.interval_len * sample_rate)),
      event_samples_(static_cast<std::size_t>(
          std::llround(file.model.calibration.refractory * sample_rate))),
      detector_(file.model.calibration, file.config.interval_len),
      drift_state_(make_drift_state(file.model, file.config.drift_options())),
      buffers_(channel_count) {
    if (sample_rate <= 0) throw std::invalid_argument("StreamMonitor: sample_rate must be > 0");
    if (interval_samples_ < 2)
        throw std::invalid_argument("StreamMonitor: interval too short for sample rate");
    if (file.config.trigger_channel >= channel_count)
        throw std::invalid_argument("StreamMonitor: trigger channel out of range");
}

MonitorRecord StreamMonitor::classify_window(double start_time, std::size_t first,
                                             std::size_t count) {
    EventSegment event;
    event.start = start_time;
    event.end = start_time + file_.model.calibration.refractory;
    event.sample_rate = sample_rate_;
    const std::size_t local = first - buffer_offset_;
    for (const auto& buf : buffers_)
        event.samples.emplace_back(buf.begin() + static_cast<std::ptrdiff_t>(local),
                                   buf.begin() + static_cast<std::ptrdiff_t>(local + count));

    const auto result =
        infer(event, file_.model, update_centers_ ? &drift_state_ : nullptr, mode_);
    MonitorRecord rec;
    rec.time = start_time;
    rec.scenario = result.estimate.scenario;
    rec.probability = result.estimate.probability;
    rec.votes = result.estimate.votes;
    rec.normalized_values = result.normalized_values;
    for (std::size_t s = 0; s < drift_state_.scenarios.size(); ++s) {
        std::vector<double> disp;
        for (std::size_t d = 0; d < drift_state_.descriptors.size(); ++d)
            disp.push_back(std::abs(drift_state_.current[s][d] - drift_state_.initial[s][d]));
        rec.center_displacement.push_back(std::move(disp));
    }
    rec.alarms = result.new_alarms;
    return rec;
}

std::vector<MonitorRecord> StreamMonitor::drain() {
    std::vector<MonitorRecord> records;
    const std::size_t available = buffer_offset_ + buffers_.front().size();

    // consume complete intervals on the trigger channel
    for (;;) {
        const std::size_t start = interval_count_ * interval_samples_;
        if (start < buffer_offset_ || start + interval_samples_ > available) break;
        const auto& trig = buffers_[file_.config.trigger_channel];
        const std::size_t local = start - buffer_offset_;
        std::vector<double> segment(trig.begin() + static_cast<std::ptrdiff_t>(local),
                                    trig.begin() +
                                        static_cast<std::ptrdiff_t>(local + interval_samples_));
        double value = 0.0;
        if (interval_samples_ >= 4) {
            const Spectrum s = segment_spectrum(segment, sample_rate_);
            for (double p : s.bin_powers) value += p;
        } else {
            for (double x : segment) value += x * x;
            value /= static_cast<double>(segment.size());
        }
        const double t = detector_.push(value);
        if (t >= 0.0)
            pending_starts_.push_back(
                static_cast<std::size_t>(std::llround(t * sample_rate_)));
        ++interval_count_;
    }

    // classify event windows that are fully buffered
    while (!pending_starts_.empty() &&
           pending_starts_.front() + event_samples_ <= available) {
        const std::size_t first = pending_starts_.front();
        pending_starts_.erase(pending_starts_.begin());
        records.push_back(classify_window(
            static_cast<double>(first) / sample_rate_, first, event_samples_));
    }

    // trim everything no longer needed for pending events or the next interval
    std::size_t keep_from = interval_count_ * interval_samples_;
    if (!pending_starts_.empty()) keep_from = std::min(keep_from, pending_starts_.front());
    while (buffer_offset_ < keep_from) {
        for (auto& buf : buffers_) buf.pop_front();
        ++buffer_offset_;
    }
    return records;
}

std::vector<MonitorRecord> StreamMonitor::push(const std::vector<std::vector<double>>& chunk) {
    if (finished_) throw std::logic_error("StreamMonitor: push after finish");
    if (chunk.size() != channel_count_)
        throw std::invalid_argument("StreamMonitor: chunk channel count mismatch");
    for (const auto& ch : chunk)
        if (ch.size() != chunk.front().size())
            throw std::invalid_argument("StreamMonitor: ragged chunk");
    for (std::size_t c = 0; c < channel_count_; ++c)
        buffers_[c].insert(buffers_[c].end(), chunk[c].begin(), chunk[c].end());
    return drain();
}

std::vector<MonitorRecord> StreamMonitor::finish() {
    finished_ = true;
    return {};  // windows extending past end of input are dropped
}

EvalReport evaluate(const TimeSeries& recording, const std::vector<EventSegment>& truth,
                    const ModelFile& file) {
    recording.validate();
    for (const auto& t : truth)
        if (!t.label) throw std::invalid_argument("evaluate: unlabeled ground-truth event");

    const auto detected = detect_events(recording, file.model.calibration,
                                        file.config.interval_len, file.config.trigger_channel);
    EvalReport rep;
    rep.truth_count = truth.size();
    rep.detected_count = detected.size();

    // greedy time-ordered matching within 1.5 detection intervals
    const double tol = 1.5 * file.config.interval_len;
    std::vector<bool> truth_used(truth.size(), false);
    std::vector<std::ptrdiff_t> match_of(detected.size(), -1);
    for (std::size_t d = 0; d < detected.size(); ++d)
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (truth_used[t]) continue;
            if (std::abs(detected[d].start - truth[t].start) <= tol) {
                truth_used[t] = true;
                match_of[d] = static_cast<std::ptrdiff_t>(t);
                break;
            }
        }
    for (auto m : match_of)
        if (m >= 0) ++rep.matched_count;
    rep.precision = detected.empty()
                        ? 1.0
                        : static_cast<double>(rep.matched_count) / static_cast<double>(detected.size());
    rep.recall = truth.empty()
                     ? 1.0
                     : static_cast<double>(rep.matched_count) / static_cast<double>(truth.size());

    if (rep.matched_count == 0) return rep;

    std::size_t ok_single = 0, ok_equal = 0, ok_fc = 0, ok_prob = 0, ok_updated = 0;
    DriftState state = make_drift_state(file.model, file.config.drift_options());
    for (std::size_t d = 0; d < detected.size(); ++d) {
        if (match_of[d] < 0) continue;
        const std::string& expected = *truth[static_cast<std::size_t>(match_of[d])].label;
        const auto res = infer(detected[d], file.model, nullptr, VoteMode::Equal);
        if (res.estimate.votes.front().scenario == expected) ++ok_single;
        if (res.estimate.scenario == expected) ++ok_equal;
        if (majority_vote(res.estimate.votes, VoteMode::FcWeighted).scenario == expected) ++ok_fc;
        if (majority_vote(res.estimate.votes, VoteMode::ProbWeighted).scenario == expected)
            ++ok_prob;
        const auto updated = infer(detected[d], file.model, &state, VoteMode::Equal);
        if (updated.estimate.scenario == expected) ++ok_updated;
    }
    const double n = static_cast<double>(rep.matched_count);
    rep.accuracy_single_best = static_cast<double>(ok_single) / n;
    rep.accuracy_equal = static_cast<double>(ok_equal) / n;
    rep.accuracy_fc_weighted = static_cast<double>(ok_fc) / n;
    rep.accuracy_prob_weighted = static_cast<double>(ok_prob) / n;
    rep.accuracy_updated_centers = static_cast<double>(ok_updated) / n;
    return rep;
}

std::string format_report(const EvalReport& r) {
    std::ostringstream os;
    os << "events: truth=" << r.truth_count << " detected=" << r.detected_count
       << " matched=" << r.matched_count << "\n";
    os << "detection: precision=" << r.precision << " recall=" << r.recall << "\n";
    os << "accuracy:\n";
    os << "  selected features (best single): " << r.accuracy_single_best << "\n";
    os << "  majority vote (equal):           " << r.accuracy_equal << "\n";
    os << "  majority vote (fc weighted):     " << r.accuracy_fc_weighted << "\n";
    os << "  majority vote (prob weighted):   " << r.accuracy_prob_weighted << "\n";
    os << "  updated centers:                 " << r.accuracy_updated_centers << "\n";
    return os.str();
}

}  // namespace swmon
