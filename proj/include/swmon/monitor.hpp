#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "swmon/classifier.hpp"
#include "swmon/detector.hpp"
#include "swmon/model_io.hpp"

namespace swmon {

// One event log entry per detected actuation.
struct MonitorRecord {
    double time = 0.0;  // event start, seconds
    std::string scenario;
    double probability = 0.0;
    std::vector<FeatureVote> votes;
    std::vector<double> normalized_values;
    std::vector<std::vector<double>> center_displacement;  // [scenario][descriptor]
    std::vector<AlarmEvent> alarms;                        // newly latched this event
};

std::string record_to_json_line(const MonitorRecord& record);

// Streaming inference pipeline: chunked input, bounded memory. Detects on
// the trigger channel's interval-PSD stream and classifies each completed
// event window. Chunk boundaries do not affect the output.
class StreamMonitor {
  public:
    StreamMonitor(const ModelFile& file, double sample_rate, std::size_t channel_count,
                  bool update_centers, VoteMode mode);

    // Feed the next chunk (deinterleaved, equal-length channels). Returns
    // records for all events whose window completed within this chunk.
    std::vector<MonitorRecord> push(const std::vector<std::vector<double>>& chunk);

    // Flush events still pending at end of input.
    std::vector<MonitorRecord> finish();

    const DriftState& drift() const { return drift_state_; }
    std::size_t processed_intervals() const { return interval_count_; }

  private:
    std::vector<MonitorRecord> drain();
    MonitorRecord classify_window(double start_time, std::size_t first, std::size_t count);

    ModelFile file_;
    double sample_rate_;
    std::size_t channel_count_;
    bool update_centers_;
    VoteMode mode_;
    std::size_t interval_samples_;
    std::size_t event_samples_;
    StreamingDetector detector_;
    DriftState drift_state_;

    // rolling buffers; buffer_offset_ is the absolute index of buffers_[c][0]
    std::vector<std::deque<double>> buffers_;
    std::size_t buffer_offset_ = 0;
    std::size_t interval_count_ = 0;  // complete intervals consumed
    std::vector<std::size_t> pending_starts_;  // absolute sample indices
    bool finished_ = false;
};

// Detection and classification quality against a ground-truth event list.
struct EvalReport {
    std::size_t truth_count = 0;
    std::size_t detected_count = 0;
    std::size_t matched_count = 0;
    double precision = 0.0;
    double recall = 0.0;
    double accuracy_single_best = 0.0;
    double accuracy_equal = 0.0;
    double accuracy_fc_weighted = 0.0;
    double accuracy_prob_weighted = 0.0;
    double accuracy_updated_centers = 0.0;  // equal vote + EWMA center updates
};

EvalReport evaluate(const TimeSeries& recording, const std::vector<EventSegment>& truth,
                    const ModelFile& file);

std::string format_report(const EvalReport& report);

}  // namespace swmon
