#pragma once

#include <span>
#include <string>
#include <vector>

#include "swmon/types.hpp"

namespace swmon {

// Detection threshold derived from actuation-free training data plus the
// refractory period (average switching duration) used to suppress
// secondary peaks.
struct DetectionCalibration {
    double threshold = 0.0;   // power units
    double mean_noise = 0.0;
    double std_noise = 0.0;
    double margin_k = 0.0;
    double refractory = 0.0;  // seconds
};

// threshold = mean(noise) + margin_k * std(noise); refractory = mean of
// switching_durations. Requires >= 10 noise intervals and >= 1 duration.
DetectionCalibration calibrate(const IntervalPsdSeries& noise_psd, double margin_k,
                               std::span<const double> switching_durations);

// Threshold detection on an interval-PSD stream. An event starts at the
// first interval exceeding the threshold that is not within the refractory
// period of the previous event start; event end = start + refractory.
// Returned segments carry times only (no samples).
std::vector<EventSegment> detect(const IntervalPsdSeries& psd,
                                 const DetectionCalibration& calib);

// Fill segment sample excerpts from the source recording. Segments whose
// window extends past the recording end are dropped.
std::vector<EventSegment> excerpt(const TimeSeries& series,
                                  std::vector<EventSegment> events);

// detect on the trigger channel, then excerpt all channels.
std::vector<EventSegment> detect_events(const TimeSeries& series,
                                        const DetectionCalibration& calib,
                                        double interval_len,
                                        std::size_t trigger_channel = 0);

// Alternating training labels: event i gets
// cycle[(index_of(start_state) + i) mod |cycle|].
std::vector<EventSegment> auto_label(std::vector<EventSegment> events,
                                     const std::vector<std::string>& cycle,
                                     const std::string& start_state);

// Incremental detector for the streaming monitor path. Feed interval power
// values in order; fires the event start time when one is detected.
class StreamingDetector {
  public:
    StreamingDetector(const DetectionCalibration& calib, double interval_len)
        : calib_(calib), interval_len_(interval_len) {}

    // Returns the event start time (seconds) if this interval opens a new
    // event, else a negative value.
    double push(double value) {
        const double t = static_cast<double>(next_index_++) * interval_len_;
        if (value > calib_.threshold &&
            (last_start_ < 0.0 || t >= last_start_ + calib_.refractory)) {
            last_start_ = t;
            return t;
        }
        return -1.0;
    }

  private:
    DetectionCalibration calib_;
    double interval_len_;
    std::size_t next_index_ = 0;
    double last_start_ = -1.0;
};

}  // namespace swmon
