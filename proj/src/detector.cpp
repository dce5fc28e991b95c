#include "swmon/detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "swmon/dsp.hpp"

namespace swmon {

DetectionCalibration calibrate(const IntervalPsdSeries& noise_psd, double margin_k,
                               std::span<const double> switching_durations) {
    if (noise_psd.values.size() < 10)
        throw std::invalid_argument("calibrate: need >= 10 noise intervals");
    if (switching_durations.empty())
        throw std::invalid_argument("calibrate: need >= 1 switching duration");
    if (margin_k < 0) throw std::invalid_argument("calibrate: margin_k must be >= 0");

    const auto& v = noise_psd.values;
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= n;

    DetectionCalibration c;
    c.mean_noise = mean;
    c.std_noise = std::sqrt(var);
    c.margin_k = margin_k;
    c.threshold = mean + margin_k * c.std_noise;
    c.refractory =
        std::accumulate(switching_durations.begin(), switching_durations.end(), 0.0) /
        static_cast<double>(switching_durations.size());
    if (c.refractory <= 0) throw std::invalid_argument("calibrate: refractory must be > 0");
    return c;
}

std::vector<EventSegment> detect(const IntervalPsdSeries& psd,
                                 const DetectionCalibration& calib) {
    std::vector<EventSegment> events;
    double last_start = -1.0;
    for (std::size_t i = 0; i < psd.values.size(); ++i) {
        const double t = static_cast<double>(i) * psd.interval_len;
        if (psd.values[i] > calib.threshold &&
            (last_start < 0.0 || t >= last_start + calib.refractory)) {
            EventSegment e;
            e.start = t;
            e.end = t + calib.refractory;
            events.push_back(std::move(e));
            last_start = t;
        }
    }
    return events;
}

std::vector<EventSegment> excerpt(const TimeSeries& series, std::vector<EventSegment> events) {
    series.validate();
    std::vector<EventSegment> out;
    out.reserve(events.size());
    for (auto& e : events) {
        const auto first = static_cast<std::size_t>(std::llround(e.start * series.sample_rate));
        const auto count = static_cast<std::size_t>(std::llround((e.end - e.start) * series.sample_rate));
        if (first + count > series.length()) continue;  // window runs past recording end
        e.sample_rate = series.sample_rate;
        e.channel_names = series.channel_names;
        e.samples.clear();
        for (const auto& ch : series.channels)
            e.samples.emplace_back(ch.begin() + first, ch.begin() + first + count);
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<EventSegment> detect_events(const TimeSeries& series,
                                        const DetectionCalibration& calib,
                                        double interval_len, std::size_t trigger_channel) {
    series.validate();
    if (trigger_channel >= series.channel_count())
        throw std::invalid_argument("detect_events: trigger channel out of range");
    const auto psd = compute_interval_psd(series.channels[trigger_channel],
                                          series.sample_rate, interval_len);
    return excerpt(series, detect(psd, calib));
}

std::vector<EventSegment> auto_label(std::vector<EventSegment> events,
                                     const std::vector<std::string>& cycle,
                                     const std::string& start_state) {
    if (cycle.empty()) throw std::invalid_argument("auto_label: cycle must be non-empty");
    const auto it = std::find(cycle.begin(), cycle.end(), start_state);
    if (it == cycle.end()) throw std::invalid_argument("auto_label: unknown start_state");
    const std::size_t offset = static_cast<std::size_t>(it - cycle.begin());
    for (std::size_t i = 0; i < events.size(); ++i)
        events[i].label = cycle[(offset + i) % cycle.size()];
    return events;
}

}  // namespace swmon
