#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "swmon/types.hpp"

namespace swmon {

// Reads PCM WAV (16/32-bit integer or 32-bit float) into doubles in [-1, 1].
TimeSeries read_wav(const std::string& path);

// Writes 16-bit PCM. Samples are expected in [-1, 1]; values outside are clipped.
void write_wav(const std::string& path, const TimeSeries& series);

// CSV with a header row "time,<channel names...>".
TimeSeries read_csv(const std::string& path);
void write_csv(const std::string& path, const TimeSeries& series);

// Dispatch on file extension (.wav / .csv).
TimeSeries read_recording(const std::string& path);
void write_recording(const std::string& path, const TimeSeries& series);

// Chunked WAV access for the streaming monitor path: reads a bounded
// number of frames per call regardless of file size.
class WavStreamReader {
  public:
    explicit WavStreamReader(const std::string& path);
    ~WavStreamReader();
    WavStreamReader(WavStreamReader&&) noexcept;
    WavStreamReader& operator=(WavStreamReader&&) noexcept;

    double sample_rate() const;
    std::size_t channel_count() const;
    // Returns up to max_frames deinterleaved frames; empty channels at EOF.
    std::vector<std::vector<double>> read(std::size_t max_frames);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace swmon
