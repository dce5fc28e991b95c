#include "swmon/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace swmon {
namespace {

struct WavFormat {
    std::uint16_t format = 0;  // 1 = PCM int, 3 = IEEE float
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
};

template <typename T>
T read_le(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::invalid_argument("wav: truncated file");
    return v;
}

template <typename T>
void write_le(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

// Positions the stream at the start of sample data and returns the format
// and data chunk byte length.
std::pair<WavFormat, std::uint32_t> parse_wav_header(std::istream& in) {
    char tag[4];
    in.read(tag, 4);
    if (!in || std::memcmp(tag, "RIFF", 4) != 0) throw std::invalid_argument("wav: not a RIFF file");
    read_le<std::uint32_t>(in);
    in.read(tag, 4);
    if (!in || std::memcmp(tag, "WAVE", 4) != 0) throw std::invalid_argument("wav: not a WAVE file");

    WavFormat fmt;
    bool have_fmt = false;
    while (in.read(tag, 4)) {
        const auto size = read_le<std::uint32_t>(in);
        if (std::memcmp(tag, "fmt ", 4) == 0) {
            fmt.format = read_le<std::uint16_t>(in);
            fmt.channels = read_le<std::uint16_t>(in);
            fmt.sample_rate = read_le<std::uint32_t>(in);
            read_le<std::uint32_t>(in);  // byte rate
            read_le<std::uint16_t>(in);  // block align
            fmt.bits = read_le<std::uint16_t>(in);
            if (size > 16) in.seekg(size - 16, std::ios::cur);
            have_fmt = true;
        } else if (std::memcmp(tag, "data", 4) == 0) {
            if (!have_fmt) throw std::invalid_argument("wav: data chunk before fmt");
            if (fmt.channels == 0 || fmt.sample_rate == 0)
                throw std::invalid_argument("wav: invalid format chunk");
            const bool supported = (fmt.format == 1 && (fmt.bits == 16 || fmt.bits == 32)) ||
                                   (fmt.format == 3 && fmt.bits == 32);
            if (!supported)
                throw std::invalid_argument("wav: unsupported sample format (" +
                                            std::to_string(fmt.format) + "/" +
                                            std::to_string(fmt.bits) + " bit)");
            return {fmt, size};
        } else {
            in.seekg(size + (size % 2), std::ios::cur);
        }
    }
    throw std::invalid_argument("wav: no data chunk");
}

double decode_sample(std::istream& in, const WavFormat& fmt) {
    if (fmt.format == 3) return static_cast<double>(read_le<float>(in));
    if (fmt.bits == 16)
        return static_cast<double>(read_le<std::int16_t>(in)) / 32768.0;
    return static_cast<double>(read_le<std::int32_t>(in)) / 2147483648.0;
}

}  // namespace

struct WavStreamReader::Impl {
    std::ifstream in;
    WavFormat fmt;
    std::size_t frames_left = 0;
};

WavStreamReader::WavStreamReader(const std::string& path) : impl_(std::make_unique<Impl>()) {
    impl_->in.open(path, std::ios::binary);
    if (!impl_->in) throw std::invalid_argument("cannot open " + path);
    const auto [fmt, data_bytes] = parse_wav_header(impl_->in);
    impl_->fmt = fmt;
    impl_->frames_left = data_bytes / (fmt.channels * fmt.bits / 8);
}

WavStreamReader::~WavStreamReader() = default;
WavStreamReader::WavStreamReader(WavStreamReader&&) noexcept = default;
WavStreamReader& WavStreamReader::operator=(WavStreamReader&&) noexcept = default;

double WavStreamReader::sample_rate() const { return impl_->fmt.sample_rate; }
std::size_t WavStreamReader::channel_count() const { return impl_->fmt.channels; }

std::vector<std::vector<double>> WavStreamReader::read(std::size_t max_frames) {
    const std::size_t frames = std::min(max_frames, impl_->frames_left);
    std::vector<std::vector<double>> channels(impl_->fmt.channels);
    for (auto& ch : channels) ch.reserve(frames);
    for (std::size_t f = 0; f < frames; ++f)
        for (auto& ch : channels) ch.push_back(decode_sample(impl_->in, impl_->fmt));
    impl_->frames_left -= frames;
    return channels;
}

TimeSeries read_wav(const std::string& path) {
    WavStreamReader reader(path);
    TimeSeries out;
    out.sample_rate = reader.sample_rate();
    out.channels.resize(reader.channel_count());
    for (std::size_t c = 0; c < out.channels.size(); ++c)
        out.channel_names.push_back("ch" + std::to_string(c));
    constexpr std::size_t kChunk = 1 << 20;
    for (;;) {
        auto chunk = reader.read(kChunk);
        if (chunk.front().empty()) break;
        for (std::size_t c = 0; c < chunk.size(); ++c)
            out.channels[c].insert(out.channels[c].end(), chunk[c].begin(), chunk[c].end());
        if (chunk.front().size() < kChunk) break;
    }
    out.validate();
    return out;
}

void write_wav(const std::string& path, const TimeSeries& series) {
    series.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    const auto channels = static_cast<std::uint16_t>(series.channel_count());
    const auto rate = static_cast<std::uint32_t>(std::llround(series.sample_rate));
    const std::uint32_t data_bytes =
        static_cast<std::uint32_t>(series.length() * channels * 2);

    out.write("RIFF", 4);
    write_le<std::uint32_t>(out, 36 + data_bytes);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_le<std::uint32_t>(out, 16);
    write_le<std::uint16_t>(out, 1);  // PCM
    write_le<std::uint16_t>(out, channels);
    write_le<std::uint32_t>(out, rate);
    write_le<std::uint32_t>(out, rate * channels * 2);
    write_le<std::uint16_t>(out, static_cast<std::uint16_t>(channels * 2));
    write_le<std::uint16_t>(out, 16);
    out.write("data", 4);
    write_le<std::uint32_t>(out, data_bytes);
    for (std::size_t i = 0; i < series.length(); ++i)
        for (const auto& ch : series.channels) {
            const double clipped = std::clamp(ch[i], -1.0, 1.0);
            const long q = std::clamp(std::lround(clipped * 32768.0), -32768L, 32767L);
            write_le<std::int16_t>(out, static_cast<std::int16_t>(q));
        }
    if (!out) throw std::invalid_argument("write failed: " + path);
}

TimeSeries read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("csv: empty file");

    TimeSeries out;
    {
        std::istringstream header(line);
        std::string col;
        bool first = true;
        while (std::getline(header, col, ',')) {
            if (first) {
                first = false;  // time column
                continue;
            }
            out.channel_names.push_back(col);
        }
    }
    if (out.channel_names.empty()) throw std::invalid_argument("csv: no channel columns");
    out.channels.resize(out.channel_names.size());

    double t0 = 0.0, t1 = 0.0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        if (!std::getline(row, cell, ',')) throw std::invalid_argument("csv: malformed row");
        const double t = std::stod(cell);
        if (rows == 0) t0 = t;
        t1 = t;
        for (auto& ch : out.channels) {
            if (!std::getline(row, cell, ','))
                throw std::invalid_argument("csv: short row");
            ch.push_back(std::stod(cell));
        }
        ++rows;
    }
    if (rows < 2) throw std::invalid_argument("csv: need >= 2 sample rows");
    out.sample_rate = static_cast<double>(rows - 1) / (t1 - t0);
    out.validate();
    return out;
}

void write_csv(const std::string& path, const TimeSeries& series) {
    series.validate();
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "time";
    for (std::size_t c = 0; c < series.channel_count(); ++c)
        out << ','
            << (c < series.channel_names.size() ? series.channel_names[c]
                                                : "ch" + std::to_string(c));
    out << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < series.length(); ++i) {
        out << static_cast<double>(i) / series.sample_rate;
        for (const auto& ch : series.channels) out << ',' << ch[i];
        out << '\n';
    }
    if (!out) throw std::invalid_argument("write failed: " + path);
}

namespace {
bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}
}  // namespace

TimeSeries read_recording(const std::string& path) {
    if (ends_with(path, ".wav")) return read_wav(path);
    if (ends_with(path, ".csv")) return read_csv(path);
    throw std::invalid_argument("unsupported recording format: " + path);
}

void write_recording(const std::string& path, const TimeSeries& series) {
    if (ends_with(path, ".wav")) return write_wav(path, series);
    if (ends_with(path, ".csv")) return write_csv(path, series);
    throw std::invalid_argument("unsupported recording format: " + path);
}

}  // namespace swmon
