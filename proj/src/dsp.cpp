#include "swmon/dsp.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace swmon {

void TimeSeries::validate() const {
    if (sample_rate <= 0) throw std::invalid_argument("TimeSeries: sample_rate must be > 0");
    if (channels.empty() || channels.front().empty())
        throw std::invalid_argument("TimeSeries: at least one non-empty channel required");
    const std::size_t n = channels.front().size();
    for (const auto& ch : channels)
        if (ch.size() != n) throw std::invalid_argument("TimeSeries: channels must have equal length");
    if (!channel_names.empty() && channel_names.size() != channels.size())
        throw std::invalid_argument("TimeSeries: channel_names count mismatch");
}

Spectrum segment_spectrum(std::span<const double> samples, double sample_rate) {
    const std::size_t n = samples.size();
    if (n < 4) throw std::invalid_argument("segment_spectrum: segment length must be >= 4");
    if (sample_rate <= 0) throw std::invalid_argument("segment_spectrum: sample_rate must be > 0");

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> freq(n);
    std::vector<double> time(samples.begin(), samples.end());
    fft.fwd(freq, time);

    const std::size_t half = n / 2;
    Spectrum spec;
    spec.resolution = sample_rate / static_cast<double>(n);
    spec.bin_frequencies.resize(half + 1);
    spec.bin_powers.resize(half + 1);
    const double inv_n2 = 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    for (std::size_t k = 0; k <= half; ++k) {
        spec.bin_frequencies[k] = static_cast<double>(k) * spec.resolution;
        double p = std::norm(freq[k]) * inv_n2;
        // one-sided: interior bins carry the power of both conjugate halves
        const bool interior = k != 0 && !(n % 2 == 0 && k == half);
        spec.bin_powers[k] = interior ? 2.0 * p : p;
    }
    return spec;
}

IntervalPsdSeries compute_interval_psd(std::span<const double> samples,
                                       double sample_rate, double interval_len,
                                       const std::string& channel) {
    if (sample_rate <= 0) throw std::invalid_argument("compute_interval_psd: sample_rate must be > 0");
    if (interval_len <= 0) throw std::invalid_argument("compute_interval_psd: interval_len must be > 0");
    const std::size_t n_per = static_cast<std::size_t>(interval_len * sample_rate);
    if (n_per < 2) throw std::invalid_argument("compute_interval_psd: interval too short");
    if (samples.size() < n_per) throw std::invalid_argument("compute_interval_psd: signal shorter than one interval");

    IntervalPsdSeries out;
    out.interval_len = interval_len;
    out.channel = channel;
    const std::size_t count = samples.size() / n_per;
    out.values.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto seg = samples.subspan(i * n_per, n_per);
        if (n_per >= 4) {
            const Spectrum s = segment_spectrum(seg, sample_rate);
            double sum = 0.0;
            for (double p : s.bin_powers) sum += p;
            out.values.push_back(sum);
        } else {
            double ms = 0.0;
            for (double x : seg) ms += x * x;
            out.values.push_back(ms / static_cast<double>(n_per));
        }
    }
    return out;
}

std::vector<double> lowpass_channel(std::span<const double> samples,
                                    double sample_rate, double cutoff) {
    if (cutoff <= 0) throw std::invalid_argument("lowpass: cutoff must be > 0");
    if (sample_rate <= 0) throw std::invalid_argument("lowpass: sample_rate must be > 0");
    std::vector<double> out(samples.begin(), samples.end());
    const double nyquist = sample_rate / 2.0;
    if (cutoff >= nyquist || out.size() < 2) return out;

    const std::size_t n = out.size();
    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> freq(n);
    fft.fwd(freq, out);
    const double resolution = sample_rate / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double f = static_cast<double>(k <= n / 2 ? k : n - k) * resolution;
        if (f > cutoff) freq[k] = 0.0;
    }
    fft.inv(out, freq);
    return out;
}

TimeSeries lowpass(const TimeSeries& series, double cutoff) {
    series.validate();
    TimeSeries out = series;
    for (auto& ch : out.channels) ch = lowpass_channel(ch, series.sample_rate, cutoff);
    return out;
}

}  // namespace swmon
