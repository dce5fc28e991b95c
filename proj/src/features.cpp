#include "swmon/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "swmon/dsp.hpp"

namespace swmon {
namespace {

constexpr double kEps = 1e-12;

struct Moments {
    double mean = 0, variance = 0, skew = 0, kurtosis = 0, power = 0, flatness = 0;
};

Moments compute_moments(std::span<const double> x) {
    Moments m;
    const double n = static_cast<double>(x.size());
    double sum = 0, sum_sq = 0;
    for (double v : x) {
        sum += v;
        sum_sq += v * v;
    }
    m.mean = sum / n;
    m.power = sum_sq / n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - m.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    m.variance = m2;
    if (m2 > kEps * kEps) {
        const double s = std::sqrt(m2);
        m.skew = m3 / (s * s * s);
        m.kurtosis = m4 / (m2 * m2);  // non-excess
    }
    double log_sum = 0, abs_sum = 0;
    for (double v : x) {
        const double a = std::abs(v) + kEps;
        log_sum += std::log(a);
        abs_sum += a;
    }
    m.flatness = std::exp(log_sum / n) / (abs_sum / n);
    return m;
}

const std::array<std::pair<FeatureKind, const char*>, kFeatureKindCount> kKindNames = {{
    {FeatureKind::TimeMean, "time_mean"},
    {FeatureKind::TimeVariance, "time_variance"},
    {FeatureKind::TimeSkew, "time_skew"},
    {FeatureKind::TimeKurtosis, "time_kurtosis"},
    {FeatureKind::TimePower, "time_power"},
    {FeatureKind::TimeFlatness, "time_flatness"},
    {FeatureKind::Rms, "rms"},
    {FeatureKind::AbsMean, "abs_mean"},
    {FeatureKind::Maximum, "maximum"},
    {FeatureKind::Minimum, "minimum"},
    {FeatureKind::DynamicRange, "dynamic_range"},
    {FeatureKind::CrestFactor, "crest_factor"},
    {FeatureKind::SpectralMean, "spectral_mean"},
    {FeatureKind::SpectralVariance, "spectral_variance"},
    {FeatureKind::SpectralSkew, "spectral_skew"},
    {FeatureKind::SpectralKurtosis, "spectral_kurtosis"},
    {FeatureKind::SpectralPower, "spectral_power"},
    {FeatureKind::SpectralFlatness, "spectral_flatness"},
    {FeatureKind::SpectralCentroid, "spectral_centroid"},
    {FeatureKind::DominantFrequency, "dominant_frequency"},
    {FeatureKind::MedianFrequency, "median_frequency"},
}};

bool needs_spectrum(FeatureKind kind) {
    return static_cast<int>(kind) >= static_cast<int>(FeatureKind::SpectralMean);
}

}  // namespace

const std::array<FeatureKind, kFeatureKindCount>& all_feature_kinds() {
    static const auto kinds = [] {
        std::array<FeatureKind, kFeatureKindCount> a{};
        for (std::size_t i = 0; i < kFeatureKindCount; ++i) a[i] = kKindNames[i].first;
        return a;
    }();
    return kinds;
}

std::string to_string(FeatureKind kind) {
    return kKindNames[static_cast<std::size_t>(kind)].second;
}

FeatureKind feature_kind_from_string(const std::string& name) {
    for (const auto& [kind, str] : kKindNames)
        if (name == str) return kind;
    throw std::invalid_argument("unknown feature kind: " + name);
}

std::string FeatureDescriptor::to_string() const {
    std::ostringstream os;
    os << swmon::to_string(kind);
    if (cutoff)
        os << "@lp" << *cutoff << "Hz";
    os << "/ch" << channel;
    return os.str();
}

bool descriptor_less(const FeatureDescriptor& a, const FeatureDescriptor& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.cutoff.has_value() != b.cutoff.has_value()) return a.cutoff.has_value();
    if (a.cutoff && *a.cutoff != *b.cutoff) return *a.cutoff < *b.cutoff;
    return a.channel < b.channel;
}

std::size_t FeatureMatrix::column_of(const FeatureDescriptor& d) const {
    const auto it = std::find(descriptors.begin(), descriptors.end(), d);
    if (it == descriptors.end())
        throw std::invalid_argument("FeatureMatrix: descriptor not present: " + d.to_string());
    return static_cast<std::size_t>(it - descriptors.begin());
}

double compute_feature(FeatureKind kind, std::span<const double> samples,
                       double sample_rate, const Spectrum& spectrum) {
    if (samples.size() < 4) throw std::invalid_argument("compute_feature: segment length must be >= 4");
    const auto& p = spectrum.bin_powers;
    const auto& nu = spectrum.bin_frequencies;

    switch (kind) {
        case FeatureKind::TimeMean: return compute_moments(samples).mean;
        case FeatureKind::TimeVariance: return compute_moments(samples).variance;
        case FeatureKind::TimeSkew: return compute_moments(samples).skew;
        case FeatureKind::TimeKurtosis: return compute_moments(samples).kurtosis;
        case FeatureKind::TimePower: return compute_moments(samples).power;
        case FeatureKind::TimeFlatness: return compute_moments(samples).flatness;
        case FeatureKind::Rms: return std::sqrt(compute_moments(samples).power);
        case FeatureKind::AbsMean: {
            double s = 0;
            for (double v : samples) s += std::abs(v);
            return s / static_cast<double>(samples.size());
        }
        case FeatureKind::Maximum: return *std::max_element(samples.begin(), samples.end());
        case FeatureKind::Minimum: return *std::min_element(samples.begin(), samples.end());
        case FeatureKind::DynamicRange: {
            const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
            return *hi - *lo;
        }
        case FeatureKind::CrestFactor: {
            const double rms = std::sqrt(compute_moments(samples).power);
            if (rms <= kEps) return 0.0;
            double peak = 0;
            for (double v : samples) peak = std::max(peak, std::abs(v));
            return peak / rms;
        }
        case FeatureKind::SpectralMean: return compute_moments(p).mean;
        case FeatureKind::SpectralVariance: return compute_moments(p).variance;
        case FeatureKind::SpectralSkew: return compute_moments(p).skew;
        case FeatureKind::SpectralKurtosis: return compute_moments(p).kurtosis;
        case FeatureKind::SpectralPower: return compute_moments(p).power;
        case FeatureKind::SpectralFlatness: return compute_moments(p).flatness;
        case FeatureKind::SpectralCentroid: {
            double num = 0, den = 0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                num += nu[i] * p[i];
                den += p[i];
            }
            return den <= kEps ? 0.0 : num / den;
        }
        case FeatureKind::DominantFrequency: {
            // ties resolve to the lowest frequency
            const auto it = std::max_element(p.begin(), p.end());
            return nu[static_cast<std::size_t>(it - p.begin())];
        }
        case FeatureKind::MedianFrequency: {
            double total = 0;
            for (double v : p) total += v;
            if (total <= kEps) return 0.0;
            double cum = 0;
            for (std::size_t i = 0; i < p.size(); ++i) {
                cum += p[i];
                if (cum >= 0.5 * total) return nu[i];
            }
            return nu.back();
        }
    }
    throw std::invalid_argument("compute_feature: unknown kind");
}

double compute_feature(FeatureKind kind, std::span<const double> samples,
                       double sample_rate) {
    if (samples.size() < 4) throw std::invalid_argument("compute_feature: segment length must be >= 4");
    if (needs_spectrum(kind))
        return compute_feature(kind, samples, sample_rate, segment_spectrum(samples, sample_rate));
    static const Spectrum empty;
    return compute_feature(kind, samples, sample_rate, empty);
}

FeatureMatrix extract_candidates(const std::vector<EventSegment>& events,
                                 const std::vector<double>& cutoffs,
                                 const std::vector<FeatureKind>& kinds) {
    if (events.empty()) throw std::invalid_argument("extract_candidates: no events");
    if (kinds.empty()) throw std::invalid_argument("extract_candidates: no feature kinds");
    const std::size_t channels = events.front().samples.size();
    const std::size_t seg_len = channels ? events.front().samples.front().size() : 0;
    if (seg_len < 4) throw std::invalid_argument("extract_candidates: segments too short");
    for (const auto& e : events) {
        if (e.samples.size() != channels)
            throw std::invalid_argument("extract_candidates: inconsistent channel counts");
        for (const auto& ch : e.samples)
            if (ch.size() != seg_len)
                throw std::invalid_argument("extract_candidates: segments must have equal duration");
    }

    std::vector<FeatureKind> ordered_kinds = kinds;
    std::sort(ordered_kinds.begin(), ordered_kinds.end());
    ordered_kinds.erase(std::unique(ordered_kinds.begin(), ordered_kinds.end()),
                        ordered_kinds.end());
    std::vector<std::optional<double>> variants;
    {
        std::vector<double> sorted = cutoffs;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (double c : sorted) variants.emplace_back(c);
        variants.emplace_back(std::nullopt);  // unfiltered last
    }

    FeatureMatrix m;
    for (FeatureKind kind : ordered_kinds)
        for (const auto& cutoff : variants)
            for (std::size_t ch = 0; ch < channels; ++ch)
                m.descriptors.push_back({kind, cutoff, ch});

    const bool any_spectral = std::any_of(ordered_kinds.begin(), ordered_kinds.end(),
                                          needs_spectrum);
    for (const auto& e : events) {
        const double rate = e.sample_rate;
        // filter each (channel, variant) once, spectrum once
        std::map<std::pair<std::size_t, double>, std::vector<double>> filtered;
        std::map<std::pair<std::size_t, double>, Spectrum> spectra;
        auto signal_for = [&](std::size_t ch, const std::optional<double>& cutoff)
            -> const std::vector<double>& {
            if (!cutoff) return e.samples[ch];
            const auto key = std::make_pair(ch, *cutoff);
            auto it = filtered.find(key);
            if (it == filtered.end())
                it = filtered.emplace(key, lowpass_channel(e.samples[ch], rate, *cutoff)).first;
            return it->second;
        };
        auto spectrum_for = [&](std::size_t ch, const std::optional<double>& cutoff)
            -> const Spectrum& {
            const auto key = std::make_pair(ch, cutoff.value_or(-1.0));
            auto it = spectra.find(key);
            if (it == spectra.end())
                it = spectra.emplace(key, segment_spectrum(signal_for(ch, cutoff), rate)).first;
            return it->second;
        };

        std::vector<double> row;
        row.reserve(m.descriptors.size());
        for (const auto& d : m.descriptors) {
            const auto& sig = signal_for(d.channel, d.cutoff);
            if (needs_spectrum(d.kind))
                row.push_back(compute_feature(d.kind, sig, rate, spectrum_for(d.channel, d.cutoff)));
            else
                row.push_back(compute_feature(d.kind, sig, rate));
        }
        for (double v : row)
            if (!std::isfinite(v))
                throw std::invalid_argument("extract_candidates: non-finite feature value");
        m.rows.push_back(std::move(row));
        m.labels.push_back(e.label);
        (void)any_spectral;
    }
    return m;
}

Normalizer fit_normalizer(const FeatureMatrix& training) {
    if (training.rows.size() < 2)
        throw std::invalid_argument("fit_normalizer: need >= 2 training rows");
    const std::size_t cols = training.descriptors.size();
    Normalizer norm;
    norm.descriptors = training.descriptors;
    norm.mean.resize(cols);
    norm.stddev.resize(cols);
    norm.degenerate.resize(cols);
    const double n = static_cast<double>(training.rows.size());
    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0;
        for (const auto& row : training.rows) sum += row[c];
        const double mean = sum / n;
        double var = 0;
        for (const auto& row : training.rows) var += (row[c] - mean) * (row[c] - mean);
        var /= n;
        const double sd = std::sqrt(var);
        norm.mean[c] = mean;
        norm.stddev[c] = sd;
        norm.degenerate[c] = sd <= kEps;
    }
    return norm;
}

FeatureMatrix apply_normalizer(const Normalizer& norm, const FeatureMatrix& matrix) {
    if (norm.descriptors != matrix.descriptors)
        throw std::invalid_argument("apply_normalizer: descriptor mismatch");
    FeatureMatrix out = matrix;
    for (auto& row : out.rows)
        for (std::size_t c = 0; c < row.size(); ++c) row[c] = norm.apply_one(c, row[c]);
    return out;
}

}  // namespace swmon
