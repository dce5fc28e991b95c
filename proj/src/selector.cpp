#include "swmon/selector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace swmon {

std::size_t ClusterCenters::scenario_index(const std::string& id) const {
    const auto it = std::find(scenarios.begin(), scenarios.end(), id);
    if (it == scenarios.end())
        throw std::invalid_argument("ClusterCenters: unknown scenario " + id);
    return static_cast<std::size_t>(it - scenarios.begin());
}

void Model::validate() const {
    if (descriptors.empty()) throw std::invalid_argument("Model: no selected descriptors");
    for (std::size_t i = 0; i < descriptors.size(); ++i)
        for (std::size_t j = i + 1; j < descriptors.size(); ++j)
            if (descriptors[i] == descriptors[j])
                throw std::invalid_argument("Model: duplicate descriptor");
    if (normalizer.descriptors != descriptors)
        throw std::invalid_argument("Model: normalizer does not cover the selection");
    if (fc.size() != descriptors.size())
        throw std::invalid_argument("Model: fc count mismatch");
    if (centers.scenarios.size() < 2)
        throw std::invalid_argument("Model: need >= 2 scenarios");
    for (const auto& c : centers.centers)
        if (c.size() != descriptors.size())
            throw std::invalid_argument("Model: center row size mismatch");
}

ClusterCenters compute_centers(const FeatureMatrix& training) {
    const std::size_t cols = training.descriptors.size();
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t r = 0; r < training.rows.size(); ++r) {
        if (!training.labels[r])
            throw std::invalid_argument("compute_centers: unlabeled row");
        by_label[*training.labels[r]].push_back(r);
    }
    if (by_label.size() < 2)
        throw std::invalid_argument("compute_centers: need >= 2 scenarios");

    ClusterCenters cc;
    for (const auto& [label, rows] : by_label) {
        cc.scenarios.push_back(label);
        std::vector<double> center(cols, 0.0), sigma(cols, 0.0);
        for (std::size_t r : rows)
            for (std::size_t c = 0; c < cols; ++c) center[c] += training.rows[r][c];
        const double n = static_cast<double>(rows.size());
        for (auto& v : center) v /= n;
        for (std::size_t r : rows)
            for (std::size_t c = 0; c < cols; ++c) {
                const double d = training.rows[r][c] - center[c];
                sigma[c] += d * d;
            }
        for (auto& v : sigma) v = std::sqrt(v / n);
        cc.centers.push_back(std::move(center));
        cc.sigma.push_back(std::move(sigma));
    }
    return cc;
}

double feature_quality(const std::vector<double>& values,
                       const std::vector<std::string>& labels,
                       const std::vector<double>& centers_per_scenario,
                       const std::vector<std::string>& scenarios) {
    const std::size_t n_scen = scenarios.size();
    if (n_scen < 2) throw std::invalid_argument("feature_quality: need >= 2 scenarios");
    if (values.size() != labels.size())
        throw std::invalid_argument("feature_quality: values/labels size mismatch");
    if (centers_per_scenario.size() != n_scen)
        throw std::invalid_argument("feature_quality: centers size mismatch");

    double total = 0.0;
    for (std::size_t i = 0; i < n_scen; ++i) {
        // nearest other center, resolved center-to-center
        std::size_t k = i == 0 ? 1 : 0;
        for (std::size_t j = 0; j < n_scen; ++j) {
            if (j == i) continue;
            if (std::abs(centers_per_scenario[j] - centers_per_scenario[i]) <
                std::abs(centers_per_scenario[k] - centers_per_scenario[i]))
                k = j;
        }
        double d_ii = 0.0, d_ik = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < values.size(); ++r) {
            if (labels[r] != scenarios[i]) continue;
            d_ii += std::abs(values[r] - centers_per_scenario[i]);
            d_ik += std::abs(values[r] - centers_per_scenario[k]);
            ++count;
        }
        if (count == 0)
            throw std::invalid_argument("feature_quality: scenario without values: " + scenarios[i]);
        d_ii /= static_cast<double>(count);
        d_ik /= static_cast<double>(count);
        const double denom = std::max(d_ik, d_ii);
        total += denom > 0.0 ? (d_ik - d_ii) / denom : 0.0;
    }
    return total / static_cast<double>(n_scen);
}

FeatureQualityReport rank_features(const FeatureMatrix& normalized,
                                   const ClusterCenters& centers) {
    FeatureQualityReport rep;
    rep.descriptors = normalized.descriptors;
    const std::size_t cols = normalized.descriptors.size();
    std::vector<std::string> labels;
    labels.reserve(normalized.rows.size());
    for (const auto& l : normalized.labels) {
        if (!l) throw std::invalid_argument("rank_features: unlabeled row");
        labels.push_back(*l);
    }
    rep.fc.resize(cols);
    rep.degenerate.assign(cols, false);
    std::vector<double> col(normalized.rows.size());
    std::vector<double> centers_col(centers.scenarios.size());
    for (std::size_t c = 0; c < cols; ++c) {
        for (std::size_t r = 0; r < normalized.rows.size(); ++r) col[r] = normalized.rows[r][c];
        for (std::size_t s = 0; s < centers.scenarios.size(); ++s)
            centers_col[s] = centers.centers[s][c];
        rep.fc[c] = feature_quality(col, labels, centers_col, centers.scenarios);
        // a column that is identical everywhere carries no information
        bool constant = true;
        for (double v : col)
            if (v != col.front()) { constant = false; break; }
        rep.degenerate[c] = constant;
    }
    rep.ranking.resize(cols);
    std::iota(rep.ranking.begin(), rep.ranking.end(), 0);
    std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                     [&](std::size_t a, std::size_t b) { return rep.fc[a] > rep.fc[b]; });
    return rep;
}

std::vector<std::size_t> select_top(const FeatureQualityReport& report, std::size_t m) {
    if (m == 0) throw std::invalid_argument("select_top: m must be >= 1");
    if (m > report.descriptors.size())
        throw std::invalid_argument("select_top: m exceeds descriptor count");
    std::vector<std::size_t> selected;
    for (std::size_t idx : report.ranking) {
        if (selected.size() == m) break;
        if (!report.degenerate[idx]) selected.push_back(idx);
    }
    for (std::size_t idx : report.ranking) {  // fall back to degenerate columns
        if (selected.size() == m) break;
        if (report.degenerate[idx]) selected.push_back(idx);
    }
    return selected;
}

TrainResult train(const std::vector<EventSegment>& labeled_events,
                  const TrainOptions& options) {
    TrainResult result;
    const FeatureMatrix bank = extract_candidates(labeled_events, options.cutoffs, options.kinds);
    const Normalizer norm = fit_normalizer(bank);
    const FeatureMatrix normalized = apply_normalizer(norm, bank);
    const ClusterCenters centers = compute_centers(normalized);
    result.report = rank_features(normalized, centers);

    const auto selected = select_top(result.report, options.m);
    double best = -1.0;
    for (double v : result.report.fc) best = std::max(best, v);
    if (best <= 0.0)
        result.warnings.push_back("no feature separates the scenarios (max fc <= 0)");
    for (std::size_t idx : selected)
        if (result.report.degenerate[idx])
            result.warnings.push_back("degenerate descriptor selected: " +
                                      result.report.descriptors[idx].to_string());

    Model& model = result.model;
    for (std::size_t idx : selected) {
        model.descriptors.push_back(bank.descriptors[idx]);
        model.fc.push_back(result.report.fc[idx]);
        model.normalizer.descriptors.push_back(norm.descriptors[idx]);
        model.normalizer.mean.push_back(norm.mean[idx]);
        model.normalizer.stddev.push_back(norm.stddev[idx]);
        model.normalizer.degenerate.push_back(norm.degenerate[idx]);
    }
    model.centers.scenarios = centers.scenarios;
    for (std::size_t s = 0; s < centers.scenarios.size(); ++s) {
        std::vector<double> c, sd;
        for (std::size_t idx : selected) {
            c.push_back(centers.centers[s][idx]);
            sd.push_back(centers.sigma[s][idx]);
        }
        model.centers.centers.push_back(std::move(c));
        model.centers.sigma.push_back(std::move(sd));
    }
    model.calibration = options.calibration;
    model.cycle = options.cycle;
    model.created = options.created;
    model.validate();
    return result;
}

}  // namespace swmon
