#pragma once

#include <string>
#include <vector>

#include "swmon/detector.hpp"
#include "swmon/features.hpp"

namespace swmon {

// Per-scenario cluster centers in normalized feature space, plus the
// per-scenario training standard deviation used for drift gating.
struct ClusterCenters {
    std::vector<std::string> scenarios;
    std::vector<std::vector<double>> centers;  // [scenario][descriptor]
    std::vector<std::vector<double>> sigma;    // [scenario][descriptor], >= 0

    std::size_t scenario_index(const std::string& id) const;  // throws if absent
};

struct FeatureQualityReport {
    std::vector<FeatureDescriptor> descriptors;
    std::vector<double> fc;              // in [-1, 1]
    std::vector<bool> degenerate;
    std::vector<std::size_t> ranking;    // fc descending, ties by bank order
};

// The trained model: selected descriptors with their normalization
// statistics, cluster centers, quality scores and detection calibration.
struct Model {
    std::vector<FeatureDescriptor> descriptors;  // selected, ranked order
    Normalizer normalizer;                       // restricted to the selection
    ClusterCenters centers;                      // restricted to the selection
    std::vector<double> fc;                      // of the selection
    DetectionCalibration calibration;
    std::vector<std::string> cycle;              // auto-label scenario cycle
    std::string created;

    void validate() const;
};

// Per-scenario arithmetic mean and population std of the labeled rows.
// Requires >= 2 scenarios and >= 1 row each.
ClusterCenters compute_centers(const FeatureMatrix& training);

// Quality score of a single descriptor column: mean over clusters of
// (d_ik - d_ii) / max(d_ik, d_ii), where d_ii is the average absolute
// distance of cluster i's values to its own center and d_ik the average
// distance of the same values to the nearest other center. 0/0 terms
// resolve to 0.
double feature_quality(const std::vector<double>& values,
                       const std::vector<std::string>& labels,
                       const std::vector<double>& centers_per_scenario,
                       const std::vector<std::string>& scenarios);

// feature_quality across all columns of a normalized labeled matrix.
FeatureQualityReport rank_features(const FeatureMatrix& normalized,
                                   const ClusterCenters& centers);

// The m best descriptors by fc; degenerate descriptors are only used when
// fewer than m non-degenerate ones exist.
std::vector<std::size_t> select_top(const FeatureQualityReport& report, std::size_t m);

struct TrainOptions {
    std::vector<double> cutoffs;
    std::vector<FeatureKind> kinds{all_feature_kinds().begin(), all_feature_kinds().end()};
    std::size_t m = 5;
    DetectionCalibration calibration;
    std::vector<std::string> cycle;
    std::string created;
};

struct TrainResult {
    Model model;
    FeatureQualityReport report;  // over the full candidate bank
    std::vector<std::string> warnings;
};

// Full training phase: candidate extraction, normalization, centers,
// quality ranking, top-m selection.
TrainResult train(const std::vector<EventSegment>& labeled_events,
                  const TrainOptions& options);

}  // namespace swmon
