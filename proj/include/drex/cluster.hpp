#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "drex/extremes.hpp"
#include "drex/grid.hpp"

namespace drex {

// A point in (fractional year, PDSI) space.
struct Point2 {
    double t = 0.0;
    double v = 0.0;

    bool operator==(const Point2&) const = default;
};

enum class KMeansInit { PlusPlus, Random };
enum class FeatureScaling { None, Standardize };

struct KMeansOptions {
    KMeansInit init = KMeansInit::PlusPlus;
    int n_restarts = 10;
    int max_iter = 300;
    double tol = 1e-6;  // max centroid displacement per iteration
    FeatureScaling scaling = FeatureScaling::None;
};

struct ClusterModel {
    int k = 0;
    std::vector<Point2> centroids;  // original units, even when scaling is on
    std::vector<int> assignments;   // per point, 0..k-1, every index used
    double inertia = 0.0;           // in the clustering (possibly scaled) space
    double mean_silhouette = 0.0;   // NaN when k == 1
    std::uint64_t seed = 0;
    int iterations = 0;             // Lloyd iterations of the winning restart
    std::vector<double> inertia_trace;    // per-iteration, non-increasing
    std::vector<double> restart_inertias; // one per restart
};

// Lloyd's algorithm, best of n_restarts independently seeded runs. Restart r
// of a k-cluster run draws from substream(seed, salt, k, r), so restarts may
// run concurrently with identical results. Empty clusters are reseeded at the
// point farthest from its current centroid.
ClusterModel kmeans(const std::vector<Point2>& points, int k, const KMeansOptions& options,
                    std::uint64_t seed);

// Mean silhouette over all points; singleton-cluster points score 0.
// Requires >= 2 points and >= 2 distinct clusters.
double silhouette_mean(const std::vector<Point2>& points, const std::vector<int>& assignments);

struct KSelection {
    int k_best = 0;
    ClusterModel best_model;
    std::vector<std::pair<int, double>> silhouettes;  // (k, mean silhouette)
};

// Runs kmeans for each k in [k_min, k_max], picks the silhouette maximizer;
// ties go to the smaller k.
KSelection select_k(const std::vector<Point2>& points, int k_min, int k_max,
                    const KMeansOptions& options, std::uint64_t seed);

// Quantile by linear interpolation of order statistics; data must be sorted.
double quantile_linear(const std::vector<double>& sorted, double p);

struct FiveNumber {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

struct ClusterSummary {
    int cluster = 0;
    std::size_t n_cells = 0;
    FiveNumber values;  // over member cells' full k-event values
    FiveNumber years;   // over the matching fractional years
};

enum class ClusterPoints { Rank1, All10 };

struct ClusterLnpvOptions {
    int k = 0;  // 0 = silhouette-selected over [k_min, k_max]
    int k_min = 2;
    int k_max = 10;
    int lnpv_k = 10;
    ClusterPoints points = ClusterPoints::Rank1;
    KMeansOptions kmeans;
};

struct LnpvClustering {
    ClusterModel model;
    std::vector<GridCoordinate> cells;  // aligned with cell_assignments
    std::vector<int> cell_assignments;  // cluster of each cell's rank-1 event
    std::vector<Point2> rank1_points;   // (fractional year, value) per cell
    std::vector<ClusterSummary> summaries;
    std::vector<std::pair<int, double>> silhouettes;  // filled when k was auto
};

// Fits K-means on one point per cell (its most negative event) by default;
// summaries aggregate the full k-event sets of member cells.
LnpvClustering cluster_lnpv(const GridDataset& dataset, const ClusterLnpvOptions& options,
                            std::uint64_t seed);

}  // namespace drex
