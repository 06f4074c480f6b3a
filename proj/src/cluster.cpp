#include "drex/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "drex/parallel.hpp"
#include "drex/rng.hpp"

namespace drex {

namespace {

double dist2(const Point2& a, const Point2& b) {
    const double dt = a.t - b.t;
    const double dv = a.v - b.v;
    return dt * dt + dv * dv;
}

double total_inertia(const std::vector<Point2>& pts, const std::vector<int>& labels,
                     const std::vector<Point2>& centroids) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        sum += dist2(pts[i], centroids[static_cast<std::size_t>(labels[i])]);
    return sum;
}

// Nearest-centroid assignment (ties to the lower index). Empty clusters are
// reseeded at the point farthest from its assigned centroid; that point is
// force-assigned, which keeps the objective non-increasing.
std::vector<int> assign_with_repair(const std::vector<Point2>& pts,
                                    std::vector<Point2>& centroids) {
    const std::size_t n = pts.size();
    const std::size_t k = centroids.size();
    std::vector<int> labels(n, 0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
        int best = 0;
        double best_d = dist2(pts[i], centroids[0]);
        for (std::size_t c = 1; c < k; ++c) {
            const double d = dist2(pts[i], centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        labels[i] = best;
        ++counts[static_cast<std::size_t>(best)];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] != 0) continue;
        std::ptrdiff_t far_i = -1;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            // never steal the sole member of another cluster
            if (counts[static_cast<std::size_t>(labels[i])] <= 1) continue;
            const double d = dist2(pts[i], centroids[static_cast<std::size_t>(labels[i])]);
            if (d > far_d) {
                far_d = d;
                far_i = static_cast<std::ptrdiff_t>(i);
            }
        }
        if (far_i < 0) continue;  // unreachable for k <= n
        --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far_i)])];
        labels[static_cast<std::size_t>(far_i)] = static_cast<int>(c);
        counts[c] = 1;
        centroids[c] = pts[static_cast<std::size_t>(far_i)];
    }
    return labels;
}

std::vector<Point2> cluster_means(const std::vector<Point2>& pts, const std::vector<int>& labels,
                                  std::size_t k, const std::vector<Point2>& fallback) {
    std::vector<Point2> means(k, Point2{0, 0});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        means[c].t += pts[i].t;
        means[c].v += pts[i].v;
        ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c] == 0) {
            means[c] = fallback[c];
            continue;
        }
        means[c].t /= static_cast<double>(counts[c]);
        means[c].v /= static_cast<double>(counts[c]);
    }
    return means;
}

std::vector<Point2> init_centroids(const std::vector<Point2>& pts, std::size_t k,
                                   KMeansInit init, rng::Xoshiro256& gen) {
    const std::size_t n = pts.size();
    std::vector<Point2> centroids;
    centroids.reserve(k);
    if (init == KMeansInit::Random) {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t j = 0; j < k; ++j) {
            const auto pick = j + static_cast<std::size_t>(gen.uniform01() *
                                                           static_cast<double>(n - j));
            std::swap(idx[j], idx[std::min(pick, n - 1)]);
            centroids.push_back(pts[idx[j]]);
        }
        return centroids;
    }
    // k-means++: D^2-weighted sampling
    centroids.push_back(pts[static_cast<std::size_t>(gen.uniform01() * static_cast<double>(n))]);
    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = dist2(pts[i], centroids[0]);
    for (std::size_t j = 1; j < k; ++j) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = 0;
        if (total <= 0.0) {
            pick = static_cast<std::size_t>(gen.uniform01() * static_cast<double>(n));
        } else {
            const double r = gen.uniform01() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum > r) {
                    pick = i;
                    break;
                }
            }
        }
        centroids.push_back(pts[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], dist2(pts[i], centroids[j]));
    }
    return centroids;
}

struct RestartResult {
    std::vector<int> labels;
    std::vector<Point2> centroids;
    double inertia = 0.0;
    int iterations = 0;
    std::vector<double> trace;
};

RestartResult lloyd(const std::vector<Point2>& pts, std::size_t k, const KMeansOptions& options,
                    rng::Xoshiro256 gen) {
    RestartResult res;
    res.centroids = init_centroids(pts, k, options.init, gen);
    res.labels = assign_with_repair(pts, res.centroids);
    res.trace.push_back(total_inertia(pts, res.labels, res.centroids));
    for (int it = 1; it <= options.max_iter; ++it) {
        res.iterations = it;
        const std::vector<Point2> updated = cluster_means(pts, res.labels, k, res.centroids);
        double disp2 = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            disp2 = std::max(disp2, dist2(updated[c], res.centroids[c]));
        res.centroids = updated;
        std::vector<int> next = assign_with_repair(pts, res.centroids);
        res.trace.push_back(total_inertia(pts, next, res.centroids));
        const bool stable = (next == res.labels);
        res.labels = std::move(next);
        if (stable || std::sqrt(disp2) <= options.tol) break;
    }
    res.inertia = res.trace.back();
    return res;
}

struct Scaler {
    double mean_t = 0, mean_v = 0, sd_t = 1, sd_v = 1;

    static Scaler fit(const std::vector<Point2>& pts) {
        Scaler s;
        const double n = static_cast<double>(pts.size());
        for (const auto& p : pts) {
            s.mean_t += p.t;
            s.mean_v += p.v;
        }
        s.mean_t /= n;
        s.mean_v /= n;
        double vt = 0, vv = 0;
        for (const auto& p : pts) {
            vt += (p.t - s.mean_t) * (p.t - s.mean_t);
            vv += (p.v - s.mean_v) * (p.v - s.mean_v);
        }
        s.sd_t = std::sqrt(vt / n);
        s.sd_v = std::sqrt(vv / n);
        if (s.sd_t == 0.0) s.sd_t = 1.0;
        if (s.sd_v == 0.0) s.sd_v = 1.0;
        return s;
    }
    Point2 forward(const Point2& p) const {
        return {(p.t - mean_t) / sd_t, (p.v - mean_v) / sd_v};
    }
    Point2 inverse(const Point2& p) const { return {p.t * sd_t + mean_t, p.v * sd_v + mean_v}; }
};

}  // namespace

ClusterModel kmeans(const std::vector<Point2>& points, int k, const KMeansOptions& options,
                    std::uint64_t seed) {
    if (points.empty()) throw std::invalid_argument("kmeans: no points");
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (static_cast<std::size_t>(k) > points.size())
        throw std::invalid_argument("kmeans: k exceeds the number of points");
    if (options.n_restarts < 1) throw std::invalid_argument("kmeans: n_restarts must be >= 1");

    const bool scale = options.scaling == FeatureScaling::Standardize;
    const Scaler scaler = scale ? Scaler::fit(points) : Scaler{};
    std::vector<Point2> work;
    if (scale) {
        work.reserve(points.size());
        for (const auto& p : points) work.push_back(scaler.forward(p));
    }
    const std::vector<Point2>& pts = scale ? work : points;

    const auto restarts = static_cast<std::size_t>(options.n_restarts);
    std::vector<RestartResult> results(restarts);
    parallel_for(restarts, [&](std::size_t r) {
        results[r] = lloyd(pts, static_cast<std::size_t>(k), options,
                           rng::substream(seed, rng::kSaltKmeans, static_cast<std::uint64_t>(k), r));
    });

    std::size_t best = 0;
    for (std::size_t r = 1; r < restarts; ++r)
        if (results[r].inertia < results[best].inertia) best = r;

    ClusterModel model;
    model.k = k;
    model.assignments = std::move(results[best].labels);
    model.inertia = results[best].inertia;
    model.iterations = results[best].iterations;
    model.inertia_trace = std::move(results[best].trace);
    model.seed = seed;
    model.restart_inertias.reserve(restarts);
    for (const auto& r : results) model.restart_inertias.push_back(r.inertia);

    model.centroids.reserve(static_cast<std::size_t>(k));
    for (const auto& c : results[best].centroids)
        model.centroids.push_back(scale ? scaler.inverse(c) : c);

    model.mean_silhouette = std::numeric_limits<double>::quiet_NaN();
    if (k >= 2 && points.size() >= 2)
        model.mean_silhouette = silhouette_mean(pts, model.assignments);
    return model;
}

double silhouette_mean(const std::vector<Point2>& points, const std::vector<int>& assignments) {
    const std::size_t n = points.size();
    if (n < 2) throw std::invalid_argument("silhouette: need at least 2 points");
    if (assignments.size() != n) throw std::invalid_argument("silhouette: size mismatch");

    int k = 0;
    for (int a : assignments) {
        if (a < 0) throw std::invalid_argument("silhouette: negative cluster index");
        k = std::max(k, a + 1);
    }
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) ++sizes[static_cast<std::size_t>(a)];
    const auto used = static_cast<std::size_t>(
        std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }));
    if (used < 2) throw std::invalid_argument("silhouette: undefined for a single cluster");

    // per-point sums of distances to every cluster, one O(n^2) pass
    std::vector<double> sums(n * static_cast<std::size_t>(k), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::sqrt(dist2(points[i], points[j]));
            sums[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(assignments[j])] += d;
            sums[j * static_cast<std::size_t>(k) + static_cast<std::size_t>(assignments[i])] += d;
        }
    }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(assignments[i]);
        if (sizes[own] <= 1) continue;  // singleton convention: s = 0
        const double a = sums[i * static_cast<std::size_t>(k) + own] /
                         static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (c == own || sizes[c] == 0) continue;
            b = std::min(b, sums[i * static_cast<std::size_t>(k) + c] /
                                static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

KSelection select_k(const std::vector<Point2>& points, int k_min, int k_max,
                    const KMeansOptions& options, std::uint64_t seed) {
    if (k_min < 2) throw std::invalid_argument("select_k: k_min must be >= 2");
    if (k_max < k_min) throw std::invalid_argument("select_k: empty k range");
    if (static_cast<std::size_t>(k_max) + 1 > points.size())
        throw std::invalid_argument("select_k: k_max must be <= n - 1");

    KSelection sel;
    for (int k = k_min; k <= k_max; ++k) {
        ClusterModel model = kmeans(points, k, options, seed);
        sel.silhouettes.emplace_back(k, model.mean_silhouette);
        if (sel.k_best == 0 || model.mean_silhouette > sel.best_model.mean_silhouette) {
            sel.k_best = k;
            sel.best_model = std::move(model);
        }
    }
    return sel;
}

double quantile_linear(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
    if (sorted.size() == 1) return sorted[0];
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::clamp<double>(
        std::floor(h), 0.0, static_cast<double>(sorted.size() - 2)));
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

FiveNumber five_number(std::vector<double> data) {
    std::sort(data.begin(), data.end());
    FiveNumber f;
    f.min = data.front();
    f.q1 = quantile_linear(data, 0.25);
    f.median = quantile_linear(data, 0.5);
    f.q3 = quantile_linear(data, 0.75);
    f.max = data.back();
    return f;
}

}  // namespace

LnpvClustering cluster_lnpv(const GridDataset& dataset, const ClusterLnpvOptions& options,
                            std::uint64_t seed) {
    const std::vector<LnpvSet> sets = lnpv_map(dataset, options.lnpv_k);
    const std::size_t n = sets.size();

    LnpvClustering out;
    out.cells.reserve(n);
    out.rank1_points.reserve(n);
    for (const auto& s : sets) {
        out.cells.push_back(s.cell);
        out.rank1_points.push_back({fractional_year(s.events.front().when),
                                    s.events.front().value});
    }

    std::vector<Point2> fit_points;
    std::vector<std::size_t> rank1_offset(n);  // index of each cell's rank-1 point
    if (options.points == ClusterPoints::Rank1) {
        fit_points = out.rank1_points;
        std::iota(rank1_offset.begin(), rank1_offset.end(), 0);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            rank1_offset[i] = fit_points.size();
            for (const auto& e : sets[i].events)
                fit_points.push_back({fractional_year(e.when), e.value});
        }
    }

    if (options.k == 0) {
        const int k_max = std::min<int>(options.k_max, static_cast<int>(fit_points.size()) - 1);
        KSelection sel = select_k(fit_points, options.k_min, k_max, options.kmeans, seed);
        out.model = std::move(sel.best_model);
        out.silhouettes = std::move(sel.silhouettes);
    } else {
        out.model = kmeans(fit_points, options.k, options.kmeans, seed);
    }

    out.cell_assignments.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.cell_assignments.push_back(out.model.assignments[rank1_offset[i]]);

    std::vector<std::vector<double>> values(static_cast<std::size_t>(out.model.k));
    std::vector<std::vector<double>> years(static_cast<std::size_t>(out.model.k));
    std::vector<std::size_t> members(static_cast<std::size_t>(out.model.k), 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(out.cell_assignments[i]);
        ++members[c];
        for (const auto& e : sets[i].events) {
            values[c].push_back(e.value);
            years[c].push_back(fractional_year(e.when));
        }
    }
    for (int c = 0; c < out.model.k; ++c) {
        const auto uc = static_cast<std::size_t>(c);
        if (values[uc].empty()) continue;  // cluster holds no rank-1 point in all10 mode
        out.summaries.push_back(
            {c, members[uc], five_number(values[uc]), five_number(years[uc])});
    }
    return out;
}

}  // namespace drex
