#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "scsa/rng.hpp"

namespace scsa {

namespace detail {
constexpr std::uint64_t kSaltKmeans = 0x6b6d6b707000ULL;
constexpr std::uint64_t kSaltSilhouette = 0x73696c686f0ULL;
}  // namespace detail

struct ClusterModel {
    int k = 0;
    std::vector<double> centers;      // strictly ascending
    std::vector<int> labels;          // one per input point
    std::vector<double> sse_history;  // within-cluster SSE after each assignment
};

struct SilhouetteReport {
    std::vector<std::pair<int, double>> candidates;  // (k, mean silhouette)
    int selected_k = 0;
    bool degenerate = false;  // all-equal input: scores undefined
};

// Nearest center by squared distance; ties break toward the lower index.
inline int nearest_center(double x, const std::vector<double>& centers) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = (x - centers[c]) * (x - centers[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

inline std::size_t count_distinct(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    return static_cast<std::size_t>(
        std::unique(xs.begin(), xs.end()) - xs.begin());
}

// Lloyd iterations from a k-means++ seeding. Deterministic per seed; centers
// are returned ascending with labels remapped, and the final assignment pass
// guarantees every point is labeled with its nearest center.
inline ClusterModel kmeans_pp(const std::vector<double>& xs, int k,
                              std::uint64_t seed, int max_iter = 100,
                              double tol = 1e-6) {
    if (xs.empty()) throw std::invalid_argument("kmeans_pp: empty input");
    if (k < 1) throw std::invalid_argument("kmeans_pp: k must be >= 1");
    if (max_iter < 1) throw std::invalid_argument("kmeans_pp: max_iter must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("kmeans_pp: tol must be > 0");
    const std::size_t n = xs.size();
    if (static_cast<std::size_t>(k) > count_distinct(xs))
        throw std::invalid_argument("kmeans_pp: k exceeds number of distinct values");

    RngStream rng = RngStream::derive(seed, detail::kSaltKmeans,
                                      static_cast<std::uint64_t>(k));
    std::vector<double> centers;
    centers.reserve(static_cast<std::size_t>(k));
    centers.push_back(xs[rng.index(n)]);
    std::vector<double> d2(n);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c : centers)
                best = std::min(best, (xs[i] - c) * (xs[i] - c));
            d2[i] = best;
            total += best;
        }
        if (total <= 0.0) {
            centers.push_back(xs[rng.index(n)]);
            continue;
        }
        const double u = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (u < acc) { pick = i; break; }
        }
        centers.push_back(xs[pick]);
    }

    ClusterModel model;
    model.k = k;
    model.labels.assign(n, 0);
    std::vector<double> sums(static_cast<std::size_t>(k));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k));
    for (int iter = 0; iter < max_iter; ++iter) {
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const int c = nearest_center(xs[i], centers);
            model.labels[i] = c;
            const double d = xs[i] - centers[static_cast<std::size_t>(c)];
            sse += d * d;
        }
        model.sse_history.push_back(sse);

        std::fill(sums.begin(), sums.end(), 0.0);
        std::fill(counts.begin(), counts.end(), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sums[static_cast<std::size_t>(model.labels[i])] += xs[i];
            ++counts[static_cast<std::size_t>(model.labels[i])];
        }
        double moved = 0.0;
        for (std::size_t c = 0; c < centers.size(); ++c) {
            if (counts[c] == 0) {
                // Reseed an emptied cluster at the worst-fit point.
                std::size_t far = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double d = xs[i] -
                        centers[static_cast<std::size_t>(model.labels[i])];
                    if (d * d > far_d) { far_d = d * d; far = i; }
                }
                moved = std::max(moved, std::abs(centers[c] - xs[far]));
                centers[c] = xs[far];
                continue;
            }
            const double next = sums[c] / static_cast<double>(counts[c]);
            moved = std::max(moved, std::abs(centers[c] - next));
            centers[c] = next;
        }
        if (moved < tol) break;
    }

    std::vector<int> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return centers[static_cast<std::size_t>(a)] <
               centers[static_cast<std::size_t>(b)];
    });
    std::vector<double> sorted(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
        sorted[static_cast<std::size_t>(c)] =
            centers[static_cast<std::size_t>(order[static_cast<std::size_t>(c)])];
    model.centers = std::move(sorted);
    for (std::size_t i = 0; i < n; ++i)
        model.labels[i] = nearest_center(xs[i], model.centers);
    return model;
}

// Exact mean silhouette of the given points under the given labels. A point
// alone in its cluster takes a = 0, so it scores 1 whenever b > 0.
inline double mean_silhouette(const std::vector<double>& xs,
                              const std::vector<int>& labels, int k) {
    if (xs.size() != labels.size() || xs.size() < 2)
        throw std::invalid_argument("mean_silhouette: need >= 2 labeled points");
    const std::size_t n = xs.size();
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (int l : labels) {
        if (l < 0 || l >= k)
            throw std::invalid_argument("mean_silhouette: label out of range");
        ++counts[static_cast<std::size_t>(l)];
    }
    double total = 0.0;
    std::vector<double> sum_to(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sum_to.begin(), sum_to.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            sum_to[static_cast<std::size_t>(labels[j])] += std::abs(xs[i] - xs[j]);
        }
        const auto own = static_cast<std::size_t>(labels[i]);
        const double a = (counts[own] > 1)
            ? sum_to[own] / static_cast<double>(counts[own] - 1)
            : 0.0;
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (c == own || counts[c] == 0) continue;
            b = std::min(b, sum_to[c] / static_cast<double>(counts[c]));
        }
        if (!std::isfinite(b))
            throw std::invalid_argument("mean_silhouette: fewer than 2 populated clusters");
        const double denom = std::max(a, b);
        total += (denom > 0.0) ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

// Clusters the full input for each k, scores a seeded subsample of at most
// sample_size points, and selects the argmax mean silhouette (ties toward the
// smaller k). k values exceeding the distinct-value count are skipped; the
// all-equal input degenerates to selected_k = k_min with a flag.
inline SilhouetteReport silhouette_select(const std::vector<double>& xs,
                                          int k_min, int k_max,
                                          std::uint64_t seed,
                                          std::size_t sample_size = 2000) {
    if (k_min < 2 || k_max < k_min)
        throw std::invalid_argument("silhouette_select: need 2 <= k_min <= k_max");
    if (sample_size < 2)
        throw std::invalid_argument("silhouette_select: sample_size must be >= 2");
    if (xs.empty()) throw std::invalid_argument("silhouette_select: empty input");

    SilhouetteReport report;
    const std::size_t distinct = count_distinct(xs);
    if (distinct < 2 ||
        static_cast<std::size_t>(k_min) > distinct) {
        report.selected_k = k_min;
        report.degenerate = true;
        return report;
    }

    const std::size_t n = xs.size();
    std::vector<std::size_t> sample(n);
    std::iota(sample.begin(), sample.end(), 0);
    if (n > sample_size) {
        RngStream rng = RngStream::derive(seed, detail::kSaltSilhouette);
        for (std::size_t i = 0; i < sample_size; ++i) {
            const std::size_t j = i + rng.index(n - i);
            std::swap(sample[i], sample[j]);
        }
        sample.resize(sample_size);
        std::sort(sample.begin(), sample.end());
    }

    const int k_hi = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(k_max), distinct));
    double best = -std::numeric_limits<double>::infinity();
    for (int k = k_min; k <= k_hi; ++k) {
        const ClusterModel model = kmeans_pp(xs, k, seed);
        std::vector<double> sub_x(sample.size());
        std::vector<int> sub_l(sample.size());
        for (std::size_t i = 0; i < sample.size(); ++i) {
            sub_x[i] = xs[sample[i]];
            sub_l[i] = model.labels[sample[i]];
        }
        double score;
        try {
            score = mean_silhouette(sub_x, sub_l, k);
        } catch (const std::invalid_argument&) {
            continue;  // subsample missed all but one cluster
        }
        report.candidates.emplace_back(k, score);
        if (score > best) {
            best = score;
            report.selected_k = k;
        }
    }
    if (report.candidates.empty()) {
        report.selected_k = k_min;
        report.degenerate = true;
    }
    return report;
}

}  // namespace scsa
