#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scsa/enhance.hpp"
#include "scsa/rng.hpp"

namespace scsa {

struct Bounds {
    double lo = 0.0;
    double hi = 1.0;
};

// Table-driven genome bounds: gene 0 is h, the rest are per-cluster gammas.
struct GeneBounds {
    Bounds h{0.05, 20.0};
    Bounds gamma{1.0, 15.0};
    const Bounds& operator[](std::size_t gene) const {
        return gene == 0 ? h : gamma;
    }
};

struct Chromosome {
    double h = 0.0;
    std::vector<double> gammas;
    std::size_t genes() const { return gammas.size() + 1; }
    double gene(std::size_t i) const { return i == 0 ? h : gammas[i - 1]; }
    void set_gene(std::size_t i, double v) {
        if (i == 0) h = v;
        else gammas[i - 1] = v;
    }
    bool operator==(const Chromosome&) const = default;
};

struct Objectives {
    double j1 = 0.0;  // SSIM(original, enhanced), maximized
    double j2 = 0.0;  // entropy(enhanced), maximized
    bool operator==(const Objectives&) const = default;
};

// Maximization dominance: no worse in both, strictly better in one.
inline bool dominates(const Objectives& a, const Objectives& b) {
    return a.j1 >= b.j1 && a.j2 >= b.j2 && (a.j1 > b.j1 || a.j2 > b.j2);
}

struct FrontMember {
    Chromosome chrom;
    Objectives obj;
};
using ParetoFront = std::vector<FrontMember>;

struct GaConfig {
    int population_size = 20;
    int generations = 10;
    double crossover_prob = 0.2;
    double mutation_prob = 0.5;
    double eta_c = 15.0;
    double eta_m = 20.0;
    std::uint64_t seed = 0;
    GeneBounds bounds{};
    bool global_ssim = false;  // objective J1 variant toggle
    unsigned jobs = 0;
};

namespace detail {
constexpr std::uint64_t kSaltInit = 0x696e6974ULL;
constexpr std::uint64_t kSaltTournament = 0x746f75726eULL;
constexpr std::uint64_t kSaltCrossover = 0x73627863ULL;
constexpr std::uint64_t kSaltMutation = 0x706f6c796dULL;

inline void validate_ga_config(const GaConfig& cfg) {
    if (cfg.population_size < 2)
        throw std::invalid_argument("GaConfig: population_size must be >= 2");
    if (cfg.generations < 1)
        throw std::invalid_argument("GaConfig: generations must be >= 1");
    auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!prob_ok(cfg.crossover_prob) || !prob_ok(cfg.mutation_prob))
        throw std::invalid_argument("GaConfig: probabilities must lie in [0, 1]");
    if (!(cfg.eta_c > 0.0) || !(cfg.eta_m > 0.0))
        throw std::invalid_argument("GaConfig: distribution indices must be > 0");
}
}  // namespace detail

inline std::vector<Chromosome> init_population(const GaConfig& config, int k) {
    detail::validate_ga_config(config);
    if (k < 1) throw std::invalid_argument("init_population: k must be >= 1");
    std::vector<Chromosome> pop;
    pop.reserve(static_cast<std::size_t>(config.population_size));
    for (int i = 0; i < config.population_size; ++i) {
        RngStream rng = RngStream::derive(config.seed, 0, detail::kSaltInit,
                                          static_cast<std::uint64_t>(i));
        Chromosome c;
        c.h = rng.uniform(config.bounds.h.lo, config.bounds.h.hi);
        c.gammas.resize(static_cast<std::size_t>(k));
        for (auto& g : c.gammas)
            g = rng.uniform(config.bounds.gamma.lo, config.bounds.gamma.hi);
        pop.push_back(std::move(c));
    }
    return pop;
}

// Per-gene simulated binary crossover with probability crossover_prob;
// children are clipped to bounds. Identical parents map to themselves.
inline std::pair<Chromosome, Chromosome> sbx_crossover(const Chromosome& p1,
                                                       const Chromosome& p2,
                                                       const GaConfig& config,
                                                       RngStream& rng) {
    if (p1.genes() != p2.genes())
        throw std::invalid_argument("sbx_crossover: genome length mismatch");
    Chromosome c1 = p1, c2 = p2;
    for (std::size_t gi = 0; gi < p1.genes(); ++gi) {
        if (rng.uniform() >= config.crossover_prob) continue;
        const double u = rng.uniform();
        const double exponent = 1.0 / (config.eta_c + 1.0);
        const double beta = (u <= 0.5)
            ? std::pow(2.0 * u, exponent)
            : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
        const double x1 = p1.gene(gi), x2 = p2.gene(gi);
        const Bounds& bd = config.bounds[gi];
        const double y1 = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
        const double y2 = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
        c1.set_gene(gi, std::clamp(y1, bd.lo, bd.hi));
        c2.set_gene(gi, std::clamp(y2, bd.lo, bd.hi));
    }
    return {c1, c2};
}

// Deb's bounded polynomial mutation per gene with probability mutation_prob.
inline Chromosome poly_mutation(const Chromosome& chrom, const GaConfig& config,
                                RngStream& rng) {
    Chromosome out = chrom;
    for (std::size_t gi = 0; gi < chrom.genes(); ++gi) {
        if (rng.uniform() >= config.mutation_prob) continue;
        const Bounds& bd = config.bounds[gi];
        const double span = bd.hi - bd.lo;
        const double x = out.gene(gi);
        const double d1 = (x - bd.lo) / span;
        const double d2 = (bd.hi - x) / span;
        const double u = rng.uniform();
        const double mpow = 1.0 / (config.eta_m + 1.0);
        double dq;
        if (u < 0.5) {
            const double val = 2.0 * u +
                (1.0 - 2.0 * u) * std::pow(1.0 - d1, config.eta_m + 1.0);
            dq = std::pow(val, mpow) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - u) +
                2.0 * (u - 0.5) * std::pow(1.0 - d2, config.eta_m + 1.0);
            dq = 1.0 - std::pow(val, mpow);
        }
        out.set_gene(gi, std::clamp(x + dq * span, bd.lo, bd.hi));
    }
    return out;
}

// Deb's fast bookkeeping variant: front 0 is the non-dominated set, later
// fronts peel off in dependency order. Returns member indices.
inline std::vector<std::vector<int>> non_dominated_sort(
    const std::vector<Objectives>& objs) {
    const int n = static_cast<int>(objs.size());
    std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
    std::vector<int> dom_count(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> fronts(1);
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(objs[static_cast<std::size_t>(p)],
                          objs[static_cast<std::size_t>(q)]))
                dominated[static_cast<std::size_t>(p)].push_back(q);
            else if (dominates(objs[static_cast<std::size_t>(q)],
                               objs[static_cast<std::size_t>(p)]))
                ++dom_count[static_cast<std::size_t>(p)];
        }
        if (dom_count[static_cast<std::size_t>(p)] == 0)
            fronts[0].push_back(p);
    }
    std::size_t f = 0;
    while (!fronts[f].empty()) {
        std::vector<int> next;
        for (int p : fronts[f]) {
            for (int q : dominated[static_cast<std::size_t>(p)]) {
                if (--dom_count[static_cast<std::size_t>(q)] == 0)
                    next.push_back(q);
            }
        }
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
        ++f;
    }
    fronts.pop_back();
    return fronts;
}

// Boundary members per objective take +infinity; interior members accumulate
// normalized neighbor gaps. Zero-span objectives contribute nothing.
inline std::vector<double> crowding_distance(const std::vector<Objectives>& front) {
    const std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(),
                  std::numeric_limits<double>::infinity());
        return dist;
    }
    for (int obj = 0; obj < 2; ++obj) {
        auto value = [&](std::size_t i) {
            return obj == 0 ? front[i].j1 : front[i].j2;
        };
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return value(a) < value(b);
        });
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        const double span = value(order.back()) - value(order.front());
        if (!(span > 0.0)) continue;
        for (std::size_t i = 1; i + 1 < n; ++i)
            dist[order[i]] += (value(order[i + 1]) - value(order[i - 1])) / span;
    }
    return dist;
}

// Canonical member ordering used for returned fronts and ASF tie-breaking.
inline void canonical_sort(ParetoFront& front) {
    std::sort(front.begin(), front.end(),
              [](const FrontMember& a, const FrontMember& b) {
                  if (a.obj.j1 != b.obj.j1) return a.obj.j1 > b.obj.j1;
                  if (a.obj.j2 != b.obj.j2) return a.obj.j2 > b.obj.j2;
                  if (a.chrom.h != b.chrom.h) return a.chrom.h < b.chrom.h;
                  return a.chrom.gammas < b.chrom.gammas;
              });
}

struct GaRun {
    ParetoFront front;
    // Best j1 and best j2 in the population after each generation's
    // environmental selection (index 0 is the initial population).
    std::vector<Objectives> best_trace;
};

// Generic NSGA-II loop over a user evaluator. The evaluator must be pure;
// exceptions mark the chromosome infeasible (j1 = -inf) instead of aborting.
// All stochastic operators draw from streams derived from (seed, generation,
// operator, index), so results are independent of evaluation order.
template <typename Eval>
GaRun nsga2_run(int k, const GaConfig& config, Eval&& eval) {
    detail::validate_ga_config(config);
    const int pop_size = config.population_size;
    const auto infeasible = Objectives{
        -std::numeric_limits<double>::infinity(), 0.0};

    auto safe_eval = [&](const Chromosome& c) -> Objectives {
        try {
            return eval(c);
        } catch (...) {
            return infeasible;
        }
    };

    std::vector<Chromosome> pop = init_population(config, k);
    std::vector<Objectives> objs(pop.size());
    parallel_for(pop.size(), [&](std::size_t i) { objs[i] = safe_eval(pop[i]); },
                 config.jobs);

    GaRun run;
    auto record_best = [&]() {
        Objectives best{-std::numeric_limits<double>::infinity(),
                        -std::numeric_limits<double>::infinity()};
        for (const auto& o : objs) {
            best.j1 = std::max(best.j1, o.j1);
            best.j2 = std::max(best.j2, o.j2);
        }
        run.best_trace.push_back(best);
    };
    record_best();

    std::vector<int> rank(pop.size());
    std::vector<double> crowd(pop.size());
    auto refresh_rank_crowd = [&]() {
        const auto fronts = non_dominated_sort(objs);
        rank.assign(objs.size(), 0);
        crowd.assign(objs.size(), 0.0);
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            std::vector<Objectives> sub;
            sub.reserve(fronts[f].size());
            for (int idx : fronts[f])
                sub.push_back(objs[static_cast<std::size_t>(idx)]);
            const auto d = crowding_distance(sub);
            for (std::size_t i = 0; i < fronts[f].size(); ++i) {
                rank[static_cast<std::size_t>(fronts[f][i])] = static_cast<int>(f);
                crowd[static_cast<std::size_t>(fronts[f][i])] = d[i];
            }
        }
    };
    refresh_rank_crowd();

    for (int gen = 1; gen <= config.generations; ++gen) {
        auto tournament = [&](RngStream& rng) {
            const std::size_t a = rng.index(pop.size());
            const std::size_t b = rng.index(pop.size());
            if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
            if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? a : b;
            return std::min(a, b);
        };

        std::vector<Chromosome> children;
        children.reserve(static_cast<std::size_t>(pop_size));
        const int pairs = (pop_size + 1) / 2;
        for (int p = 0; p < pairs; ++p) {
            RngStream rng_t = RngStream::derive(
                config.seed, static_cast<std::uint64_t>(gen),
                detail::kSaltTournament, static_cast<std::uint64_t>(p));
            const std::size_t pa = tournament(rng_t);
            const std::size_t pb = tournament(rng_t);
            RngStream rng_x = RngStream::derive(
                config.seed, static_cast<std::uint64_t>(gen),
                detail::kSaltCrossover, static_cast<std::uint64_t>(p));
            auto [c1, c2] = sbx_crossover(pop[pa], pop[pb], config, rng_x);
            RngStream rng_m1 = RngStream::derive(
                config.seed, static_cast<std::uint64_t>(gen),
                detail::kSaltMutation, static_cast<std::uint64_t>(2 * p));
            RngStream rng_m2 = RngStream::derive(
                config.seed, static_cast<std::uint64_t>(gen),
                detail::kSaltMutation, static_cast<std::uint64_t>(2 * p + 1));
            children.push_back(poly_mutation(c1, config, rng_m1));
            if (static_cast<int>(children.size()) < pop_size)
                children.push_back(poly_mutation(c2, config, rng_m2));
        }

        std::vector<Objectives> child_objs(children.size());
        parallel_for(children.size(),
                     [&](std::size_t i) { child_objs[i] = safe_eval(children[i]); },
                     config.jobs);

        std::vector<Chromosome> combined = pop;
        combined.insert(combined.end(), children.begin(), children.end());
        std::vector<Objectives> combined_objs = objs;
        combined_objs.insert(combined_objs.end(), child_objs.begin(),
                             child_objs.end());

        const auto fronts = non_dominated_sort(combined_objs);
        std::vector<Chromosome> next_pop;
        std::vector<Objectives> next_objs;
        next_pop.reserve(static_cast<std::size_t>(pop_size));
        for (const auto& fr : fronts) {
            if (static_cast<int>(next_pop.size()) >= pop_size) break;
            std::vector<Objectives> sub;
            sub.reserve(fr.size());
            for (int idx : fr)
                sub.push_back(combined_objs[static_cast<std::size_t>(idx)]);
            if (static_cast<int>(next_pop.size() + fr.size()) <= pop_size) {
                for (int idx : fr) {
                    next_pop.push_back(combined[static_cast<std::size_t>(idx)]);
                    next_objs.push_back(combined_objs[static_cast<std::size_t>(idx)]);
                }
                continue;
            }
            const auto d = crowding_distance(sub);
            std::vector<std::size_t> order(fr.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          if (d[a] != d[b]) return d[a] > d[b];
                          return fr[a] < fr[b];
                      });
            for (std::size_t oi : order) {
                if (static_cast<int>(next_pop.size()) >= pop_size) break;
                next_pop.push_back(combined[static_cast<std::size_t>(fr[oi])]);
                next_objs.push_back(combined_objs[static_cast<std::size_t>(fr[oi])]);
            }
        }
        pop = std::move(next_pop);
        objs = std::move(next_objs);
        refresh_rank_crowd();
        record_best();
    }

    for (std::size_t i = 0; i < pop.size(); ++i)
        if (rank[i] == 0) run.front.push_back({pop[i], objs[i]});
    canonical_sort(run.front);
    return run;
}

// J1/J2 evaluation of one chromosome against a fixed per-image cluster model.
inline Objectives evaluate(const Chromosome& chrom, const ColorImage& image,
                           const ClusterModel& model, bool global_ssim = false,
                           unsigned jobs = 0) {
    try {
        const EnhancedResult res = enhance_with_model(
            image, chrom.h, chrom.gammas, model, 255.0, jobs);
        const Eigen::MatrixXd la = luminance(image);
        const Eigen::MatrixXd lb = luminance(res.image);
        const double j1 = global_ssim ? ssim_global(la, lb) : ssim(la, lb);
        return Objectives{j1, entropy(res.image)};
    } catch (...) {
        return Objectives{-std::numeric_limits<double>::infinity(), 0.0};
    }
}

inline GaRun run_nsga2_detail(const ColorImage& image,
                              const ClusterModel& model,
                              const GaConfig& config) {
    return nsga2_run(model.k, config, [&](const Chromosome& c) {
        return evaluate(c, image, model, config.global_ssim, config.jobs);
    });
}

inline ParetoFront run_nsga2(const ColorImage& image, const ClusterModel& model,
                             const GaConfig& config) {
    return run_nsga2_detail(image, model, config).front;
}

struct AsfSelection {
    Chromosome chrom;
    Objectives obj;
    std::size_t index = 0;  // position in the canonically sorted front
};

// Augmented Chebyshev scalarization over the min-max normalized front with
// rho = 0.05; the ideal point defaults to the per-objective front maximum.
inline AsfSelection asf_select(
    const ParetoFront& front, std::array<double, 2> weights = {0.5, 0.5},
    std::optional<std::array<double, 2>> ref_point = std::nullopt) {
    if (front.empty()) throw std::invalid_argument("asf_select: empty front");
    if (!(weights[0] > 0.0) || !(weights[1] > 0.0))
        throw std::invalid_argument("asf_select: weights must be > 0");

    ParetoFront sorted = front;
    canonical_sort(sorted);

    std::array<double, 2> lo{std::numeric_limits<double>::infinity(),
                             std::numeric_limits<double>::infinity()};
    std::array<double, 2> hi{-std::numeric_limits<double>::infinity(),
                             -std::numeric_limits<double>::infinity()};
    for (const auto& m : sorted) {
        lo[0] = std::min(lo[0], m.obj.j1);
        hi[0] = std::max(hi[0], m.obj.j1);
        lo[1] = std::min(lo[1], m.obj.j2);
        hi[1] = std::max(hi[1], m.obj.j2);
    }
    auto normalize = [&](double v, int i) {
        const double span = hi[static_cast<std::size_t>(i)] -
                            lo[static_cast<std::size_t>(i)];
        return span > 0.0
            ? (v - lo[static_cast<std::size_t>(i)]) / span
            : 0.0;
    };

    std::array<double, 2> ideal{};
    if (ref_point) {
        ideal = {normalize((*ref_point)[0], 0), normalize((*ref_point)[1], 1)};
    } else {
        ideal = {normalize(hi[0], 0), normalize(hi[1], 1)};
    }

    constexpr double rho = 0.05;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const std::array<double, 2> f{normalize(sorted[i].obj.j1, 0),
                                      normalize(sorted[i].obj.j2, 1)};
        const double g0 = weights[0] * (ideal[0] - f[0]);
        const double g1 = weights[1] * (ideal[1] - f[1]);
        const double asf = std::max(g0, g1) + rho * (g0 + g1);
        if (asf < best) {
            best = asf;
            best_idx = i;
        }
    }
    return AsfSelection{sorted[best_idx].chrom, sorted[best_idx].obj, best_idx};
}

struct AutoResult {
    EnhancedResult result;
    ParetoFront front;
    AsfSelection selected;
    SilhouetteReport silhouette;  // only meaningful when k was auto-selected
};

// Full automatic pipeline: cluster the value channel (silhouette-selected K
// unless fixed), search (h, gammas) with NSGA-II, pick one solution by ASF,
// and run the enhancement with it.
inline AutoResult enhance_auto(const ColorImage& image,
                               const EnhanceConfig& econfig,
                               GaConfig gconfig) {
    detail::validate_color(image);
    gconfig.seed = econfig.seed;
    const HsvImage hsv = rgb_to_hsv(image);
    bool degenerate = false;
    const Eigen::MatrixXd v255 = detail::scaled_value_channel(
        hsv, econfig.intensity_scale, degenerate);
    AutoResult out;
    if (degenerate) {
        out.result.image = image;
        out.result.hsv = hsv;
        out.result.degenerate = true;
        out.result.metrics = compute_metrics(image, image);
        return out;
    }
    const std::vector<double> values = flatten_row_major(v255);
    int k;
    if (econfig.k) {
        k = *econfig.k;
        if (k < 1) throw std::invalid_argument("enhance_auto: k must be >= 1");
    } else {
        out.silhouette = silhouette_select(values, econfig.k_min, econfig.k_max,
                                           econfig.seed);
        k = out.silhouette.selected_k;
    }
    const ClusterModel model = kmeans_pp(values, k, econfig.seed);
    out.front = run_nsga2(image, model, gconfig);
    out.selected = asf_select(out.front);
    out.result = enhance_with_model(image, out.selected.chrom.h,
                                    out.selected.chrom.gammas, model,
                                    econfig.intensity_scale, econfig.jobs);
    out.result.metrics = compute_metrics(image, out.result.image);
    return out;
}

}  // namespace scsa
