#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "scsa/cluster.hpp"
#include "scsa/color.hpp"
#include "scsa/metrics.hpp"
#include "scsa/reconstruct.hpp"

namespace scsa {

struct EnhanceConfig {
    double h = 1.0;
    std::vector<double> gammas;   // one per cluster; must match the final k
    std::optional<int> k;         // nullopt: silhouette-selected in [k_min, k_max]
    int k_min = 2;
    int k_max = 6;
    std::uint64_t seed = 0;
    double intensity_scale = 255.0;
    unsigned jobs = 0;
};

struct EnhancedResult {
    ColorImage image;
    ClusterModel clusters;          // labels in row-major pixel order
    double h = 0.0;
    std::vector<double> gammas;
    bool degenerate = false;        // constant value channel: input passed through
    Eigen::MatrixXd value_raw;      // reconstruction before the final normalization
    HsvImage hsv;                   // output HSV; h and s are the input's, untouched
    MetricsReport metrics;          // vs. the input image
};

// (x - min) / (max - min); a constant input yields all zeros and sets the
// degenerate flag instead of erroring.
inline Eigen::MatrixXd min_max_normalize(const Eigen::MatrixXd& m,
                                         bool& degenerate) {
    if (m.size() == 0)
        throw std::invalid_argument("min_max_normalize: empty input");
    for (Eigen::Index i = 0; i < m.size(); ++i)
        if (!std::isfinite(m.data()[i]))
            throw std::invalid_argument("min_max_normalize: non-finite entry");
    const double lo = m.minCoeff();
    const double hi = m.maxCoeff();
    if (hi == lo) {
        degenerate = true;
        return Eigen::MatrixXd::Zero(m.rows(), m.cols());
    }
    degenerate = false;
    return (m.array() - lo) / (hi - lo);
}

inline Eigen::MatrixXd min_max_normalize(const Eigen::MatrixXd& m) {
    bool degenerate = false;
    return min_max_normalize(m, degenerate);
}

// out = c_bar * in^gamma_bar, clipped to [0, 1].
inline Eigen::MatrixXd gamma_correction(const Eigen::MatrixXd& in, double c_bar,
                                        double gamma_bar) {
    if (!(gamma_bar > 0.0) || !std::isfinite(gamma_bar))
        throw std::invalid_argument("gamma_correction: gamma_bar must be > 0");
    if (!(c_bar > 0.0) || !std::isfinite(c_bar))
        throw std::invalid_argument("gamma_correction: c_bar must be > 0");
    for (Eigen::Index i = 0; i < in.size(); ++i) {
        const double x = in.data()[i];
        if (!std::isfinite(x) || x < 0.0 || x > 1.0)
            throw std::invalid_argument("gamma_correction: input outside [0, 1]");
    }
    return (c_bar * in.array().pow(gamma_bar)).cwiseMin(1.0).cwiseMax(0.0);
}

inline ColorImage gamma_correction(const ColorImage& in, double c_bar,
                                   double gamma_bar) {
    detail::validate_color(in);
    return ColorImage{gamma_correction(in.r, c_bar, gamma_bar),
                      gamma_correction(in.g, c_bar, gamma_bar),
                      gamma_correction(in.b, c_bar, gamma_bar)};
}

namespace detail {

// Shared pipeline body once a cluster model over the scaled value channel is
// fixed: build the gamma field, reconstruct, renormalize, recombine. H and S
// are carried through untouched.
struct PipelineCore {
    ColorImage image;
    Eigen::MatrixXd value_raw;
    HsvImage hsv;
    bool degenerate = false;
};

inline Eigen::MatrixXd scaled_value_channel(const HsvImage& hsv,
                                            double intensity_scale,
                                            bool& degenerate) {
    const Eigen::MatrixXd v01 = min_max_normalize(hsv.v, degenerate);
    return intensity_scale * v01;
}

inline PipelineCore run_pipeline(const HsvImage& hsv,
                                 const Eigen::MatrixXd& v255,
                                 const ClusterModel& model,
                                 const std::vector<double>& gammas, double h,
                                 unsigned jobs) {
    const Eigen::Index rows = v255.rows(), cols = v255.cols();
    if (static_cast<std::size_t>(model.k) != gammas.size())
        throw std::invalid_argument("enhance: gamma count must equal the cluster count");
    if (model.labels.size() != static_cast<std::size_t>(v255.size()))
        throw std::invalid_argument("enhance: cluster model does not match the image");
    for (double g : gammas)
        if (!std::isfinite(g) || g < 0.0)
            throw std::invalid_argument("enhance: gammas must be finite and >= 0");

    GammaField field{Eigen::MatrixXd(rows, cols)};
    std::size_t idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
            field.values(i, j) =
                gammas[static_cast<std::size_t>(model.labels[idx++])];

    PipelineCore core;
    core.value_raw = reconstruct_with_field(v255, h, field, jobs);
    bool flat = false;
    const Eigen::MatrixXd v_out = min_max_normalize(core.value_raw, flat);
    core.degenerate = flat;
    core.hsv = HsvImage{hsv.h, hsv.s, v_out};
    core.image = hsv_to_rgb(core.hsv);
    return core;
}

}  // namespace detail

inline std::vector<double> flatten_row_major(const Eigen::MatrixXd& m) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) values.push_back(m(i, j));
    return values;
}

// Clusters the scaled value channel of this image; labels are in row-major
// pixel order as consumed by the pipeline.
inline ClusterModel cluster_value_channel(const Eigen::MatrixXd& v255, int k,
                                          std::uint64_t seed) {
    return kmeans_pp(flatten_row_major(v255), k, seed);
}

// Full pipeline against a prebuilt cluster model (the optimizer path: one
// model per image, many (h, gammas) evaluations). Metrics are not filled.
inline EnhancedResult enhance_with_model(const ColorImage& input, double h,
                                         const std::vector<double>& gammas,
                                         const ClusterModel& model,
                                         double intensity_scale = 255.0,
                                         unsigned jobs = 0) {
    detail::validate_color(input);
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("enhance: h must be positive and finite");
    const HsvImage hsv = rgb_to_hsv(input);
    bool degenerate = false;
    const Eigen::MatrixXd v255 =
        detail::scaled_value_channel(hsv, intensity_scale, degenerate);
    EnhancedResult result;
    result.h = h;
    result.gammas = gammas;
    result.clusters = model;
    if (degenerate) {
        result.image = input;
        result.hsv = hsv;
        result.degenerate = true;
        return result;
    }
    detail::PipelineCore core =
        detail::run_pipeline(hsv, v255, model, gammas, h, jobs);
    result.image = std::move(core.image);
    result.value_raw = std::move(core.value_raw);
    result.hsv = std::move(core.hsv);
    result.degenerate = core.degenerate;
    return result;
}

// gammas must be present (one per cluster); the "auto" gamma path lives with
// the optimizer. k is silhouette-selected when absent. Metrics compare the
// output against the input.
inline EnhancedResult enhance(const ColorImage& input,
                              const EnhanceConfig& config) {
    detail::validate_color(input);
    if (!(config.h > 0.0) || !std::isfinite(config.h))
        throw std::invalid_argument("enhance: h must be positive and finite");
    if (config.gammas.empty())
        throw std::invalid_argument("enhance: gammas must be provided");
    if (!(config.intensity_scale > 0.0))
        throw std::invalid_argument("enhance: intensity_scale must be > 0");

    const HsvImage hsv = rgb_to_hsv(input);
    bool degenerate = false;
    const Eigen::MatrixXd v255 =
        detail::scaled_value_channel(hsv, config.intensity_scale, degenerate);
    EnhancedResult result;
    result.h = config.h;
    result.gammas = config.gammas;
    if (degenerate) {
        result.image = input;
        result.hsv = hsv;
        result.degenerate = true;
        result.metrics = compute_metrics(input, result.image);
        return result;
    }

    int k;
    if (config.k) {
        k = *config.k;
        if (k < 1) throw std::invalid_argument("enhance: k must be >= 1");
    } else {
        k = silhouette_select(flatten_row_major(v255), config.k_min,
                              config.k_max, config.seed)
                .selected_k;
    }
    if (static_cast<std::size_t>(k) != config.gammas.size())
        throw std::invalid_argument("enhance: gamma count must equal the cluster count");

    result.clusters = cluster_value_channel(v255, k, config.seed);
    detail::PipelineCore core = detail::run_pipeline(
        hsv, v255, result.clusters, config.gammas, config.h, config.jobs);
    result.image = std::move(core.image);
    result.value_raw = std::move(core.value_raw);
    result.hsv = std::move(core.hsv);
    result.degenerate = core.degenerate;
    result.metrics = compute_metrics(input, result.image);
    return result;
}

}  // namespace scsa
