#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>

namespace scsa {

// RGB channels in [0, 1].
struct ColorImage {
    Eigen::MatrixXd r, g, b;
    int height() const { return static_cast<int>(r.rows()); }
    int width() const { return static_cast<int>(r.cols()); }
};

// Hue in degrees [0, 360); saturation and value in [0, 1].
struct HsvImage {
    Eigen::MatrixXd h, s, v;
    int height() const { return static_cast<int>(h.rows()); }
    int width() const { return static_cast<int>(h.cols()); }
};

namespace detail {

inline void validate_color(const ColorImage& img) {
    if (img.r.rows() != img.g.rows() || img.r.rows() != img.b.rows() ||
        img.r.cols() != img.g.cols() || img.r.cols() != img.b.cols())
        throw std::invalid_argument("ColorImage: channel shape mismatch");
    if (img.r.size() == 0)
        throw std::invalid_argument("ColorImage: empty image");
    for (int c = 0; c < 3; ++c) {
        const Eigen::MatrixXd& ch = (c == 0) ? img.r : (c == 1) ? img.g : img.b;
        for (Eigen::Index i = 0; i < ch.size(); ++i) {
            const double v = ch.data()[i];
            if (!std::isfinite(v) || v < 0.0 || v > 1.0)
                throw std::invalid_argument("ColorImage: channel outside [0, 1]");
        }
    }
}

}  // namespace detail

// Standard hexcone mapping for one pixel; V = max(r, g, b), gray takes hue 0.
inline std::array<double, 3> rgb_to_hsv(double r, double g, double b) {
    const double v = std::max(r, std::max(g, b));
    const double lo = std::min(r, std::min(g, b));
    const double c = v - lo;
    double h = 0.0;
    if (c > 0.0) {
        if (v == r)      h = 60.0 * (g - b) / c;
        else if (v == g) h = 60.0 * ((b - r) / c + 2.0);
        else             h = 60.0 * ((r - g) / c + 4.0);
        if (h < 0.0) h += 360.0;
        if (h >= 360.0) h -= 360.0;
    }
    return {h, (v > 0.0) ? c / v : 0.0, v};
}

inline std::array<double, 3> hsv_to_rgb(double h, double s, double v) {
    if (!std::isfinite(h) || h < 0.0 || h >= 360.0)
        throw std::invalid_argument("HsvImage: hue outside [0, 360)");
    if (!std::isfinite(s) || s < 0.0 || s > 1.0 ||
        !std::isfinite(v) || v < 0.0 || v > 1.0)
        throw std::invalid_argument("HsvImage: s/v outside [0, 1]");
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0.0, g = 0.0, b = 0.0;
    switch (static_cast<int>(hp)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double m = v - c;
    return {r + m, g + m, b + m};
}

inline HsvImage rgb_to_hsv(const ColorImage& img) {
    detail::validate_color(img);
    const Eigen::Index rows = img.r.rows(), cols = img.r.cols();
    HsvImage out;
    out.h.resize(rows, cols);
    out.s.resize(rows, cols);
    out.v.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const auto hsv = rgb_to_hsv(img.r(i, j), img.g(i, j), img.b(i, j));
            out.h(i, j) = hsv[0];
            out.s(i, j) = hsv[1];
            out.v(i, j) = hsv[2];
        }
    }
    return out;
}

inline ColorImage hsv_to_rgb(const HsvImage& img) {
    if (img.h.rows() != img.s.rows() || img.h.rows() != img.v.rows() ||
        img.h.cols() != img.s.cols() || img.h.cols() != img.v.cols())
        throw std::invalid_argument("HsvImage: channel shape mismatch");
    const Eigen::Index rows = img.h.rows(), cols = img.h.cols();
    ColorImage out;
    out.r.resize(rows, cols);
    out.g.resize(rows, cols);
    out.b.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const auto rgb = hsv_to_rgb(img.h(i, j), img.s(i, j), img.v(i, j));
            out.r(i, j) = rgb[0];
            out.g(i, j) = rgb[1];
            out.b(i, j) = rgb[2];
        }
    }
    return out;
}

}  // namespace scsa
