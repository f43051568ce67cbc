#pragma once

// Shared test fixtures. Formulas are frozen: several tests pin golden values
// computed from these exact expressions, so do not "clean them up".

#include <Eigen/Dense>
#include <cmath>
#include <cstring>

#include "scsa/color.hpp"
#include "scsa/rng.hpp"

namespace fixtures {

constexpr double kPi = 3.14159265358979323846;

// Bitwise equality (memcmp, so even NaN payloads would have to match).
inline bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return std::memcmp(a.data(), b.data(),
                       sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

inline bool same_bits(const scsa::ColorImage& a, const scsa::ColorImage& b) {
    return same_bits(a.r, b.r) && same_bits(a.g, b.g) && same_bits(a.b, b.b);
}

// Smooth periodic surface on [0,255], q x q. Used for reconstruction
// convergence and gamma-ordering tests.
inline Eigen::MatrixXd smooth(int q = 32) {
    Eigen::MatrixXd img(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            const double x = 2.0 * kPi * i / q;
            const double y = 2.0 * kPi * j / q;
            img(i, j) = std::sin(x) * std::cos(y) + 0.5 * std::sin(2.0 * y) +
                        0.3 * std::cos(x + y);
        }
    }
    const double lo = img.minCoeff();
    const double hi = img.maxCoeff();
    return (255.0 * (img.array() - lo) / (hi - lo)).matrix();
}

// Low-contrast color scene: two soft plateaus (one bright, one dark Gaussian
// well) plus a faint ripple, value channel squeezed into [100,156]/255.
// Hue varies smoothly and saturation stays mid-range, so the value channel
// carries nearly all of the structure.
inline scsa::ColorImage low_contrast(int q = 64) {
    Eigen::MatrixXd v0(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            const double x = static_cast<double>(i) / q;
            const double y = static_cast<double>(j) / q;
            const double bump =
                0.50 * std::exp(-((x - 0.30) * (x - 0.30) + (y - 0.32) * (y - 0.32)) /
                                (2.0 * 0.10 * 0.10));
            const double well =
                0.50 * std::exp(-((x - 0.70) * (x - 0.70) + (y - 0.68) * (y - 0.68)) /
                                (2.0 * 0.09 * 0.09));
            const double ripple =
                0.02 * std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y);
            v0(i, j) = 0.5 + bump - well + ripple;
        }
    }
    const double lo = v0.minCoeff();
    const double hi = v0.maxCoeff();
    v0 = ((v0.array() - lo) / (hi - lo)).matrix();

    scsa::ColorImage out;
    out.r.resize(q, q);
    out.g.resize(q, q);
    out.b.resize(q, q);
    for (int i = 0; i < q; ++i) {
        for (int j = 0; j < q; ++j) {
            const double x = static_cast<double>(i) / q;
            const double y = static_cast<double>(j) / q;
            const double v = (100.0 + 56.0 * v0(i, j)) / 255.0;
            const double hdeg =
                std::fmod(200.0 + 120.0 * x + 60.0 * std::sin(2.0 * kPi * y), 360.0);
            double s = 0.45 + 0.2 * std::cos(2.0 * kPi * (x + y));
            s = std::min(1.0, std::max(0.0, s));
            const auto [r, g, b] = scsa::hsv_to_rgb(hdeg, s, v);
            out.r(i, j) = r;
            out.g(i, j) = g;
            out.b(i, j) = b;
        }
    }
    return out;
}

// Three well-separated scalar blobs around 10, 100, 200 with +-3 jitter.
inline std::vector<double> three_blobs(int per_cluster, std::uint64_t seed) {
    scsa::RngStream rng = scsa::RngStream::derive(seed, 0x7e57, 0xb10b, 0);
    std::vector<double> xs;
    xs.reserve(3 * static_cast<std::size_t>(per_cluster));
    const double centers[3] = {10.0, 100.0, 200.0};
    for (int c = 0; c < 3; ++c) {
        for (int i = 0; i < per_cluster; ++i) {
            xs.push_back(centers[c] + (2.0 * rng.uniform() - 1.0) * 3.0);
        }
    }
    return xs;
}

inline Eigen::MatrixXd random_matrix(scsa::RngStream& rng, int rows, int cols,
                                     double lo, double hi) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            m(i, j) = lo + (hi - lo) * rng.uniform();
        }
    }
    return m;
}

inline scsa::ColorImage random_color(scsa::RngStream& rng, int rows, int cols) {
    scsa::ColorImage img;
    img.r = random_matrix(rng, rows, cols, 0.0, 1.0);
    img.g = random_matrix(rng, rows, cols, 0.0, 1.0);
    img.b = random_matrix(rng, rows, cols, 0.0, 1.0);
    return img;
}

}  // namespace fixtures
