#pragma once

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "scsa/color.hpp"

namespace scsa {

// Scalar metrics follow the 8-bit convention: single-channel comparisons run
// on the HSV value channel scaled to [0, 255].
inline Eigen::MatrixXd luminance(const ColorImage& img) {
    detail::validate_color(img);
    return 255.0 * img.r.cwiseMax(img.g).cwiseMax(img.b);
}

namespace detail {

inline void check_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                             const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    if (a.size() == 0)
        throw std::invalid_argument(std::string(who) + ": empty input");
}

// 2D convolution, zero padded, output size of the input; the kernel center
// lands at floor(k/2) from the top-left (matching MATLAB conv2 'same').
inline Eigen::MatrixXd conv_same(const Eigen::MatrixXd& img,
                                 const Eigen::MatrixXd& ker) {
    const int rows = static_cast<int>(img.rows());
    const int cols = static_cast<int>(img.cols());
    const int kh = static_cast<int>(ker.rows());
    const int kw = static_cast<int>(ker.cols());
    const int cu = (kh - 1 + 1) / 2;
    const int cv = (kw - 1 + 1) / 2;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int u = 0; u < kh; ++u) {
                const int si = i + cu - u;
                if (si < 0 || si >= rows) continue;
                for (int v = 0; v < kw; ++v) {
                    const int sj = j + cv - v;
                    if (sj < 0 || sj >= cols) continue;
                    acc += ker(u, v) * img(si, sj);
                }
            }
            out(i, j) = acc;
        }
    }
    return out;
}

// Windowed correlation, 'valid' region only.
inline Eigen::MatrixXd filter_valid(const Eigen::MatrixXd& img,
                                    const Eigen::MatrixXd& ker) {
    const int kh = static_cast<int>(ker.rows());
    const int kw = static_cast<int>(ker.cols());
    const int rows = static_cast<int>(img.rows()) - kh + 1;
    const int cols = static_cast<int>(img.cols()) - kw + 1;
    if (rows < 1 || cols < 1)
        throw std::invalid_argument("filter_valid: image smaller than window");
    Eigen::MatrixXd out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out(i, j) = (img.block(i, j, kh, kw).array() * ker.array()).sum();
    return out;
}

inline Eigen::MatrixXd gaussian_window(int size, double sigma) {
    Eigen::MatrixXd w(size, size);
    const double half = (size - 1) / 2.0;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
            const double di = i - half, dj = j - half;
            w(i, j) = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
        }
    return w / w.sum();
}

inline double population_std(const Eigen::MatrixXd& m) {
    const double mean = m.mean();
    return std::sqrt((m.array() - mean).square().mean());
}

}  // namespace detail

inline double mse(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    detail::check_same_shape(a, b, "mse");
    return (a - b).array().square().mean();
}

// Color MSE averages the squared channel differences on the [0, 255] scale.
inline double mse(const ColorImage& a, const ColorImage& b) {
    detail::validate_color(a);
    detail::validate_color(b);
    detail::check_same_shape(a.r, b.r, "mse");
    const double s = 255.0 * 255.0;
    return s * ((a.r - b.r).array().square().mean() +
                (a.g - b.g).array().square().mean() +
                (a.b - b.b).array().square().mean()) / 3.0;
}

// +infinity sentinel for identical images.
inline double psnr_from_mse(double m) {
    if (!(m >= 0.0)) throw std::invalid_argument("psnr_from_mse: mse must be >= 0");
    if (m == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

inline double psnr(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return psnr_from_mse(mse(a, b));
}

inline double psnr(const ColorImage& a, const ColorImage& b) {
    return psnr_from_mse(mse(a, b));
}

inline double ambe(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    detail::check_same_shape(a, b, "ambe");
    return std::abs(a.mean() - b.mean());
}

inline double ambe(const ColorImage& a, const ColorImage& b) {
    return ambe(luminance(a), luminance(b));
}

// 256-bin histogram of a [0, 1] channel; bin = floor(x * 256) clamped to 255.
inline std::array<std::uint64_t, 256> histogram256(const Eigen::MatrixXd& ch) {
    std::array<std::uint64_t, 256> hist{};
    for (Eigen::Index i = 0; i < ch.size(); ++i) {
        const double x = ch.data()[i];
        if (!std::isfinite(x) || x < 0.0 || x > 1.0)
            throw std::invalid_argument("histogram256: values must lie in [0, 1]");
        const int bin = std::min(255, static_cast<int>(x * 256.0));
        ++hist[static_cast<std::size_t>(bin)];
    }
    return hist;
}

inline double entropy_channel(const Eigen::MatrixXd& ch) {
    const auto hist = histogram256(ch);
    const double n = static_cast<double>(ch.size());
    double e = 0.0;
    for (std::uint64_t c : hist) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        e -= p * std::log2(p);
    }
    return e;
}

// Shannon entropy summed over the three RGB channels.
inline double entropy(const ColorImage& img) {
    detail::validate_color(img);
    return entropy_channel(img.r) + entropy_channel(img.g) +
           entropy_channel(img.b);
}

inline constexpr double kSsimC1 = (0.01 * 255.0) * (0.01 * 255.0);
inline constexpr double kSsimC2 = (0.03 * 255.0) * (0.03 * 255.0);

// Whole-image SSIM with population moments.
inline double ssim_global(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    detail::check_same_shape(a, b, "ssim_global");
    const double mu1 = a.mean(), mu2 = b.mean();
    const double var1 = (a.array() - mu1).square().mean();
    const double var2 = (b.array() - mu2).square().mean();
    const double cov = ((a.array() - mu1) * (b.array() - mu2)).mean();
    return ((2.0 * mu1 * mu2 + kSsimC1) * (2.0 * cov + kSsimC2)) /
           ((mu1 * mu1 + mu2 * mu2 + kSsimC1) * (var1 + var2 + kSsimC2));
}

// Mean of the 11x11 Gaussian-windowed (sigma 1.5) SSIM map over the valid
// region; inputs smaller than the window fall back to the global formula.
inline double ssim(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    detail::check_same_shape(a, b, "ssim");
    if (a.rows() < 11 || a.cols() < 11) return ssim_global(a, b);
    const Eigen::MatrixXd w = detail::gaussian_window(11, 1.5);
    const Eigen::MatrixXd mu1 = detail::filter_valid(a, w);
    const Eigen::MatrixXd mu2 = detail::filter_valid(b, w);
    const Eigen::MatrixXd s11 =
        detail::filter_valid(a.cwiseProduct(a), w) - mu1.cwiseProduct(mu1);
    const Eigen::MatrixXd s22 =
        detail::filter_valid(b.cwiseProduct(b), w) - mu2.cwiseProduct(mu2);
    const Eigen::MatrixXd s12 =
        detail::filter_valid(a.cwiseProduct(b), w) - mu1.cwiseProduct(mu2);
    const auto num = (2.0 * mu1.array() * mu2.array() + kSsimC1) *
                     (2.0 * s12.array() + kSsimC2);
    const auto den = (mu1.array().square() + mu2.array().square() + kSsimC1) *
                     (s11.array() + s22.array() + kSsimC2);
    return (num / den).mean();
}

inline double ssim(const ColorImage& a, const ColorImage& b) {
    return ssim(luminance(a), luminance(b));
}

inline double ssim_global(const ColorImage& a, const ColorImage& b) {
    return ssim_global(luminance(a), luminance(b));
}

// Gradient-magnitude similarity deviation: Prewitt/3 gradients, c = 170,
// population standard deviation of the similarity map (no downsampling).
inline double gmsd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    detail::check_same_shape(a, b, "gmsd");
    Eigen::MatrixXd hx(3, 3);
    hx << 1, 0, -1, 1, 0, -1, 1, 0, -1;
    hx /= 3.0;
    const Eigen::MatrixXd hy = hx.transpose();
    const Eigen::MatrixXd g1 =
        (detail::conv_same(a, hx).array().square() +
         detail::conv_same(a, hy).array().square()).sqrt();
    const Eigen::MatrixXd g2 =
        (detail::conv_same(b, hx).array().square() +
         detail::conv_same(b, hy).array().square()).sqrt();
    const double c = 170.0;
    const Eigen::MatrixXd gms =
        ((2.0 * g1.array() * g2.array() + c) /
         (g1.array().square() + g2.array().square() + c)).matrix();
    return detail::population_std(gms);
}

inline double gmsd(const ColorImage& a, const ColorImage& b) {
    return gmsd(luminance(a), luminance(b));
}

// Patch-based contrast quality index: 11x11 Gaussian patches (valid region),
// product of mean, contrast, and structure terms with C = 3 and L = 256.
inline double pcqi(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    detail::check_same_shape(a, b, "pcqi");
    if (a.rows() < 11 || a.cols() < 11)
        throw std::invalid_argument("pcqi: image smaller than the 11x11 window");
    const Eigen::MatrixXd w = detail::gaussian_window(11, 1.5);
    const Eigen::MatrixXd mu1 = detail::filter_valid(a, w);
    const Eigen::MatrixXd mu2 = detail::filter_valid(b, w);
    const Eigen::MatrixXd s11 =
        (detail::filter_valid(a.cwiseProduct(a), w) - mu1.cwiseProduct(mu1))
            .cwiseMax(0.0);
    const Eigen::MatrixXd s22 =
        (detail::filter_valid(b.cwiseProduct(b), w) - mu2.cwiseProduct(mu2))
            .cwiseMax(0.0);
    const Eigen::MatrixXd s12 =
        detail::filter_valid(a.cwiseProduct(b), w) - mu1.cwiseProduct(mu2);
    const double c = 3.0;
    const double l = 256.0;
    const auto term1 =
        (4.0 / std::numbers::pi) *
        ((s12.array() + c) / (s11.array() + c)).atan();
    const auto term2 =
        (s12.array() + c) / ((s11.array().sqrt() * s22.array().sqrt()) + c);
    const auto term3 = (-(mu1 - mu2).array().abs() / l).exp();
    return (term1 * term2 * term3).mean();
}

inline double pcqi(const ColorImage& a, const ColorImage& b) {
    return pcqi(luminance(a), luminance(b));
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place 2D DFT over a row-major buffer. The inverse carries the
// 1/(rows*cols) scaling so it matches the usual ifft2 convention.
inline void dft2_inplace(std::vector<std::complex<double>>& buf, int rows,
                         int cols, bool inverse) {
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(
            rows, cols, reinterpret_cast<fftw_complex*>(buf.data()),
            reinterpret_cast<fftw_complex*>(buf.data()),
            inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    if (inverse) {
        const double scale = 1.0 / (static_cast<double>(rows) * cols);
        for (auto& z : buf) z *= scale;
    }
}

inline Eigen::MatrixXcd fft2(const Eigen::MatrixXcd& m) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            buf[static_cast<std::size_t>(i) * cols + j] = m(i, j);
    dft2_inplace(buf, rows, cols, false);
    Eigen::MatrixXcd out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out(i, j) = buf[static_cast<std::size_t>(i) * cols + j];
    return out;
}

inline Eigen::MatrixXcd ifft2(const Eigen::MatrixXcd& m) {
    const int rows = static_cast<int>(m.rows());
    const int cols = static_cast<int>(m.cols());
    std::vector<std::complex<double>> buf(static_cast<std::size_t>(rows) * cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            buf[static_cast<std::size_t>(i) * cols + j] = m(i, j);
    dft2_inplace(buf, rows, cols, true);
    Eigen::MatrixXcd out(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            out(i, j) = buf[static_cast<std::size_t>(i) * cols + j];
    return out;
}

// DC-at-origin frequency coordinate for index k of an n-point axis, following
// the centered-meshgrid-then-ifftshift construction (note the odd-axis
// division by n-1).
inline double shifted_freq(int k, int n) {
    if (n % 2 == 0) {
        const int u = (k < n / 2) ? k : k - n;
        return static_cast<double>(u) / static_cast<double>(n);
    }
    const int u = (k <= (n - 1) / 2) ? k : k - n;
    return static_cast<double>(u) / static_cast<double>(n - 1);
}

inline double matrix_median(const Eigen::MatrixXd& m) {
    std::vector<double> v(m.data(), m.data() + m.size());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Phase congruency map via log-Gabor filters: 4 scales (min wavelength 6,
// multiplier 2, sigmaOnf 0.55), 4 orientations (angular sigma pi/4/1.2),
// Butterworth lowpass (cutoff 0.45, order 15), median-based noise threshold
// with k = 2 scaled by 1/1.7. Values lie in [0, 1].
inline Eigen::MatrixXd phase_congruency(const Eigen::MatrixXd& im) {
    constexpr int nscale = 4;
    constexpr int norient = 4;
    constexpr double min_wavelength = 6.0;
    constexpr double mult = 2.0;
    constexpr double sigma_onf = 0.55;
    constexpr double d_theta_on_sigma = 1.2;
    constexpr double noise_k = 2.0;
    constexpr double epsilon = 1e-4;
    const double theta_sigma =
        std::numbers::pi / norient / d_theta_on_sigma;

    const int rows = static_cast<int>(im.rows());
    const int cols = static_cast<int>(im.cols());
    if (rows < 2 || cols < 2)
        throw std::invalid_argument("phase_congruency: image too small");

    Eigen::MatrixXd radius(rows, cols), sin_theta(rows, cols),
        cos_theta(rows, cols), lowpass(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const double fy = detail::shifted_freq(i, rows);
        for (int j = 0; j < cols; ++j) {
            const double fx = detail::shifted_freq(j, cols);
            const double r = std::hypot(fx, fy);
            lowpass(i, j) = 1.0 / (1.0 + std::pow(r / 0.45, 30.0));
            const double th = std::atan2(-fy, fx);
            sin_theta(i, j) = std::sin(th);
            cos_theta(i, j) = std::cos(th);
            radius(i, j) = r;
        }
    }
    radius(0, 0) = 1.0;

    std::array<Eigen::MatrixXd, nscale> log_gabor;
    const double log_den = 2.0 * std::log(sigma_onf) * std::log(sigma_onf);
    for (int s = 0; s < nscale; ++s) {
        const double fo = 1.0 / (min_wavelength * std::pow(mult, s));
        log_gabor[s] =
            ((radius.array() / fo).log().square() / -log_den).exp().matrix();
        log_gabor[s] = log_gabor[s].cwiseProduct(lowpass);
        log_gabor[s](0, 0) = 0.0;
    }

    const Eigen::MatrixXcd image_fft = detail::fft2(im.cast<std::complex<double>>());

    Eigen::MatrixXd energy_all = Eigen::MatrixXd::Zero(rows, cols);
    Eigen::MatrixXd an_all = Eigen::MatrixXd::Zero(rows, cols);
    const double root_n = std::sqrt(static_cast<double>(rows) * cols);

    for (int o = 0; o < norient; ++o) {
        const double angl = o * std::numbers::pi / norient;
        Eigen::MatrixXd spread(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const double ds = sin_theta(i, j) * std::cos(angl) -
                                  cos_theta(i, j) * std::sin(angl);
                const double dc = cos_theta(i, j) * std::cos(angl) +
                                  sin_theta(i, j) * std::sin(angl);
                const double dt = std::abs(std::atan2(ds, dc));
                spread(i, j) = std::exp(-dt * dt / (2.0 * theta_sigma * theta_sigma));
            }

        Eigen::MatrixXd sum_e = Eigen::MatrixXd::Zero(rows, cols);
        Eigen::MatrixXd sum_o = Eigen::MatrixXd::Zero(rows, cols);
        Eigen::MatrixXd sum_an = Eigen::MatrixXd::Zero(rows, cols);
        Eigen::MatrixXd max_an;
        std::array<Eigen::MatrixXcd, nscale> eo;
        std::array<Eigen::MatrixXd, nscale> ifft_filt;
        double em_n = 0.0;
        for (int s = 0; s < nscale; ++s) {
            const Eigen::MatrixXd filter = log_gabor[s].cwiseProduct(spread);
            ifft_filt[s] =
                detail::ifft2(filter.cast<std::complex<double>>()).real() * root_n;
            eo[s] = detail::ifft2(image_fft.cwiseProduct(
                filter.cast<std::complex<double>>()));
            const Eigen::MatrixXd an = eo[s].cwiseAbs();
            sum_an += an;
            sum_e += eo[s].real();
            sum_o += eo[s].imag();
            if (s == 0) {
                em_n = filter.array().square().sum();
                max_an = an;
            } else {
                max_an = max_an.cwiseMax(an);
            }
        }

        const Eigen::MatrixXd x_energy =
            (sum_e.array().square() + sum_o.array().square()).sqrt() + epsilon;
        const Eigen::MatrixXd mean_e = sum_e.cwiseQuotient(x_energy);
        const Eigen::MatrixXd mean_o = sum_o.cwiseQuotient(x_energy);
        Eigen::MatrixXd energy = Eigen::MatrixXd::Zero(rows, cols);
        for (int s = 0; s < nscale; ++s) {
            const Eigen::MatrixXd e = eo[s].real();
            const Eigen::MatrixXd od = eo[s].imag();
            energy += e.cwiseProduct(mean_e) + od.cwiseProduct(mean_o) -
                      (e.cwiseProduct(mean_o) - od.cwiseProduct(mean_e)).cwiseAbs();
        }

        const double median_e2n =
            detail::matrix_median(eo[0].cwiseAbs2());
        const double mean_e2n = median_e2n / std::log(2.0);
        const double noise_power = mean_e2n / em_n;
        double sum_an2 = 0.0, sum_ai_aj = 0.0;
        for (int s = 0; s < nscale; ++s)
            sum_an2 += ifft_filt[s].array().square().sum();
        for (int si = 0; si < nscale - 1; ++si)
            for (int sj = si + 1; sj < nscale; ++sj)
                sum_ai_aj +=
                    ifft_filt[si].cwiseProduct(ifft_filt[sj]).sum();
        const double est_noise_energy2 =
            2.0 * noise_power * sum_an2 + 4.0 * noise_power * sum_ai_aj;
        const double tau = std::sqrt(est_noise_energy2 / 2.0);
        const double est_noise_energy = tau * std::sqrt(std::numbers::pi / 2.0);
        const double est_noise_sigma =
            std::sqrt((2.0 - std::numbers::pi / 2.0) * tau * tau);
        const double t = (est_noise_energy + noise_k * est_noise_sigma) / 1.7;

        energy = (energy.array() - t).cwiseMax(0.0).matrix();
        energy_all += energy;
        an_all += sum_an;
    }
    return energy_all.array() / (an_all.array() + epsilon);
}

// Feature similarity index: phase congruency and Scharr gradient similarity,
// PC-weighted pooling, with T1 = 0.85 and T2 = 160 on the [0, 255] scale.
// Inputs are box-downsampled by F = max(1, round(min_dim / 256)) first.
inline double fsim(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    detail::check_same_shape(a, b, "fsim");
    const int rows = static_cast<int>(a.rows());
    const int cols = static_cast<int>(a.cols());
    const int f = std::max(
        1, static_cast<int>(std::lround(std::min(rows, cols) / 256.0)));
    Eigen::MatrixXd i1 = a, i2 = b;
    if (f > 1) {
        const Eigen::MatrixXd box =
            Eigen::MatrixXd::Constant(f, f, 1.0 / (f * f));
        const Eigen::MatrixXd a1 = detail::conv_same(a, box);
        const Eigen::MatrixXd a2 = detail::conv_same(b, box);
        const int dr = (rows + f - 1) / f, dc = (cols + f - 1) / f;
        i1.resize(dr, dc);
        i2.resize(dr, dc);
        for (int i = 0; i < dr; ++i)
            for (int j = 0; j < dc; ++j) {
                i1(i, j) = a1(i * f, j * f);
                i2(i, j) = a2(i * f, j * f);
            }
    }

    const Eigen::MatrixXd pc1 = phase_congruency(i1);
    const Eigen::MatrixXd pc2 = phase_congruency(i2);

    Eigen::MatrixXd dx(3, 3);
    dx << 3, 0, -3, 10, 0, -10, 3, 0, -3;
    dx /= 16.0;
    const Eigen::MatrixXd dy = dx.transpose();
    const Eigen::MatrixXd g1 =
        (detail::conv_same(i1, dx).array().square() +
         detail::conv_same(i1, dy).array().square()).sqrt();
    const Eigen::MatrixXd g2 =
        (detail::conv_same(i2, dx).array().square() +
         detail::conv_same(i2, dy).array().square()).sqrt();

    const double t1 = 0.85, t2 = 160.0;
    const auto pc_sim = (2.0 * pc1.array() * pc2.array() + t1) /
                        (pc1.array().square() + pc2.array().square() + t1);
    const auto grad_sim = (2.0 * g1.array() * g2.array() + t2) /
                          (g1.array().square() + g2.array().square() + t2);
    const auto pcm = pc1.array().max(pc2.array());
    const double den = pcm.sum();
    if (!(den > 0.0) || !std::isfinite(den)) return 1.0;
    return (grad_sim * pc_sim * pcm).sum() / den;
}

inline double fsim(const ColorImage& a, const ColorImage& b) {
    return fsim(luminance(a), luminance(b));
}

struct MetricsReport {
    double mse = 0.0;
    double psnr = 0.0;
    double ambe = 0.0;
    double entropy = 0.0;  // of the test image
    double ssim = 0.0;
    double gmsd = 0.0;
    double fsim = 0.0;
    double pcqi = 0.0;
};

inline MetricsReport compute_metrics(const ColorImage& ref,
                                     const ColorImage& test) {
    const Eigen::MatrixXd la = luminance(ref);
    const Eigen::MatrixXd lb = luminance(test);
    MetricsReport rep;
    rep.mse = mse(ref, test);
    rep.psnr = psnr_from_mse(rep.mse);
    rep.ambe = ambe(la, lb);
    rep.entropy = entropy(test);
    rep.ssim = ssim(la, lb);
    rep.gmsd = gmsd(la, lb);
    rep.fsim = fsim(la, lb);
    rep.pcqi = pcqi(la, lb);
    return rep;
}

}  // namespace scsa
