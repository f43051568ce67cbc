#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "scsa/parallel.hpp"

namespace scsa {

// Uniform periodic grid on [0, 2*pi) with q samples.
struct Grid {
    int q = 0;
    double delta = 0.0;
};

inline Grid make_grid(int q) {
    if (q < 2) throw std::invalid_argument("make_grid: q must be >= 2");
    return Grid{q, 2.0 * std::numbers::pi / static_cast<double>(q)};
}

// Periodic Fourier pseudospectral second-derivative matrix on q uniform
// samples of [0, 2*pi). Circulant; the first column follows the closed forms
// for even and odd q, offsets are mirrored so the matrix is symmetric to the
// last bit, and the diagonal is the negated off-diagonal sum so constants are
// annihilated exactly. Eigenvalues are -k^2 for the wavenumbers resolvable
// at this q.
inline Eigen::MatrixXd fourier_d2(int q) {
    const Grid grid = make_grid(q);
    std::vector<double> c(static_cast<std::size_t>(q), 0.0);
    const bool even = (q % 2 == 0);
    for (int n = 1; n <= q / 2; ++n) {
        const double s = std::sin(0.5 * n * grid.delta);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        const double v = even
            ? -sign / (2.0 * s * s)
            : -sign * std::cos(0.5 * n * grid.delta) / (2.0 * s * s);
        c[static_cast<std::size_t>(n)] = v;
        c[static_cast<std::size_t>(q - n)] = v;
    }
    double diag = 0.0;
    for (int n = 1; n < q; ++n) diag -= c[static_cast<std::size_t>(n)];
    c[0] = diag;

    Eigen::MatrixXd d2(q, q);
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            d2(i, j) = c[static_cast<std::size_t>(((i - j) % q + q) % q)];
    return d2;
}

// Negative part of the spectrum of M = -h^2 D2 - diag(potential / 2).
// Eigenvalues ascend and are strictly below the cutoff -eps; eigenfunction
// columns carry the delta-weighted norm delta * sum(psi^2) = 1 and a
// canonical sign (first nonvanishing component positive).
struct LineSpectrum {
    double h = 0.0;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenfunctions;
    int m() const { return static_cast<int>(eigenvalues.size()); }
};

namespace detail {

inline void validate_potential(const Eigen::VectorXd& potential) {
    for (Eigen::Index i = 0; i < potential.size(); ++i) {
        const double p = potential[i];
        if (!std::isfinite(p))
            throw std::invalid_argument("line_spectrum: non-finite potential entry");
        if (p < 0.0)
            throw std::invalid_argument("line_spectrum: negative potential entry");
    }
}

}  // namespace detail

inline LineSpectrum line_spectrum(const Eigen::VectorXd& potential, double h,
                                  const Eigen::MatrixXd& d2) {
    const int q = static_cast<int>(potential.size());
    if (q < 2) throw std::invalid_argument("line_spectrum: potential length must be >= 2");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("line_spectrum: h must be positive and finite");
    if (d2.rows() != q || d2.cols() != q)
        throw std::invalid_argument("line_spectrum: D2 size mismatch");
    detail::validate_potential(potential);

    Eigen::MatrixXd m = (-h * h) * d2;
    m.diagonal() -= 0.5 * potential;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("line_spectrum: eigensolver did not converge");

    const double eps = 1e-10 * std::max(1.0, potential.cwiseAbs().maxCoeff());
    const Eigen::VectorXd& all = solver.eigenvalues();
    int count = 0;
    while (count < q && all[count] < -eps) ++count;

    LineSpectrum out;
    out.h = h;
    out.eigenvalues = all.head(count);
    out.eigenfunctions = solver.eigenvectors().leftCols(count);

    const double delta = 2.0 * std::numbers::pi / static_cast<double>(q);
    const double rescale = 1.0 / std::sqrt(delta);
    for (int k = 0; k < count; ++k) {
        auto col = out.eigenfunctions.col(k);
        const double vmax = col.cwiseAbs().maxCoeff();
        double lead = 0.0;
        for (int i = 0; i < q; ++i) {
            if (std::abs(col[i]) > 1e-12 * vmax) { lead = col[i]; break; }
        }
        const double flip = (lead < 0.0) ? -1.0 : 1.0;
        col *= flip * rescale;
    }
    return out;
}

inline LineSpectrum line_spectrum(const Eigen::VectorXd& potential, double h) {
    return line_spectrum(potential, h, fourier_d2(static_cast<int>(potential.size())));
}

// Row and column spectra of one image. rows[i] lives on a grid of length
// ncols (the i-th image row as potential); cols[j] on a grid of length nrows.
struct ImageSpectra {
    double h = 0.0;
    int nrows = 0;
    int ncols = 0;
    std::vector<LineSpectrum> rows;
    std::vector<LineSpectrum> cols;
};

// Per-line decomposition; rectangular images are fine since every line is an
// independent 1D problem. The 2q solves are parallelized with slot writes, so
// the result does not depend on scheduling.
inline ImageSpectra decompose_lines(const Eigen::MatrixXd& image, double h,
                                    unsigned jobs = 0) {
    const int nrows = static_cast<int>(image.rows());
    const int ncols = static_cast<int>(image.cols());
    if (nrows < 2 || ncols < 2)
        throw std::invalid_argument("decompose_lines: image must be at least 2x2");
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("decompose_lines: h must be positive and finite");

    const Eigen::MatrixXd d2_row = fourier_d2(ncols);
    const Eigen::MatrixXd d2_col = (nrows == ncols) ? d2_row : fourier_d2(nrows);

    ImageSpectra sp;
    sp.h = h;
    sp.nrows = nrows;
    sp.ncols = ncols;
    sp.rows.resize(static_cast<std::size_t>(nrows));
    sp.cols.resize(static_cast<std::size_t>(ncols));

    parallel_for(static_cast<std::size_t>(nrows + ncols), [&](std::size_t t) {
        if (t < static_cast<std::size_t>(nrows)) {
            const Eigen::VectorXd line = image.row(static_cast<Eigen::Index>(t)).transpose();
            sp.rows[t] = line_spectrum(line, h, d2_row);
        } else {
            const std::size_t j = t - static_cast<std::size_t>(nrows);
            const Eigen::VectorXd line = image.col(static_cast<Eigen::Index>(j));
            sp.cols[j] = line_spectrum(line, h, d2_col);
        }
    }, jobs);
    return sp;
}

inline ImageSpectra decompose_image(const Eigen::MatrixXd& image, double h,
                                    unsigned jobs = 0) {
    if (image.rows() != image.cols())
        throw std::invalid_argument("decompose_image: image must be square");
    return decompose_lines(image, h, jobs);
}

}  // namespace scsa
