#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <cstring>

namespace scsa {

inline std::uint64_t fnv1a(const void* data, std::size_t n,
                           std::uint64_t h = 1469598103934665603ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

// Content hash of a dense matrix: dimensions plus the raw bytes of the
// coefficients in storage order.
inline std::uint64_t matrix_hash(const Eigen::MatrixXd& m) {
    const std::int64_t dims[2] = {static_cast<std::int64_t>(m.rows()),
                                  static_cast<std::int64_t>(m.cols())};
    std::uint64_t h = fnv1a(dims, sizeof(dims));
    return fnv1a(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()), h);
}

}  // namespace scsa
