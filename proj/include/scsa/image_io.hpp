#pragma once

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "scsa/color.hpp"

namespace scsa {

// File-level failures (missing, unreadable, or malformed images); the CLI
// maps these to its I/O exit code.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

inline std::string lower_ext(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext;
}

inline unsigned char quantize(double x) {
    const double c = std::clamp(x, 0.0, 1.0);
    return static_cast<unsigned char>(std::lround(c * 255.0));
}

inline ColorImage from_rgb_bytes(const std::vector<unsigned char>& bytes,
                                 int width, int height) {
    ColorImage img;
    img.r.resize(height, width);
    img.g.resize(height, width);
    img.b.resize(height, width);
    std::size_t p = 0;
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) {
            img.r(i, j) = bytes[p++] / 255.0;
            img.g(i, j) = bytes[p++] / 255.0;
            img.b(i, j) = bytes[p++] / 255.0;
        }
    return img;
}

inline ColorImage read_png(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                             nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("failed to decode " + path);
    }
    png_init_io(png, fp.get());
    png_read_png(png, info,
                 PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_PACKING |
                     PNG_TRANSFORM_EXPAND | PNG_TRANSFORM_STRIP_ALPHA |
                     PNG_TRANSFORM_GRAY_TO_RGB,
                 nullptr);
    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    const int channels = static_cast<int>(png_get_channels(png, info));
    png_bytepp rows = png_get_rows(png, info);
    if (channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw IoError("unsupported PNG layout in " + path);
    }
    std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height * 3);
    for (int i = 0; i < height; ++i)
        std::memcpy(&bytes[static_cast<std::size_t>(i) * width * 3], rows[i],
                    static_cast<std::size_t>(width) * 3);
    png_destroy_read_struct(&png, &info, nullptr);
    return from_rgb_bytes(bytes, width, height);
}

inline void write_png(const std::string& path, const ColorImage& img) {
    const int width = img.width(), height = img.height();
    std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height * 3);
    std::size_t p = 0;
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) {
            bytes[p++] = quantize(img.r(i, j));
            bytes[p++] = quantize(img.g(i, j));
            bytes[p++] = quantize(img.b(i, j));
        }
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr,
                                              nullptr, nullptr);
    if (!png) throw IoError("libpng init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("libpng init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("failed to encode " + path);
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width),
                 static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int i = 0; i < height; ++i)
        rows[static_cast<std::size_t>(i)] =
            &bytes[static_cast<std::size_t>(i) * width * 3];
    png_set_rows(png, info, rows.data());
    png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
    png_destroy_write_struct(&png, &info);
}

inline int pnm_token(std::FILE* f) {
    int c;
    for (;;) {
        c = std::fgetc(f);
        if (c == '#') {
            while (c != EOF && c != '\n') c = std::fgetc(f);
        } else if (!std::isspace(c)) {
            break;
        }
    }
    if (c == EOF) return -1;
    int value = 0;
    while (c != EOF && std::isdigit(c)) {
        value = value * 10 + (c - '0');
        c = std::fgetc(f);
    }
    return value;
}

// Binary PPM (P6) and PGM (P5), 8-bit only. PGM becomes a gray ColorImage.
inline ColorImage read_pnm(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw IoError("cannot open " + path);
    char magic[3] = {0, 0, 0};
    if (std::fread(magic, 1, 2, fp.get()) != 2)
        throw IoError("truncated header in " + path);
    const bool color = (magic[0] == 'P' && magic[1] == '6');
    const bool gray = (magic[0] == 'P' && magic[1] == '5');
    if (!color && !gray) throw IoError("unsupported PNM magic in " + path);
    const int width = pnm_token(fp.get());
    const int height = pnm_token(fp.get());
    const int maxval = pnm_token(fp.get());
    if (width < 1 || height < 1) throw IoError("bad PNM dimensions in " + path);
    if (maxval != 255) throw IoError("only 8-bit PNM supported: " + path);
    const std::size_t count =
        static_cast<std::size_t>(width) * height * (color ? 3 : 1);
    std::vector<unsigned char> bytes(count);
    if (std::fread(bytes.data(), 1, count, fp.get()) != count)
        throw IoError("truncated pixel data in " + path);
    if (color) return from_rgb_bytes(bytes, width, height);
    ColorImage img;
    img.r.resize(height, width);
    std::size_t p = 0;
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) img.r(i, j) = bytes[p++] / 255.0;
    img.g = img.r;
    img.b = img.r;
    return img;
}

inline void write_pnm(const std::string& path, const ColorImage& img,
                      bool gray) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw IoError("cannot write " + path);
    const int width = img.width(), height = img.height();
    std::fprintf(fp.get(), "%s\n%d %d\n255\n", gray ? "P5" : "P6", width,
                 height);
    std::vector<unsigned char> bytes;
    bytes.reserve(static_cast<std::size_t>(width) * height * (gray ? 1 : 3));
    for (int i = 0; i < height; ++i)
        for (int j = 0; j < width; ++j) {
            if (gray) {
                const double v =
                    std::max(img.r(i, j), std::max(img.g(i, j), img.b(i, j)));
                bytes.push_back(quantize(v));
            } else {
                bytes.push_back(quantize(img.r(i, j)));
                bytes.push_back(quantize(img.g(i, j)));
                bytes.push_back(quantize(img.b(i, j)));
            }
        }
    if (std::fwrite(bytes.data(), 1, bytes.size(), fp.get()) != bytes.size())
        throw IoError("short write to " + path);
}

}  // namespace detail

inline ColorImage read_image(const std::string& path) {
    const std::string ext = detail::lower_ext(path);
    if (ext == "png") return detail::read_png(path);
    if (ext == "ppm" || ext == "pgm") return detail::read_pnm(path);
    throw IoError("unsupported image format: " + path);
}

inline void write_image(const std::string& path, const ColorImage& img) {
    detail::validate_color(img);
    const std::string ext = detail::lower_ext(path);
    if (ext == "png") return detail::write_png(path, img);
    if (ext == "ppm") return detail::write_pnm(path, img, false);
    if (ext == "pgm") return detail::write_pnm(path, img, true);
    throw IoError("unsupported image format: " + path);
}

// Box-filter downsample so that max(width, height) <= max_dim; images already
// small enough pass through unchanged. Trailing partial blocks average over
// their actual pixel count.
inline ColorImage box_downsample(const ColorImage& img, int max_dim) {
    detail::validate_color(img);
    if (max_dim < 1) throw std::invalid_argument("box_downsample: max_dim must be >= 1");
    const int w = img.width(), h = img.height();
    const int largest = std::max(w, h);
    if (largest <= max_dim) return img;
    const int f = (largest + max_dim - 1) / max_dim;
    const int ow = (w + f - 1) / f, oh = (h + f - 1) / f;
    ColorImage out;
    out.r.resize(oh, ow);
    out.g.resize(oh, ow);
    out.b.resize(oh, ow);
    for (int i = 0; i < oh; ++i)
        for (int j = 0; j < ow; ++j) {
            const int i0 = i * f, j0 = j * f;
            const int i1 = std::min(h, i0 + f), j1 = std::min(w, j0 + f);
            const double n = static_cast<double>(i1 - i0) * (j1 - j0);
            double sr = 0.0, sg = 0.0, sb = 0.0;
            for (int u = i0; u < i1; ++u)
                for (int v = j0; v < j1; ++v) {
                    sr += img.r(u, v);
                    sg += img.g(u, v);
                    sb += img.b(u, v);
                }
            out.r(i, j) = sr / n;
            out.g(i, j) = sg / n;
            out.b(i, j) = sb / n;
        }
    return out;
}

}  // namespace scsa
