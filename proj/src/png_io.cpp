#include "vineprune/png_io.hpp"

#include <cstdio>
#include <memory>

#include <png.h>

#include "vineprune/errors.hpp"

namespace vineprune {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

} // namespace

DepthImage read_depth_png(const std::string& path, int expected_width, int expected_height) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw UsageError("cannot open depth image: " + path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UsageError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UsageError("failed to decode PNG: " + path);
    }

    png_init_io(png, file.get());
    png_read_info(png, info);

    const png_uint_32 width = png_get_image_width(png, info);
    const png_uint_32 height = png_get_image_height(png, info);
    const int color_type = png_get_color_type(png, info);
    const int bit_depth = png_get_bit_depth(png, info);

    if (color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw UsageError("depth image must be single-channel grayscale: " + path);
    }
    if (bit_depth < 16) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);

    DepthImage depth{int(width), int(height)};
    const bool wide = bit_depth == 16;
    std::vector<uint8_t> row(size_t(width) * (wide ? 2 : 1));
    for (png_uint_32 y = 0; y < height; ++y) {
        png_read_row(png, row.data(), nullptr);
        for (png_uint_32 x = 0; x < width; ++x) {
            uint16_t v = wide ? uint16_t((row[2 * x] << 8) | row[2 * x + 1])  // PNG is big-endian
                              : uint16_t(row[x]);
            depth.set(int(x), int(y), v);
        }
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    if ((expected_width >= 0 && depth.width() != expected_width) ||
        (expected_height >= 0 && depth.height() != expected_height))
        throw DimensionError("depth image is " + std::to_string(depth.width()) + "x" +
                             std::to_string(depth.height()) + " but the annotation raster is " +
                             std::to_string(expected_width) + "x" + std::to_string(expected_height));
    return depth;
}

void write_depth_png(const std::string& path, const DepthImage& depth) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw UsageError("cannot write depth image: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw UsageError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw UsageError("failed to encode PNG: " + path);
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, depth.width(), depth.height(), 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<uint8_t> row(size_t(depth.width()) * 2);
    for (int y = 0; y < depth.height(); ++y) {
        for (int x = 0; x < depth.width(); ++x) {
            uint16_t v = depth.at(x, y);
            row[2 * x] = uint8_t(v >> 8);
            row[2 * x + 1] = uint8_t(v & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void write_rgb_png(const std::string& path, const RgbImage& image) {
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw UsageError("cannot write image: " + path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw UsageError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw UsageError("failed to encode PNG: " + path);
    }

    png_init_io(png, file.get());
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < image.height; ++y)
        png_write_row(png, const_cast<uint8_t*>(&image.data[size_t(y) * image.width * 3]));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

} // namespace vineprune
