#include "potsynth/image.hpp"

#include "potsynth/error.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

namespace potsynth {

Bitmap::Bitmap(int width, int height) : width_(width), height_(height) {
    if (width < 2 || height < 2)
        throw Error(ErrorCode::InvalidInput, "bitmap must be at least 2x2, got " + std::to_string(width) + "x" +
                                                 std::to_string(height));
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
}

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error(ErrorCode::InvalidInput, "negative image size");
    data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill[0];
        data_[i + 1] = fill[1];
        data_[i + 2] = fill[2];
    }
}

RgbImage RgbImage::crop(int x0, int y0, int w, int h) const {
    if (x0 < 0 || y0 < 0 || w < 0 || h < 0 || x0 + w > width_ || y0 + h > height_)
        throw Error(ErrorCode::InvalidInput, "crop rectangle outside image");
    RgbImage out(w, h);
    for (int r = 0; r < h; ++r) {
        const auto* src = &data_[index(y0 + r, x0)];
        std::copy(src, src + static_cast<std::ptrdiff_t>(w) * 3, &out.data_[out.index(r, 0)]);
    }
    return out;
}

namespace {

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct FileCloser {
    void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Decodes to 8-bit RGB regardless of source format.
RgbImage decode_png_file(const std::filesystem::path& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw Error(ErrorCode::Io, "cannot open " + path.string());

    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw Error(ErrorCode::Io, "png_create_read_struct failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw Error(ErrorCode::Io, "png_create_info_struct failed");
    if (setjmp(png_jmpbuf(g.png))) throw Error(ErrorCode::Io, "corrupt PNG: " + path.string());

    png_init_io(g.png, file.get());
    png_read_info(g.png, g.info);
    png_set_expand(g.png);
    png_set_strip_16(g.png);
    png_set_strip_alpha(g.png);
    png_set_gray_to_rgb(g.png);
    png_set_packing(g.png);
    png_read_update_info(g.png, g.info);

    const int w = static_cast<int>(png_get_image_width(g.png, g.info));
    const int h = static_cast<int>(png_get_image_height(g.png, g.info));
    if (png_get_rowbytes(g.png, g.info) != static_cast<png_size_t>(w) * 3)
        throw Error(ErrorCode::Io, "unexpected PNG layout: " + path.string());

    RgbImage img(w, h);
    std::vector<png_bytep> rows(static_cast<std::size_t>(h));
    for (int r = 0; r < h; ++r) rows[static_cast<std::size_t>(r)] = img.data().data() + static_cast<std::size_t>(r) * w * 3;
    png_read_image(g.png, rows.data());
    png_read_end(g.png, nullptr);
    return img;
}

// Next PBM header token, skipping whitespace and '#' comments.
std::string pbm_token(std::istream& in) {
    std::string tok;
    while (in) {
        int c = in.peek();
        if (c == '#') {
            std::string skip;
            std::getline(in, skip);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    in >> tok;
    return tok;
}

Bitmap read_pbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    const std::string magic = pbm_token(in);
    if (magic != "P1" && magic != "P4") throw Error(ErrorCode::InvalidInput, "not a PBM file: " + path.string());
    const int w = std::stoi(pbm_token(in));
    const int h = std::stoi(pbm_token(in));
    Bitmap bm(w, h);
    if (magic == "P1") {
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                char ch = 0;
                do {
                    if (!in.get(ch)) throw Error(ErrorCode::InvalidInput, "truncated PBM: " + path.string());
                    if (ch == '#') {
                        std::string skip;
                        std::getline(in, skip);
                        ch = ' ';
                    }
                } while (ch != '0' && ch != '1');
                bm.set(r, c, ch == '1');
            }
    } else {
        in.get();  // single whitespace after header
        const int stride = (w + 7) / 8;
        std::vector<char> row(static_cast<std::size_t>(stride));
        for (int r = 0; r < h; ++r) {
            if (!in.read(row.data(), stride)) throw Error(ErrorCode::InvalidInput, "truncated PBM: " + path.string());
            for (int c = 0; c < w; ++c)
                bm.set(r, c, (static_cast<unsigned char>(row[static_cast<std::size_t>(c / 8)]) >> (7 - c % 8)) & 1);
        }
    }
    return bm;
}

void write_callback(png_structp png, png_bytep data, png_size_t length) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + length);
}

void flush_callback(png_structp) {}

}  // namespace

Bitmap read_bitmap(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw Error(ErrorCode::Io, "cannot open " + path.string());
    char magic[8] = {};
    probe.read(magic, 8);
    probe.close();
    if (png_sig_cmp(reinterpret_cast<png_const_bytep>(magic), 0, 8) != 0) return read_pbm(path);

    const RgbImage rgb = decode_png_file(path);
    Bitmap bm(rgb.width(), rgb.height());
    for (int r = 0; r < rgb.height(); ++r)
        for (int c = 0; c < rgb.width(); ++c) {
            const Rgb p = rgb.at(r, c);
            // integer weights keep gray 128 exactly on the threshold
            const int lum = 299 * p[0] + 587 * p[1] + 114 * p[2];
            bm.set(r, c, lum < 128000);
        }
    return bm;
}

void write_pbm(const Bitmap& bitmap, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << "P1\n" << bitmap.width() << ' ' << bitmap.height() << '\n';
    for (int r = 0; r < bitmap.height(); ++r) {
        for (int c = 0; c < bitmap.width(); ++c) out << (bitmap.at(r, c) ? '1' : '0');
        out << '\n';
    }
}

RgbImage read_png(const std::filesystem::path& path) { return decode_png_file(path); }

std::vector<std::uint8_t> encode_png(const RgbImage& image) {
    std::vector<std::uint8_t> bytes;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw Error(ErrorCode::Io, "png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw Error(ErrorCode::Io, "png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(ErrorCode::Io, "PNG encoding failed");
    }
    png_set_write_fn(png, &bytes, write_callback, flush_callback);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width()), static_cast<png_uint_32>(image.height()), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    for (int r = 0; r < image.height(); ++r)
        png_write_row(png, image.data().data() + static_cast<std::size_t>(r) * image.width() * 3);
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return bytes;
}

void write_png(const RgbImage& image, const std::filesystem::path& path) {
    const auto bytes = encode_png(image);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

}  // namespace potsynth
