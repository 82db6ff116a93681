#include "tubeseg/img_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

#include <json.hpp>

namespace tubeseg {

namespace {

using nlohmann::json;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::string& path, const char* mode) {
    FilePtr fp(std::fopen(path.c_str(), mode));
    if (!fp) throw DataError("cannot open file: " + path);
    return fp;
}

struct DecodedRaster {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 = gray, 3 = rgb
    std::vector<std::uint8_t> pixels;
};

void png_error_fn(png_structp png, png_const_charp msg) {
    (void)msg;
    longjmp(png_jmpbuf(png), 1);
}

void png_warn_fn(png_structp, png_const_charp) {}

DecodedRaster decode_png(const std::string& path) {
    FilePtr fp = open_file(path, "rb");

    unsigned char sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        throw DataError("not a PNG file: " + path);

    png_structp png =
        png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
    if (!png) throw DataError("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("libpng initialization failed");
    }

    DecodedRaster out;
    std::vector<png_bytep> row_ptrs;
    bool bad_depth = false;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        if (bad_depth) throw DataError("unsupported bit depth (expect 8-bit): " + path);
        throw DataError("corrupt or unreadable PNG: " + path);
    }

    png_init_io(png, fp.get());
    png_set_sig_bytes(png, 8);
    png_read_info(png, info);

    const int bit_depth = png_get_bit_depth(png, info);
    const int color_type = png_get_color_type(png, info);
    if (bit_depth == 16) {
        bad_depth = true;
        longjmp(png_jmpbuf(png), 1);
    }
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    if (out.channels != 1 && out.channels != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("unsupported PNG channel layout: " + path);
    }

    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height * out.channels);
    row_ptrs.resize(out.height);
    const std::size_t stride = static_cast<std::size_t>(out.width) * out.channels;
    for (int y = 0; y < out.height; ++y) row_ptrs[y] = out.pixels.data() + y * stride;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return out;
}

void encode_png(const std::string& path, int width, int height, int channels,
                const std::uint8_t* pixels) {
    FilePtr fp = open_file(path, "wb");

    png_structp png =
        png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_error_fn, png_warn_fn);
    if (!png) throw DataError("libpng initialization failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("libpng initialization failed");
    }

    std::vector<png_bytep> row_ptrs(height);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y)
        row_ptrs[y] = const_cast<std::uint8_t*>(pixels) + y * stride;

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("PNG write failed: " + path);
    }

    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

// Binary PGM (P5), maxval <= 255.
DecodedRaster decode_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);

    auto next_token = [&in, &path]() -> std::string {
        std::string tok;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {  // comment to end of line
                while ((c = in.get()) != EOF && c != '\n') {}
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty()) return tok;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        if (tok.empty()) throw DataError("truncated PGM header: " + path);
        return tok;
    };

    const std::string magic = next_token();
    if (magic != "P5") throw DataError("unsupported PGM variant (expect binary P5): " + path);

    DecodedRaster out;
    int maxval = 0;
    try {
        out.width = std::stoi(next_token());
        out.height = std::stoi(next_token());
        maxval = std::stoi(next_token());
    } catch (const std::exception&) {
        throw DataError("malformed PGM header: " + path);
    }
    if (out.width < 1 || out.height < 1) throw DataError("bad PGM dimensions: " + path);
    if (maxval < 1 || maxval > 255)
        throw DataError("unsupported bit depth (PGM maxval must be <= 255): " + path);

    out.channels = 1;
    out.pixels.resize(static_cast<std::size_t>(out.width) * out.height);
    in.read(reinterpret_cast<char*>(out.pixels.data()),
            static_cast<std::streamsize>(out.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(out.pixels.size()))
        throw DataError("truncated PGM pixel data: " + path);

    if (maxval != 255) {
        for (auto& v : out.pixels) {
            if (v > maxval) throw DataError("PGM pixel above maxval: " + path);
            v = static_cast<std::uint8_t>(std::lround(255.0 * v / maxval));
        }
    }
    return out;
}

bool has_png_signature(const std::string& path) {
    FilePtr fp = open_file(path, "rb");
    unsigned char sig[8];
    if (std::fread(sig, 1, 8, fp.get()) != 8) return false;
    return png_sig_cmp(sig, 0, 8) == 0;
}

json centerline_to_json(const Centerline& line) {
    json arr = json::array();
    for (const PixelCoord& p : line) arr.push_back(json::array({p.x, p.y}));
    return arr;
}

Centerline centerline_from_json(const json& arr, const std::string& path) {
    if (!arr.is_array() || arr.empty())
        throw DataError("centerline must be a non-empty JSON array: " + path);
    Centerline line;
    line.reserve(arr.size());
    for (const json& pt : arr) {
        if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number_integer() ||
            !pt[1].is_number_integer())
            throw DataError("centerline points must be [x, y] integer pairs: " + path);
        PixelCoord p{pt[0].get<int>(), pt[1].get<int>()};
        if (!line.empty() && p == line.back())
            throw DataError("centerline has repeated consecutive points: " + path);
        line.push_back(p);
    }
    return line;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw DataError("malformed JSON: " + path);
    return j;
}

}  // namespace

GridImage load_image(const std::string& path) {
    DecodedRaster raster = has_png_signature(path) ? decode_png(path) : decode_pgm(path);

    GridImage image(raster.width, raster.height);
    const std::size_t n = static_cast<std::size_t>(raster.width) * raster.height;
    if (raster.channels == 1) {
        for (std::size_t i = 0; i < n; ++i)
            image.data[i] = static_cast<float>(raster.pixels[i] / 255.0);
    } else {
        // ITU-R BT.601 luminance.
        for (std::size_t i = 0; i < n; ++i) {
            const double r = raster.pixels[3 * i + 0];
            const double g = raster.pixels[3 * i + 1];
            const double b = raster.pixels[3 * i + 2];
            image.data[i] = static_cast<float>((0.299 * r + 0.587 * g + 0.114 * b) / 255.0);
        }
    }
    return image;
}

void save_image(const GridImage& image, const std::string& path) {
    std::vector<std::uint8_t> bytes(image.data.size());
    for (std::size_t i = 0; i < image.data.size(); ++i) {
        const float v = std::min(1.0f, std::max(0.0f, image.data[i]));
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
    }
    encode_png(path, image.width, image.height, 1, bytes.data());
}

void save_mask(const BinaryMask& mask, const std::string& path) {
    std::vector<std::uint8_t> bytes(mask.labels.size());
    for (std::size_t i = 0; i < mask.labels.size(); ++i)
        bytes[i] = mask.labels[i] == Label::Foreground ? 255 : 0;
    encode_png(path, mask.width, mask.height, 1, bytes.data());
}

BinaryMask load_mask(const std::string& path) {
    DecodedRaster raster = decode_png(path);
    if (raster.channels != 1) throw DataError("mask PNG must be grayscale: " + path);
    BinaryMask mask(raster.width, raster.height);
    for (std::size_t i = 0; i < raster.pixels.size(); ++i)
        mask.labels[i] = raster.pixels[i] >= 128 ? Label::Foreground : Label::Background;
    return mask;
}

void save_centerline(const Centerline& line, const std::string& path) {
    if (line.empty()) throw std::invalid_argument("save_centerline: line must be non-empty");
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << centerline_to_json(line).dump();
    if (!out) throw DataError("write failed: " + path);
}

Centerline load_centerline(const std::string& path) {
    return centerline_from_json(load_json_file(path), path);
}

Centerline load_centerline(const std::string& path, int width, int height) {
    Centerline line = load_centerline(path);
    for (const PixelCoord& p : line) {
        if (p.x < 0 || p.x >= width || p.y < 0 || p.y >= height)
            throw DataError("centerline point (" + std::to_string(p.x) + "," +
                            std::to_string(p.y) + ") outside declared " +
                            std::to_string(width) + "x" + std::to_string(height) +
                            " raster: " + path);
    }
    return line;
}

void save_centerlines(const std::vector<Centerline>& lines, const std::string& path) {
    json arr = json::array();
    for (const Centerline& line : lines) {
        if (line.empty())
            throw std::invalid_argument("save_centerlines: lines must be non-empty");
        arr.push_back(centerline_to_json(line));
    }
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path);
    out << arr.dump();
    if (!out) throw DataError("write failed: " + path);
}

std::vector<Centerline> load_centerlines(const std::string& path) {
    json arr = load_json_file(path);
    if (!arr.is_array()) throw DataError("expected a JSON array of centerlines: " + path);
    std::vector<Centerline> lines;
    lines.reserve(arr.size());
    for (const json& entry : arr) lines.push_back(centerline_from_json(entry, path));
    return lines;
}

void save_rgb_png(const RgbImage& image, const std::string& path) {
    encode_png(path, image.width, image.height, 3, image.data.data());
}

}  // namespace tubeseg
