#include "crip/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace crip {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

int next_pnm_token(std::istream& in, const std::string& path) {
    // skips whitespace and '#' comments, returns the next non-negative integer
    while (in) {
        int ch = in.peek();
        if (ch == std::char_traits<char>::eof()) {
            break;
        } else if (ch == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(ch)) {
            in.get();
        } else {
            break;
        }
    }
    int value = -1;
    if (!(in >> value) || value < 0) fail(path, "malformed PGM header");
    return value;
}

GrayImage load_pgm(std::ifstream& in, const std::string& path, bool binary) {
    const int width = next_pnm_token(in, path);
    const int height = next_pnm_token(in, path);
    const int maxval = next_pnm_token(in, path);
    if (width < 1 || height < 1) fail(path, "bad PGM dimensions");
    if (maxval < 1 || maxval > 255) fail(path, "only 8-bit PGM is supported");

    const std::size_t count = static_cast<std::size_t>(width) * height;
    std::vector<double> data(count);
    if (binary) {
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> raw(count);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) fail(path, "truncated PGM pixel data");
        for (std::size_t i = 0; i < count; ++i) data[i] = raw[i];
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            int v;
            if (!(in >> v) || v < 0 || v > maxval) fail(path, "malformed PGM pixel data");
            data[i] = v;
        }
    }
    return GrayImage(width, height, std::move(data));
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* file = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (file) std::fclose(file);
    }
};

GrayImage load_png(const std::string& path) {
    PngReader rd;
    rd.file = std::fopen(path.c_str(), "rb");
    if (!rd.file) fail(path, "cannot open file");

    rd.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!rd.png) fail(path, "png reader allocation failed");
    rd.info = png_create_info_struct(rd.png);
    if (!rd.info) fail(path, "png info allocation failed");
    if (setjmp(png_jmpbuf(rd.png))) fail(path, "corrupt PNG data");

    png_init_io(rd.png, rd.file);
    png_read_info(rd.png, rd.info);

    png_set_expand(rd.png);    // palette -> rgb, low bit depths -> 8
    png_set_strip_16(rd.png);  // 16-bit channels -> 8
    png_set_strip_alpha(rd.png);
    png_read_update_info(rd.png, rd.info);

    const png_uint_32 width = png_get_image_width(rd.png, rd.info);
    const png_uint_32 height = png_get_image_height(rd.png, rd.info);
    const int channels = png_get_channels(rd.png, rd.info);
    if (channels != 1 && channels != 3) fail(path, "unsupported PNG channel layout");

    const std::size_t stride = png_get_rowbytes(rd.png, rd.info);
    std::vector<unsigned char> rowbuf(stride);
    std::vector<double> data(static_cast<std::size_t>(width) * height);
    for (png_uint_32 r = 0; r < height; ++r) {
        png_read_row(rd.png, rowbuf.data(), nullptr);
        double* out = data.data() + static_cast<std::size_t>(r) * width;
        if (channels == 1) {
            for (png_uint_32 c = 0; c < width; ++c) out[c] = rowbuf[c];
        } else {
            for (png_uint_32 c = 0; c < width; ++c) {
                const unsigned char* px = rowbuf.data() + 3 * c;
                out[c] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
            }
        }
    }
    png_read_end(rd.png, nullptr);
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(data));
}

void write_pgm_bytes(const std::string& path, int width, int height,
                     const std::vector<unsigned char>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(path, "cannot open file for writing");
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(path, "write failed");
}

}  // namespace

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open file");
    unsigned char magic[8] = {};
    in.read(reinterpret_cast<char*>(magic), 8);
    if (in.gcount() < 2) fail(path, "file too short to be an image");
    in.clear();
    in.seekg(0);

    if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '2')) {
        in.ignore(2);
        return load_pgm(in, path, magic[1] == '5');
    }
    static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};
    if (std::memcmp(magic, png_sig, 8) == 0) {
        in.close();
        return load_png(path);
    }
    fail(path, "unsupported image format (expected PGM or PNG)");
}

void save_pgm(const GrayImage& image, const std::string& path) {
    std::vector<unsigned char> bytes(image.pixel_count());
    const auto& data = image.data();
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const double v = std::clamp(data[i], 0.0, 255.0);
        bytes[i] = static_cast<unsigned char>(std::lround(v));
    }
    write_pgm_bytes(path, image.width(), image.height(), bytes);
}

void save_pgm(const CodeMap& map, const std::string& path) {
    std::vector<unsigned char> bytes(map.codes().begin(), map.codes().end());
    write_pgm_bytes(path, map.width(), map.height(), bytes);
}

}  // namespace crip
