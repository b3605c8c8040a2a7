#include "alocc/image.hpp"

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <png.h>

#include "alocc/error.hpp"

namespace alocc {

namespace {

Image8 decode_png_file(const std::string& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;

    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw FormatError("png: cannot read " + path + ": " + image.message);

    const bool color = (PNG_IMAGE_PIXEL_CHANNELS(image.format) >= 3);
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;

    Image8 out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.channels = color ? 3 : 1;
    out.pixels.resize(PNG_IMAGE_SIZE(image));

    if (!png_image_finish_read(&image, nullptr, out.pixels.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw FormatError("png: decode failed for " + path + ": " + msg);
    }
    return out;
}

int pnm_next_value(std::istream& in, const std::string& path) {
    // Skips whitespace and '#' comments between tokens.
    while (true) {
        int c = in.peek();
        if (c == EOF) throw FormatError("pnm: truncated header in " + path);
        if (c == '#') {
            std::string line;
            std::getline(in, line);
            continue;
        }
        if (std::isspace(c)) {
            in.get();
            continue;
        }
        break;
    }
    int v;
    if (!(in >> v)) throw FormatError("pnm: bad header value in " + path);
    return v;
}

Image8 decode_pnm_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("pnm: cannot open " + path);
    char p, kind;
    in.get(p);
    in.get(kind);
    if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6'))
        throw FormatError("pnm: unsupported magic in " + path);
    const bool color = (kind == '3' || kind == '6');
    const bool ascii = (kind == '2' || kind == '3');

    Image8 img;
    img.width = pnm_next_value(in, path);
    img.height = pnm_next_value(in, path);
    const int maxval = pnm_next_value(in, path);
    if (img.width < 1 || img.height < 1) throw FormatError("pnm: bad dimensions in " + path);
    if (maxval < 1 || maxval > 255) throw FormatError("pnm: only 8-bit maxval supported in " + path);
    img.channels = color ? 3 : 1;
    const size_t count = static_cast<size_t>(img.width) * img.height * img.channels;
    img.pixels.resize(count);

    if (ascii) {
        for (size_t i = 0; i < count; ++i) {
            int v;
            if (!(in >> v)) throw FormatError("pnm: truncated pixel data in " + path);
            img.pixels[i] = static_cast<uint8_t>(v);
        }
    } else {
        in.get(); // single whitespace after maxval
        in.read(reinterpret_cast<char*>(img.pixels.data()), static_cast<std::streamsize>(count));
        if (static_cast<size_t>(in.gcount()) != count)
            throw FormatError("pnm: truncated pixel data in " + path);
    }
    return img;
}

} // namespace

Image8 decode_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw FormatError("image: cannot open " + path);
    unsigned char sig[8] = {0};
    probe.read(reinterpret_cast<char*>(sig), 8);
    probe.close();

    if (png_sig_cmp(sig, 0, 8) == 0) return decode_png_file(path);
    if (sig[0] == 'P' && sig[1] >= '2' && sig[1] <= '6') return decode_pnm_file(path);
    throw FormatError("image: unrecognized format in " + path);
}

void write_pgm(const std::string& path, const Image8& img) {
    if (img.channels != 1) throw UsageError("write_pgm: grayscale images only");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("pgm: cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
}

void write_png(const std::string& path, const Image8& img) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width);
    image.height = static_cast<png_uint_32>(img.height);
    image.format = img.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.c_str(), 0, img.pixels.data(), 0, nullptr))
        throw FormatError("png: write failed for " + path + ": " + image.message);
}

} // namespace alocc
