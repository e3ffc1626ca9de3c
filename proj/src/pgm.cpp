#include "pdla/pgm.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace pdla {

PgmWriteInfo write_pgm(const RealField& image, const std::string& path, int maxval) {
    if (maxval != 255 && maxval != 65535)
        throw std::invalid_argument("write_pgm: maxval must be 255 or 65535");
    PgmWriteInfo info;

    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("write_pgm: cannot open " + tmp);
        out << "P5\n"
            << image.shape().cols << " " << image.shape().rows << "\n"
            << maxval << "\n";
        for (std::size_t i = 0; i < image.size(); ++i) {
            double v = image[i];
            if (v < 0.0 || v > 1.0) {
                info.clamped = true;
                v = std::clamp(v, 0.0, 1.0);
            }
            // nearbyint under the default rounding mode is round-half-even
            const long q = std::lround(std::nearbyint(v * maxval));
            if (maxval == 255) {
                out.put(static_cast<char>(q & 0xFF));
            } else {
                out.put(static_cast<char>((q >> 8) & 0xFF));
                out.put(static_cast<char>(q & 0xFF));
            }
        }
    }
    std::filesystem::rename(tmp, path);
    return info;
}

namespace {

int next_pgm_token(std::istream& in) {
    // skips whitespace and '#' comments, returns a nonnegative integer
    for (;;) {
        int c = in.peek();
        if (c == EOF) throw std::runtime_error("read_pgm: truncated header");
        if (std::isspace(c)) {
            in.get();
        } else if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else {
            break;
        }
    }
    int value = 0;
    if (!(in >> value) || value < 0)
        throw std::runtime_error("read_pgm: malformed header token");
    return value;
}

}  // namespace

RealField read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] != 'P' || magic[1] != '5')
        throw std::runtime_error("read_pgm: not a binary PGM (P5) file: " + path);
    const int w = next_pgm_token(in);
    const int h = next_pgm_token(in);
    const int maxval = next_pgm_token(in);
    if (w <= 0 || h <= 0 || (maxval != 255 && maxval != 65535))
        throw std::runtime_error("read_pgm: unsupported header in " + path);
    in.get();  // single whitespace before the raster

    RealField img({static_cast<std::size_t>(h), static_cast<std::size_t>(w)});
    const double inv = 1.0 / static_cast<double>(maxval);
    for (std::size_t i = 0; i < img.size(); ++i) {
        int hi = in.get();
        if (hi == EOF) throw std::runtime_error("read_pgm: truncated raster");
        long q = hi;
        if (maxval == 65535) {
            int lo = in.get();
            if (lo == EOF) throw std::runtime_error("read_pgm: truncated raster");
            q = (q << 8) | lo;
        }
        img[i] = static_cast<double>(q) * inv;
    }
    return img;
}

}  // namespace pdla
