#include "segface/pgm.hpp"

#include <fstream>
#include <stdexcept>
#include <string>

namespace segface {

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
        } else if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            break;
        }
    }
    while ((c = in.get()) != EOF) {
        if (std::isspace(c) || c == '#') {
            if (c == '#') {
                while ((c = in.get()) != EOF && c != '\n') {}
            }
            break;
        }
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_pgm: cannot open " + path.string());
    if (next_token(in) != "P5") throw std::runtime_error("read_pgm: not a binary PGM (P5): " + path.string());
    int w = 0, h = 0, maxval = 0;
    try {
        w = std::stoi(next_token(in));
        h = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw std::runtime_error("read_pgm: malformed header in " + path.string());
    }
    if (w <= 0 || h <= 0) throw std::runtime_error("read_pgm: bad dimensions in " + path.string());
    if (maxval != 255) throw std::runtime_error("read_pgm: unsupported maxval (expected 255) in " + path.string());
    GrayImage img(w, h);
    in.read(reinterpret_cast<char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
        throw std::runtime_error("read_pgm: truncated pixel data in " + path.string());
    return img;
}

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    if (img.empty()) throw std::invalid_argument("write_pgm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_pgm: cannot open " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()), static_cast<std::streamsize>(img.data.size()));
    if (!out) throw std::runtime_error("write_pgm: write failed for " + path.string());
}

}  // namespace segface
