#include "levelforge/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace levelforge {

namespace {

constexpr char kMagic[4] = {'L', 'V', 'L', 'F'};
constexpr std::uint16_t kVersion = 1;

template <class T>
void put_le(std::ostream& os, T v) {
    char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(buf, sizeof(T));
}

template <class T>
T get_le(std::istream& is) {
    unsigned char buf[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) throw FormatError("LVLF: truncated stream");
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(buf[i]) << (8 * i);
    return v;
}

std::string next_token(std::istream& is) {
    std::string tok;
    while (is >> tok) {
        if (tok[0] == '#') {
            std::string rest;
            std::getline(is, rest);
            continue;
        }
        return tok;
    }
    throw FormatError("PGM: unexpected end of input");
}

}  // namespace

void write_lvlf(std::ostream& os, const Matrix& m) {
    os.write(kMagic, 4);
    put_le<std::uint16_t>(os, kVersion);
    put_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
    put_le<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(m(i, j)));
    }
    if (!os) throw FormatError("LVLF: write failed");
}

Matrix read_lvlf(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || !std::equal(magic, magic + 4, kMagic)) throw FormatError("LVLF: bad magic bytes");
    const auto version = get_le<std::uint16_t>(is);
    if (version != kVersion) throw FormatError("LVLF: unsupported version " + std::to_string(version));
    const auto rows = get_le<std::uint64_t>(is);
    const auto cols = get_le<std::uint64_t>(is);
    if (rows > (1ULL << 32) || cols > (1ULL << 32)) throw FormatError("LVLF: implausible dimensions");
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = std::bit_cast<double>(get_le<std::uint64_t>(is));
    }
    return m;
}

void write_matrix_market(std::ostream& os, const Matrix& m) {
    os << "%%MatrixMarket matrix array real general\n" << m.rows() << ' ' << m.cols() << '\n';
    char buf[32];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g\n", m(i, j));
            os << buf;
        }
    }
    if (!os) throw FormatError("MatrixMarket: write failed");
}

Matrix read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("MatrixMarket: empty input");
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" || format != "array" || field != "real" ||
        symmetry != "general") {
        throw FormatError("MatrixMarket: only 'matrix array real general' is supported");
    }
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream dims(line);
    Eigen::Index rows = 0, cols = 0;
    if (!(dims >> rows >> cols) || rows < 0 || cols < 0) throw FormatError("MatrixMarket: bad size line");
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            if (!(is >> m(i, j))) throw FormatError("MatrixMarket: truncated payload");
        }
    }
    return m;
}

void write_pgm(std::ostream& os, const Vector& image, ImageDims dims) {
    if (image.size() != dims.pixels()) throw DimensionMismatch("write_pgm: image size does not match dims");
    os << "P2\n" << dims.width << ' ' << dims.height << "\n255\n";
    for (int r = 0; r < dims.height; ++r) {
        for (int c = 0; c < dims.width; ++c) {
            const double v = std::clamp(image(static_cast<Eigen::Index>(r) * dims.width + c), 0.0, 1.0);
            os << static_cast<int>(std::lround(255.0 * v)) << (c + 1 < dims.width ? ' ' : '\n');
        }
    }
    if (!os) throw FormatError("PGM: write failed");
}

Vector read_pgm(std::istream& is, ImageDims& dims) {
    if (next_token(is) != "P2") throw FormatError("PGM: only P2 is supported");
    dims.width = std::stoi(next_token(is));
    dims.height = std::stoi(next_token(is));
    const int maxval = std::stoi(next_token(is));
    if (dims.width < 1 || dims.height < 1 || maxval < 1) throw FormatError("PGM: bad header");
    Vector u(dims.pixels());
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = std::stod(next_token(is)) / maxval;
    return u;
}

}  // namespace levelforge
