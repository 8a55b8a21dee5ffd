#include "levelforge/io.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <sstream>

using namespace levelforge;

TEST_CASE("LVLF round trip and layout") {
    Matrix m(2, 3);
    m << 1.0, -2.5, 3.0, 0.0, 1e-300, -0.0;
    std::ostringstream os;
    write_lvlf(os, m);
    const std::string bytes = os.str();
    REQUIRE(bytes.size() == 4 + 2 + 8 + 8 + 6 * 8);
    CHECK(bytes.substr(0, 4) == "LVLF");
    CHECK(bytes[4] == 1);
    CHECK(bytes[5] == 0);
    CHECK(bytes[6] == 2);
    CHECK(bytes[14] == 3);
    // first payload entry is 1.0 = 0x3ff0000000000000, little-endian
    CHECK(static_cast<unsigned char>(bytes[22 + 7]) == 0x3f);
    CHECK(static_cast<unsigned char>(bytes[22 + 6]) == 0xf0);
    // second entry in row-major order is -2.5
    CHECK(static_cast<unsigned char>(bytes[30 + 7]) == 0xc0);
    std::istringstream is(bytes);
    const Matrix back = read_lvlf(is);
    CHECK(back == m);
}

TEST_CASE("LVLF rejects malformed input") {
    std::istringstream bad_magic("LVLX\x01");
    CHECK_THROWS_AS((void)read_lvlf(bad_magic), FormatError);
    std::ostringstream os;
    write_lvlf(os, Matrix::Ones(2, 2));
    const std::string s = os.str();
    std::istringstream truncated(s.substr(0, s.size() - 3));
    CHECK_THROWS_AS((void)read_lvlf(truncated), FormatError);
    std::string v2 = s;
    v2[4] = 2;
    std::istringstream wrong_version(v2);
    CHECK_THROWS_AS((void)read_lvlf(wrong_version), FormatError);
}

TEST_CASE("Matrix Market round trip") {
    std::mt19937_64 gen(3);
    const Matrix m = Matrix::NullaryExpr(4, 3, [&] { return reftest::randn(gen, 1)(0); });
    std::ostringstream os;
    write_matrix_market(os, m);
    CHECK(os.str().rfind("%%MatrixMarket matrix array real general\n4 3\n", 0) == 0);
    std::istringstream is(os.str());
    CHECK(read_matrix_market(is) == m);
}

TEST_CASE("Matrix Market comments and errors") {
    std::istringstream ok("%%MatrixMarket matrix array real general\n% note\n2 1\n1.5\n-2\n");
    const Matrix m = read_matrix_market(ok);
    CHECK(m(0, 0) == 1.5);
    CHECK(m(1, 0) == -2.0);
    std::istringstream coord("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1.0\n");
    CHECK_THROWS_AS((void)read_matrix_market(coord), FormatError);
    std::istringstream short_payload("%%MatrixMarket matrix array real general\n2 2\n1\n2\n");
    CHECK_THROWS_AS((void)read_matrix_market(short_payload), FormatError);
}

TEST_CASE("PGM round trip with clamping") {
    Vector img(6);
    img << 0.0, 0.5, 1.0, -1.0, 2.0, 0.2;
    std::ostringstream os;
    write_pgm(os, img, {2, 3});
    CHECK(os.str() == "P2\n3 2\n255\n0 128 255\n0 255 51\n");
    std::istringstream is(os.str());
    ImageDims d{};
    const Vector back = read_pgm(is, d);
    CHECK(d.height == 2);
    CHECK(d.width == 3);
    CHECK(back(1) == doctest::Approx(128.0 / 255.0));
    CHECK(back(3) == 0.0);
    CHECK(back(4) == 1.0);
    CHECK_THROWS_AS(write_pgm(os, img, {2, 2}), DimensionMismatch);
    std::istringstream p5("P5\n1 1\n255\n");
    CHECK_THROWS_AS((void)read_pgm(p5, d), FormatError);
}
