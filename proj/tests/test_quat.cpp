#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <sstream>

#include "oracle.hpp"
#include "qjorg/quat.hpp"

using namespace qjorg;

namespace {

bool bitwise_equal(const Quaternion& p, const Quaternion& q) { return std::memcmp(&p, &q, sizeof(Quaternion)) == 0; }

}  // namespace

TEST_CASE("basis products") {
    const auto i = Quaternion::i();
    const auto j = Quaternion::j();
    const auto k = Quaternion::k();
    CHECK(i * j == k);
    CHECK(j * i == -k);
    CHECK(j * k == i);
    CHECK(k * j == -i);
    CHECK(k * i == j);
    CHECK(i * i == Quaternion{-1});
    CHECK(i * j * k == Quaternion{-1});
}

TEST_CASE("multiplication examples") {
    const Quaternion q{0.3, -1.2, 2.5, 0.7};
    CHECK(q * Quaternion{1} == q);
    const Quaternion p{2, 3, 0, 0};
    CHECK(p * Quaternion::j() == Quaternion{0, 0, 2, 3});
    CHECK(p * Quaternion::j() == Quaternion::j() * conj(p));
}

TEST_CASE("re, im and conj") {
    const Quaternion q{1.5, -2, 0.25, 4};
    CHECK(re(q) + im(q) == q);
    CHECK(conj(q) == Quaternion{re(q)} - im(q));
    const Quaternion qq = q * conj(q);
    CHECK(qq.w == doctest::Approx(norm2(q)).epsilon(1e-15));
    CHECK(qq.x == 0.0);
    CHECK(qq.y == 0.0);
    CHECK(qq.z == 0.0);
    CHECK(norm(Quaternion{}) == 0.0);
    CHECK(norm(Quaternion{0, 3, 0, 4}) == 5.0);
}

TEST_CASE("inverse") {
    CHECK(inverse(Quaternion{0, 2, 0, 0}) == Quaternion{0, -0.5, 0, 0});
    CHECK(inverse(Quaternion{1}) == Quaternion{1});
    CHECK_THROWS_AS(inverse(Quaternion{}), std::domain_error);
    CHECK_THROWS_WITH(inverse(Quaternion{}), "non-invertible quaternion");

    oracle::Rng rng(11);
    for (int n = 0; n < 1000; ++n) {
        const Quaternion q = rng.quat(std::exp(rng.uniform(-3, 3)));
        CHECK(norm(q * inverse(q) - Quaternion{1}) < 1e-12);
        CHECK(oracle::entry_dist(inverse(q), oracle::inv(q)) <= 1e-12 * (1 + norm(inverse(q))));
    }
}

TEST_CASE("similarity") {
    CHECK(similar(Quaternion::i(), Quaternion::j()));
    const Quaternion q{0.4, 1, -2, 0.5};
    CHECK(similar(q, q));
    CHECK_FALSE(similar(Quaternion{1}, Quaternion{-1}));
    CHECK_FALSE(similar(Quaternion::i(), 2.0 * Quaternion::j()));

    oracle::Rng rng(12);
    for (int n = 0; n < 1000; ++n) {
        const Quaternion p = rng.quat();
        const Quaternion c = rng.quat();
        CHECK(similar(inverse(c) * p * c, p));
    }
}

TEST_CASE("arg") {
    CHECK(arg(Quaternion{1}) == 0.0);
    CHECK(arg(Quaternion::i()) == doctest::Approx(std::numbers::pi / 2));
    CHECK(arg(Quaternion{1, 1, 1, 1}) == doctest::Approx(std::numbers::pi / 3).epsilon(1e-15));
    CHECK(arg(Quaternion{-2}) == doctest::Approx(std::numbers::pi));
    CHECK_THROWS_AS(arg(Quaternion{}), std::domain_error);

    // Near 0 and pi the two-argument form keeps full relative accuracy.
    CHECK(arg(Quaternion{1, 1e-10, 0, 0}) == doctest::Approx(1e-10).epsilon(1e-12));
    CHECK(std::numbers::pi - arg(Quaternion{-1, 0, 1e-10, 0}) == doctest::Approx(1e-10).epsilon(1e-6));

    oracle::Rng rng(13);
    for (int n = 0; n < 1000; ++n) {
        const Quaternion q = rng.quat();
        const double a = arg(q);
        CHECK(a >= 0.0);
        CHECK(a <= std::numbers::pi);
        CHECK(std::cos(a) == doctest::Approx(re(q) / norm(q)).epsilon(1e-12));
        CHECK(std::sin(a) == doctest::Approx(im_norm(q) / norm(q)).epsilon(1e-12));
    }
}

TEST_CASE("complex representative") {
    const auto [r1, i1] = complex_representative(Quaternion{1, 1, 1, 1});
    CHECK(r1 == 1.0);
    CHECK(i1 == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
    const auto [r2, i2] = complex_representative(Quaternion{5});
    CHECK(r2 == 5.0);
    CHECK(i2 == 0.0);
    const auto [r3, i3] = complex_representative(Quaternion::j());
    CHECK(r3 == 0.0);
    CHECK(i3 == 1.0);
}

TEST_CASE("property: multiplicativity and associativity against the matrix model") {
    oracle::Rng rng(14);
    for (int n = 0; n < 2000; ++n) {
        const Quaternion p = rng.quat(std::exp(rng.uniform(-2, 2)));
        const Quaternion q = rng.quat(std::exp(rng.uniform(-2, 2)));
        const Quaternion r = rng.quat();
        CHECK(std::abs(norm(p * q) - norm(p) * norm(q)) <= 1e-12 * (1 + norm(p) * norm(q)));
        CHECK(norm((p * q) * r - p * (q * r)) <= 1e-12 * (1 + norm(p) * norm(q) * norm(r)));
        CHECK(oracle::entry_dist(p * q, oracle::mul(p, q)) <= 1e-12 * (1 + norm(p) * norm(q)));
        CHECK(norm(conj(p * q) - conj(q) * conj(p)) <= 1e-12 * (1 + norm(p) * norm(q)));
    }
}

TEST_CASE("property: reals are central bitwise") {
    oracle::Rng rng(15);
    for (int n = 0; n < 1000; ++n) {
        const double x = rng.normal();
        const Quaternion q = rng.quat();
        CHECK(bitwise_equal(Quaternion{x} * q, q * Quaternion{x}));
        CHECK(bitwise_equal(x * q, q * x));
    }
}

TEST_CASE("property: similar quaternions share arg and representative") {
    oracle::Rng rng(16);
    const double tol = kDefaultTol;
    for (int n = 0; n < 1000; ++n) {
        const Quaternion p = rng.quat();
        const Quaternion c = rng.quat();
        const Quaternion q = c * p * inverse(c);
        REQUIRE(similar(p, q, tol));
        CHECK(std::abs(arg(p) - arg(q)) <= 2 * tol / std::max(norm(p), 1.0));
        const auto [rp, ip] = complex_representative(p);
        const auto [rq, iq] = complex_representative(q);
        CHECK(std::abs(rp - rq) <= 1e-12);
        CHECK(std::abs(ip - iq) <= 1e-12 * (1 + ip));
    }
}

TEST_CASE("streaming") {
    std::ostringstream os;
    os << Quaternion{1, -2, 0.5, 0};
    CHECK(os.str() == "[1, -2, 0.5, 0]");
}
