#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle.hpp"
#include "qjorg/qmat.hpp"

using namespace qjorg;

namespace {

const Quaternion I = Quaternion::i();
const Quaternion J = Quaternion::j();

double dist(const MatH2& m, const MatH2& n) { return oracle::matrix_dist(m, n); }

}  // namespace

TEST_CASE("alpha examples") {
    CHECK(alpha(MatH2::identity()) == 1.0);
    CHECK(alpha(MatH2::diagonal(I, J)) == 1.0);
    CHECK(alpha(MatH2{1, 1, 1, 2}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(alpha(MatH2{1, 1, 1, 1}) == 0.0);
}

TEST_CASE("det examples") {
    CHECK(det(MatH2::diagonal(2, 0.5)) == 1.0);
    CHECK(det(MatH2{0, 1, 1, 0}) == 1.0);
    CHECK_THROWS_AS(det_schur(MatH2{0, 1, 1, 0}), std::domain_error);
    CHECK(det(MatH2{1, 1, 1, 1}) == 0.0);
    CHECK(in_sigma(MatH2{1, 1, 1, 2}));
    CHECK_FALSE(in_sigma(2.0 * MatH2::identity()));
}

TEST_CASE("det against the complex model, multiplicativity and the Schur form") {
    oracle::Rng rng(21);
    for (int n = 0; n < 1000; ++n) {
        const MatH2 m = rng.matrix();
        const MatH2 k = rng.matrix();
        CHECK(det(m) == doctest::Approx(oracle::det(m)).epsilon(1e-9));
        CHECK(std::abs(det(m * k) - det(m) * det(k)) <= 1e-9 * (1 + det(m) * det(k)));
        CHECK(std::abs(det(m) - det_schur(m)) <= 1e-9 * (1 + det(m)));
        CHECK(std::abs(norm(parker_short(m).sigma) - det(m)) <= 1e-9 * (1 + det(m)));
    }
}

TEST_CASE("matrix product") {
    const MatH2 m{1, 0, 1, 1};
    const MatH2 t{1, J, 0, 1};
    CHECK(m * MatH2::identity() == m);
    CHECK(m * t == MatH2{1, J, 1, Quaternion{1} + J});

    oracle::Rng rng(22);
    for (int n = 0; n < 200; ++n) {
        const MatH2 a = rng.matrix();
        const MatH2 b = rng.matrix();
        CHECK(dist(a * b, oracle::mul(a, b)) < 1e-12 * (1 + max_entry_norm(a) * max_entry_norm(b)) * 4);
    }
}

TEST_CASE("tilde set examples") {
    const TildeSet id = tilde_set(MatH2::identity());
    CHECK(id.a_t == Quaternion{1});
    CHECK(id.d_t == Quaternion{1});
    CHECK(id.b_t == Quaternion{});
    CHECK(id.c_t == Quaternion{});

    const MatH2 m{1, 1, 1, 2};
    const KellerhalsFactors f = kellerhals_factors(m);
    CHECK(f.l[0][0] == Quaternion{1});
    CHECK(tilde_set(m).d_t == Quaternion{2});
    CHECK_THROWS_WITH_AS(tilde_set(MatH2{1, 1, 1, 1}), "singular matrix", std::domain_error);
}

TEST_CASE("inverse examples") {
    CHECK(inverse(MatH2::identity()) == MatH2::identity());
    const MatH2 inv = inverse(MatH2{1, 1, 1, 2});
    CHECK(dist(inv, MatH2{2, -1, -1, 1}) < 1e-15);
    CHECK(dist(inverse(MatH2{0, 1, 1, 0}), MatH2{0, 1, 1, 0}) < 1e-15);
    CHECK(dist(inverse(MatH2{0, J, I, 0}), MatH2{0, -I, -J, 0}) < 1e-15);
    CHECK_THROWS_AS(inverse(MatH2{1, 1, 1, 1}), std::domain_error);
}

TEST_CASE("inverse against the complex model, both forms") {
    oracle::Rng rng(23);
    for (int n = 0; n < 1000; ++n) {
        const MatH2 m = rng.sigma();
        const MatH2 l = inverse(m);
        const MatH2 r = inverse_rform(m);
        CHECK(dist(m * l, MatH2::identity()) < 1e-9);
        CHECK(dist(l * m, MatH2::identity()) < 1e-9);
        CHECK(dist(l, r) < 1e-9);
        CHECK(dist(l, oracle::inv(m)) < 1e-9);
    }
}

TEST_CASE("inverse with vanishing entries") {
    oracle::Rng rng(24);
    for (int n = 0; n < 200; ++n) {
        MatH2 m = rng.matrix();
        if (n % 8 < 4) {
            switch (n % 4) {
                case 0: m.a = 0; break;
                case 1: m.b = 0; break;
                case 2: m.c = 0; break;
                default: m.d = 0; break;
            }
        } else if (n % 2 == 0) {
            m.a = 0;
            m.d = 0;
        } else {
            m.b = 0;
            m.c = 0;
        }
        REQUIRE(det(m) > 1e-6);
        CHECK(dist(inverse(m), oracle::inv(m)) < 1e-9 * (1 + max_entry_norm(oracle::inv(m))));
        CHECK(dist(inverse_rform(m), oracle::inv(m)) < 1e-9 * (1 + max_entry_norm(oracle::inv(m))));
        const KellerhalsFactors f = kellerhals_factors(m);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(norm(f.l[i][j]) == doctest::Approx(det(m)).epsilon(1e-9));
                CHECK(norm(f.r[i][j]) == doctest::Approx(det(m)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("property: factor norms and the sixteen identities") {
    oracle::Rng rng(25);
    const Quaternion one{1};
    for (int n = 0; n < 1000; ++n) {
        const MatH2 m = rng.matrix();
        const auto& [a, b, c, d] = m;
        const KellerhalsFactors f = kellerhals_factors(m);
        const double root = std::sqrt(alpha(m));
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(std::abs(norm(f.l[i][j]) - root) <= 1e-9 * (1 + root));
                CHECK(std::abs(norm(f.r[i][j]) - root) <= 1e-9 * (1 + root));
            }
        }
        const TildeSet t = tilde_set(m);
        const double tol = 1e-9 * (1 + max_entry_norm(m) * max_entry_norm(inverse(m)));
        // left forms
        CHECK(norm(t.d_t * a - t.b_t * c - one) <= tol);
        CHECK(norm(t.a_t * d - t.c_t * b - one) <= tol);
        CHECK(norm(t.d_t * b - t.b_t * d) <= tol);
        CHECK(norm(t.a_t * c - t.c_t * a) <= tol);
        CHECK(norm(a * t.d_t - b * t.c_t - one) <= tol);
        CHECK(norm(d * t.a_t - c * t.b_t - one) <= tol);
        CHECK(norm(a * t.b_t - b * t.a_t) <= tol);
        CHECK(norm(c * t.d_t - d * t.c_t) <= tol);
        // right forms
        CHECK(norm(a * t.d_s - b * t.c_s - one) <= tol);
        CHECK(norm(d * t.a_s - c * t.b_s - one) <= tol);
        CHECK(norm(a * t.b_s - b * t.a_s) <= tol);
        CHECK(norm(c * t.d_s - d * t.c_s) <= tol);
        CHECK(norm(t.d_s * a - t.b_s * c - one) <= tol);
        CHECK(norm(t.a_s * d - t.c_s * b - one) <= tol);
        CHECK(norm(t.d_s * b - t.b_s * d) <= tol);
        CHECK(norm(t.a_s * c - t.c_s * a) <= tol);
    }
}

TEST_CASE("Foreman invariants") {
    const ForemanInvariants h = foreman_invariants(MatH2::diagonal(2, 0.5));
    CHECK(h.beta == 2.5);
    CHECK(h.gamma == 8.25);
    CHECK(h.delta == 2.5);
    const ForemanInvariants id = foreman_invariants(MatH2::identity());
    CHECK(id.beta == 2.0);
    CHECK(id.gamma == 6.0);
    CHECK(id.delta == 2.0);
    for (const double k : {1.5, 3.0, 10.0}) {
        CHECK(foreman_invariants(MatH2::diagonal(k, 1 / k)).delta == doctest::Approx(k + 1 / k));
    }
}

TEST_CASE("property: Foreman invariants are conjugacy invariant") {
    oracle::Rng rng(26);
    for (int n = 0; n < 500; ++n) {
        const MatH2 m = rng.sigma();
        const MatH2 g = rng.sigma();
        const ForemanInvariants before = foreman_invariants(m);
        const ForemanInvariants after = foreman_invariants(g * m * inverse(g));
        const double scale = 1 + max_entry_norm(g) * max_entry_norm(g) * max_entry_norm(m);
        CHECK(std::abs(before.beta - after.beta) <= 1e-7 * scale * scale);
        CHECK(std::abs(before.gamma - after.gamma) <= 1e-7 * scale * scale);
        CHECK(std::abs(before.delta - after.delta) <= 1e-7 * scale);
    }
}

TEST_CASE("Parker-Short quantities") {
    const ParkerShort h = parker_short(MatH2::diagonal(2, 0.5));
    CHECK(h.sigma == Quaternion{1});
    CHECK(h.tau == Quaternion{2.5});
    const ParkerShort id = parker_short(MatH2::identity());
    CHECK(id.sigma == Quaternion{1});
    CHECK(id.tau == Quaternion{2});

    oracle::Rng rng(27);
    for (int n = 0; n < 500; ++n) {
        MatH2 m = rng.sigma();
        if (n % 3 == 1) {
            m.c = 0;
            m = normalize_to_sigma(m);
        } else if (n % 3 == 2) {
            m.b = 0;
            m.c = 0;
            m = normalize_to_sigma(m);
        }
        const InvariantSet inv = invariants(m);
        CHECK(norm2(inv.sigma) == doctest::Approx(inv.alpha).epsilon(1e-9));
        CHECK(inv.alpha == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("normalization") {
    CHECK(normalize_to_sigma(2.0 * MatH2::identity()) == MatH2::identity());
    oracle::Rng rng(28);
    for (int n = 0; n < 500; ++n) {
        const MatH2 m = rng.matrix(std::exp(rng.uniform(-2, 2)));
        CHECK(det(normalize_to_sigma(m)) == doctest::Approx(1.0).epsilon(1e-9));
        const MatH2 s = rng.sigma();
        CHECK(dist(normalize_to_sigma(s), s) < 1e-12 * (1 + max_entry_norm(s)));
    }
    CHECK_THROWS_AS(normalize_to_sigma(MatH2{1, 1, 1, 1}), std::domain_error);
}

TEST_CASE("commutator") {
    oracle::Rng rng(29);
    for (int n = 0; n < 200; ++n) {
        const MatH2 a = rng.sigma();
        CHECK(dist(commutator(a, a), MatH2::identity()) < 1e-9 * (1 + std::pow(max_entry_norm(a), 4)));
        CHECK(dist(commutator(a, MatH2::identity()), MatH2::identity()) < 1e-9 * (1 + std::pow(max_entry_norm(a), 2)));
    }
}

TEST_CASE("property: trace identity for commutators with a stretch") {
    oracle::Rng rng(30);
    for (const double k : {2.0, 1.3, 5.0}) {
        const MatH2 a = MatH2::diagonal(k, 1 / k);
        for (int n = 0; n < 200; ++n) {
            const MatH2 b = rng.sigma();
            const double lhs = foreman_invariants(commutator(a, b)).delta - 2;
            const double rhs = -(k - 1 / k) * (k - 1 / k) * re(b.b * conj(parker_short(b).sigma) * b.c);
            CHECK(std::abs(lhs - rhs) <= 1e-8 * (1 + std::abs(rhs)));
        }
    }
}
