#include <doctest.h>

#include <random>

#include "prism/delta.hpp"
#include "prism/series.hpp"

using namespace prism;

namespace {

TruncSeries random_series(std::mt19937_64& rng, const Modulus& m, int Z) {
    TruncSeries f(m, Z);
    for (int i = 0; i < Z; ++i) f[i] = rng() % m.q;
    return f;
}

}  // namespace

TEST_CASE("truncated series arithmetic") {
    Modulus m(3, 3);
    auto f = TruncSeries::from_coeffs(m, 6, {1, 2, 0, 1});
    auto g = TruncSeries::from_coeffs(m, 6, {-1, 1});
    CHECK((f * g)[0] == m.reduce(-1));
    CHECK((f * f.inverse()) == TruncSeries::constant(m, 6, 1));
    CHECK(f.frobenius() == TruncSeries::from_coeffs(m, 6, {1, 0, 0, 2}));
    CHECK(TruncSeries::monomial(m, 6, 2).z_valuation() == 2);
    CHECK(TruncSeries::constant(m, 6, 9).p_valuation() == 2);
    CHECK_THROWS_AS(TruncSeries::constant(m, 6, 3).inverse(), MalformedInput);
}

TEST_CASE("weierstrass division") {
    Modulus m(3, 3);
    Eisenstein E{3, {-3, 1}};
    auto r = weierstrass_divide(E.series(m, 10), E);
    CHECK(r.q == TruncSeries::constant(m, 10, 1));
    CHECK(r.rem.is_zero());
    auto z = weierstrass_divide(TruncSeries::monomial(m, 10, 1), E);
    CHECK(z.q == TruncSeries::constant(m, 10, 1));
    CHECK(z.rem == TruncSeries::constant(m, 10, 3));

    std::mt19937_64 rng(3);
    Eisenstein E2{3, {3, 3, 1}};
    for (int t = 0; t < 20; ++t) {
        auto f = random_series(rng, m, 30);
        auto d = weierstrass_divide(f, E2);
        for (int i = 2; i < 30; ++i) CHECK(d.rem[i] == 0);
        // exact only below the truncation lost by the quotient
        auto back = d.q * E2.series(m, 30) + d.rem;
        CHECK(back.truncated(28) == f.truncated(28));
        // d is a non-zero-divisor: multiply then divide; z^Z lies in (E, p^M) so the
        // quotient is determined modulo z^{Z - eM}
        auto g = random_series(rng, m, 30);
        auto dg = weierstrass_divide(g * E2.series(m, 30), E2);
        CHECK(dg.rem.is_zero());
        CHECK(dg.q.truncated(30 - 2 * 3) == g.truncated(30 - 2 * 3));
    }
}

TEST_CASE("local elements") {
    Modulus m(3, 3);
    Eisenstein E{3, {-3, 1}};
    const int Z = 40;
    auto d = E.series(m, Z);
    LocalElement inv_d(E, TruncSeries::constant(m, Z, 1), 1);
    LocalElement dd(E, d, 0);
    CHECK((inv_d * dd - LocalElement(E, TruncSeries::constant(m, Z, 1))).is_zero());

    auto f = TruncSeries::from_coeffs(m, Z, {2, 1, 1});
    LocalElement x(E, f, 2);
    LocalElement y(E, d.pow(2), 0);
    CHECK((x * y).equals(LocalElement(E, f)));
    CHECK(x.normalized().normalized().equals(x.normalized()));

    std::mt19937_64 rng(9);
    for (int t = 0; t < 10; ++t) {
        LocalElement a(E, random_series(rng, m, Z), 1), b(E, random_series(rng, m, Z), 0),
            c(E, random_series(rng, m, Z), 2);
        CHECK(((a * b) * c).equals(a * (b * c)));
    }
    CHECK_THROWS_AS(LocalElement(E, TruncSeries::constant(m, 3, 1), 5), PrecisionExhausted);
}

TEST_CASE("invert phi(d)") {
    struct Case {
        u64 p;
        int M;
        std::vector<i64> E;
    };
    for (const Case& c : {Case{3, 1, {-3, 1}}, Case{3, 2, {-3, 1}}, Case{2, 3, {2, 2, 1}}}) {
        Modulus m(c.p, c.M);
        Eisenstein E{c.p, c.E};
        const int Z = 80;
        LocalElement inv = invert_phi_d(E, Ledger{c.M, Z});
        auto d = E.series(m, Z);
        auto phid = d.frobenius();
        LocalElement prod = inv * LocalElement(E, phid);
        CHECK(prod.equals(LocalElement(E, TruncSeries::constant(m, prod.ledger().Z_eff, 1))));
        if (c.M == 1) CHECK(inv.equals(LocalElement(E, TruncSeries::constant(m, Z, 1), static_cast<int>(c.p))));
    }
}
