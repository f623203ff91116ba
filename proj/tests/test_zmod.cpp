#include <doctest.h>

#include "oracles.hpp"
#include "prism/zmod.hpp"

using namespace prism;

namespace {

ZModMatrix random_matrix(std::mt19937_64& rng, const Modulus& m, std::size_t r, std::size_t c) {
    ZModMatrix a(m, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) a.at(i, j) = rng() % m.q;
    return a;
}

std::vector<Vec> rows_of(const ZModMatrix& a) {
    std::vector<Vec> out;
    for (std::size_t i = 0; i < a.rows(); ++i) out.push_back(a.row_vec(i));
    return out;
}

}  // namespace

TEST_CASE("modulus basics") {
    Modulus m(3, 4);
    CHECK(m.q == 81);
    CHECK(m.val(0) == 4);
    CHECK(m.val(27) == 3);
    CHECK(m.mul(m.inv(5), 5) == 1);
    CHECK(m.reduce(-1) == 80);
    CHECK(m.ppow(4) == 0);
    CHECK_THROWS_AS(Modulus(4, 2), MalformedInput);
    CHECK_THROWS_AS(m.inv(3), MalformedInput);
    CHECK(is_prime(9973));
    CHECK_FALSE(is_prime(9971));
}

TEST_CASE("howell form small cases") {
    Modulus m(3, 2);
    CHECK(howell_form(ZModMatrix::identity(m, 3)) == ZModMatrix::identity(m, 3));
    ZModMatrix a = ZModMatrix::from_rows(m, 1, {{3}});
    CHECK(howell_form(a) == a);
}

TEST_CASE("howell span matches enumeration over Z/9") {
    Modulus m(3, 2);
    std::mt19937_64 rng(11);
    auto universe = oracle::all_vectors(m, 3);
    for (int trial = 0; trial < 20; ++trial) {
        ZModMatrix a = random_matrix(rng, m, 3, 3);
        // sprinkle p-multiples so non-trivial torsion shows up
        for (std::size_t j = 0; j < 3; ++j) a.at(trial % 3, j) = m.mul(a.at(trial % 3, j), 3);
        auto span = oracle::span_set(m, 3, rows_of(a));
        Lattice L = Lattice::span(a);
        CHECK(L.length() == oracle::log_p(3, span.size()));
        for (const auto& v : universe) CHECK(L.contains(v) == (span.count(v) > 0));
        // canonical: another generating set of the same span gives the same form
        std::vector<Vec> gens = rows_of(L.generators());
        gens.push_back(oracle::random_vec(rng, m, 3));
        Vec extra = gens.back();
        gens.pop_back();
        if (span.count(extra)) gens.push_back(extra);
        CHECK(Lattice::span(m, 3, gens) == L);
        CHECK(howell_form(L.generators()) == L.generators());
    }
}

TEST_CASE("kernel") {
    Modulus m(3, 2);
    CHECK(kernel(ZModMatrix(m, 2, 2)) == Lattice::full(m, 2));
    Lattice k = kernel(ZModMatrix::from_rows(m, 1, {{3}}));
    CHECK(k.length() == 1);
    CHECK(k.contains({3}));
    CHECK_FALSE(k.contains({1}));

    Modulus m8(2, 3);
    std::mt19937_64 rng(5);
    auto universe = oracle::all_vectors(m8, 4);
    for (int trial = 0; trial < 5; ++trial) {
        ZModMatrix a = random_matrix(rng, m8, 4, 3);
        Lattice K = kernel(a);
        std::size_t count = 0;
        for (const auto& v : universe) {
            Vec w = vec_times(m8, v, a);
            bool zero = w == Vec(3, 0);
            count += zero;
            CHECK(K.contains(v) == zero);
        }
        CHECK(K.length() == oracle::log_p(2, count));
        // length of the row space equals the length of full/kernel
        auto image = oracle::span_set(m8, 3, rows_of(a));
        long q = 0;
        for (int e : quotient_exponents(Lattice::full(m8, 4), K)) q += e;
        CHECK(q == oracle::log_p(2, image.size()));
    }
}

TEST_CASE("meet and join by enumeration") {
    Modulus m(3, 2);
    std::mt19937_64 rng(17);
    auto universe = oracle::all_vectors(m, 3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vec> ga{oracle::random_vec(rng, m, 3)}, gb{oracle::random_vec(rng, m, 3)};
        ga.push_back(oracle::random_vec(rng, m, 3));
        for (auto& x : ga[1]) x = m.mul(x, 3);
        gb.push_back(oracle::random_vec(rng, m, 3));
        Lattice a = Lattice::span(m, 3, ga), b = Lattice::span(m, 3, gb);
        Lattice meet = lattice_meet(a, b), join = lattice_join(a, b);
        auto sa = oracle::span_set(m, 3, ga), sb = oracle::span_set(m, 3, gb);
        std::vector<Vec> gab = ga;
        gab.insert(gab.end(), gb.begin(), gb.end());
        auto sj = oracle::span_set(m, 3, gab);
        for (const auto& v : universe) {
            CHECK(meet.contains(v) == (sa.count(v) && sb.count(v)));
            CHECK(join.contains(v) == (sj.count(v) > 0));
        }
        CHECK(lattice_meet(a, Lattice::full(m, 3)) == a);
        CHECK(lattice_meet(a, b) == lattice_meet(b, a));
        CHECK(lattice_join(a, lattice_meet(a, b)) == a);
        CHECK(lattice_meet(a, lattice_join(a, b)) == a);
        CHECK(lattice_join(a, a) == a);
    }
}

TEST_CASE("quotient invariants") {
    Modulus m(3, 2);
    Lattice full = Lattice::full(m, 1);
    CHECK(quotient_invariants(full, full.scaled(3)) == std::vector<u64>{3});
    CHECK(quotient_invariants(full, Lattice(m, 1)) == std::vector<u64>{9});
    CHECK_THROWS_AS(quotient_invariants(full.scaled(3), full), ContainmentError);
    Lattice big = Lattice::span(m, 2, {{1, 0}, {0, 3}});
    Lattice small = Lattice::span(m, 2, {{3, 3}});
    CHECK(quotient_invariants(big, small) == std::vector<u64>{9});
}

TEST_CASE("preimage and solve") {
    Modulus m(2, 3);
    // f(e1) = 2, f(e2) = 4; preimage of 0
    Lattice T(m, 1);
    Lattice P = preimage({{1, 0}, {0, 1}}, 2, {{2}, {4}}, T);
    CHECK(P.contains({4, 0}));
    CHECK(P.contains({2, 7}));
    CHECK_FALSE(P.contains({1, 0}));
    CHECK(P.length() == 6 - 2);
    Vec c;
    CHECK(solve_combination({{2, 0}, {0, 4}}, 2, m, {6, 4}, c));
    CHECK(m.mul(c[0], 2) == 6);
    CHECK(m.mul(c[1], 4) == 4);
    CHECK_FALSE(solve_combination({{2, 0}}, 2, m, {1, 0}, c));
}
