#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <set>

#include "tracecurve/field.hpp"

using namespace tracecurve;

namespace {

// independent irreducibility oracle: exhaustive search for factors of degree
// 1..m/2 by trial division over F_p
bool irreducible_by_trial_division(const std::vector<std::uint64_t>& f, std::uint64_t p) {
    unsigned m = static_cast<unsigned>(f.size() - 1);
    auto poly_mod_small = [&](const std::vector<std::uint64_t>& a,
                              const std::vector<std::uint64_t>& b) {
        // remainder of a by monic-normalized b (b nonzero)
        std::vector<std::uint64_t> r = a;
        auto inv = [&](std::uint64_t v) {
            std::uint64_t acc = 1, base = v, e = p - 2;
            while (e) {
                if (e & 1) acc = acc * base % p;
                base = base * base % p;
                e >>= 1;
            }
            return acc;
        };
        std::uint64_t lcinv = inv(b.back());
        while (r.size() >= b.size()) {
            std::uint64_t c = r.back() * lcinv % p;
            for (size_t j = 0; j < b.size(); ++j)
                r[r.size() - b.size() + j] = (r[r.size() - b.size() + j] + p - c * b[j] % p) % p;
            while (!r.empty() && r.back() == 0) r.pop_back();
            if (r.size() < b.size()) break;
        }
        return r;
    };
    // enumerate candidate monic divisors of degree 1..m/2
    for (unsigned d = 1; d <= m / 2; ++d) {
        std::uint64_t count = 1;
        for (unsigned i = 0; i < d; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            std::vector<std::uint64_t> cand(d + 1, 0);
            std::uint64_t t = idx;
            for (unsigned i = 0; i < d; ++i) {
                cand[i] = t % p;
                t /= p;
            }
            cand[d] = 1;
            if (poly_mod_small(f, cand).empty()) return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("build_field picks deterministic irreducible moduli") {
    FieldSpec f2 = build_field(2, 1, 1);
    CHECK(f2.cardinality_u64() == 2);
    CHECK(f2.modulus() == std::vector<std::uint64_t>{0, 1});  // z is the first monic linear

    FieldSpec f4 = build_field(2, 1, 2);
    CHECK(f4.cardinality_u64() == 4);
    CHECK(f4.modulus() == std::vector<std::uint64_t>{1, 1, 1});  // z^2+z+1, the unique one

    FieldSpec f81 = build_field(3, 1, 4);
    CHECK(f81.cardinality_u64() == 81);
    CHECK(irreducible_by_trial_division(f81.modulus(), 3));
}

TEST_CASE("build_field rejects bad input") {
    CHECK_THROWS_WITH_AS(build_field(6, 1, 2), doctest::Contains("not prime"),
                         std::invalid_argument);
    CHECK_THROWS_AS(build_field(2, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_field(2, 1, 0), std::invalid_argument);
    // cap: 2^40 elements without force
    CHECK_THROWS_AS(build_field(2, 1, 40), std::length_error);
}

TEST_CASE("arithmetic identities in F_4") {
    FieldSpec f4 = build_field(2, 1, 2);
    FieldElement z = f4.from_coeffs({0, 1});
    FieldElement z1 = f4.from_coeffs({1, 1});
    CHECK(f4.mul(z, z1) == f4.one());  // z(z+1) = z^2+z = 1 under z^2+z+1
    CHECK(f4.add(z, f4.zero()) == z);
    CHECK(f4.mul(z, f4.inv(z)) == f4.one());
    CHECK_THROWS_AS(f4.div(z, f4.zero()), std::domain_error);
    CHECK(f4.arith(z, z1, FieldOp::add) == f4.from_coeffs({1, 0}));
}

TEST_CASE("field axioms on random triples") {
    for (auto [p, r, n] : {std::tuple<std::uint64_t, unsigned, unsigned>{2, 1, 6},
                           {3, 1, 4},
                           {5, 1, 3},
                           {7, 2, 2},
                           {13, 1, 2}}) {
        FieldSpec f = build_field(p, r, n);
        std::mt19937_64 rng(42);
        std::uniform_int_distribution<std::uint64_t> dist(0, f.cardinality_u64() - 1);
        for (int i = 0; i < 50; ++i) {
            FieldElement a = f.element_at(dist(rng));
            FieldElement b = f.element_at(dist(rng));
            FieldElement c = f.element_at(dist(rng));
            CHECK(f.add(a, b) == f.add(b, a));
            CHECK(f.mul(a, b) == f.mul(b, a));
            CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
            CHECK(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
            CHECK(f.add(a, f.neg(a)) == f.zero());
            if (!f.is_zero(a)) CHECK(f.mul(a, f.inv(a)) == f.one());
        }
    }
}

TEST_CASE("pow basics and Lagrange") {
    FieldSpec f81 = build_field(3, 1, 4);
    FieldElement g = f81.from_coeffs({0, 1});
    CHECK(f81.pow(g, mpz_class(0)) == f81.one());
    for (std::uint64_t i = 1; i < 81; ++i) {
        FieldElement a = f81.element_at(i);
        CHECK(f81.pow(a, std::uint64_t(80)) == f81.one());
        CHECK(f81.pow(a, mpz_class(81)) == a);  // full Frobenius cycle
    }
}

TEST_CASE("frobenius is a field automorphism and matches pow") {
    for (auto [p, r, n] : {std::tuple<std::uint64_t, unsigned, unsigned>{2, 1, 6},
                           {3, 1, 4},
                           {3, 2, 2},
                           {5, 1, 4}}) {
        FieldSpec f = build_field(p, r, n);
        mpz_class q = f.q();
        std::mt19937_64 rng(7);
        std::uniform_int_distribution<std::uint64_t> dist(0, f.cardinality_u64() - 1);
        for (int i = 0; i < 30; ++i) {
            FieldElement a = f.element_at(dist(rng));
            FieldElement b = f.element_at(dist(rng));
            for (unsigned e = 0; e <= n; ++e) {
                mpz_class qe;
                mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), e);
                CHECK(f.frobenius(a, e) == f.pow(a, qe));
                CHECK(f.frobenius(f.mul(a, b), e) == f.mul(f.frobenius(a, e), f.frobenius(b, e)));
                CHECK(f.frobenius(f.add(a, b), e) == f.add(f.frobenius(a, e), f.frobenius(b, e)));
            }
        }
    }
}

TEST_CASE("frobenius in F_4 maps z to z+1") {
    FieldSpec f4 = build_field(2, 1, 2);
    FieldElement z = f4.from_coeffs({0, 1});
    CHECK(f4.frobenius(z, 0) == z);
    CHECK(f4.frobenius(z, 1) == f4.from_coeffs({1, 1}));
    // subfield fixed points
    CHECK(f4.frobenius(f4.one(), 1) == f4.one());
}

TEST_CASE("trace to base field") {
    FieldSpec f4 = build_field(2, 1, 2);
    FieldElement z = f4.from_coeffs({0, 1});
    CHECK(f4.trace_to_base(z, 2, 1) == f4.one());  // z + z^2 = 1

    FieldSpec f81 = build_field(3, 1, 4);
    SUBCASE("constant multiple for subfield elements") {
        // a in F_{q^k}: Tr_{q^m:q^k}(a) = (m/k) a
        FieldElement two = f81.from_integer(mpz_class(2));
        CHECK(f81.trace_to_base(two, 4, 2) == f81.add(two, two));
    }
    SUBCASE("linearity, surjectivity and counts, exhaustively") {
        std::set<std::uint64_t> image;
        std::vector<int> fiber(3, 0);
        for_each_element(f81, [&](const FieldElement& a) {
            FieldElement t = f81.trace_to_base(a, 4, 1);
            CHECK(f81.in_subfield(t, 1));
            image.insert(f81.index_of(t));
            fiber[t.c[0]]++;
        });
        CHECK(image.size() == 3);  // surjective onto F_3
        CHECK(fiber[0] == 27);     // balanced fibers
        CHECK(fiber[1] == 27);
        CHECK(fiber[2] == 27);
    }
    SUBCASE("additivity on random pairs") {
        std::mt19937_64 rng(3);
        std::uniform_int_distribution<std::uint64_t> dist(0, 80);
        for (int i = 0; i < 40; ++i) {
            FieldElement a = f81.element_at(dist(rng));
            FieldElement b = f81.element_at(dist(rng));
            CHECK(f81.trace_to_base(f81.add(a, b), 4, 2) ==
                  f81.add(f81.trace_to_base(a, 4, 2), f81.trace_to_base(b, 4, 2)));
        }
    }
    CHECK_THROWS_AS(f81.trace_to_base(f81.one(), 4, 3), std::invalid_argument);
}

TEST_CASE("norm to base field") {
    FieldSpec f81 = build_field(3, 1, 4);
    CHECK(f81.norm_to_base(f81.one(), 4, 1) == f81.one());
    CHECK(f81.norm_to_base(f81.zero(), 4, 1) == f81.zero());
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::uint64_t> dist(0, 80);
    for (int i = 0; i < 40; ++i) {
        FieldElement a = f81.element_at(dist(rng));
        FieldElement b = f81.element_at(dist(rng));
        CHECK(f81.norm_to_base(f81.mul(a, b), 4, 1) ==
              f81.mul(f81.norm_to_base(a, 4, 1), f81.norm_to_base(b, 4, 1)));
        CHECK(f81.in_subfield(f81.norm_to_base(a, 4, 1), 1));
    }
    CHECK_THROWS_AS(f81.norm_to_base(f81.one(), 3, 2), std::invalid_argument);
}

TEST_CASE("in_subfield recognizes the tower") {
    FieldSpec f4 = build_field(2, 1, 2);
    CHECK(f4.in_subfield(f4.zero(), 1));
    CHECK_FALSE(f4.in_subfield(f4.from_coeffs({0, 1}), 1));  // z^2 != z

    FieldSpec f81 = build_field(3, 1, 4);
    int count_d2 = 0, count_d1 = 0;
    for_each_element(f81, [&](const FieldElement& a) {
        if (f81.in_subfield(a, 2)) ++count_d2;
        if (f81.in_subfield(a, 1)) ++count_d1;
    });
    CHECK(count_d2 == 9);  // exactly q^d elements of F_{q^2}
    CHECK(count_d1 == 3);
}

TEST_CASE("enumeration yields each element once") {
    FieldSpec f2 = build_field(2, 1, 1);
    int n2 = 0;
    for_each_element(f2, [&](const FieldElement&) { ++n2; });
    CHECK(n2 == 2);

    FieldSpec f4 = build_field(2, 1, 2);
    int n4 = 0;
    for_each_element(f4, [&](const FieldElement&) { ++n4; });
    CHECK(n4 == 4);

    FieldSpec f81 = build_field(3, 1, 4);
    std::set<std::uint64_t> seen;
    for_each_element(f81, [&](const FieldElement& a) { seen.insert(f81.index_of(a)); });
    CHECK(seen.size() == 81);
}

TEST_CASE("multiplicative order") {
    FieldSpec f81 = build_field(3, 1, 4);
    // find a generator: some element of order 80
    bool found = false;
    for (std::uint64_t i = 1; i < 81 && !found; ++i) {
        FieldElement a = f81.element_at(i);
        if (f81.is_zero(a)) continue;
        if (f81.multiplicative_order(a) == 80) found = true;
    }
    CHECK(found);
}

TEST_CASE("deterministic primality") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(3));
    CHECK(is_prime_u64(1000003));
    CHECK(is_prime_u64(0x7fffffffull));  // 2^31 - 1
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(1000001));           // 101 * 9901
    CHECK_FALSE(is_prime_u64(3215031751ull));     // strong pseudoprime to low bases
    CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
}
