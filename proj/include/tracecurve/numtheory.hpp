#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tracecurve/field.hpp"

namespace tracecurve {

// Fibonacci and Lucas numbers, indexed from 1. F1 = F2 = 1. The Lucas
// sequence follows the identity L_k = F_{k-1} + F_{k+1}, so L1 = 1, L2 = 3.
mpz_class fib(unsigned k);
mpz_class lucas(unsigned k);

// gcd(q^d + 1, q^2 - q - 1), exact over big integers.
mpz_class gcd_pair(const mpz_class& q, unsigned d);

// Checks q^d+1 = (q^2-q-1) * sum_{i=1}^{d-1} F_i q^{d-i-1} + F_d q + F_{d-1}+1
// and gcd(q^d+1, q^2-q-1) = gcd(q^2-q-1, F_d q + F_{d-1}+1).
bool remainder_identity_check(const mpz_class& q, unsigned d);

struct Factorization {
    std::vector<std::pair<mpz_class, unsigned>> factors;  // ascending primes
    mpz_class unfactored = 1;  // leftover cofactor when the budget ran out
    bool complete = true;      // false when the splitting budget ran out
    bool certified = true;     // false when a prime is probable only
};

// Trial division to 10^4, then Brent's cycle method seeded from the input.
// Primality is certified deterministically below 3.3 * 10^24 and flagged as
// probable above it.
Factorization factor_integer(const mpz_class& n);

struct DivisorCharacterization {
    unsigned d = 0;
    mpz_class f_d, f_dm1, f_dp1;
    mpz_class m_d;  // F_{d+1} + F_{d-1} + 1 + (-1)^d
    // (prime t | M_d coprime to F_d, forced residue of q mod t)
    std::vector<std::pair<mpz_class, mpz_class>> admissible;
    std::vector<mpz_class> excluded;  // primes dividing gcd(M_d, F_d)
    bool complete = true;
};
DivisorCharacterization characterize_divisors(unsigned d);

enum class PredictionStatus { exact, exact_odd_q_only, conjectural, lower_bound, none };
const char* to_string(PredictionStatus s);

struct Prediction {
    mpz_class value_g = 1;
    PredictionStatus status = PredictionStatus::none;
    std::string source;
};

// d = n/2: G = gcd(q^{n/2}+1, q^2-q-1), exact.
Prediction predict_half_case(const mpz_class& q, unsigned n);
// d = 2, n even: G = gcd(q^n-1, gcd(q+2, (2^n-1)/3)). Exact for n = 4;
// exact for n = 6 with odd q; conjectural otherwise.
Prediction predict_d2(const mpz_class& q, unsigned n);
// Dispatch on (n, d); status none when no closed form applies.
Prediction predictor_for(const mpz_class& q, unsigned n, unsigned d);

// 1 + q^{n-1+d} + (G-1)(q-1)q^{n-1}
mpz_class predicted_count(const mpz_class& q, unsigned n, unsigned d, const mpz_class& g);

// True iff every prime divisor of F_d and of M_d is = +-2 (mod 5); then
// gcd(q^d+1, q^2-q-1) = 1 for every q.
bool gcd_always_one(unsigned d);

// d even: every prime divisor != 5 of M_d divides F_d; also verifies the
// underlying Lucas/Fibonacci square identities for all indices up to d.
bool even_d_lemma_check(unsigned d);

struct FibGcdScanResult {
    std::vector<unsigned> counterexamples;  // odd d with gcd(F_d, F_{d-1}+1) not in {1,2}
    bool even_identities_ok = true;         // product identities for even d
};
FibGcdScanResult f_gcd_conjecture_scan(unsigned d_max);

struct ConjectureHit {
    FieldElement alpha;
    mpz_class order;
};
struct ConjectureScanResult {
    std::uint64_t p = 0;
    unsigned r = 0, m = 0;
    std::uint64_t candidates = 0;
    std::vector<ConjectureHit> hits;
};

// Scans alpha in F_{q^m} \ {0,1} (d = 2): collects alpha where the membership
// equation holds but alpha^{q+2} != 1. A hit is a result, not an error.
ConjectureScanResult conjecture1_scan(std::uint64_t p, unsigned r, unsigned m, bool force = false);
// Same, restricted to alpha with alpha^{(q^n-1)/(q^2-1)} = 1.
ConjectureScanResult conjecture2_scan(std::uint64_t p, unsigned r, unsigned n, bool force = false);

// Least prime factor decomposition q = p^r, if q is a prime power.
std::optional<std::pair<std::uint64_t, unsigned>> as_prime_power(const mpz_class& q);

mpz_class pow_mpz(const mpz_class& base, unsigned exp);

}  // namespace tracecurve
