#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace tracecurve {

// Coefficient vector mod p, little-endian in the generator z, fixed length
// r*n_total. Canonical: every coefficient lies in [0, p).
struct FieldElement {
    std::vector<std::uint64_t> c;

    bool operator==(const FieldElement& o) const { return c == o.c; }
    bool operator!=(const FieldElement& o) const { return c != o.c; }
};

enum class FieldOp { add, sub, mul, div };

// F_p[z]/(f) hosting the tower F_p c F_q c F_{q^d} c F_{q^n}. One ambient
// field; subfields are recognized as Frobenius fixed sets, never built
// separately. Immutable after construction, safe to share across threads.
class FieldSpec {
  public:
    // Builds F_{p^{r*n_total}} with the first irreducible monic modulus in
    // deterministic order (index-ascending coefficient vectors, constant
    // term fastest). Throws std::invalid_argument for composite p or zero
    // degree, std::length_error when the cardinality exceeds the
    // enumeration cap and force is not set.
    FieldSpec(std::uint64_t p, unsigned r, unsigned n_total, bool force = false);

    std::uint64_t p() const { return p_; }
    unsigned r() const { return r_; }
    unsigned n_total() const { return n_total_; }
    unsigned degree() const { return m_; }
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }
    mpz_class q() const;            // p^r
    mpz_class cardinality() const;  // p^{r*n_total}
    bool fits_u64() const { return card_u64_.has_value(); }
    std::uint64_t cardinality_u64() const;

    FieldElement zero() const;
    FieldElement one() const;
    // Element whose constant coefficient is v mod p (the image of an integer).
    FieldElement from_integer(const mpz_class& v) const;
    FieldElement from_coeffs(const std::vector<std::uint64_t>& coeffs) const;

    bool is_zero(const FieldElement& a) const;

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement inv(const FieldElement& a) const;  // throws on zero
    FieldElement div(const FieldElement& a, const FieldElement& b) const;
    FieldElement arith(const FieldElement& a, const FieldElement& b, FieldOp op) const;

    FieldElement pow(const FieldElement& a, const mpz_class& e) const;
    FieldElement pow(const FieldElement& a, std::uint64_t e) const;

    // a^{q^e} by e applications of the precomputed q-power map.
    FieldElement frobenius(const FieldElement& a, unsigned e) const;

    // Tr_{q^m:q^k}(a) = sum of a^{q^{k i}}, i = 0..m/k-1. Requires k | m and
    // m | n_total.
    FieldElement trace_to_base(const FieldElement& a, unsigned m, unsigned k) const;
    // N_{q^m:q^k}(a), multiplicative; norm of 0 is 0.
    FieldElement norm_to_base(const FieldElement& a, unsigned m, unsigned k) const;

    // True iff a^{q^k} = a, i.e. a lies in F_{q^k}.
    bool in_subfield(const FieldElement& a, unsigned k) const;

    // Index <-> element bijection (base-p digits); drives enumeration.
    FieldElement element_at(std::uint64_t index) const;
    std::uint64_t index_of(const FieldElement& a) const;
    // Advances a to the next element in index order; returns false after the
    // last one. Cheap odometer step for scan loops.
    bool next_element(FieldElement& a) const;

    // Multiplicative order of a nonzero element (needs u64 cardinality).
    mpz_class multiplicative_order(const FieldElement& a) const;

    // Enumeration guard: cardinality within cap, or the field was forced.
    void require_enumerable() const;
    bool forced() const { return forced_; }

    // Raw q-power matrix column i = z^{i*q} reduced mod f (used by kernels).
    const std::vector<FieldElement>& frobenius_basis() const { return frob_basis_; }

    std::string describe() const;  // "F_{p^m}, modulus ..."

  private:
    std::uint64_t p_;
    unsigned r_, n_total_, m_;
    bool forced_;
    std::vector<std::uint64_t> modulus_;           // length m_+1, monic
    std::vector<std::vector<std::uint64_t>> red_;  // z^{m+j} mod f, j = 0..m-2
    std::vector<FieldElement> frob_basis_;         // z^{i q} mod f, i = 0..m-1
    std::optional<std::uint64_t> card_u64_;

    void check_same_field(const FieldElement& a) const;
    FieldElement reduce_product(const std::vector<unsigned __int128>& full) const;
};

// Spec-level constructor name; identical to the FieldSpec constructor.
FieldSpec build_field(std::uint64_t p, unsigned r, unsigned n_total, bool force = false);

// Visits every field element exactly once, in index order.
template <class Fn>
void for_each_element(const FieldSpec& spec, Fn&& fn) {
    spec.require_enumerable();
    FieldElement e = spec.zero();
    do {
        fn(e);
    } while (spec.next_element(e));
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// Irreducibility of a monic polynomial over F_p (gcd-with-x^{p^k}-x test).
bool is_irreducible_mod_p(const std::vector<std::uint64_t>& poly, std::uint64_t p);

// Enumeration cap: TRACECURVE_CAP env var if set, else 2^26 elements.
std::uint64_t enumeration_cap();

}  // namespace tracecurve
