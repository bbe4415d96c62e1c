#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "tracecurve/field.hpp"

namespace tracecurve {

// Dense univariate polynomial over Z, little-endian, trailing zeros trimmed.
class UniPoly {
  public:
    UniPoly() = default;
    explicit UniPoly(std::vector<mpz_class> coeffs);
    static UniPoly constant(const mpz_class& c);
    static UniPoly monomial(const mpz_class& c, unsigned deg);

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    mpz_class coeff(unsigned i) const { return i < c_.size() ? c_[i] : mpz_class(0); }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    const mpz_class& leading() const;

    UniPoly operator+(const UniPoly& o) const;
    UniPoly operator-(const UniPoly& o) const;
    UniPoly operator*(const UniPoly& o) const;
    UniPoly operator-() const;
    UniPoly scaled(const mpz_class& s) const;
    bool operator==(const UniPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UniPoly& o) const { return c_ != o.c_; }

    UniPoly pow(unsigned e) const;
    mpz_class content() const;       // nonnegative gcd of coefficients
    UniPoly primitive_part() const;  // content removed, leading coefficient > 0

    // Exact division; throws std::domain_error when the remainder is nonzero.
    static UniPoly divide_exact(const UniPoly& a, const UniPoly& b);
    // Remainder of division by a monic divisor (exact over Z).
    static UniPoly rem_monic(const UniPoly& a, const UniPoly& monic);
    // Pseudo-remainder: lc(b)^{deg a - deg b + 1} a mod b.
    static UniPoly pseudo_rem(const UniPoly& a, const UniPoly& b);
    // Primitive gcd via the subresultant remainder sequence.
    static UniPoly gcd(const UniPoly& a, const UniPoly& b);

    mpz_class eval(const mpz_class& x) const;
    // Evaluation with coefficients reduced mod p, Horner over the field.
    FieldElement eval_mod(const FieldSpec& field, const FieldElement& x) const;

    std::string str(const std::string& var) const;

  private:
    std::vector<mpz_class> c_;
    void trim();
};

// Sylvester-matrix resultant of two integer polynomials (Bareiss elimination).
mpz_class int_resultant(const UniPoly& a, const UniPoly& b);

// k-th cyclotomic polynomial by iterated exact division of x^k - 1.
UniPoly cyclotomic(unsigned k);

// Sparse bivariate polynomial over Z; exponent pairs (e0, e1) -> coefficient.
class BiPoly {
  public:
    using Key = std::pair<unsigned, unsigned>;

    BiPoly() = default;
    static BiPoly constant(const mpz_class& c);
    static BiPoly monomial(const mpz_class& c, unsigned e0, unsigned e1);
    static BiPoly variable(unsigned var);  // y0 or y1

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    int degree(unsigned var) const;  // -1 for zero
    const std::map<Key, mpz_class>& terms() const { return terms_; }
    mpz_class coeff(unsigned e0, unsigned e1) const;
    void set_coeff(unsigned e0, unsigned e1, const mpz_class& c);

    BiPoly operator+(const BiPoly& o) const;
    BiPoly operator-(const BiPoly& o) const;
    BiPoly operator*(const BiPoly& o) const;
    BiPoly operator-() const;
    bool operator==(const BiPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const BiPoly& o) const { return terms_ != o.terms_; }

    mpz_class content_int() const;
    // Leading coefficient in graded-lex order on (e0, e1); sign of it.
    int lead_sign() const;

    // View as a univariate polynomial in `var` with UniPoly coefficients in
    // the other variable.
    std::vector<UniPoly> as_poly_in(unsigned var) const;
    static BiPoly from_poly_in(unsigned var, const std::vector<UniPoly>& coeffs);

    // Substitute an integer for `var`; result is univariate in the other.
    UniPoly eval_var(unsigned var, const mpz_class& value) const;
    mpz_class eval(const mpz_class& x0, const mpz_class& x1) const;
    FieldElement eval_mod(const FieldSpec& field, const FieldElement& x0,
                          const FieldElement& x1) const;

    std::string str() const;

  private:
    std::map<Key, mpz_class> terms_;
    void add_term(unsigned e0, unsigned e1, const mpz_class& c);
    friend BiPoly bipoly_divide_exact(const BiPoly& a, const BiPoly& b);
};

// Primitive gcd up to sign: subresultant sequences in (Z[y1])[y0] plus
// content extraction.
BiPoly bivariate_gcd(const BiPoly& a, const BiPoly& b);
BiPoly bipoly_divide_exact(const BiPoly& a, const BiPoly& b);

// Reduced ratio of bivariate polynomials; gcd-free, integer content split
// off, denominator lead sign positive.
struct BiRat {
    BiPoly num, den;
};
BiRat make_birat(BiPoly num, BiPoly den);

// y2 = (y0^2 y1 - y0^2 + y0 - 1) / (y1 (y0 y1 - 1)) and its three Frobenius
// iterates, each in lowest terms.
struct Chain {
    BiRat y2, y3, y4, y5;
};
Chain build_chain();

// Numerators and denominators of y0 y2 y4 - 1 and y1 y3 y5 - 1 in lowest
// terms. compute_f1_f2 checks the first pair against the frozen reference
// and throws with a diff when it drifts.
struct F1F2 {
    BiPoly f1, f1_den;
    BiPoly f2, f2_den;
    int reference_sign = 1;  // +1 or -1: computed = sign * reference
};
F1F2 compute_f1_f2(const Chain& chain);
F1F2 compute_f1_f2();

// Frozen expected numerator/denominator of y0 y2 y4 - 1 (regression anchors).
const BiPoly& reference_f1();
const BiPoly& reference_f1_denominator();

// Resultant of a and b with respect to the eliminated variable, as a
// polynomial in the surviving one. Two independent strategies; `resultant`
// is the Sylvester/Bareiss route.
UniPoly resultant(const BiPoly& a, const BiPoly& b, unsigned eliminate_var);
UniPoly resultant_bareiss(const BiPoly& a, const BiPoly& b, unsigned eliminate_var);
UniPoly resultant_interpolation(const BiPoly& a, const BiPoly& b, unsigned eliminate_var);

// The published factor list p1..p7 (p2, p3, p5, p6 are cyclotomic).
UniPoly resultant_factor(unsigned index);

struct FactorCheckReport {
    bool g1_matches = false, g2_matches = false;
    int g1_sign = 0, g2_sign = 0;
    mpz_class g1_content, g2_content;
    int g1_degree = -1, g2_degree = -1;
    unsigned g1_exponent_sum = 0, g2_exponent_sum = 0;
    bool cyclotomic_ids_ok = false;
    bool contents_ok = false;
    std::vector<std::string> mismatches;  // first differing coefficients
    bool ok = false;
};
FactorCheckReport verify_published_factorizations(const UniPoly& g1, const UniPoly& g2);

struct SpotcheckReport {
    std::uint64_t p = 0;
    unsigned r = 0;
    std::uint64_t x_checked = 0, x_qualifying = 0;
    std::vector<FieldElement> distinct_alpha;
    std::vector<mpz_class> alpha_orders;
    bool all_f_roots = true;   // F1(a, a^q) = F2(a, a^q) = 0
    bool all_g_roots = true;   // G1(a) = G2(a) = 0
    bool all_21st_roots = true;
    bool alpha_four_seen = false;  // the constant 4 occurred among the alpha
    std::vector<std::string> violations;
};
// For every x in F_{q^6} with R_2(x) in F_q and alpha = x^{q^2-1} not in
// {0,1}: checks the polynomial constraints mod p. Odd q only. sample_size
// limits the number of alpha checked in detail (0 = all).
SpotcheckReport finite_field_spotcheck(std::uint64_t p, unsigned r, const BiPoly& f1,
                                       const BiPoly& f2, const UniPoly& g1, const UniPoly& g2,
                                       std::uint64_t sample_size = 0);

// Case enumeration for alpha a primitive k-th root of unity, k in {3,7,21},
// with alpha^q = alpha^t: either the root-chain equation holds identically
// mod Phi_k, or the integer resultant pins down the only characteristics
// where it can hold. Covers every Frobenius class the classification needs.
struct CaseScanEntry {
    unsigned k = 0, t = 0;
    bool always_holds = false;
    mpz_class res;                           // Res(Phi_k, E_t), nonzero unless always_holds
    std::vector<mpz_class> enabling_primes;  // p coprime to k with t in <p mod k>
    bool odd_q_clean = false;                // enabling primes are at most {2}
    bool char2_escape = false;               // 2 is enabling
};
std::vector<CaseScanEntry> frobenius_case_scan();

// JSON (decimal-string coefficients, canonical term order, round-trip exact).
std::string unipoly_to_json(const UniPoly& p, const std::string& var);
UniPoly unipoly_from_json(const std::string& text);
std::string bipoly_to_json(const BiPoly& p);
BiPoly bipoly_from_json(const std::string& text);

}  // namespace tracecurve
