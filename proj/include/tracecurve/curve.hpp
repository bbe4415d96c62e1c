#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

#include "tracecurve/field.hpp"
#include "tracecurve/numtheory.hpp"

namespace tracecurve {

// The family parameter triple (q, n, d) with q = p^r, d | n, 1 < d < n,
// n >= 4. Validated on construction.
struct CurveParams {
    std::uint64_t p = 0;
    unsigned r = 0, n = 0, d = 0;

    CurveParams(std::uint64_t p_, unsigned r_, unsigned n_, unsigned d_);
    mpz_class q() const;
};

// The ambient field F_{q^n} for the curve.
FieldSpec curve_field(const CurveParams& params, bool force = false);

// R_d(x) = x + x^q + ... + x^{q^{d-2}} + x^{q^{d-1}+q^d-1}, evaluated with
// successive Frobenius maps plus one power for the twisted last term.
FieldElement rd_value(const FieldSpec& field, const FieldElement& x, const CurveParams& params);

// alpha = x^{q^d-1}; undefined at x = 0.
FieldElement alpha_of(const FieldSpec& field, const FieldElement& x, const CurveParams& params);

// (1 - a^{q+1})^{q^d-1} == a^{q^{d-1}-1} (1 - a)^{q^d-1}, the closed-form
// membership test for R_d(x) in F_q. Requires alpha not in {0, 1}.
bool membership_equation_holds(const FieldSpec& field, const FieldElement& alpha,
                               const mpz_class& q, unsigned d);

// Number of x in F_{q^n} with R_d(x) in F_q. The serial version is the
// reference implementation; special_x_count runs the OpenMP kernel with
// per-thread scratch (threads = 0 picks the OpenMP default).
std::uint64_t special_x_count_serial(const FieldSpec& field, const CurveParams& params);
std::uint64_t special_x_count(const FieldSpec& field, const CurveParams& params, int threads = 0);

// Ascending element indices of every x with R_d(x) in F_q (same kernel as
// special_x_count; the qualifying set is small).
std::vector<std::uint64_t> special_x_indices(const FieldSpec& field, const CurveParams& params,
                                             int threads = 0);

// Independent (x, y)-pair oracle against the affine equation
// Tr_{q^n:q}(y) = R_d(x); guarded to q^{2n} <= 10^7 pairs.
mpz_class affine_oracle_count(const CurveParams& params);

// (q^{n-1} - 1)(q^{d-1} + q^d - 2) / 2, with the divisibility asserted.
mpz_class genus(const CurveParams& params);

struct CountReport {
    CurveParams params;
    mpz_class special_x;
    mpz_class brute_count;  // 1 + q^{n-1} * special_x
    mpz_class baseline;     // 1 + q^{n-1+d}
    mpz_class bonus;        // brute - baseline, always >= 0
    std::optional<Prediction> prediction;
    std::optional<mpz_class> predicted_count;
    std::optional<bool> agrees;
};

struct PointCountOptions {
    bool force = false;
    int threads = 0;
    bool attach_predictor = true;
};

CountReport point_count(const CurveParams& params, const PointCountOptions& opts = {});
// Same report built from an already-computed special_x count.
CountReport build_report(const CurveParams& params, std::uint64_t special_x, bool attach_predictor);

}  // namespace tracecurve
