#include "tracecurve/curve.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace tracecurve {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

mpz_class mpz_pow_u(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

}  // namespace

CurveParams::CurveParams(u64 p_, unsigned r_, unsigned n_, unsigned d_)
    : p(p_), r(r_), n(n_), d(d_) {
    if (!is_prime_u64(p)) throw std::invalid_argument("not prime: p = " + std::to_string(p));
    if (r == 0) throw std::invalid_argument("bad degree: r = 0");
    if (n < 4) throw std::invalid_argument("curve family requires n >= 4");
    if (d <= 1 || d >= n || n % d != 0)
        throw std::invalid_argument("curve family requires d | n with 1 < d < n");
}

mpz_class CurveParams::q() const {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), p, r);
    return v;
}

FieldSpec curve_field(const CurveParams& params, bool force) {
    return FieldSpec(params.p, params.r, params.n, force);
}

FieldElement rd_value(const FieldSpec& field, const FieldElement& x, const CurveParams& params) {
    mpz_class q = params.q();
    FieldElement acc = field.zero();
    FieldElement cur = x;
    for (unsigned i = 0; i + 1 < params.d; ++i) {
        acc = field.add(acc, cur);
        if (i + 2 < params.d) cur = field.frobenius(cur, 1);
    }
    mpz_class e = mpz_pow_u(q, params.d - 1) + mpz_pow_u(q, params.d) - 1;
    return field.add(acc, field.pow(x, e));
}

FieldElement alpha_of(const FieldSpec& field, const FieldElement& x, const CurveParams& params) {
    if (field.is_zero(x)) throw std::domain_error("alpha undefined at x = 0");
    mpz_class e = mpz_pow_u(params.q(), params.d) - 1;
    return field.pow(x, e);
}

bool membership_equation_holds(const FieldSpec& field, const FieldElement& alpha,
                               const mpz_class& q, unsigned d) {
    if (field.is_zero(alpha) || alpha == field.one())
        throw std::invalid_argument("theorem hypothesis violated: alpha in {0, 1}");
    mpz_class qd = mpz_pow_u(q, d);
    FieldElement one = field.one();
    FieldElement aq1 = field.pow(alpha, mpz_class(q + 1));
    FieldElement lhs = field.pow(field.sub(one, aq1), mpz_class(qd - 1));
    FieldElement rhs = field.mul(field.pow(alpha, mpz_class(mpz_pow_u(q, d - 1) - 1)),
                                 field.pow(field.sub(one, alpha), mpz_class(qd - 1)));
    return lhs == rhs;
}

std::uint64_t special_x_count_serial(const FieldSpec& field, const CurveParams& params) {
    field.require_enumerable();
    u64 count = 0;
    for_each_element(field, [&](const FieldElement& x) {
        FieldElement r = rd_value(field, x, params);
        if (field.in_subfield(r, 1)) ++count;
    });
    return count;
}

// ---- OpenMP kernel: raw-buffer field arithmetic, per-thread scratch ----

namespace {

struct KernelTables {
    unsigned m;
    u64 p;
    std::vector<u64> red;    // (m-1) rows of length m: z^{m+j} mod f
    std::vector<u64> frob1;  // m x m matrix of the q-power map (column-major by input coeff)
    std::vector<int> ebits;  // exponent q^{d-1}+q^d-1, most significant bit first
    unsigned d;

    KernelTables(const FieldSpec& field, const CurveParams& params)
        : m(field.degree()), p(field.p()), d(params.d) {
        red.resize((m >= 2 ? m - 1 : 0) * m);
        // reduction rows: z^{m+j} mod f for j = 0..m-2
        {
            std::vector<u64> zm(m);
            const auto& f = field.modulus();
            for (unsigned i = 0; i < m; ++i) zm[i] = (p - f[i] % p) % p;
            std::vector<u64> cur = zm;
            for (unsigned j = 0; j + 1 < m; ++j) {
                std::copy(cur.begin(), cur.end(), red.begin() + j * m);
                u64 hi = cur[m - 1];
                for (unsigned i = m; i-- > 1;) cur[i] = cur[i - 1];
                cur[0] = 0;
                if (hi)
                    for (unsigned i = 0; i < m; ++i)
                        cur[i] = (cur[i] + (u128)hi * zm[i] % p) % p;
            }
        }
        frob1.resize(m * m);
        const auto& basis = field.frobenius_basis();
        for (unsigned i = 0; i < m; ++i)
            for (unsigned j = 0; j < m; ++j) frob1[i * m + j] = basis[i].c[j];
        mpz_class q = params.q();
        mpz_class e = mpz_pow_u(q, params.d - 1) + mpz_pow_u(q, params.d) - 1;
        size_t nbits = mpz_sizeinbase(e.get_mpz_t(), 2);
        for (size_t i = nbits; i-- > 0;) ebits.push_back(mpz_tstbit(e.get_mpz_t(), i));
    }
};

struct KernelScratch {
    std::vector<u64> cur, acc, t, r, rq;
    std::vector<u128> wide;
    explicit KernelScratch(unsigned m)
        : cur(m), acc(m), t(m), r(m), rq(m), wide(2 * m) {}
};

inline void raw_mul(const KernelTables& tb, const u64* a, const u64* b, u64* out, u128* wide) {
    unsigned m = tb.m;
    for (unsigned i = 0; i < 2 * m - 1; ++i) wide[i] = 0;
    for (unsigned i = 0; i < m; ++i) {
        if (!a[i]) continue;
        u128 ai = a[i];
        for (unsigned j = 0; j < m; ++j) wide[i + j] += ai * b[j];
    }
    for (unsigned k = 2 * m - 1; k-- > m;) {
        u64 c = static_cast<u64>(wide[k] % tb.p);
        if (c) {
            const u64* row = tb.red.data() + (k - m) * m;
            for (unsigned i = 0; i < m; ++i) wide[i] += (u128)c * row[i];
        }
    }
    for (unsigned i = 0; i < m; ++i) out[i] = static_cast<u64>(wide[i] % tb.p);
}

inline void raw_frob1(const KernelTables& tb, const u64* in, u64* out, u128* wide) {
    unsigned m = tb.m;
    for (unsigned j = 0; j < m; ++j) wide[j] = 0;
    for (unsigned i = 0; i < m; ++i) {
        if (!in[i]) continue;
        const u64* row = tb.frob1.data() + i * m;
        u128 ci = in[i];
        for (unsigned j = 0; j < m; ++j) wide[j] += ci * row[j];
    }
    for (unsigned j = 0; j < m; ++j) out[j] = static_cast<u64>(wide[j] % tb.p);
}

// R_d(x) in F_q test for one element.
inline bool raw_special(const KernelTables& tb, const u64* x, KernelScratch& s) {
    unsigned m = tb.m;
    // acc = x + x^q + ... + x^{q^{d-2}}
    std::copy(x, x + m, s.cur.data());
    std::fill(s.acc.begin(), s.acc.end(), 0);
    for (unsigned i = 0; i + 1 < tb.d; ++i) {
        for (unsigned j = 0; j < m; ++j) {
            s.acc[j] += s.cur[j];
            if (s.acc[j] >= tb.p) s.acc[j] -= tb.p;
        }
        if (i + 2 < tb.d) {
            raw_frob1(tb, s.cur.data(), s.t.data(), s.wide.data());
            std::swap(s.cur, s.t);
        }
    }
    // last term x^{q^{d-1}+q^d-1} by square-and-multiply over precomputed bits
    std::copy(x, x + m, s.r.data());
    for (size_t bi = 1; bi < tb.ebits.size(); ++bi) {
        raw_mul(tb, s.r.data(), s.r.data(), s.t.data(), s.wide.data());
        std::swap(s.r, s.t);
        if (tb.ebits[bi]) {
            raw_mul(tb, s.r.data(), x, s.t.data(), s.wide.data());
            std::swap(s.r, s.t);
        }
    }
    for (unsigned j = 0; j < m; ++j) {
        s.r[j] += s.acc[j];
        if (s.r[j] >= tb.p) s.r[j] -= tb.p;
    }
    // R in F_q iff R^q = R
    raw_frob1(tb, s.r.data(), s.rq.data(), s.wide.data());
    return std::equal(s.r.begin(), s.r.end(), s.rq.begin());
}

}  // namespace

std::uint64_t special_x_count(const FieldSpec& field, const CurveParams& params, int threads) {
    field.require_enumerable();
    const u64 total_n = field.cardinality_u64();
    KernelTables tables(field, params);
    const unsigned m = field.degree();
    const u64 p = field.p();

    const u64 block = 8192;
    const long long nblocks = static_cast<long long>((total_n + block - 1) / block);
    u64 count = 0;
    int nthreads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) reduction(+ : count) num_threads(nthreads)
    for (long long blk = 0; blk < nblocks; ++blk) {
        KernelScratch scratch(m);
        std::vector<u64> digits(m, 0);
        u64 start = static_cast<u64>(blk) * block;
        u64 stop = std::min(total_n, start + block);
        u64 idx = start;
        for (unsigned i = 0; i < m; ++i) {
            digits[i] = idx % p;
            idx /= p;
        }
        u64 local = 0;
        for (u64 k = start; k < stop; ++k) {
            if (raw_special(tables, digits.data(), scratch)) ++local;
            // odometer increment
            for (unsigned i = 0; i < m; ++i) {
                if (++digits[i] < p) break;
                digits[i] = 0;
            }
        }
        count += local;
    }
    return count;
}

std::vector<std::uint64_t> special_x_indices(const FieldSpec& field, const CurveParams& params,
                                             int threads) {
    field.require_enumerable();
    const u64 total_n = field.cardinality_u64();
    KernelTables tables(field, params);
    const unsigned m = field.degree();
    const u64 p = field.p();

    const u64 block = 8192;
    const long long nblocks = static_cast<long long>((total_n + block - 1) / block);
    std::vector<std::vector<u64>> found(nblocks);
    int nthreads = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(static) num_threads(nthreads)
    for (long long blk = 0; blk < nblocks; ++blk) {
        KernelScratch scratch(m);
        std::vector<u64> digits(m, 0);
        u64 start = static_cast<u64>(blk) * block;
        u64 stop = std::min(total_n, start + block);
        u64 idx = start;
        for (unsigned i = 0; i < m; ++i) {
            digits[i] = idx % p;
            idx /= p;
        }
        for (u64 k = start; k < stop; ++k) {
            if (raw_special(tables, digits.data(), scratch)) found[blk].push_back(k);
            for (unsigned i = 0; i < m; ++i) {
                if (++digits[i] < p) break;
                digits[i] = 0;
            }
        }
    }
    std::vector<u64> out;
    for (const auto& blk : found) out.insert(out.end(), blk.begin(), blk.end());
    return out;
}

mpz_class affine_oracle_count(const CurveParams& params) {
    mpz_class q = params.q();
    mpz_class pairs = mpz_pow_u(q, 2 * params.n);
    if (pairs > 10000000) throw std::length_error("affine oracle limited to 10^7 pairs");

    FieldSpec field = curve_field(params, false);
    const u64 n_elems = field.cardinality_u64();

    // Literal evaluation of both sides for every element; no reuse of the
    // kernel or of the trace-fiber argument.
    std::vector<u64> rhs_ix(n_elems), lhs_ix(n_elems);
    {
        u64 i = 0;
        for_each_element(field, [&](const FieldElement& x) {
            rhs_ix[i++] = field.index_of(rd_value(field, x, params));
        });
        u64 j = 0;
        for_each_element(field, [&](const FieldElement& y) {
            lhs_ix[j++] = field.index_of(field.trace_to_base(y, params.n, 1));
        });
    }
    u64 count = 0;
    for (u64 ix = 0; ix < n_elems; ++ix)
        for (u64 iy = 0; iy < n_elems; ++iy)
            if (rhs_ix[ix] == lhs_ix[iy]) ++count;
    return mpz_class(static_cast<unsigned long>(count));
}

mpz_class genus(const CurveParams& params) {
    mpz_class q = params.q();
    mpz_class product =
        (mpz_pow_u(q, params.n - 1) - 1) * (mpz_pow_u(q, params.d - 1) + mpz_pow_u(q, params.d) - 2);
    if (mpz_odd_p(product.get_mpz_t())) throw std::logic_error("genus numerator is odd");
    return product / 2;
}

CountReport build_report(const CurveParams& params, std::uint64_t special_x, bool attach_predictor) {
    mpz_class q = params.q();
    CountReport rep{params, mpz_class(), mpz_class(), mpz_class(), mpz_class(), std::nullopt,
                    std::nullopt, std::nullopt};
    rep.special_x = mpz_class(static_cast<unsigned long>(special_x));
    rep.brute_count = 1 + mpz_pow_u(q, params.n - 1) * rep.special_x;
    rep.baseline = 1 + mpz_pow_u(q, params.n - 1 + params.d);
    rep.bonus = rep.brute_count - rep.baseline;
    if (rep.bonus < 0) throw std::logic_error("count below the subfield baseline");
    if (attach_predictor) {
        Prediction pred = predictor_for(q, params.n, params.d);
        if (pred.status != PredictionStatus::none) {
            rep.predicted_count = predicted_count(q, params.n, params.d, pred.value_g);
            rep.agrees = (*rep.predicted_count == rep.brute_count);
        }
        rep.prediction = std::move(pred);
    }
    return rep;
}

CountReport point_count(const CurveParams& params, const PointCountOptions& opts) {
    FieldSpec field = curve_field(params, opts.force);
    u64 special = special_x_count(field, params, opts.threads);
    return build_report(params, special, opts.attach_predictor);
}

}  // namespace tracecurve
