#include "tracecurve/field.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace tracecurve {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 inv_mod_p(u64 a, u64 p) { return powmod_u64(a, p - 2, p); }

// ---- dense univariate arithmetic over F_p (modulus search support) ----

using Poly = std::vector<u64>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& f, u64 p) {
    if (a.empty() || b.empty()) return {};
    std::vector<u128> full(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j) full[i + j] += (u128)a[i] * b[j] % p;
    }
    // reduce mod f (monic, degree deg)
    size_t deg = f.size() - 1;
    for (size_t k = full.size(); k-- > deg;) {
        u64 c = static_cast<u64>(full[k] % p);
        if (!c) continue;
        u64 cneg = p - c;
        for (size_t j = 0; j < deg; ++j) full[k - deg + j] += (u128)cneg * f[j] % p;
        full[k] = 0;
    }
    Poly r(std::min(full.size(), deg));
    for (size_t i = 0; i < r.size(); ++i) r[i] = static_cast<u64>(full[i] % p);
    trim(r);
    return r;
}

Poly poly_pow_mod(Poly base, u64 e, const Poly& f, u64 p) {
    Poly r{1};
    while (e) {
        if (e & 1) r = poly_mul_mod(r, base, f, p);
        base = poly_mul_mod(base, base, f, p);
        e >>= 1;
    }
    return r;
}

Poly poly_mod(Poly a, const Poly& b, u64 p) {
    trim(a);
    size_t db = b.size() - 1;
    u64 lcinv = inv_mod_p(b.back(), p);
    while (a.size() >= b.size()) {
        u64 c = mulmod_u64(a.back(), lcinv, p);
        size_t shift = a.size() - b.size();
        if (c) {
            for (size_t j = 0; j < b.size(); ++j) {
                u64 t = mulmod_u64(c, b[j], p);
                a[shift + j] = (a[shift + j] + p - t) % p;
            }
        }
        a.pop_back();
        while (!a.empty() && a.back() == 0) a.pop_back();
        (void)db;
    }
    return a;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        u64 s = inv_mod_p(a.back(), p);
        for (auto& c : a) c = mulmod_u64(c, s, p);
    }
    return a;
}

// x^{p^k} mod f by k successive p-th powers.
Poly x_pk_mod(unsigned k, const Poly& f, u64 p) {
    Poly t{0, 1};  // x
    for (unsigned i = 0; i < k; ++i) t = poly_pow_mod(t, p, f, p);
    return t;
}

std::vector<unsigned> prime_divisors(unsigned m) {
    std::vector<unsigned> out;
    for (unsigned q = 2; q * q <= m; ++q) {
        if (m % q == 0) {
            out.push_back(q);
            while (m % q == 0) m /= q;
        }
    }
    if (m > 1) out.push_back(m);
    return out;
}

}  // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    // these 12 bases decide primality for all n < 3.3 * 10^24
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (unsigned i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

bool is_irreducible_mod_p(const std::vector<u64>& poly, u64 p) {
    Poly f = poly;
    trim(f);
    if (f.size() < 2) return false;
    unsigned m = static_cast<unsigned>(f.size() - 1);
    if (m == 1) return true;
    if (f[0] == 0) return false;  // divisible by x
    // x^{p^m} == x mod f
    Poly xm = x_pk_mod(m, f, p);
    if (!(xm.size() == 2 && xm[0] == 0 && xm[1] == 1)) return false;
    // gcd(x^{p^{m/l}} - x, f) = 1 for every prime l | m
    for (unsigned l : prime_divisors(m)) {
        Poly t = x_pk_mod(m / l, f, p);
        // t - x
        if (t.size() < 2) t.resize(2, 0);
        t[1] = (t[1] + p - 1) % p;
        trim(t);
        Poly g = poly_gcd(f, t, p);
        if (!(g.size() == 1 && g[0] == 1)) return false;
    }
    return true;
}

u64 enumeration_cap() {
    if (const char* env = std::getenv("TRACECURVE_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 1ull << 26;
}

FieldSpec::FieldSpec(u64 p, unsigned r, unsigned n_total, bool force)
    : p_(p), r_(r), n_total_(n_total), forced_(force) {
    if (!is_prime_u64(p)) throw std::invalid_argument("not prime: p = " + std::to_string(p));
    if (r == 0 || n_total == 0) throw std::invalid_argument("bad degree");
    m_ = r * n_total;
    if (m_ > 64) throw std::invalid_argument("bad degree: extension degree too large");

    // cardinality, tracking u64 overflow
    mpz_class card;
    mpz_ui_pow_ui(card.get_mpz_t(), p, m_);
    if (card.fits_ulong_p()) card_u64_ = card.get_ui();
    if (!force && (!card_u64_ || *card_u64_ > enumeration_cap()))
        throw std::length_error("field cardinality " + card.get_str() +
                                " exceeds enumeration cap; pass force to build anyway");

    // first irreducible monic modulus, constant coefficient varying fastest
    if (m_ == 1) {
        modulus_ = {0, 1};  // z itself; any monic linear works
    } else {
        std::vector<u64> cand(m_ + 1, 0);
        cand[m_] = 1;
        bool found = false;
        // iterate the low m_ coefficients as base-p digits of an index
        for (mpz_class j = 0; mpz_cmp(j.get_mpz_t(), card.get_mpz_t()) < 0; ++j) {
            mpz_class t = j;
            for (unsigned i = 0; i < m_; ++i) {
                mpz_class digit = t % p;
                cand[i] = digit.get_ui();
                t /= p;
            }
            if (cand[0] == 0) continue;  // divisible by z
            if (is_irreducible_mod_p(cand, p)) {
                modulus_ = cand;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("no irreducible modulus found");
    }

    // reduction rows: z^{m+j} mod f for j = 0..m-2
    if (m_ >= 2) {
        red_.resize(m_ - 1);
        std::vector<u64> zm(m_);
        for (unsigned i = 0; i < m_; ++i) zm[i] = (p_ - modulus_[i] % p_) % p_;
        std::vector<u64> cur = zm;
        for (unsigned j = 0; j + 1 < m_; ++j) {
            red_[j] = cur;
            // cur *= z, reduce
            u64 hi = cur[m_ - 1];
            for (unsigned i = m_; i-- > 1;) cur[i] = cur[i - 1];
            cur[0] = 0;
            if (hi)
                for (unsigned i = 0; i < m_; ++i)
                    cur[i] = (cur[i] + mulmod_u64(hi, zm[i], p_)) % p_;
        }
    }

    // q-power basis images: z^{iq} = (z^q)^i
    frob_basis_.resize(m_);
    FieldElement zq = [&] {
        FieldElement z = zero();
        if (m_ == 1) {
            // ambient field is F_p: Frobenius is x -> x^p = x... but q = p^r
            // with r*n_total = 1 means r = 1; the map is the identity.
            z.c[0] = (p_ - modulus_[0] % p_) % p_;  // z = -f0 numerically
            return z;
        }
        z.c[1] = 1;
        mpz_class e;
        mpz_ui_pow_ui(e.get_mpz_t(), p_, r_);
        return pow(z, e);
    }();
    FieldElement acc = one();
    for (unsigned i = 0; i < m_; ++i) {
        frob_basis_[i] = acc;
        if (i + 1 < m_) acc = mul(acc, zq);
    }
}

FieldSpec build_field(u64 p, unsigned r, unsigned n_total, bool force) {
    return FieldSpec(p, r, n_total, force);
}

mpz_class FieldSpec::q() const {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), p_, r_);
    return v;
}

mpz_class FieldSpec::cardinality() const {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), p_, m_);
    return v;
}

u64 FieldSpec::cardinality_u64() const {
    if (!card_u64_) throw std::length_error("cardinality exceeds 64 bits");
    return *card_u64_;
}

FieldElement FieldSpec::zero() const { return FieldElement{std::vector<u64>(m_, 0)}; }

FieldElement FieldSpec::one() const {
    FieldElement e = zero();
    e.c[0] = 1 % p_;
    return e;
}

FieldElement FieldSpec::from_integer(const mpz_class& v) const {
    mpz_class red = v % static_cast<unsigned long>(p_);
    if (red < 0) red += static_cast<unsigned long>(p_);
    FieldElement e = zero();
    e.c[0] = red.get_ui();
    return e;
}

FieldElement FieldSpec::from_coeffs(const std::vector<u64>& coeffs) const {
    if (coeffs.size() > m_) throw std::invalid_argument("coefficient vector too long");
    FieldElement e = zero();
    for (size_t i = 0; i < coeffs.size(); ++i) e.c[i] = coeffs[i] % p_;
    return e;
}

bool FieldSpec::is_zero(const FieldElement& a) const {
    return std::all_of(a.c.begin(), a.c.end(), [](u64 v) { return v == 0; });
}

void FieldSpec::check_same_field(const FieldElement& a) const {
    if (a.c.size() != m_) throw std::invalid_argument("element from a different field");
}

FieldElement FieldSpec::add(const FieldElement& a, const FieldElement& b) const {
    check_same_field(a);
    check_same_field(b);
    FieldElement r = a;
    for (unsigned i = 0; i < m_; ++i) {
        r.c[i] += b.c[i];
        if (r.c[i] >= p_) r.c[i] -= p_;
    }
    return r;
}

FieldElement FieldSpec::sub(const FieldElement& a, const FieldElement& b) const {
    check_same_field(a);
    check_same_field(b);
    FieldElement r = a;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = (r.c[i] + p_ - b.c[i]) % p_;
    return r;
}

FieldElement FieldSpec::neg(const FieldElement& a) const {
    check_same_field(a);
    FieldElement r = a;
    for (unsigned i = 0; i < m_; ++i) r.c[i] = (p_ - r.c[i]) % p_;
    return r;
}

FieldElement FieldSpec::reduce_product(const std::vector<u128>& full) const {
    std::vector<u128> acc = full;
    for (unsigned k = 2 * m_ - 1; k-- > m_;) {
        u64 c = static_cast<u64>(acc[k] % p_);
        if (c) {
            const auto& row = red_[k - m_];
            for (unsigned i = 0; i < m_; ++i) acc[i] += (u128)c * row[i];
        }
    }
    FieldElement r = zero();
    for (unsigned i = 0; i < m_; ++i) r.c[i] = static_cast<u64>(acc[i] % p_);
    return r;
}

FieldElement FieldSpec::mul(const FieldElement& a, const FieldElement& b) const {
    check_same_field(a);
    check_same_field(b);
    if (m_ == 1) {
        FieldElement r = zero();
        r.c[0] = mulmod_u64(a.c[0], b.c[0], p_);
        return r;
    }
    std::vector<u128> full(2 * m_ - 1, 0);
    for (unsigned i = 0; i < m_; ++i) {
        if (!a.c[i]) continue;
        for (unsigned j = 0; j < m_; ++j) full[i + j] += (u128)a.c[i] * b.c[j];
    }
    return reduce_product(full);
}

FieldElement FieldSpec::inv(const FieldElement& a) const {
    check_same_field(a);
    if (is_zero(a)) throw std::domain_error("division by zero");
    // extended Euclid in F_p[z] against the modulus
    Poly r0 = modulus_, r1(a.c.begin(), a.c.end());
    trim(r1);
    Poly s0{}, s1{1};
    while (!(r1.size() == 1)) {
        // divide r0 by r1
        Poly q_poly;
        Poly rem = r0;
        u64 lcinv = inv_mod_p(r1.back(), p_);
        q_poly.assign(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 0, 0);
        while (rem.size() >= r1.size() && !rem.empty()) {
            u64 cf = mulmod_u64(rem.back(), lcinv, p_);
            size_t shift = rem.size() - r1.size();
            q_poly[shift] = cf;
            if (cf)
                for (size_t j = 0; j < r1.size(); ++j)
                    rem[shift + j] = (rem[shift + j] + p_ - mulmod_u64(cf, r1[j], p_)) % p_;
            rem.pop_back();
            trim(rem);
        }
        // s = s0 - q*s1
        Poly qs(q_poly.size() + s1.size(), 0);
        for (size_t i = 0; i < q_poly.size(); ++i)
            if (q_poly[i])
                for (size_t j = 0; j < s1.size(); ++j)
                    qs[i + j] = (qs[i + j] + mulmod_u64(q_poly[i], s1[j], p_)) % p_;
        trim(qs);
        Poly s(std::max(s0.size(), qs.size()), 0);
        for (size_t i = 0; i < s.size(); ++i) {
            u64 v0 = i < s0.size() ? s0[i] : 0;
            u64 vq = i < qs.size() ? qs[i] : 0;
            s[i] = (v0 + p_ - vq) % p_;
        }
        trim(s);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s);
        if (r1.empty()) throw std::logic_error("modulus not irreducible");
    }
    u64 scale = inv_mod_p(r1[0], p_);
    FieldElement out = zero();
    for (size_t i = 0; i < s1.size(); ++i) out.c[i] = mulmod_u64(s1[i], scale, p_);
    return out;
}

FieldElement FieldSpec::div(const FieldElement& a, const FieldElement& b) const {
    return mul(a, inv(b));
}

FieldElement FieldSpec::arith(const FieldElement& a, const FieldElement& b, FieldOp op) const {
    switch (op) {
        case FieldOp::add: return add(a, b);
        case FieldOp::sub: return sub(a, b);
        case FieldOp::mul: return mul(a, b);
        case FieldOp::div: return div(a, b);
    }
    throw std::logic_error("bad op");
}

FieldElement FieldSpec::pow(const FieldElement& a, const mpz_class& e) const {
    check_same_field(a);
    if (e < 0) throw std::invalid_argument("negative exponent");
    FieldElement result = one();
    FieldElement base = a;
    mpz_class n = e;
    while (n > 0) {
        if (mpz_odd_p(n.get_mpz_t())) result = mul(result, base);
        base = mul(base, base);
        n >>= 1;
    }
    return result;
}

FieldElement FieldSpec::pow(const FieldElement& a, u64 e) const {
    FieldElement result = one();
    FieldElement base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

FieldElement FieldSpec::frobenius(const FieldElement& a, unsigned e) const {
    check_same_field(a);
    FieldElement cur = a;
    for (unsigned step = 0; step < e; ++step) {
        // linear map through the q-power basis images
        std::vector<u128> acc(m_, 0);
        for (unsigned i = 0; i < m_; ++i) {
            if (!cur.c[i]) continue;
            const auto& img = frob_basis_[i].c;
            for (unsigned j = 0; j < m_; ++j) acc[j] += (u128)cur.c[i] * img[j];
        }
        for (unsigned j = 0; j < m_; ++j) cur.c[j] = static_cast<u64>(acc[j] % p_);
    }
    return cur;
}

FieldElement FieldSpec::trace_to_base(const FieldElement& a, unsigned m, unsigned k) const {
    if (k == 0 || m == 0 || m % k != 0) throw std::invalid_argument("trace requires k | m");
    if (n_total_ % m != 0) throw std::invalid_argument("trace: m does not divide the tower");
    FieldElement acc = zero();
    FieldElement cur = a;
    for (unsigned i = 0; i < m / k; ++i) {
        acc = add(acc, cur);
        cur = frobenius(cur, k);
    }
    return acc;
}

FieldElement FieldSpec::norm_to_base(const FieldElement& a, unsigned m, unsigned k) const {
    if (k == 0 || m == 0 || m % k != 0) throw std::invalid_argument("norm requires k | m");
    if (n_total_ % m != 0) throw std::invalid_argument("norm: m does not divide the tower");
    FieldElement acc = one();
    FieldElement cur = a;
    for (unsigned i = 0; i < m / k; ++i) {
        acc = mul(acc, cur);
        cur = frobenius(cur, k);
    }
    return acc;
}

bool FieldSpec::in_subfield(const FieldElement& a, unsigned k) const {
    return frobenius(a, k) == a;
}

FieldElement FieldSpec::element_at(u64 index) const {
    FieldElement e = zero();
    for (unsigned i = 0; i < m_; ++i) {
        e.c[i] = index % p_;
        index /= p_;
    }
    return e;
}

u64 FieldSpec::index_of(const FieldElement& a) const {
    check_same_field(a);
    u64 idx = 0;
    for (unsigned i = m_; i-- > 0;) idx = idx * p_ + a.c[i];
    return idx;
}

bool FieldSpec::next_element(FieldElement& a) const {
    for (unsigned i = 0; i < m_; ++i) {
        if (++a.c[i] < p_) return true;
        a.c[i] = 0;
    }
    return false;
}

mpz_class FieldSpec::multiplicative_order(const FieldElement& a) const {
    if (is_zero(a)) throw std::domain_error("order of zero");
    mpz_class group = cardinality() - 1;
    // order = group / prod of removable prime powers
    mpz_class order = group;
    mpz_class n = group;
    for (mpz_class f = 2; f * f <= n;) {
        if (mpz_divisible_p(n.get_mpz_t(), f.get_mpz_t())) {
            while (mpz_divisible_p(n.get_mpz_t(), f.get_mpz_t())) n /= f;
            while (mpz_divisible_p(order.get_mpz_t(), f.get_mpz_t())) {
                mpz_class reduced = order / f;
                if (pow(a, reduced) == one())
                    order = reduced;
                else
                    break;
            }
        }
        f += 1;
    }
    if (n > 1) {
        while (mpz_divisible_p(order.get_mpz_t(), n.get_mpz_t())) {
            mpz_class reduced = order / n;
            if (pow(a, reduced) == one())
                order = reduced;
            else
                break;
        }
    }
    return order;
}

void FieldSpec::require_enumerable() const {
    if (forced_) return;
    if (!card_u64_ || *card_u64_ > enumeration_cap())
        throw std::length_error("enumeration cap exceeded; build the field with force");
}

std::string FieldSpec::describe() const {
    std::ostringstream os;
    os << "F_{" << p_ << "^" << m_ << "} = F_" << p_ << "[z]/(";
    bool first = true;
    for (unsigned i = m_ + 1; i-- > 0;) {
        if (!modulus_[i]) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0 || modulus_[i] != 1) os << modulus_[i];
        if (i >= 1) {
            os << (i == 0 ? "" : "z");
            if (i > 1) os << "^" << i;
        }
    }
    os << ")";
    return os.str();
}

}  // namespace tracecurve
