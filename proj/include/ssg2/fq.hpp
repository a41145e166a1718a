#pragma once
#include <boost/container/small_vector.hpp>
#include <algorithm>
#include <cassert>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"
#include "rng.hpp"

namespace ssg2 {

// Finite field tower F_p = L_0 <= L_1 <= ... ; each layer is a monic-polynomial
// quotient over the one below.  Elements are flat F_p coefficient vectors in the
// product basis of the tower.
struct FqCtx;
using FqCtxPtr = std::shared_ptr<const FqCtx>;

class Fq;

struct FqCtx {
    uint32_t p = 0;
    FqCtxPtr below;                                  // null iff this is the prime field
    uint32_t reldeg = 1;                             // degree over the layer below
    uint32_t absdeg = 1;                             // degree over F_p
    std::vector<std::vector<uint32_t>> mod_coeffs;   // monic modulus over below, flat coords
    std::vector<std::vector<uint32_t>> frob_cols;    // matrix of x -> x^p on the F_p basis

    Int order() const {
        Int q = 1;
        for (uint32_t i = 0; i < absdeg; i++) q *= p;
        return q;
    }
    bool is_prime_field() const { return absdeg == 1; }
    uint32_t add(uint32_t a, uint32_t b) const { uint32_t s = a + b; return s >= p ? s - p : s; }
    uint32_t sub(uint32_t a, uint32_t b) const { return a >= b ? a - b : a + p - b; }
    uint32_t mul(uint32_t a, uint32_t b) const { return (uint32_t)(((uint64_t)a * b) % p); }
    uint32_t neg(uint32_t a) const { return a ? p - a : 0; }
    uint32_t inv_fp(uint32_t a) const {
        if (a == 0) throw std::domain_error("Fp inverse of 0");
        int64_t t = 0, nt = 1, r = p, nr = a;
        while (nr != 0) {
            int64_t q = r / nr;
            int64_t tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += p;
        return (uint32_t)t;
    }
};

namespace detail {

inline void fq_mul_rec(const FqCtx* ctx, const uint32_t* a, const uint32_t* b, uint32_t* out);

inline void fq_add_rec(const FqCtx* ctx, const uint32_t* a, const uint32_t* b, uint32_t* out) {
    for (uint32_t i = 0; i < ctx->absdeg; i++) out[i] = ctx->add(a[i], b[i]);
}
inline void fq_sub_rec(const FqCtx* ctx, const uint32_t* a, const uint32_t* b, uint32_t* out) {
    for (uint32_t i = 0; i < ctx->absdeg; i++) out[i] = ctx->sub(a[i], b[i]);
}

inline void fq_mul_rec(const FqCtx* ctx, const uint32_t* a, const uint32_t* b, uint32_t* out) {
    const uint32_t p = ctx->p;
    if (ctx->absdeg == 1) { out[0] = ctx->mul(a[0], b[0]); return; }
    if (ctx->below->absdeg == 1) {
        // single extension of F_p: schoolbook with u64 accumulators
        const uint32_t d = ctx->reldeg;
        uint64_t acc[64] = {0};
        assert(2 * d - 1 <= 64);
        for (uint32_t i = 0; i < d; i++) {
            if (!a[i]) continue;
            uint64_t ai = a[i];
            for (uint32_t j = 0; j < d; j++) acc[i + j] += ai * b[j];
        }
        for (int i = 2 * (int)d - 2; i >= (int)d; i--) {
            uint32_t c = (uint32_t)(acc[i] % p);
            if (c) {
                uint32_t nc = p - c;
                for (uint32_t j = 0; j < d; j++) {
                    uint32_t m = ctx->mod_coeffs[j][0];
                    if (m) acc[i - d + j] += (uint64_t)nc * m;
                }
            }
            acc[i] = 0;
        }
        for (uint32_t i = 0; i < d; i++) out[i] = (uint32_t)(acc[i] % p);
        return;
    }
    // tower layer: chunks over the layer below
    const FqCtx* bc = ctx->below.get();
    const uint32_t m = bc->absdeg, d = ctx->reldeg;
    std::vector<uint32_t> acc((2 * d - 1) * m, 0), tmp(m);
    for (uint32_t i = 0; i < d; i++)
        for (uint32_t j = 0; j < d; j++) {
            fq_mul_rec(bc, a + i * m, b + j * m, tmp.data());
            fq_add_rec(bc, acc.data() + (i + j) * m, tmp.data(), acc.data() + (i + j) * m);
        }
    for (int i = 2 * (int)d - 2; i >= (int)d; i--) {
        uint32_t* lead = acc.data() + i * m;
        bool z = true;
        for (uint32_t k = 0; k < m; k++) if (lead[k]) { z = false; break; }
        if (!z) {
            for (uint32_t j = 0; j < d; j++) {
                fq_mul_rec(bc, lead, ctx->mod_coeffs[j].data(), tmp.data());
                fq_sub_rec(bc, acc.data() + (i - d + j) * m, tmp.data(),
                           acc.data() + (i - d + j) * m);
            }
            for (uint32_t k = 0; k < m; k++) lead[k] = 0;
        }
    }
    for (uint32_t i = 0; i < d * m; i++) out[i] = acc[i];
}

}  // namespace detail

class Fq {
  public:
    const FqCtx* ctx = nullptr;
    boost::container::small_vector<uint32_t, 8> c;

    Fq() = default;
    static Fq zero(const FqCtx* k) {
        Fq r; r.ctx = k; r.c.assign(k->absdeg, 0); return r;
    }
    static Fq one(const FqCtx* k) {
        Fq r = zero(k); r.c[0] = 1 % k->p; return r;
    }
    static Fq from_int(const FqCtx* k, long long v) {
        Fq r = zero(k);
        long long m = v % (long long)k->p;
        if (m < 0) m += k->p;
        r.c[0] = (uint32_t)m;
        return r;
    }
    static Fq from_int(const FqCtx* k, const Int& v) {
        Int m = v % k->p;
        if (m < 0) m += k->p;
        return from_int(k, (long long)(uint32_t)m);
    }
    static Fq from_coeffs(const FqCtx* k, const std::vector<uint32_t>& v) {
        Fq r = zero(k);
        if (v.size() > k->absdeg) throw std::invalid_argument("coefficient vector too long");
        for (size_t i = 0; i < v.size(); i++) r.c[i] = v[i] % k->p;
        return r;
    }
    static Fq gen(const FqCtx* k) {  // generator of the top layer over the layer below
        Fq r = zero(k);
        if (k->absdeg == 1) throw std::invalid_argument("prime field has no generator");
        r.c[k->below->absdeg] = 1;
        return r;
    }
    static Fq rand(const FqCtx* k, Rng& rng) {
        Fq r = zero(k);
        for (uint32_t i = 0; i < k->absdeg; i++) r.c[i] = (uint32_t)rng.below(k->p);
        return r;
    }

    bool is_zero() const {
        for (auto v : c) if (v) return false;
        return true;
    }
    bool is_one() const {
        if (c.empty() || c[0] != 1 % ctx->p) return false;
        for (size_t i = 1; i < c.size(); i++) if (c[i]) return false;
        return true;
    }
    bool operator==(const Fq& o) const { return ctx == o.ctx && c == o.c; }
    bool operator!=(const Fq& o) const { return !(*this == o); }
    bool operator<(const Fq& o) const {
        return std::lexicographical_compare(c.begin(), c.end(), o.c.begin(), o.c.end());
    }

    Fq operator+(const Fq& o) const {
        assert(ctx == o.ctx);
        Fq r = *this;
        for (uint32_t i = 0; i < ctx->absdeg; i++) r.c[i] = ctx->add(c[i], o.c[i]);
        return r;
    }
    Fq operator-(const Fq& o) const {
        assert(ctx == o.ctx);
        Fq r = *this;
        for (uint32_t i = 0; i < ctx->absdeg; i++) r.c[i] = ctx->sub(c[i], o.c[i]);
        return r;
    }
    Fq operator-() const {
        Fq r = *this;
        for (uint32_t i = 0; i < ctx->absdeg; i++) r.c[i] = ctx->neg(c[i]);
        return r;
    }
    Fq operator*(const Fq& o) const {
        assert(ctx == o.ctx);
        Fq r = zero(ctx);
        detail::fq_mul_rec(ctx, c.data(), o.c.data(), r.c.data());
        return r;
    }
    Fq& operator+=(const Fq& o) { *this = *this + o; return *this; }
    Fq& operator-=(const Fq& o) { *this = *this - o; return *this; }
    Fq& operator*=(const Fq& o) { *this = *this * o; return *this; }

    Fq inv() const;
    Fq operator/(const Fq& o) const { return *this * o.inv(); }

    Fq pow(Int e) const {
        if (e < 0) return inv().pow(-e);
        Fq b = *this, r = one(ctx);
        while (e > 0) {
            if ((e & 1) != 0) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }
    Fq frob() const {  // x -> x^p via the precomputed linear map
        Fq r = zero(ctx);
        for (uint32_t j = 0; j < ctx->absdeg; j++) {
            if (!c[j]) continue;
            const auto& col = ctx->frob_cols[j];
            for (uint32_t i = 0; i < ctx->absdeg; i++)
                r.c[i] = ctx->add(r.c[i], ctx->mul(c[j], col[i]));
        }
        return r;
    }
    Fq frob_iter(uint32_t k) const {
        Fq r = *this;
        for (uint32_t i = 0; i < k; i++) r = r.frob();
        return r;
    }

    // coefficient i of this element viewed as a polynomial over the layer below
    Fq base_coeff(uint32_t i) const {
        const FqCtx* bc = ctx->below.get();
        if (!bc) throw std::logic_error("base_coeff on prime field");
        Fq r = zero(bc);
        for (uint32_t k = 0; k < bc->absdeg; k++) r.c[k] = c[i * bc->absdeg + k];
        return r;
    }
    static Fq from_base_coeffs(const FqCtx* k, const std::vector<Fq>& v) {
        const FqCtx* bc = k->below.get();
        Fq r = zero(k);
        for (uint32_t i = 0; i < v.size() && i < k->reldeg; i++)
            for (uint32_t t = 0; t < bc->absdeg; t++) r.c[i * bc->absdeg + t] = v[i].c[t];
        return r;
    }
    static Fq lift(const FqCtx* k, const Fq& a) {  // embed an element of a lower layer
        if (a.ctx == k) return a;
        const FqCtx* walk = k;
        while (walk->below && walk->below.get() != a.ctx) walk = walk->below.get();
        if (!walk->below) {
            if (a.ctx->absdeg == 1 && a.ctx->p == k->p) {  // any prime ctx instance
                Fq r = zero(k); r.c[0] = a.c[0]; return r;
            }
            throw std::invalid_argument("lift: not a subtower element");
        }
        Fq r = zero(walk);
        for (uint32_t t = 0; t < a.ctx->absdeg; t++) r.c[t] = a.c[t];
        return lift(k, r);
    }
    Fq lower(const FqCtx* target) const {  // throws if not in the target layer
        if (ctx == target) return *this;
        const FqCtx* bc = ctx->below.get();
        if (!bc) throw std::invalid_argument("lower: already prime field");
        for (uint32_t i = bc->absdeg; i < ctx->absdeg; i++)
            if (c[i]) throw std::domain_error("lower: element not in requested layer");
        Fq r = Fq::zero(bc);
        for (uint32_t i = 0; i < bc->absdeg; i++) r.c[i] = c[i];
        if (bc == target) return r;
        return r.lower(target);
    }
    bool in_layer(const FqCtx* target) const {
        if (ctx == target) return true;
        const FqCtx* bc = ctx->below.get();
        if (!bc) return false;
        for (uint32_t i = bc->absdeg; i < ctx->absdeg; i++)
            if (c[i]) return false;
        Fq r = Fq::zero(bc);
        for (uint32_t i = 0; i < bc->absdeg; i++) r.c[i] = c[i];
        return r.in_layer(target);
    }

    std::string str() const {
        std::string s = "[";
        for (uint32_t i = 0; i < ctx->absdeg; i++) {
            if (i) s += ",";
            s += std::to_string(c[i]);
        }
        return s + "]";
    }
};

inline Fq kzero(const Fq& like) { return Fq::zero(like.ctx); }
inline Fq kone(const Fq& like) { return Fq::one(like.ctx); }
inline bool kis0(const Fq& a) { return a.is_zero(); }
inline Fq kinv(const Fq& a) { return a.inv(); }

inline Fq Fq::inv() const {
    if (is_zero()) throw std::domain_error("Fq inverse of 0");
    if (ctx->absdeg == 1) {
        Fq r = *this;
        r.c[0] = ctx->inv_fp(c[0]);
        return r;
    }
    // extended euclid against the modulus, coefficients in the layer below
    const FqCtx* bc = ctx->below.get();
    const uint32_t m = bc->absdeg, d = ctx->reldeg;
    using Vec = std::vector<Fq>;
    auto trim = [](Vec& v) { while (!v.empty() && v.back().is_zero()) v.pop_back(); };
    Vec r0(d + 1);
    for (uint32_t i = 0; i < d; i++)
        r0[i] = Fq::from_coeffs(bc, std::vector<uint32_t>(ctx->mod_coeffs[i].begin(),
                                                          ctx->mod_coeffs[i].end()));
    r0[d] = Fq::one(bc);
    Vec r1(d);
    for (uint32_t i = 0; i < d; i++) {
        r1[i] = Fq::zero(bc);
        for (uint32_t t = 0; t < m; t++) r1[i].c[t] = c[i * m + t];
    }
    trim(r1);
    Vec s0 = {}, s1 = {Fq::one(bc)};
    while (!r1.empty()) {
        Vec q;
        Vec rem = r0;
        Fq lcinv = r1.back().inv();
        int dr = (int)r1.size() - 1;
        q.assign(std::max<int>(1, (int)rem.size() - dr), Fq::zero(bc));
        while ((int)rem.size() - 1 >= dr && !rem.empty()) {
            int k = (int)rem.size() - 1 - dr;
            Fq f = rem.back() * lcinv;
            q[k] = f;
            for (int i = 0; i <= dr; i++) rem[k + i] = rem[k + i] - f * r1[i];
            trim(rem);
        }
        Vec qs(q.size() + s1.size(), Fq::zero(bc));
        for (size_t i = 0; i < q.size(); i++)
            for (size_t j = 0; j < s1.size(); j++)
                if (!q[i].is_zero() && !s1[j].is_zero()) qs[i + j] += q[i] * s1[j];
        trim(qs);
        Vec ns = s0;
        ns.resize(std::max(ns.size(), qs.size()), Fq::zero(bc));
        for (size_t i = 0; i < qs.size(); i++) ns[i] = ns[i] - qs[i];
        trim(ns);
        r0 = r1; r1 = rem; s0 = s1; s1 = ns;
    }
    if (r0.size() != 1) throw std::domain_error("Fq inverse: modulus not irreducible?");
    Fq lead_inv = r0[0].inv();
    Fq out = Fq::zero(ctx);
    for (size_t i = 0; i < s0.size(); i++) {
        Fq v = s0[i] * lead_inv;
        for (uint32_t t = 0; t < m; t++) out.c[i * m + t] = v.c[t];
    }
    return out;
}

inline FqCtxPtr make_prime_field(uint32_t p) {
    auto k = std::make_shared<FqCtx>();
    k->p = p; k->reldeg = 1; k->absdeg = 1;
    k->frob_cols = {{1 % p}};
    return k;
}

// Extend `base` by a monic polynomial (coefficients in base, low to high, length deg+1).
// Irreducibility is NOT verified here; see tower_create in fqfactor.hpp.
inline FqCtxPtr make_extension(FqCtxPtr base, const std::vector<Fq>& monic_modulus) {
    auto k = std::make_shared<FqCtx>();
    if (monic_modulus.size() < 2) throw std::invalid_argument("extension degree must be >= 1");
    uint32_t d = (uint32_t)monic_modulus.size() - 1;
    if (!monic_modulus.back().is_one()) throw std::invalid_argument("modulus must be monic");
    k->p = base->p;
    k->below = base;
    k->reldeg = d;
    k->absdeg = base->absdeg * d;
    if (base->absdeg == 1 && 2 * d - 1 > 64)
        throw std::invalid_argument("extension degree too large for the flat layer");
    k->mod_coeffs.resize(d);
    for (uint32_t i = 0; i < d; i++) {
        if (monic_modulus[i].ctx != base.get())
            throw std::invalid_argument("modulus coefficients must live in the base layer");
        k->mod_coeffs[i] = std::vector<uint32_t>(monic_modulus[i].c.begin(),
                                                 monic_modulus[i].c.end());
    }
    k->frob_cols.resize(k->absdeg);
    for (uint32_t j = 0; j < k->absdeg; j++) {
        Fq bj = Fq::zero(k.get());
        bj.c[j] = 1;
        Fq fj = bj.pow(Int(k->p));
        k->frob_cols[j] = std::vector<uint32_t>(fj.c.begin(), fj.c.end());
    }
    return k;
}

}  // namespace ssg2
