#pragma once
#include "ratfunc.hpp"

namespace ssg2 {

inline RatFuncU kzero(const RatFuncU& like) {
    const FqCtx* k = like.den.is_zero() ? like.num.lead().ctx : like.den.lead().ctx;
    RatFuncU r;
    r.den = FqPoly::constant(Fq::one(k));
    return r;
}
inline RatFuncU kone(const RatFuncU& like) {
    RatFuncU r = kzero(like);
    r.num = r.den;
    return r;
}
inline bool kis0(const RatFuncU& a) { return a.is_zero(); }
inline RatFuncU kinv(const RatFuncU& a) { return kone(a) / a; }

// k[x1][x2]: dense in x2 with univariate coefficients in x1.
struct Poly2 {
    std::vector<FqPoly> c;  // c[j] = coefficient of x2^j, trimmed

    Poly2() = default;
    explicit Poly2(std::vector<FqPoly> v) : c(std::move(v)) { trim(); }
    static Poly2 zero() { return {}; }
    static Poly2 constant(const Fq& a) {
        Poly2 r;
        if (!a.is_zero()) r.c = {FqPoly::constant(a)};
        return r;
    }
    static Poly2 from_x1(FqPoly p) {
        Poly2 r;
        if (!p.is_zero()) r.c = {std::move(p)};
        return r;
    }
    static Poly2 from_x2(const FqPoly& p, const FqCtx* k) {
        Poly2 r;
        r.c.reserve(p.c.size());
        for (auto& a : p.c) r.c.push_back(FqPoly::constant(a));
        (void)k;
        r.trim();
        return r;
    }
    static Poly2 x1(const FqCtx* k) { return from_x1(FqPoly::x(Fq::one(k))); }
    static Poly2 x2(const FqCtx* k) {
        Poly2 r;
        r.c = {FqPoly(), FqPoly::constant(Fq::one(k))};
        return r;
    }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int deg_x2() const { return (int)c.size() - 1; }
    int deg_x1() const {
        int d = -1;
        for (auto& p : c) d = std::max(d, p.deg());
        return d;
    }
    size_t term_count() const {
        size_t n = 0;
        for (auto& p : c) n += p.c.size();
        return n;
    }
    bool operator==(const Poly2& o) const {
        if (c.size() != o.c.size()) return false;
        for (size_t i = 0; i < c.size(); i++)
            if (!(c[i] == o.c[i])) return false;
        return true;
    }

    Poly2 operator+(const Poly2& o) const {
        Poly2 r;
        size_t n = std::max(c.size(), o.c.size());
        r.c.resize(n);
        for (size_t i = 0; i < n; i++) {
            if (i < c.size() && i < o.c.size()) r.c[i] = c[i] + o.c[i];
            else if (i < c.size()) r.c[i] = c[i];
            else r.c[i] = o.c[i];
        }
        r.trim();
        return r;
    }
    Poly2 operator-() const {
        Poly2 r = *this;
        for (auto& p : r.c) p = -p;
        return r;
    }
    Poly2 operator-(const Poly2& o) const { return *this + (-o); }
    Poly2 operator*(const Poly2& o) const {
        if (is_zero() || o.is_zero()) return {};
        Poly2 r;
        r.c.assign(c.size() + o.c.size() - 1, FqPoly());
        for (size_t i = 0; i < c.size(); i++) {
            if (c[i].is_zero()) continue;
            for (size_t j = 0; j < o.c.size(); j++) {
                if (o.c[j].is_zero()) continue;
                r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
            }
        }
        r.trim();
        return r;
    }
    Poly2 scale(const Fq& a) const {
        Poly2 r = *this;
        for (auto& p : r.c) p = p * a;
        r.trim();
        return r;
    }
    FqPoly eval_x2(const Fq& v) const {  // substitute x2 := v, poly in x1 remains
        FqPoly r;
        for (int j = (int)c.size() - 1; j >= 0; j--) r = r * FqPoly::constant(v) + c[j];
        return r;
    }
    FqPoly eval_x1(const Fq& v) const {  // substitute x1 := v, poly in x2 remains
        std::vector<Fq> out;
        out.reserve(c.size());
        for (auto& p : c) out.push_back(p.eval(v));
        return FqPoly(std::move(out));
    }
    Fq eval(const Fq& v1, const Fq& v2) const { return eval_x2(v2).eval(v1); }
    Poly2 derivative_x1() const {
        Poly2 r = *this;
        for (auto& p : r.c) p = p.derivative();
        r.trim();
        return r;
    }
    Poly2 derivative_x2() const {
        if (c.size() <= 1) return {};
        Poly2 r;
        r.c.reserve(c.size() - 1);
        const FqCtx* k = lead_ctx();
        for (size_t j = 1; j < c.size(); j++) r.c.push_back(c[j] * Fq::from_int(k, (long long)j));
        r.trim();
        return r;
    }
    const FqCtx* lead_ctx() const {
        for (auto& p : c)
            if (!p.is_zero()) return p.lead().ctx;
        return nullptr;
    }
    // content in k[x1] (gcd of the coefficients)
    FqPoly content_x1() const {
        FqPoly g;
        for (auto& p : c) g = poly_gcd(g, p);
        return g;
    }
    std::string str() const {
        std::string s;
        for (size_t j = 0; j < c.size(); j++) {
            if (c[j].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + poly_str(c[j], "x1") + ")*x2^" + std::to_string(j);
        }
        return s.empty() ? "0" : s;
    }
};

inline Poly<RatFuncU> poly2_to_rf(const Poly2& p, const FqCtx* k) {
    std::vector<RatFuncU> c;
    c.reserve(p.c.size());
    for (auto& q : p.c) c.push_back(RatFuncU::from_poly(q, k));
    return Poly<RatFuncU>(std::move(c));
}

// converts back when every coefficient is a polynomial (common denominator 1)
inline Poly2 rf_to_poly2(const Poly<RatFuncU>& p) {
    Poly2 r;
    r.c.reserve(p.c.size());
    for (auto& q : p.c) {
        if (q.den.deg() != 0) throw std::domain_error("rf_to_poly2: nontrivial denominator");
        Fq li = q.den.c[0].inv();
        r.c.push_back(q.num * li);
    }
    r.trim();
    return r;
}

// exact division in k[x1][x2]; throws if not divisible
inline Poly2 poly2_exact_div(const Poly2& a, const Poly2& b) {
    if (b.is_zero()) throw std::domain_error("poly2 division by zero");
    if (a.is_zero()) return {};
    const FqCtx* k = a.lead_ctx();
    Poly<RatFuncU> pa = poly2_to_rf(a, k), pb = poly2_to_rf(b, k), q, r;
    poly_divrem(pa, pb, q, r);
    if (!r.is_zero()) throw std::domain_error("poly2 division not exact");
    // clear rational-function coefficients (they must be polynomials)
    Poly2 out;
    out.c.reserve(q.c.size());
    for (auto& f : q.c) {
        FqPoly qq, rr;
        poly_divrem(f.num, f.den, qq, rr);
        if (!rr.is_zero()) throw std::domain_error("poly2 division not exact (coeff)");
        out.c.push_back(qq);
    }
    out.trim();
    return out;
}

// primitive gcd in k[x1][x2]
inline Poly2 poly2_gcd(const Poly2& a, const Poly2& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const FqCtx* k = a.lead_ctx();
    FqPoly ca = a.content_x1(), cb = b.content_x1();
    FqPoly cg = poly_gcd(ca, cb);
    Poly2 pa, pb;
    pa.c.reserve(a.c.size());
    for (auto& p : a.c) pa.c.push_back(poly_exact_div(p, ca));
    pb.c.reserve(b.c.size());
    for (auto& p : b.c) pb.c.push_back(poly_exact_div(p, cb));
    pa.trim(); pb.trim();
    Poly<RatFuncU> g = poly_gcd(poly2_to_rf(pa, k), poly2_to_rf(pb, k));
    // g is monic in x2 over k(x1): clear denominators and take the primitive part
    FqPoly lcm = FqPoly::constant(Fq::one(k));
    for (auto& f : g.c) lcm = poly_exact_div(lcm * f.den, poly_gcd(lcm, f.den));
    Poly2 gp;
    gp.c.reserve(g.c.size());
    for (auto& f : g.c) gp.c.push_back(f.num * poly_exact_div(lcm, f.den));
    gp.trim();
    FqPoly cont = gp.content_x1();
    Poly2 out;
    out.c.reserve(gp.c.size());
    for (auto& p : gp.c) out.c.push_back(poly_exact_div(p, cont));
    out.trim();
    // normalize: leading x2-coefficient monic in x1
    Fq li = out.c.back().lead().inv();
    for (auto& p : out.c) p = p * li;
    return out * Poly2::from_x1(cg);
}

// squarefree part w.r.t. both variables (for curve equation extraction)
inline Poly2 poly2_squarefree(const Poly2& a) {
    Poly2 d2 = a.derivative_x2();
    Poly2 g = d2.is_zero() ? a : poly2_gcd(a, d2);
    Poly2 r = d2.is_zero() ? a : poly2_exact_div(a, g);
    Poly2 d1 = r.derivative_x1();
    if (!d1.is_zero()) {
        Poly2 g1 = poly2_gcd(r, d1);
        if (g1.deg_x1() > 0 || g1.deg_x2() > 0) r = poly2_exact_div(r, g1);
    }
    return r;
}

// resultant in an auxiliary variable t of f = sum f_i t^i, g = sum g_j t^j with
// Poly2 coefficients, computed as a fraction-free Sylvester determinant (Bareiss).
inline Poly2 sylvester_resultant(const std::vector<Poly2>& f, const std::vector<Poly2>& g) {
    int m = (int)f.size() - 1, n = (int)g.size() - 1;
    if (m < 0 || n < 0) throw std::domain_error("resultant of zero polynomial");
    int N = m + n;
    std::vector<std::vector<Poly2>> s(N, std::vector<Poly2>(N));
    for (int i = 0; i < n; i++)
        for (int j = 0; j <= m; j++) s[i][i + (m - j)] = f[j];
    for (int i = 0; i < m; i++)
        for (int j = 0; j <= n; j++) s[n + i][i + (n - j)] = g[j];
    // Bareiss
    Poly2 prev = Poly2::constant(Fq::one(f.back().is_zero() ? g.back().lead_ctx()
                                                            : f.back().lead_ctx()));
    int sign = 1;
    for (int k = 0; k + 1 < N; k++) {
        if (s[k][k].is_zero()) {
            int t = k + 1;
            while (t < N && s[t][k].is_zero()) t++;
            if (t == N) return Poly2::zero();
            std::swap(s[k], s[t]);
            sign = -sign;
        }
        for (int i = k + 1; i < N; i++)
            for (int j = k + 1; j < N; j++) {
                Poly2 num = s[i][j] * s[k][k] - s[i][k] * s[k][j];
                s[i][j] = poly2_exact_div(num, prev);
            }
        prev = s[k][k];
    }
    Poly2 r = s[N - 1][N - 1];
    return sign < 0 ? -r : r;
}

}  // namespace ssg2
