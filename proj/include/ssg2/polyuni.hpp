#pragma once
#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssg2 {

// Dense univariate polynomials over a field K providing kzero/kone/kis0/kinv
// overloads.  The zero polynomial is the empty vector.
template <class K>
struct Poly {
    std::vector<K> c;  // low to high, no trailing zeros

    Poly() = default;
    explicit Poly(std::vector<K> v) : c(std::move(v)) { trim(); }
    static Poly zero() { return Poly(); }
    static Poly constant(const K& a) {
        Poly r;
        if (!kis0(a)) r.c = {a};
        return r;
    }
    static Poly monomial(const K& a, size_t d) {
        Poly r;
        if (kis0(a)) return r;
        r.c.assign(d + 1, kzero(a));
        r.c[d] = a;
        return r;
    }
    // x + 0, needs an exemplar for the coefficient field
    static Poly x(const K& like) {
        Poly r;
        r.c = {kzero(like), kone(like)};
        return r;
    }

    void trim() {
        while (!c.empty() && kis0(c.back())) c.pop_back();
    }
    bool is_zero() const { return c.empty(); }
    int deg() const { return (int)c.size() - 1; }  // -1 for zero
    const K& lead() const {
        if (c.empty()) throw std::domain_error("lead of zero polynomial");
        return c.back();
    }
    K coeff(size_t i, const K& like) const { return i < c.size() ? c[i] : kzero(like); }
    bool is_one() const { return c.size() == 1 && kis0(c[0] - kone(c[0])); }

    bool operator==(const Poly& o) const {
        if (c.size() != o.c.size()) return false;
        for (size_t i = 0; i < c.size(); i++)
            if (!kis0(c[i] - o.c[i])) return false;
        return true;
    }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator+(const Poly& o) const {
        Poly r;
        size_t n = std::max(c.size(), o.c.size());
        r.c.reserve(n);
        for (size_t i = 0; i < n; i++) {
            if (i < c.size() && i < o.c.size()) r.c.push_back(c[i] + o.c[i]);
            else if (i < c.size()) r.c.push_back(c[i]);
            else r.c.push_back(o.c[i]);
        }
        r.trim();
        return r;
    }
    Poly operator-() const {
        Poly r = *this;
        for (auto& a : r.c) a = -a;
        return r;
    }
    Poly operator-(const Poly& o) const { return *this + (-o); }
    Poly operator*(const Poly& o) const {
        if (is_zero() || o.is_zero()) return Poly();
        Poly r;
        r.c.assign(c.size() + o.c.size() - 1, kzero(c[0]));
        for (size_t i = 0; i < c.size(); i++) {
            if (kis0(c[i])) continue;
            for (size_t j = 0; j < o.c.size(); j++) {
                if (kis0(o.c[j])) continue;
                r.c[i + j] += c[i] * o.c[j];
            }
        }
        r.trim();
        return r;
    }
    Poly operator*(const K& a) const {
        if (kis0(a)) return Poly();
        Poly r = *this;
        for (auto& x : r.c) x = x * a;
        r.trim();
        return r;
    }
    Poly shifted(size_t k) const {  // * x^k
        if (is_zero()) return Poly();
        Poly r;
        r.c.assign(c.size() + k, kzero(c[0]));
        for (size_t i = 0; i < c.size(); i++) r.c[i + k] = c[i];
        return r;
    }

    K eval(const K& x) const {
        if (is_zero()) return kzero(x);
        K r = c.back();
        for (int i = (int)c.size() - 2; i >= 0; i--) r = r * x + c[i];
        return r;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly();
        Poly r;
        r.c.reserve(c.size() - 1);
        K one = kone(c[0]);
        K n = one;
        for (size_t i = 1; i < c.size(); i++) {
            r.c.push_back(c[i] * n);
            n = n + one;
        }
        r.trim();
        return r;
    }

    // substitute x -> a*x + b
    Poly compose_linear(const K& a, const K& b) const {
        Poly lin;
        lin.c = {b, a};
        lin.trim();
        Poly r;
        for (int i = deg(); i >= 0; i--) {
            r = r * lin + Poly::constant(c[i]);
        }
        return r;
    }
    // full composition this(g)
    Poly compose(const Poly& g) const {
        Poly r;
        for (int i = deg(); i >= 0; i--) r = r * g + Poly::constant(c[i]);
        return r;
    }

    Poly monic() const {
        if (is_zero()) return *this;
        return *this * kinv(c.back());
    }
};

template <class K>
void poly_divrem(const Poly<K>& a, const Poly<K>& b, Poly<K>& q, Poly<K>& r) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    r = a;
    q = Poly<K>();
    int db = b.deg();
    if (a.deg() < db) return;
    q.c.assign(a.deg() - db + 1, kzero(b.lead()));
    K li = kinv(b.lead());
    while (r.deg() >= db) {
        int k = r.deg() - db;
        K f = r.lead() * li;
        q.c[k] = f;
        for (int i = 0; i <= db; i++) r.c[k + i] = r.c[k + i] - f * b.c[i];
        r.trim();
    }
    q.trim();
}

template <class K>
Poly<K> operator%(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> q, r;
    poly_divrem(a, b, q, r);
    return r;
}
template <class K>
Poly<K> operator/(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> q, r;
    poly_divrem(a, b, q, r);
    return q;
}
template <class K>
Poly<K> poly_exact_div(const Poly<K>& a, const Poly<K>& b) {
    Poly<K> q, r;
    poly_divrem(a, b, q, r);
    if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
    return q;
}

template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {  // monic gcd
    while (!b.is_zero()) {
        Poly<K> r = a % b;
        a = b;
        b = r;
    }
    return a.monic();
}

// g = gcd = s*a + t*b (g monic)
template <class K>
Poly<K> poly_xgcd(const Poly<K>& a, const Poly<K>& b, Poly<K>& s, Poly<K>& t) {
    Poly<K> r0 = a, r1 = b;
    Poly<K> s0 = Poly<K>::constant(kone(a.is_zero() ? b.c[0] : a.c[0])), s1;
    Poly<K> t0, t1 = s0;
    while (!r1.is_zero()) {
        Poly<K> q, r;
        poly_divrem(r0, r1, q, r);
        Poly<K> ns = s0 - q * s1, nt = t0 - q * t1;
        r0 = r1; r1 = r;
        s0 = s1; s1 = ns;
        t0 = t1; t1 = nt;
    }
    if (r0.is_zero()) { s = s0; t = t0; return r0; }
    K li = kinv(r0.lead());
    s = s0 * li;
    t = t0 * li;
    return r0 * li;
}

template <class K>
Poly<K> poly_inv_mod(const Poly<K>& a, const Poly<K>& m) {
    Poly<K> s, t;
    Poly<K> g = poly_xgcd(a % m, m, s, t);
    if (g.deg() != 0) throw std::domain_error("poly_inv_mod: not invertible");
    return s % m;
}

template <class K>
Poly<K> poly_powmod(Poly<K> b, Int e, const Poly<K>& m) {
    Poly<K> r = Poly<K>::constant(kone(m.lead()));
    b = b % m;
    while (e > 0) {
        if ((e & 1) != 0) r = (r * b) % m;
        b = (b * b) % m;
        e >>= 1;
    }
    return r;
}

// resultant via the euclidean remainder sequence (field coefficients)
// res(f,g) = lc(f)^{deg g} prod g(roots of f)
template <class K>
K poly_resultant(Poly<K> f, Poly<K> g) {
    if (f.is_zero() || g.is_zero()) throw std::domain_error("resultant with zero polynomial");
    K one = kone(f.c[0]);
    K res = one;
    bool neg = false;
    while (true) {
        if (g.deg() == 0) {
            res = res * g.c[0];  // g constant: lc(g)^{deg f}
            K acc = one;
            for (int i = 0; i < f.deg(); i++) acc = acc * g.c[0];
            res = res * acc;
            // the line above multiplied g.c0^{deg f + 1}; correct by one factor
            res = res * kinv(g.c[0]);
            break;
        }
        Poly<K> r = f % g;
        if (r.is_zero()) return kzero(one);
        // res(f, g) = (-1)^{deg f deg g} res(g, f)
        // res(g, f) = lc(g)^{deg f - deg r} res(g, r)
        if ((f.deg() & 1) && (g.deg() & 1)) neg = !neg;
        K lcp = one;
        for (int i = 0; i < f.deg() - r.deg(); i++) lcp = lcp * g.lead();
        res = res * lcp;
        f = g;
        g = r;
    }
    if (neg) res = -res;
    return res;
}

template <class K>
std::string poly_str(const Poly<K>& f, const std::string& var = "x") {
    if (f.is_zero()) return "0";
    std::string s;
    for (int i = f.deg(); i >= 0; i--) {
        s += "(" + f.c[i].str() + ")";
        if (i) s += "*" + var + "^" + std::to_string(i);
        if (i) s += " + ";
    }
    return s;
}

}  // namespace ssg2
