#pragma once
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fq.hpp"
#include "polyuni.hpp"
#include "rng.hpp"

namespace ssg2 {

using FqPoly = Poly<Fq>;

inline FqPoly fqpoly_from_ints(const FqCtx* k, const std::vector<long long>& v) {
    std::vector<Fq> c;
    c.reserve(v.size());
    for (auto x : v) c.push_back(Fq::from_int(k, x));
    return FqPoly(std::move(c));
}

inline FqPoly fqpoly_pth_root(const FqPoly& f) {
    if (f.is_zero()) return f;
    const FqCtx* k = f.c[0].ctx;
    uint32_t p = k->p;
    std::vector<Fq> out;
    for (size_t i = 0; i < f.c.size(); i += p) {
        Fq ci = f.c[i];
        out.push_back(ci.frob_iter(k->absdeg > 0 ? k->absdeg - 1 : 0));
    }
    return FqPoly(std::move(out));
}

inline FqPoly fqpoly_squarefree_part(const FqPoly& f0) {
    FqPoly f = f0.monic();
    if (f.deg() <= 1) return f;
    FqPoly fp = f.derivative();
    if (fp.is_zero()) return fqpoly_squarefree_part(fqpoly_pth_root(f));
    FqPoly g = poly_gcd(f, fp);
    if (g.deg() == 0) return f;
    FqPoly u = poly_exact_div(f, g);
    FqPoly v = fqpoly_squarefree_part(g);
    FqPoly w = poly_exact_div(v, poly_gcd(u, v));
    return (u * w).monic();
}

namespace detail {

inline void edf(const FqPoly& f, int d, Rng& rng, std::vector<FqPoly>& out) {
    if (f.deg() == d) { out.push_back(f.monic()); return; }
    const FqCtx* k = f.c[0].ctx;
    Int qd = 1;
    for (int i = 0; i < d; i++) qd *= k->order();
    Int e = (qd - 1) / 2;
    while (true) {
        std::vector<Fq> rc;
        for (int i = 0; i < f.deg(); i++) rc.push_back(Fq::rand(k, rng));
        FqPoly a(std::move(rc));
        if (a.is_zero()) continue;
        FqPoly b = poly_powmod(a, e, f);
        FqPoly g = poly_gcd(b - FqPoly::constant(Fq::one(k)), f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            edf(g, d, rng, out);
            edf(poly_exact_div(f, g), d, rng, out);
            return;
        }
    }
}

}  // namespace detail

// all monic irreducible factors with multiplicities
inline std::vector<std::pair<FqPoly, int>> fqpoly_factor(const FqPoly& f0, Rng& rng) {
    std::vector<std::pair<FqPoly, int>> res;
    if (f0.deg() <= 0) return res;
    const FqCtx* k = f0.c[0].ctx;
    FqPoly sf = fqpoly_squarefree_part(f0);
    std::vector<FqPoly> irr;
    // distinct degree on the squarefree part
    FqPoly f = sf;
    FqPoly xp = FqPoly::x(Fq::one(k));
    FqPoly h = xp;
    int d = 0;
    while (f.deg() > 0) {
        d++;
        if (2 * d > f.deg()) { irr.push_back(f.monic()); break; }
        h = poly_powmod(h, k->order(), f);
        FqPoly g = poly_gcd(h - xp, f);
        if (g.deg() > 0) {
            detail::edf(g, d, rng, irr);
            f = poly_exact_div(f, g);
            h = h % f;
        }
    }
    for (auto& P : irr) {
        int m = 0;
        FqPoly rem = f0;
        while (true) {
            FqPoly q, r;
            poly_divrem(rem, P, q, r);
            if (!r.is_zero()) break;
            rem = q;
            m++;
        }
        res.emplace_back(P, m);
    }
    return res;
}

inline std::vector<Fq> fqpoly_roots(const FqPoly& f0, Rng& rng) {
    std::vector<Fq> roots;
    if (f0.deg() < 1) return roots;
    const FqCtx* k = f0.c[0].ctx;
    FqPoly xp = FqPoly::x(Fq::one(k));
    FqPoly f = fqpoly_squarefree_part(f0);
    FqPoly h = poly_powmod(xp, k->order(), f);
    FqPoly g = poly_gcd(h - xp, f);
    if (g.deg() < 1) return roots;
    std::vector<FqPoly> lin;
    if (g.deg() == 1) lin.push_back(g.monic());
    else detail::edf(g, 1, rng, lin);
    for (auto& L : lin) roots.push_back(-L.c[0]);
    std::sort(roots.begin(), roots.end());
    return roots;
}

// multiplicity-aware roots of f (root, multiplicity), deterministic order
inline std::vector<std::pair<Fq, int>> fqpoly_roots_mult(const FqPoly& f, Rng& rng) {
    std::vector<std::pair<Fq, int>> out;
    auto fac = fqpoly_factor(f, rng);
    for (auto& [P, m] : fac)
        if (P.deg() == 1) out.emplace_back(-(P.c[0] / P.c[1]), m);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

inline bool fq_is_square(const Fq& a) {
    if (a.is_zero()) return true;
    Int e = (a.ctx->order() - 1) / 2;
    return a.pow(e).is_one();
}

inline std::vector<Fq> fq_sqrt(const Fq& a, Rng& rng) {  // all square roots
    const FqCtx* k = a.ctx;
    if (a.is_zero()) return {a};
    FqPoly f(std::vector<Fq>{-a, Fq::zero(k), Fq::one(k)});
    return fqpoly_roots(f, rng);
}

inline bool fqpoly_is_irreducible(const FqPoly& f) {
    if (f.deg() < 1) return false;
    if (f.deg() == 1) return true;
    const FqCtx* k = f.c[0].ctx;
    int n = f.deg();
    FqPoly xp = FqPoly::x(Fq::one(k));
    // x^{q^n} == x mod f and gcd(x^{q^{n/l}} - x, f) = 1 for primes l | n
    FqPoly h = xp;
    std::vector<FqPoly> powers(n + 1);  // powers[i] = x^{q^i} mod f
    powers[0] = xp % f;
    for (int i = 1; i <= n; i++) powers[i] = poly_powmod(powers[i - 1], k->order(), f);
    if (!(powers[n] == xp % f)) return false;
    for (int l = 2; l <= n; l++) {
        if (n % l) continue;
        bool prime = true;
        for (int d2 = 2; d2 * d2 <= l; d2++)
            if (l % d2 == 0) { prime = false; break; }
        if (!prime) continue;
        FqPoly g = poly_gcd(powers[n / l] - xp, f);
        if (g.deg() != 0) return false;
    }
    return true;
}

struct ReducibleModulus : std::domain_error {
    std::string factor;
    explicit ReducibleModulus(std::string fac)
        : std::domain_error("defining polynomial is reducible; factor: " + fac),
          factor(std::move(fac)) {}
};

// FieldTower: prime field plus verified extension layers.
struct FieldTower {
    uint32_t p = 0;
    std::vector<FqCtxPtr> layers;  // layers[0] = F_p

    const FqCtx* top() const { return layers.back().get(); }
    const FqCtx* prime() const { return layers.front().get(); }
    const FqCtx* layer(size_t i) const { return layers.at(i).get(); }
};

// Builds the tower and verifies each defining polynomial is irreducible over the
// layer below; a reducible one is rejected together with a nontrivial factor.
inline FieldTower tower_create(uint32_t p,
                               const std::vector<std::vector<std::vector<uint32_t>>>& polys) {
    if (!is_prime_u32(p) || p == 2) throw std::invalid_argument("p must be an odd prime");
    FieldTower T;
    T.p = p;
    T.layers.push_back(make_prime_field(p));
    Rng rng(17);
    for (const auto& layer_poly : polys) {
        const FqCtx* below = T.top();
        std::vector<Fq> mod;
        mod.reserve(layer_poly.size());
        for (const auto& cv : layer_poly) mod.push_back(Fq::from_coeffs(below, cv));
        FqPoly f(mod);
        if (f.deg() < 1 || !f.lead().is_one())
            throw std::invalid_argument("defining polynomial must be monic of degree >= 1");
        if (!fqpoly_is_irreducible(f)) {
            auto fac = fqpoly_factor(f, rng);
            std::string s = fac.empty() ? "?" : poly_str(fac[0].first);
            throw ReducibleModulus(s);
        }
        std::vector<Fq> full;
        for (size_t i = 0; i < layer_poly.size(); i++)
            full.push_back(i < f.c.size() ? f.c[i] : Fq::zero(below));
        T.layers.push_back(make_extension(T.layers.back(), full));
    }
    return T;
}

// Adjoins a root of an irreducible factor of f, returning an extension of f's field
// in which f has at least one root (f itself need not be irreducible).  If f already
// splits completely, returns null.
inline FqCtxPtr splitting_step(FqCtxPtr k, const FqPoly& f, Rng& rng) {
    auto fac = fqpoly_factor(f, rng);
    const FqPoly* best = nullptr;
    for (auto& [P, m] : fac)
        if (P.deg() > 1 && (!best || P.deg() < best->deg())) best = &P;
    if (!best) return nullptr;
    std::vector<Fq> mod(best->c.begin(), best->c.end());
    return make_extension(k, mod);
}

// Extension of k in which f splits into linear factors.
inline FqCtxPtr splitting_field(FqCtxPtr k, FqPoly f, Rng& rng) {
    FqCtxPtr cur = k;
    while (true) {
        FqCtxPtr next = splitting_step(cur, f, rng);
        if (!next) return cur;
        cur = next;
        std::vector<Fq> lifted;
        for (auto& a : f.c) lifted.push_back(Fq::lift(cur.get(), a));
        f = FqPoly(lifted);
    }
}

inline FqPoly fqpoly_lift(const FqCtx* k, const FqPoly& f) {
    std::vector<Fq> c;
    c.reserve(f.c.size());
    for (auto& a : f.c) c.push_back(Fq::lift(k, a));
    return FqPoly(std::move(c));
}

}  // namespace ssg2
