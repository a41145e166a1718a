#pragma once
#include "fqfactor.hpp"
#include "polyuni.hpp"

namespace ssg2 {

// Univariate rational function over Fq, reduced with monic denominator.
struct RatFuncU {
    FqPoly num, den;  // den nonzero monic, gcd(num, den) = 1

    RatFuncU() = default;
    static RatFuncU from_poly(FqPoly p, const FqCtx* k) {
        RatFuncU r;
        r.num = std::move(p);
        r.den = FqPoly::constant(Fq::one(k));
        return r;
    }
    static RatFuncU constant(const Fq& a) {
        RatFuncU r;
        r.num = FqPoly::constant(a);
        r.den = FqPoly::constant(Fq::one(a.ctx));
        return r;
    }
    static RatFuncU x(const FqCtx* k) {
        RatFuncU r;
        r.num = FqPoly::x(Fq::one(k));
        r.den = FqPoly::constant(Fq::one(k));
        return r;
    }
    static RatFuncU make(FqPoly n, FqPoly d) {
        if (d.is_zero()) throw std::domain_error("zero denominator");
        RatFuncU r;
        r.num = std::move(n);
        r.den = std::move(d);
        r.reduce();
        return r;
    }
    void reduce() {
        if (num.is_zero()) {
            den = FqPoly::constant(kone(den.lead()));
            return;
        }
        FqPoly g = poly_gcd(num, den);
        if (g.deg() > 0) {
            num = poly_exact_div(num, g);
            den = poly_exact_div(den, g);
        }
        Fq li = den.lead().inv();
        num = num * li;
        den = den * li;
    }
    bool is_zero() const { return num.is_zero(); }
    bool is_constant() const { return num.deg() <= 0 && den.deg() == 0; }
    Fq constant_value() const {
        if (!is_constant()) throw std::domain_error("not constant");
        return num.is_zero() ? kzero(den.lead()) : num.c[0];
    }
    bool operator==(const RatFuncU& o) const { return num == o.num && den == o.den; }

    RatFuncU operator+(const RatFuncU& o) const {
        return make(num * o.den + o.num * den, den * o.den);
    }
    RatFuncU operator-(const RatFuncU& o) const {
        return make(num * o.den - o.num * den, den * o.den);
    }
    RatFuncU operator-() const {
        RatFuncU r = *this;
        r.num = -r.num;
        return r;
    }
    RatFuncU operator*(const RatFuncU& o) const { return make(num * o.num, den * o.den); }
    RatFuncU operator/(const RatFuncU& o) const {
        if (o.is_zero()) throw std::domain_error("division by zero function");
        return make(num * o.den, den * o.num);
    }
    RatFuncU derivative() const {
        return make(num.derivative() * den - num * den.derivative(), den * den);
    }
    // substitute another rational function
    RatFuncU compose(const RatFuncU& g) const {
        // num(g)/den(g), cleared by g.den powers
        int dn = num.deg(), dd = den.deg();
        int d = std::max(dn, dd);
        if (d < 0) return *this;
        const FqCtx* k = g.num.is_zero() ? g.den.lead().ctx : g.num.lead().ctx;
        FqPoly np = FqPoly(), dp = FqPoly();
        // horner in g with common denominator g.den^d
        FqPoly gd = FqPoly::constant(Fq::one(k));
        std::vector<FqPoly> gdpow(d + 1);
        for (int i = 0; i <= d; i++) {
            gdpow[i] = gd;
            gd = gd * g.den;
        }
        FqPoly gn = FqPoly::constant(Fq::one(k));
        for (int i = 0; i <= d; i++) {
            if (i <= dn && i < (int)num.c.size() && !kis0(num.c[i]))
                np = np + gdpow[d - i] * gn * FqPoly::constant(num.c[i]);
            if (i <= dd && i < (int)den.c.size() && !kis0(den.c[i]))
                dp = dp + gdpow[d - i] * gn * FqPoly::constant(den.c[i]);
            gn = gn * g.num;
        }
        return make(np, dp);
    }
    bool has_pole_at(const Fq& x) const { return den.eval(x).is_zero(); }
    Fq eval(const Fq& x) const {
        Fq d = den.eval(x);
        if (d.is_zero()) throw std::domain_error("evaluation at a pole");
        return num.eval(x) / d;
    }
    int degree_as_map() const { return std::max(num.deg(), den.deg()); }
};

}  // namespace ssg2
