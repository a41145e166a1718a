#include <doctest.h>

#include <ssg2/fqfactor.hpp>
#include <ssg2/intlat.hpp>
#include <ssg2/polyuni.hpp>

using namespace ssg2;

TEST_CASE("prime field basics") {
    auto F5 = make_prime_field(5);
    Fq a = Fq::from_int(F5.get(), 3), b = Fq::from_int(F5.get(), 4);
    CHECK((a * b) == Fq::from_int(F5.get(), 2));
    CHECK((a + b) == Fq::from_int(F5.get(), 2));
    CHECK(a.inv() * a == Fq::one(F5.get()));
}

TEST_CASE("tower create: F_25 with a primitive third root of unity") {
    // x^2 + x + 1 over F_5
    FieldTower T = tower_create(5, {{{1}, {1}, {1}}});
    const FqCtx* F25 = T.top();
    CHECK(F25->absdeg == 2);
    Fq z = Fq::gen(F25);
    CHECK((z * z + z + Fq::one(F25)).is_zero());
    Fq z3 = z.pow(3);
    CHECK(z3.is_one());
}

TEST_CASE("tower create: F_{5^4} from the quartic x^4+4x^2+4x+2") {
    FieldTower T = tower_create(5, {{{2}, {4}, {4}, {0}, {1}}});
    const FqCtx* K = T.top();
    CHECK(K->absdeg == 4);
    Fq a = Fq::gen(K);
    Fq v = a.pow(4) + Fq::from_int(K, 4) * a * a + Fq::from_int(K, 4) * a + Fq::from_int(K, 2);
    CHECK(v.is_zero());
    // frobenius fixed field checks
    CHECK(a.frob_iter(4) == a);
    CHECK(a.frob_iter(2) != a);
}

TEST_CASE("tower create: F_3 prime only, and reducible rejection") {
    FieldTower T = tower_create(3, {});
    CHECK(T.top()->absdeg == 1);
    // x^2 + 1 is reducible over F_5 (4 = 2^2):
    CHECK_THROWS_AS(tower_create(5, {{{1}, {0}, {1}}}), ReducibleModulus);
}

TEST_CASE("field axioms on random samples incl. a two-layer tower") {
    FieldTower T = tower_create(5, {{{1}, {1}, {1}}});
    // degree-2 layer on top of F_25: find an irreducible quadratic over F_25
    const FqCtx* F25 = T.top();
    Rng rng(42);
    FqPoly quad;
    while (true) {
        std::vector<Fq> c = {Fq::rand(F25, rng), Fq::rand(F25, rng), Fq::one(F25)};
        quad = FqPoly(c);
        if (quad.deg() == 2 && fqpoly_is_irreducible(quad)) break;
    }
    auto F625 = make_extension(T.layers.back(), quad.c);
    const FqCtx* K = F625.get();
    CHECK(K->absdeg == 4);
    for (int t = 0; t < 1000; t++) {
        Fq x = Fq::rand(K, rng);
        if (x.is_zero()) continue;
        CHECK((x * x.inv()).is_one());
    }
    // frobenius is a ring hom and Frob^4 = id
    for (int t = 0; t < 50; t++) {
        Fq x = Fq::rand(K, rng), y = Fq::rand(K, rng);
        CHECK((x + y).frob() == x.frob() + y.frob());
        CHECK((x * y).frob() == x.frob() * y.frob());
        CHECK(x.frob_iter(4) == x);
    }
}

TEST_CASE("poly resultant trivial examples") {
    auto F7 = make_prime_field(7);
    Fq one = Fq::one(F7.get());
    // res_x(x-1, x-2) = -1
    FqPoly f(std::vector<Fq>{-one, one});
    FqPoly g(std::vector<Fq>{-(one + one), one});
    CHECK(poly_resultant(f, g) == -one);
    // res_x(x^2+1, x) = 1
    FqPoly f2(std::vector<Fq>{one, Fq::zero(F7.get()), one});
    FqPoly g2(std::vector<Fq>{Fq::zero(F7.get()), one});
    CHECK(poly_resultant(f2, g2) == one);
}

TEST_CASE("resultant equals product over roots in a splitting field") {
    FieldTower T = tower_create(5, {{{1}, {1}, {1}}});
    const FqCtx* F25 = T.top();
    Rng rng(7);
    for (int trial = 0; trial < 5; trial++) {
        // random monic cubics
        std::vector<Fq> fc, gc;
        for (int i = 0; i < 3; i++) fc.push_back(Fq::rand(F25, rng));
        fc.push_back(Fq::one(F25));
        for (int i = 0; i < 3; i++) gc.push_back(Fq::rand(F25, rng));
        gc.push_back(Fq::one(F25));
        FqPoly f(fc), g(gc);
        if (f.deg() != 3 || g.deg() != 3) continue;
        Fq res = poly_resultant(f, g);
        // oracle: split f, multiply g over its roots
        FqCtxPtr split = splitting_field(T.layers.back(), f, rng);
        FqPoly fs = fqpoly_lift(split.get(), f), gs = fqpoly_lift(split.get(), g);
        auto roots = fqpoly_roots_mult(fs, rng);
        int total = 0;
        Fq prod = Fq::one(split.get());
        for (auto& [r, m] : roots) {
            total += m;
            for (int i = 0; i < m; i++) prod = prod * gs.eval(r);
        }
        REQUIRE(total == 3);
        CHECK(prod == Fq::lift(split.get(), res));
        // sign law: res(f,g) = (-1)^{deg f deg g} res(g,f)
        Fq rev = poly_resultant(g, f);
        Fq sign = ((3 * 3) % 2) ? -Fq::one(F25) : Fq::one(F25);
        CHECK(res == sign * rev);
    }
}

TEST_CASE("factorization and roots over F_25") {
    FieldTower T = tower_create(5, {{{1}, {1}, {1}}});
    const FqCtx* F25 = T.top();
    Rng rng(3);
    // x^3 + 1 = (x+1)(x+z)(x+z^2) with z a primitive cube root of unity
    FqPoly f = fqpoly_from_ints(F25, {1, 0, 0, 1});
    auto roots = fqpoly_roots(f, rng);
    REQUIRE(roots.size() == 3);
    Fq z = Fq::gen(F25);
    for (auto& r : roots) CHECK(f.eval(r).is_zero());
    // multiplicities: (x-1)^2 (x-2)
    FqPoly g = fqpoly_from_ints(F25, {1, -2, 1}) * fqpoly_from_ints(F25, {-2, 1});
    auto rm = fqpoly_roots_mult(g, rng);
    REQUIRE(rm.size() == 2);
    int seen1 = 0, seen2 = 0;
    for (auto& [r, m] : rm) {
        if (r == Fq::from_int(F25, 1)) { CHECK(m == 2); seen1++; }
        if (r == Fq::from_int(F25, 2)) { CHECK(m == 1); seen2++; }
    }
    CHECK(seen1 == 1);
    CHECK(seen2 == 1);
}

TEST_CASE("HNF and determinant") {
    IMat m = {{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}, {1, 1, 1, 1}};
    IMat h = hnf_rows(m);
    REQUIRE(h.size() == 4);
    Int det = imat_det(h);
    CHECK((det == 8 || det == -8));
}

TEST_CASE("LLL + fincke-pohst identity lattice") {
    QMat g(8, std::vector<Rat>(8, 0));
    for (int i = 0; i < 8; i++) g[i][i] = 1;
    auto sv = fincke_pohst(g, Rat(1));
    CHECK(sv.size() == 16);  // +-e_i
    for (auto& v : sv) CHECK(eval_quadratic(g, v) == Rat(1));
    // diag(2): nothing within 1
    for (int i = 0; i < 8; i++) g[i][i] = 2;
    CHECK(fincke_pohst(g, Rat(1)).empty());
}

TEST_CASE("fincke-pohst agrees with box enumeration on random PD grams") {
    Rng rng(1234);
    for (int trial = 0; trial < 10; trial++) {
        size_t n = 4;
        // G = M M^T + I  (positive definite, integer)
        IMat m(n, std::vector<Int>(n));
        for (auto& row : m)
            for (auto& x : row) x = rng.in(-3, 3);
        QMat g(n, std::vector<Rat>(n, 0));
        for (size_t i = 0; i < n; i++)
            for (size_t j = 0; j < n; j++) {
                Int s = 0;
                for (size_t k = 0; k < n; k++) s += m[i][k] * m[j][k];
                g[i][j] = Rat(s) + (i == j ? 1 : 0);
            }
        Rat bound = 12;
        auto got = fincke_pohst(g, bound);
        // oracle: |x_i| <= sqrt(bound * (G^{-1})_{ii})
        Mat<Rat> gm(n, n, Rat(0));
        for (size_t i = 0; i < n; i++)
            for (size_t j = 0; j < n; j++) gm.at(i, j) = g[i][j];
        Mat<Rat> gi;
        REQUIRE(mat_inverse(gm, gi, Rat(0)));
        std::vector<Int> lim(n);
        for (size_t i = 0; i < n; i++) lim[i] = rsqrt_floor(bound * gi.at(i, i)) + 1;
        std::vector<std::vector<Int>> expect;
        std::vector<Int> v(n);
        std::function<void(size_t)> walk = [&](size_t i) {
            if (i == n) {
                bool z = true;
                for (auto& t : v)
                    if (t != 0) z = false;
                if (!z && eval_quadratic(g, v) <= bound) expect.push_back(v);
                return;
            }
            for (Int x = -lim[i]; x <= lim[i]; ++x) { v[i] = x; walk(i + 1); }
        };
        walk(0);
        std::sort(expect.begin(), expect.end());
        CHECK(got == expect);
    }
}
