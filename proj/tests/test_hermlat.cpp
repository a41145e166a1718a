#include <doctest.h>

#include <ssg2/hermlat.hpp>
#include <ssg2/presets.hpp>

using namespace ssg2;

TEST_CASE("validate_polarization on the three paper matrices") {
    auto P3 = preset_p3();
    CHECK(det_herm(P3.f) == 3);  // 9 - nrd((1+i)F) = 9 - 2*3
    CHECK(validate_polarization(P3.f, *P3.order, P3.frob, 3).ok);

    auto P5 = preset_p5();
    CHECK(det_herm(P5.f) == 5);  // 25 - nrd(2F) = 25 - 20
    CHECK(validate_polarization(P5.f, *P5.order, P5.frob, 5).ok);

    auto P1601 = preset_p1601();
    CHECK(validate_polarization(P1601.f, *P1601.order, P1601.frob, 1601).ok);

    // identity is not valid: F^{-1} not integral
    QuatMat2 id = QuatMat2::identity(P5.alg.get());
    auto r = validate_polarization(id, *P5.order, P5.frob, 5);
    CHECK_FALSE(r.ok);
}

TEST_CASE("trace gram basics for the p5 matrix") {
    auto P = preset_p5();
    auto O = order_as_lattice(P.order.get());
    ModuleBasis8 mb = module_basis(O);
    QMat g = trace_gram(P.f, mb);
    // Q(e1) = f11 = 5 with e1 = (1, 0); Q = g/2 on coordinates
    QuatVec2 e{Quat::one(P.alg.get()), Quat::zero(P.alg.get())};
    auto ce = coords_of_vec(*P.order, e);
    std::vector<Int> e1(8, 0);
    for (int i = 0; i < 8; i++) e1[i] = inum(ce[i]);
    QMat gq(8, std::vector<Rat>(8));
    for (int i = 0; i < 8; i++)
        for (int j = 0; j < 8; j++) gq[i][j] = g[i][j] / 2;
    CHECK(eval_quadratic(gq, e1) == 5);
    // diagonal blocks: Q((u,0)) = f11 * nrd(u), Q((0,u)) = f22 * nrd(u)
    for (size_t i = 0; i < 4; i++) {
        std::vector<Int> v(8, 0);
        v[i] = 1;
        CHECK(eval_quadratic(gq, v) == Rat(5) * P.order->basis[i].nrd());
        std::vector<Int> w(8, 0);
        w[4 + i] = 1;
        CHECK(eval_quadratic(gq, w) == Rat(5) * P.order->basis[i].nrd());
    }
    // symmetry and integrality of the bilinear gram
    for (int i = 0; i < 8; i++)
        for (int j = 0; j < 8; j++) CHECK(g[i][j] == g[j][i]);
}

TEST_CASE("algorithm 1 for p=3 reproduces the worked decomposition") {
    auto P = preset_p3();
    const QuatAlgebra* A = P.alg.get();
    auto O = order_as_lattice(P.order.get());
    auto decs = decompose_with_class(*P.order, P.f, O, "O", 3, P.sigma, P.frob);
    CHECK(decs.size() == 10);  // 5p - 5 fibers, single ideal class
    // the printed pair: f1 = [[2,(1+i)F],[-(1+i)F,3]], f2 = [[1,0],[0,0]]
    Quat t = (Quat::one(A) + Quat::unit_i(A)) * P.frob;
    QuatMat2 f1{Quat(A, 2, 0, 0, 0), t, t.conj(), Quat(A, 3, 0, 0, 0)};
    QuatMat2 f2{Quat::one(A), Quat::zero(A), Quat::zero(A), Quat::zero(A)};
    std::string want = pair_key(f1, f2);
    bool found = false;
    for (auto& d : decs) {
        if (pair_key(d.f1, d.f2) == want) {
            found = true;
            // every output passes check_decomposition
            CHECK(check_decomposition(*P.order, P.f, d.f1, d.f2, 3).ok);
            CHECK(d.kernel_free);
            CHECK(d.v_evaluable);
            // kernel vectors: one piece has kernel (0,1)O, the other (-F,1+i)O
            SubLattice8 K1 = kernel_sublattice(*P.order, f1);
            QuatVec2 paperv{-P.frob, Quat::one(A) + Quat::unit_i(A)};
            auto c = coords_of_vec(*P.order, paperv);
            std::vector<Int> ci(8);
            for (int i = 0; i < 8; i++) {
                REQUIRE(is_integer(c[i]));
                ci[i] = inum(c[i]);
            }
            CHECK(sublattice_contains(K1, ci));
        }
    }
    CHECK(found);
    // swap symmetry of the checker
    auto& d0 = decs[0];
    CHECK(check_decomposition(*P.order, P.f, d0.f1, d0.f2, 3).ok ==
          check_decomposition(*P.order, P.f, d0.f2, d0.f1, 3).ok);
    // failure path: f1 = f, f2 = 0
    QuatMat2 z = QuatMat2::zero(A);
    CHECK_FALSE(check_decomposition(*P.order, P.f, P.f, z, 3).ok);
}

TEST_CASE("algorithm 1 for p=5 reproduces the two example pairs and counts 20") {
    auto P = preset_p5();
    const QuatAlgebra* A = P.alg.get();
    auto O = order_as_lattice(P.order.get());
    auto decs = decompose_with_class(*P.order, P.f, O, "O", 5, P.sigma, P.frob);
    CHECK(decs.size() == 20);  // 5p - 5 = 20, single ideal class
    Quat F2 = P.frob * Rat(2);
    QuatMat2 f1{Quat(A, 4, 0, 0, 0), F2, F2.conj(), Quat(A, 5, 0, 0, 0)};
    QuatMat2 f2{Quat::one(A), Quat::zero(A), Quat::zero(A), Quat::zero(A)};
    QuatMat2 f1p{Quat(A, 5, 0, 0, 0), F2, F2.conj(), Quat(A, 4, 0, 0, 0)};
    QuatMat2 f2p{Quat::zero(A), Quat::zero(A), Quat::zero(A), Quat::one(A)};
    int hits = 0;
    for (auto& d : decs) {
        if (pair_key(d.f1, d.f2) == pair_key(f1, f2)) hits++;
        if (pair_key(d.f1, d.f2) == pair_key(f1p, f2p)) hits++;
    }
    CHECK(hits == 2);
    for (auto& d : decs) CHECK(check_decomposition(*P.order, P.f, d.f1, d.f2, 5).ok);
}

TEST_CASE("kernel vectors for the p5 example pieces") {
    auto P = preset_p5();
    const QuatAlgebra* A = P.alg.get();
    Quat F2 = P.frob * Rat(2);
    // f1 = [[4, 2F],[-2F, 5]] has kernel generated by (-F, 2)
    QuatMat2 f1{Quat(A, 4, 0, 0, 0), F2, F2.conj(), Quat(A, 5, 0, 0, 0)};
    auto kv = kernel_vector(*P.order, P.f, f1, 5, P.sigma, P.frob);
    REQUIRE(kv.free);
    CHECK(kv.evaluable);
    // check f1 * v = 0
    QuatVec2 v = kv.v;
    CHECK((f1.e11 * v.a + f1.e12 * v.b).is_zero());
    CHECK((f1.e21 * v.a + f1.e22 * v.b).is_zero());
    // v generates the same module as (-F, 2)
    SubLattice8 K = kernel_sublattice(*P.order, f1);
    QuatVec2 pv{-P.frob, Quat(A, 2, 0, 0, 0)};
    auto c = coords_of_vec(*P.order, pv);
    std::vector<Int> ci(8);
    for (int i = 0; i < 8; i++) ci[i] = inum(c[i]);
    CHECK(sublattice_contains(K, ci));

    // f1' = [[5,2F],[-2F,4]] has kernel generated by (2, F)
    QuatMat2 f1p{Quat(A, 5, 0, 0, 0), F2, F2.conj(), Quat(A, 4, 0, 0, 0)};
    auto kv2 = kernel_vector(*P.order, P.f, f1p, 5, P.sigma, P.frob);
    REQUIRE(kv2.free);
    QuatVec2 v2 = kv2.v;
    CHECK((f1p.e11 * v2.a + f1p.e12 * v2.b).is_zero());
    CHECK((f1p.e21 * v2.a + f1p.e22 * v2.b).is_zero());
    // trivial case: f1 = [[1,0],[0,0]] -> kernel (0,1)
    QuatMat2 d10{Quat::one(A), Quat::zero(A), Quat::zero(A), Quat::zero(A)};
    auto kv3 = kernel_vector(*P.order, P.f, d10, 5, P.sigma, P.frob);
    REQUIRE(kv3.free);
    CHECK(kv3.v.a.is_zero());
}

TEST_CASE("projection matrices of the worked p=3 example") {
    auto P = preset_p3();
    const QuatAlgebra* A = P.alg.get();
    Quat one = Quat::one(A), i = Quat::unit_i(A), F = P.frob;
    QuatVec2 v{-F, one + i};
    auto pp = projection_matrices(P.f, v);
    // printed: P1 = [[1,0],[(1+i)F/3, 0]], P2 = [[0,0],[-(1+i)F/3, 1]]
    Quat c = (one + i) * F * Rat(1, 3);
    CHECK(pp.p1.e11 == one);
    CHECK(pp.p1.e12.is_zero());
    CHECK(pp.p1.e21 == c);
    CHECK(pp.p1.e22.is_zero());
    CHECK(pp.p2.e11.is_zero());
    CHECK(pp.p2.e21 == -c);
    CHECK(pp.p2.e22 == one);
    // idempotency and the f1/f2 reconstruction
    CHECK(pp.p1.mul(pp.p1) == pp.p1);
    CHECK(pp.p2.mul(pp.p2) == pp.p2);
    CHECK(pp.p1 + pp.p2 == QuatMat2::identity(A));
    // f1 = f P2, f2 = f P1 are the printed pieces
    QuatMat2 fp2 = P.f.mul(pp.p2);
    Quat t = (one + i) * F;
    QuatMat2 f1{Quat(A, 2, 0, 0, 0), t, t.conj(), Quat(A, 3, 0, 0, 0)};
    CHECK(fp2 == f1);
    QuatMat2 fp1 = P.f.mul(pp.p1);
    QuatMat2 f2{one, Quat::zero(A), Quat::zero(A), Quat::zero(A)};
    CHECK(fp1 == f2);
    // diagonal trivial case
    QuatVec2 e1{one, Quat::zero(A)};
    QuatMat2 fd{Quat(A, 2, 0, 0, 0), Quat::zero(A), Quat::zero(A), Quat(A, 3, 0, 0, 0)};
    auto pd = projection_matrices(fd, e1);
    CHECK(pd.p1.e11 == one);
    CHECK(pd.p1.e22.is_zero());
}
