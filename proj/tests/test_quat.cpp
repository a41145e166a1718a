#include <doctest.h>

#include <ssg2/presets.hpp>
#include <ssg2/quat.hpp>
#include <ssg2/rng.hpp>

using namespace ssg2;

static Quat rand_quat(const QuatAlgebra* A, Rng& rng) {
    return Quat(A, Rat(rng.in(-9, 9)), Rat(rng.in(-9, 9)), Rat(rng.in(-9, 9)),
                Rat(rng.in(-9, 9)));
}

TEST_CASE("conjugate, norm, trace basics") {
    QuatAlgebra A{Rat(-3), Rat(-1601)};
    Quat i = Quat::unit_i(&A), j = Quat::unit_j(&A), one = Quat::one(&A);
    CHECK(i.conj() == -i);
    CHECK(i.trd() == 0);
    CHECK(j.nrd() == 1601);
    // nrd(1+i) = 1 - a; a = -1 gives 2
    QuatAlgebra A2{Rat(-1), Rat(-7)};
    CHECK((Quat::one(&A2) + Quat::unit_i(&A2)).nrd() == 2);
    CHECK((one + i).nrd() == 4);
}

TEST_CASE("multiplicativity and anti-automorphism on samples") {
    QuatAlgebra A{Rat(-3), Rat(-5)};
    Rng rng(99);
    for (int t = 0; t < 1000; t++) {
        Quat x = rand_quat(&A, rng), y = rand_quat(&A, rng);
        CHECK(x.nrd() * y.nrd() == (x * y).nrd());
        CHECK((x + y).trd() == x.trd() + y.trd());
        CHECK((x * y).conj() == y.conj() * x.conj());
    }
    // associativity spot-check on basis products
    Quat b[4] = {Quat::one(&A), Quat::unit_i(&A), Quat::unit_j(&A), Quat::unit_k(&A)};
    for (auto& x : b)
        for (auto& y : b)
            for (auto& z : b) CHECK(((x * y) * z) == (x * (y * z)));
}

TEST_CASE("preset orders are maximal and contain the designated elements") {
    auto P3 = preset_p3();
    CHECK(P3.order->reduced_disc == 3);
    CHECK(P3.order->contains(P3.sigma));
    CHECK(P3.order->contains(P3.frob));
    // sigma^2 = -1, F^2 = -3, sigma F = -F sigma
    CHECK(P3.sigma * P3.sigma == -Quat::one(P3.alg.get()));
    CHECK(P3.frob * P3.frob == Quat(P3.alg.get(), -3, 0, 0, 0));
    CHECK(P3.sigma * P3.frob == -(P3.frob * P3.sigma));

    auto P5 = preset_p5();
    CHECK(P5.order->reduced_disc == 5);
    CHECK(P5.order->contains(P5.sigma));
    CHECK(P5.order->contains(P5.frob));
    // zeta^2 + zeta + 1 = 0 and zeta F = F zeta^2
    Quat z = P5.sigma, F = P5.frob, one = Quat::one(P5.alg.get());
    CHECK((z * z + z + one).is_zero());
    CHECK(z * F == F * (z * z));
    CHECK(F * F == Quat(P5.alg.get(), -5, 0, 0, 0));

    auto P1601 = preset_p1601();
    CHECK(P1601.order->reduced_disc == 1601);
    CHECK(P1601.order->contains(P1601.frob));  // paper example: the order contains j
}

TEST_CASE("order membership examples") {
    auto P = preset_p1601();
    const QuatAlgebra* A = P.alg.get();
    CHECK(P.order->contains(Quat::unit_j(A)));
    CHECK_FALSE(P.order->contains(Quat(A, Rat(1, 2), 0, 0, 0)));
    CHECK(P.order->contains(Quat(A, Rat(1, 2), Rat(1, 6), Rat(1, 2), Rat(1, 6))));
}

TEST_CASE("integrality of nrd/trd on order basis; [O : xO] = nrd(x)^2") {
    Rng rng(5);
    for (auto name : {"p3", "p5", "p1601"}) {
        auto P = quat_preset_by_name(name);
        for (auto& b : P.order->basis) {
            CHECK(is_integer(b.nrd()));
            CHECK(is_integer(b.trd()));
        }
        for (int t = 0; t < 30; t++) {
            std::vector<Rat> co(4);
            for (auto& c : co) c = rng.in(-4, 4);
            Quat x = P.order->from_coords(co);
            if (x.nrd() == 0) continue;
            auto xO = principal_right_ideal(P.order.get(), x);
            Rat idx = gen_index(order_as_lattice(P.order.get()), xO);
            CHECK(idx == x.nrd() * x.nrd());
        }
    }
}

TEST_CASE("ideal index examples") {
    auto P = preset_p3();
    auto O = order_as_lattice(P.order.get());
    CHECK(gen_index(O, O) == 1);
    auto jO = principal_right_ideal(P.order.get(), P.frob);
    CHECK(gen_index(O, jO) == 9);  // nrd(j)^2 = p^2
    auto twoO = lattice_scale(O, Rat(2));
    CHECK(gen_index(O, twoO) == 16);
    CHECK(ideal_nrd(jO) == 3);
    auto ji = ideal_inverse(jO);
    CHECK(gen_index(O, ji) * gen_index(O, jO) == 1);
}
