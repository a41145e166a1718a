#pragma once
#include <array>
#include <functional>
#include <vector>

#include "ec.hpp"

namespace ssg2 {

// F2 basis of E^2[2]: ((r1,0), inf), ((r2,0), inf), (inf, (r1,0)), (inf, (r2,0))
// with r1, r2 the first two finite roots in the deterministic root order.
struct TwoTorsionBasis {
    const CurveE* E = nullptr;
    std::array<PointE2, 4> b;
    std::vector<ECPoint> tt;  // all 4 points of E[2], infinity first

    explicit TwoTorsionBasis(const CurveE& e) : E(&e) {
        tt = two_torsion_pts(e);
        b[0] = PointE2{tt[1], ECPoint::infinity()};
        b[1] = PointE2{tt[2], ECPoint::infinity()};
        b[2] = PointE2{ECPoint::infinity(), tt[1]};
        b[3] = PointE2{ECPoint::infinity(), tt[2]};
    }
    PointE2 from_bits(const std::array<int, 4>& v) const {
        PointE2 r{ECPoint::infinity(), ECPoint::infinity()};
        for (int i = 0; i < 4; i++) {
            if (!v[i]) continue;
            r.a = ec_add(*E, r.a, b[i].a);
            r.b = ec_add(*E, r.b, b[i].b);
        }
        return r;
    }
    // all 16 bit patterns in binary counter order
    std::vector<std::array<int, 4>> all_bits() const {
        std::vector<std::array<int, 4>> out;
        for (int m = 0; m < 16; m++)
            out.push_back({m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1});
        return out;
    }
};

// number of components of D through Q (components are smooth and meet only at
// one point, so multiplicity at 2-torsion equals the component count)
inline int multiplicity_at(const std::vector<EmbeddedCurve>& D, const PointE2& Q) {
    int m = 0;
    for (auto& c : D)
        if (curve_membership_2tors(c, Q)) m++;
    return m;
}

inline int e_star(const std::vector<EmbeddedCurve>& D, const PointE2& Q,
                  const PointE2& origin) {
    int mq = multiplicity_at(D, Q);
    int m0 = multiplicity_at(D, origin);
    return ((mq - m0) % 2 == 0) ? 1 : -1;
}

// 4x4 upper triangular matrix over F2 with values (-1)^{v^t Q v}
struct QuadF2 {
    std::array<std::array<int, 4>, 4> q{};  // entries 0/1, lower part zero

    int value_bits(const std::array<int, 4>& v) const {
        int s = 0;
        for (int i = 0; i < 4; i++)
            for (int j = i; j < 4; j++) s ^= (q[i][j] & v[i] & v[j]);
        return s;  // exponent bit
    }
    int value(const std::array<int, 4>& v) const { return value_bits(v) ? -1 : 1; }
    bool operator==(const QuadF2& o) const { return q == o.q; }
};

struct NotQuadratic : std::domain_error {
    explicit NotQuadratic(const std::string& s) : std::domain_error(s) {}
};

// fit the upper triangular matrix from the 16 values (+-1), verifying quadraticity
inline QuadF2 quad_matrix(const std::function<int(const PointE2&)>& val,
                          const TwoTorsionBasis& basis) {
    QuadF2 Q;
    auto bit = [&](int v) { return v == 1 ? 0 : 1; };
    PointE2 origin{ECPoint::infinity(), ECPoint::infinity()};
    if (val(origin) != 1) throw NotQuadratic("value at 0 is not +1");
    for (int i = 0; i < 4; i++) {
        std::array<int, 4> e{};
        e[i] = 1;
        Q.q[i][i] = bit(val(basis.from_bits(e)));
    }
    for (int i = 0; i < 4; i++)
        for (int j = i + 1; j < 4; j++) {
            std::array<int, 4> e{};
            e[i] = e[j] = 1;
            int b = bit(val(basis.from_bits(e)));
            Q.q[i][j] = b ^ Q.q[i][i] ^ Q.q[j][j];
        }
    // verification on all 16 points
    for (auto& v : basis.all_bits()) {
        int want = val(basis.from_bits(v));
        if (Q.value(v) != want) {
            std::string s = "values are not quadratic at bits ";
            for (int i = 0; i < 4; i++) s += std::to_string(v[i]);
            throw NotQuadratic(s);
        }
    }
    return Q;
}

struct TorsionCorrectionError : std::domain_error {
    explicit TorsionCorrectionError(const std::string& s) : std::domain_error(s) {}
};

// Solve (Q + Q^t) x = diag(QQ + Q) over F2; returns the bits of the point P with
// e^{QQ}(.) = e^{Q}(P + .).
inline std::array<int, 4> torsion_correction_bits(const QuadF2& QQ, const QuadF2& Q) {
    // QQ + Q must be diagonal
    std::array<std::array<int, 4>, 4> sum{};
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++) sum[i][j] = QQ.q[i][j] ^ Q.q[i][j];
    for (int i = 0; i < 4; i++)
        for (int j = i + 1; j < 4; j++)
            if (sum[i][j])
                throw TorsionCorrectionError("difference of quadratic matrices not diagonal");
    std::array<int, 4> d{};
    for (int i = 0; i < 4; i++) d[i] = sum[i][i];
    // B = Q + Q^t (symmetric with zero diagonal over F2)
    std::array<std::array<int, 4>, 4> B{};
    for (int i = 0; i < 4; i++)
        for (int j = 0; j < 4; j++)
            if (i != j) B[i][j] = Q.q[std::min(i, j)][std::max(i, j)];
    // gaussian elimination over F2 on [B | d]
    std::array<std::array<int, 5>, 4> m{};
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) m[i][j] = B[i][j];
        m[i][4] = d[i];
    }
    int row = 0;
    std::array<int, 4> pivcol{-1, -1, -1, -1};
    for (int col = 0; col < 4 && row < 4; col++) {
        int sel = -1;
        for (int i = row; i < 4; i++)
            if (m[i][col]) { sel = i; break; }
        if (sel < 0) continue;
        std::swap(m[row], m[sel]);
        for (int i = 0; i < 4; i++) {
            if (i == row || !m[i][col]) continue;
            for (int j = 0; j < 5; j++) m[i][j] ^= m[row][j];
        }
        pivcol[row] = col;
        row++;
    }
    if (row != 4) throw TorsionCorrectionError("bilinear form Q + Q^t is singular");
    std::array<int, 4> x{};
    for (int i = 0; i < 4; i++) x[pivcol[i]] = m[i][4];
    return x;
}

// logarithm of an alpha_p group presented by an invariant differential
// omega = sum a_i t^i dt: the coordinate x = sum a_i t^{i+1}/(i+1).
inline std::vector<Fq> alpha_log(const std::vector<Fq>& a) {
    if (a.empty()) throw std::invalid_argument("empty differential");
    const FqCtx* k = a[0].ctx;
    uint32_t p = k->p;
    if (a.size() > p) throw std::invalid_argument("differential has too many coefficients");
    bool allzero = true;
    for (auto& c : a)
        if (!c.is_zero()) allzero = false;
    if (allzero) throw std::invalid_argument("differential is zero");
    if (a.size() == p && !a[p - 1].is_zero())
        throw std::invalid_argument("invalid invariant differential: a_{p-1} != 0");
    std::vector<Fq> x(std::min<size_t>(a.size() + 1, p), Fq::zero(k));
    for (size_t i = 0; i + 1 < p && i < a.size(); i++)
        x[i + 1] = a[i] / Fq::from_int(k, (long long)(i + 1));
    return x;
}

}  // namespace ssg2
