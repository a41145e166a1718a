#pragma once
#include <algorithm>
#include <functional>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"
#include "rational.hpp"

namespace ssg2 {

using IMat = std::vector<std::vector<Int>>;  // row-major
using QMat = std::vector<std::vector<Rat>>;

inline IMat imat_identity(size_t n) {
    IMat m(n, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; i++) m[i][i] = 1;
    return m;
}

inline IMat imat_mul(const IMat& a, const IMat& b) {
    size_t r = a.size(), k = b.size(), c = b[0].size();
    IMat m(r, std::vector<Int>(c, 0));
    for (size_t i = 0; i < r; i++)
        for (size_t t = 0; t < k; t++) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < c; j++) m[i][j] += a[i][t] * b[t][j];
        }
    return m;
}

inline Int imat_det(IMat m) {  // fraction-free Bareiss
    size_t n = m.size();
    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; k++) {
        if (m[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && m[s][k] == 0) s++;
            if (s == n) return 0;
            std::swap(m[k], m[s]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; i++)
            for (size_t j = k + 1; j < n; j++)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Row-style Hermite normal form of the lattice generated by the rows.
// Returns the basis rows (rank many), pivots positive, entries above reduced.
inline IMat hnf_rows(IMat m) {
    size_t rows = m.size();
    if (rows == 0) return m;
    size_t cols = m[0].size();
    size_t row = 0;
    std::vector<size_t> pivcols;
    for (size_t col = 0; col < cols && row < rows; col++) {
        // euclid all rows below `row` into one pivot
        while (true) {
            size_t best = rows;
            for (size_t i = row; i < rows; i++)
                if (m[i][col] != 0 &&
                    (best == rows ||
                     boost::multiprecision::abs(m[i][col]) <
                         boost::multiprecision::abs(m[best][col])))
                    best = i;
            if (best == rows) break;  // column is zero
            std::swap(m[row], m[best]);
            bool done = true;
            for (size_t i = row + 1; i < rows; i++) {
                if (m[i][col] == 0) continue;
                Int q = m[i][col] / m[row][col];
                // round toward making the remainder small
                for (size_t j = 0; j < cols; j++) m[i][j] -= q * m[row][j];
                if (m[i][col] != 0) done = false;
            }
            if (done) break;
        }
        if (m[row][col] == 0) continue;
        if (m[row][col] < 0)
            for (size_t j = 0; j < cols; j++) m[row][j] = -m[row][j];
        for (size_t i = 0; i < row; i++) {
            Int q = m[i][col] / m[row][col];
            if (m[i][col] % m[row][col] < 0) q -= 1;
            if (q != 0)
                for (size_t j = 0; j < cols; j++) m[i][j] -= q * m[row][j];
        }
        pivcols.push_back(col);
        row++;
    }
    m.resize(row);
    return m;
}

// {x in Z^n : A x = 0} as HNF basis rows; A is m x n integer.
inline IMat integer_kernel(const IMat& a) {
    if (a.empty()) return {};
    size_t m = a.size(), n = a[0].size();
    // rows of [A^T | I_n]; rows whose A^T-part vanishes give kernel vectors
    IMat work(n, std::vector<Int>(m + n, 0));
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < m; j++) work[i][j] = a[j][i];
        work[i][m + i] = 1;
    }
    IMat h = hnf_rows(work);
    IMat ker;
    for (auto& row : h) {
        bool zero_head = true;
        for (size_t j = 0; j < m; j++)
            if (row[j] != 0) { zero_head = false; break; }
        if (zero_head) ker.push_back(std::vector<Int>(row.begin() + m, row.end()));
    }
    return hnf_rows(ker);
}

// exact LLL (delta = 3/4) on a Gram matrix; returns U with G_red = U G U^T
struct LLLResult {
    QMat gram;  // reduced gram
    IMat u;
};

inline LLLResult lll_gram(QMat g, Rat delta = Rat(3) / 4) {
    size_t n = g.size();
    IMat u = imat_identity(n);
    // GSO data from gram
    std::vector<Rat> B(n);
    QMat mu(n, std::vector<Rat>(n, 0));
    auto recompute = [&]() {
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < i; j++) {
                Rat s = g[i][j];
                for (size_t t = 0; t < j; t++) s -= mu[i][t] * mu[j][t] * B[t];
                mu[i][j] = B[j] == 0 ? Rat(0) : s / B[j];
            }
            Rat s = g[i][i];
            for (size_t t = 0; t < i; t++) s -= mu[i][t] * mu[i][t] * B[t];
            B[i] = s;
        }
    };
    auto row_sub = [&](size_t i, size_t j, const Int& q) {
        // b_i -= q b_j : update u and gram
        for (size_t t = 0; t < n; t++) u[i][t] -= q * u[j][t];
        Rat qr(q);
        for (size_t t = 0; t < n; t++) {
            if (t == i) continue;
            g[i][t] -= qr * g[j][t];
            g[t][i] = g[i][t];
        }
        g[i][i] = g[i][i] - 2 * qr * g[i][j] - qr * qr * g[j][j];
        // note: g[i][j] above is already the updated value only if t-loop hit j first;
        // recompute exactly instead:
    };
    // safe variant: apply to a copy of row data
    auto row_sub_safe = [&](size_t i, size_t j, const Int& q) {
        Rat qr(q);
        Rat gij = g[i][j], gjj = g[j][j], gii = g[i][i];
        for (size_t t = 0; t < n; t++) u[i][t] -= q * u[j][t];
        for (size_t t = 0; t < n; t++) {
            if (t == i) continue;
            g[i][t] = g[i][t] - qr * g[j][t];
            g[t][i] = g[i][t];
        }
        g[i][i] = gii - 2 * qr * gij + qr * qr * gjj;
    };
    (void)row_sub;
    recompute();
    size_t k = 1;
    size_t guard = 0;
    while (k < n) {
        if (++guard > 100000) throw std::runtime_error("LLL did not converge");
        // size reduce k against k-1 .. 0
        for (size_t j = k; j-- > 0;) {
            Rat m = mu[k][j];
            Int q = inum(m) >= 0 ? (2 * inum(m) + iden(m)) / (2 * iden(m))
                                 : -((-2 * inum(m) + iden(m)) / (2 * iden(m)));
            if (q != 0) {
                row_sub_safe(k, j, q);
                recompute();
            }
        }
        if (B[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            k++;
        } else {
            std::swap(g[k], g[k - 1]);
            for (size_t t = 0; t < n; t++) std::swap(g[t][k], g[t][k - 1]);
            std::swap(u[k], u[k - 1]);
            recompute();
            k = k > 1 ? k - 1 : 1;
        }
    }
    return {g, u};
}

// All nonzero integer vectors v with v^T G v <= bound (G positive definite,
// exact rational arithmetic).  Output in deterministic lexicographic order.
// A vector and its negative both appear.
inline std::vector<std::vector<Int>> fincke_pohst(const QMat& g0, const Rat& bound) {
    size_t n = g0.size();
    // LLL first for enumeration efficiency
    LLLResult red = lll_gram(g0);
    const QMat& g = red.gram;
    // exact Cholesky: Q(v) = sum_i q[i]*(v_i + sum_{j>i} mu2[i][j] v_j)^2
    std::vector<Rat> q(n);
    QMat mu2(n, std::vector<Rat>(n, 0));
    {
        QMat r = g;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = 0; j < i; j++) {
                // eliminate
                if (r[j][j] == 0) throw std::domain_error("gram not positive definite");
                Rat f = r[i][j] / r[j][j];
                for (size_t t = j + 1; t < n; t++) r[i][t] -= f * r[j][t];
            }
            q[i] = r[i][i];
            if (q[i] <= 0) throw std::domain_error("gram not positive definite");
            for (size_t t = i + 1; t < n; t++) mu2[i][t] = r[i][t] / q[i];
        }
    }
    std::vector<std::vector<Int>> out_reduced;
    std::vector<Int> v(n, 0);
    std::vector<Rat> center(n, 0), partial(n + 1, 0);
    // enumerate coordinates from the last
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == SIZE_MAX) return;
        // partial[i+1] = sum_{t>i} q_t (v_t + c_t)^2 ; c_i = sum_{j>i} mu2[i][j] v_j
        Rat ci = 0;
        for (size_t j = i + 1; j < n; j++) ci += mu2[i][j] * Rat(v[j]);
        Rat room = bound - partial[i + 1];
        if (room < 0) return;
        // |v_i + ci| <= sqrt(room/q_i)
        Rat rr = room / q[i];
        Int lim = rsqrt_floor(rr);
        // bounds: ceil(-lim - ci) .. floor(lim - ci) ; conservative pad then test exactly
        Int lo = -lim - 1 - (inum(ci) / iden(ci)) - 1;
        Int hi = lim + 1 - (inum(ci) / iden(ci)) + 1;
        for (Int x = lo; x <= hi; ++x) {
            Rat d = Rat(x) + ci;
            Rat val = partial[i + 1] + q[i] * d * d;
            if (val > bound) continue;
            v[i] = x;
            if (i == 0) {
                bool all0 = true;
                for (auto& t : v)
                    if (t != 0) { all0 = false; break; }
                if (!all0) out_reduced.push_back(v);
            } else {
                partial[i] = val;
                rec(i - 1);
            }
        }
        v[i] = 0;
    };
    partial[n] = 0;
    rec(n - 1);
    // map back: rows of red.u are the reduced basis in terms of the original one
    std::vector<std::vector<Int>> out;
    out.reserve(out_reduced.size());
    for (auto& w : out_reduced) {
        std::vector<Int> x(n, 0);
        for (size_t i = 0; i < n; i++) {
            if (w[i] == 0) continue;
            for (size_t j = 0; j < n; j++) x[j] += w[i] * red.u[i][j];
        }
        out.push_back(std::move(x));
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline Rat eval_quadratic(const QMat& g, const std::vector<Int>& v) {
    Rat s = 0;
    size_t n = g.size();
    for (size_t i = 0; i < n; i++) {
        if (v[i] == 0) continue;
        for (size_t j = 0; j < n; j++) s += g[i][j] * Rat(v[i]) * Rat(v[j]);
    }
    return s;
}

}  // namespace ssg2
