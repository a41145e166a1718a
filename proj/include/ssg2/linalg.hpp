#pragma once
#include <cassert>
#include <stdexcept>
#include <vector>

#include "rational.hpp"

namespace ssg2 {

// Dense matrix over an exemplar-style field (kzero/kone/kis0/kinv overloads).
template <class K>
struct Mat {
    size_t r = 0, c = 0;
    std::vector<K> a;

    Mat() = default;
    Mat(size_t rows, size_t cols, const K& fill) : r(rows), c(cols), a(rows * cols, fill) {}
    K& at(size_t i, size_t j) { return a[i * c + j]; }
    const K& at(size_t i, size_t j) const { return a[i * c + j]; }

    static Mat identity(size_t n, const K& like) {
        Mat m(n, n, kzero(like));
        for (size_t i = 0; i < n; i++) m.at(i, i) = kone(like);
        return m;
    }
    Mat mul(const Mat& o) const {
        assert(c == o.r);
        Mat m(r, o.c, kzero(a[0]));
        for (size_t i = 0; i < r; i++)
            for (size_t k = 0; k < c; k++) {
                if (kis0(at(i, k))) continue;
                for (size_t j = 0; j < o.c; j++) m.at(i, j) += at(i, k) * o.at(k, j);
            }
        return m;
    }
    Mat transpose() const {
        Mat m(c, r, a.empty() ? K() : kzero(a[0]));
        for (size_t i = 0; i < r; i++)
            for (size_t j = 0; j < c; j++) m.at(j, i) = at(i, j);
        return m;
    }
};

// Reduced row echelon; returns pivot columns.
template <class K>
std::vector<size_t> rref(Mat<K>& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.c && row < m.r; col++) {
        size_t sel = row;
        while (sel < m.r && kis0(m.at(sel, col))) sel++;
        if (sel == m.r) continue;
        for (size_t j = 0; j < m.c; j++) std::swap(m.a[row * m.c + j], m.a[sel * m.c + j]);
        K piv = kinv(m.at(row, col));
        for (size_t j = col; j < m.c; j++) m.at(row, j) = m.at(row, j) * piv;
        for (size_t i = 0; i < m.r; i++) {
            if (i == row || kis0(m.at(i, col))) continue;
            K f = m.at(i, col);
            for (size_t j = col; j < m.c; j++) m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        row++;
    }
    return pivots;
}

// Basis of the right kernel {x : Mx = 0}.
template <class K>
std::vector<std::vector<K>> kernel_basis(Mat<K> m, const K& like) {
    auto pivots = rref(m);
    std::vector<bool> is_piv(m.c, false);
    for (auto p : pivots) is_piv[p] = true;
    std::vector<std::vector<K>> basis;
    for (size_t fc = 0; fc < m.c; fc++) {
        if (is_piv[fc]) continue;
        std::vector<K> v(m.c, kzero(like));
        v[fc] = kone(like);
        for (size_t i = 0; i < pivots.size(); i++) v[pivots[i]] = -m.at(i, fc);
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve Mx = b; returns false if inconsistent.  Free variables are set to 0.
template <class K>
bool solve_linear(Mat<K> m, std::vector<K> b, std::vector<K>& x, const K& like) {
    assert(b.size() == m.r);
    Mat<K> aug(m.r, m.c + 1, kzero(like));
    for (size_t i = 0; i < m.r; i++) {
        for (size_t j = 0; j < m.c; j++) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.c) = b[i];
    }
    auto pivots = rref(aug);
    for (auto p : pivots)
        if (p == m.c) return false;
    x.assign(m.c, kzero(like));
    for (size_t i = 0; i < pivots.size(); i++) x[pivots[i]] = aug.at(i, m.c);
    return true;
}

template <class K>
K mat_det(Mat<K> m, const K& like) {
    assert(m.r == m.c);
    K det = kone(like);
    for (size_t col = 0; col < m.c; col++) {
        size_t sel = col;
        while (sel < m.r && kis0(m.at(sel, col))) sel++;
        if (sel == m.r) return kzero(like);
        if (sel != col) {
            for (size_t j = 0; j < m.c; j++) std::swap(m.a[col * m.c + j], m.a[sel * m.c + j]);
            det = -det;
        }
        det = det * m.at(col, col);
        K piv = kinv(m.at(col, col));
        for (size_t i = col + 1; i < m.r; i++) {
            if (kis0(m.at(i, col))) continue;
            K f = m.at(i, col) * piv;
            for (size_t j = col; j < m.c; j++) m.at(i, j) = m.at(i, j) - f * m.at(col, j);
        }
    }
    return det;
}

template <class K>
bool mat_inverse(const Mat<K>& m, Mat<K>& out, const K& like) {
    assert(m.r == m.c);
    size_t n = m.r;
    Mat<K> aug(n, 2 * n, kzero(like));
    for (size_t i = 0; i < n; i++) {
        for (size_t j = 0; j < n; j++) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = kone(like);
    }
    auto piv = rref(aug);
    if (piv.size() != n || piv[n - 1] != n - 1) return false;
    out = Mat<K>(n, n, kzero(like));
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) out.at(i, j) = aug.at(i, n + j);
    return true;
}

}  // namespace ssg2
