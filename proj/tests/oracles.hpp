// Test-only reference computations. Nothing here calls into the library's
// embedding, expansion or feasibility code paths.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using cd = std::complex<double>;
using Vec = std::vector<cd>;
using Mat = std::vector<Vec>;

inline Vec kron(const Vec& a, const Vec& b) {
    Vec out;
    for (auto x : a)
        for (auto y : b) out.push_back(x * y);
    return out;
}

inline Mat kron(const Mat& a, const Mat& b) {
    const std::size_t n = a.size(), m = b.size();
    Mat out(n * m, Vec(n * m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) out[i * m + k][j * m + l] = a[i][j] * b[k][l];
    return out;
}

inline Mat eye(std::size_t n) {
    Mat m(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline Mat outer(const Vec& v) {
    Mat m(v.size(), Vec(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m[i][j] = v[i] * std::conj(v[j]);
    return m;
}

inline Mat mul(const Mat& a, const Mat& b) {
    const std::size_t n = a.size();
    Mat c(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

inline cd sandwich(const Vec& s, const Mat& m) {
    cd acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) acc += std::conj(s[i]) * m[i][j] * s[j];
    return acc;
}

inline const double r2 = 1.0 / std::sqrt(2.0);
inline Vec up() { return {1, 0}; }
inline Vec down() { return {0, 1}; }
inline Vec up_x() { return {r2, r2}; }
inline Vec down_x() { return {r2, -r2}; }

// Bell vectors in (psi-, psi+, phi-, phi+) order.
inline Vec bell(int i) {
    switch (i) {
        case 0: return {0, r2, -r2, 0};
        case 1: return {0, r2, r2, 0};
        case 2: return {r2, 0, 0, -r2};
        default: return {r2, 0, 0, r2};
    }
}

// |A> ⊗ singlet ⊗ |B> by direct Kronecker products, order (A,1,2,B).
inline Vec total_state() {
    Vec singlet = kron(up(), down());
    Vec flip = kron(down(), up());
    for (std::size_t i = 0; i < 4; ++i) singlet[i] = (singlet[i] - flip[i]) * r2;
    return kron(kron(up(), singlet), up_x());
}

// Operators on (A,1,2,B) by explicit Kronecker factors.
inline Mat on_A1(const Mat& m) { return kron(m, eye(4)); }
inline Mat on_2B(const Mat& m) { return kron(eye(4), m); }
inline Mat on_1(const Mat& m) { return kron(kron(eye(2), m), eye(4)); }
inline Mat on_2(const Mat& m) { return kron(eye(4), kron(m, eye(2))); }

// ---------------------------------------------------------------------------
// Local-polytope membership by basis enumeration.
//
// Unknowns: weights of the 16 deterministic assignments (d1,d2,u1,u2), index
// d1*8 + d2*4 + u1*2 + u2. Rows: 16 table cells, context-major in the order
// D1D2, D1U2, U1D2, U1U2 and cells (0,0),(0,1),(1,0),(1,1). The constraint
// matrix has rank 9, so a feasible system has a nonnegative solution
// supported on 9 linearly independent columns; every 9-subset is tried.

using Q = boost::multiprecision::cpp_rational;

inline std::array<std::array<int, 16>, 16> constraint_matrix() {
    std::array<std::array<int, 16>, 16> a{};
    // Observable index per context: Alice (0 = D1, 2 = U1), Bob (1 = D2, 3 = U2).
    const int alice[4] = {0, 0, 2, 2};
    const int bob[4] = {1, 3, 1, 3};
    for (int v = 0; v < 16; ++v) {
        const int val[4] = {(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1};
        for (int c = 0; c < 4; ++c) a[c * 4 + val[alice[c]] * 2 + val[bob[c]]][v] = 1;
    }
    return a;
}

/// Returns 16 weights if the table (16 cells as above) lies in the local polytope.
inline std::optional<std::array<Q, 16>> enumerate_local_model(const std::array<Q, 16>& p) {
    const auto a = constraint_matrix();

    // Greedy choice of 9 independent rows (exact elimination on 0/1 data).
    std::vector<int> rows;
    std::vector<std::vector<Q>> basis;
    for (int r = 0; r < 16 && rows.size() < 9; ++r) {
        std::vector<Q> v(a[r].begin(), a[r].end());
        for (const auto& b : basis) {
            const auto piv = std::find_if(b.begin(), b.end(), [](const Q& x) { return x != 0; }) - b.begin();
            if (v[piv] != 0) {
                const Q f = v[piv] / b[piv];
                for (int j = 0; j < 16; ++j) v[j] -= f * b[j];
            }
        }
        if (std::any_of(v.begin(), v.end(), [](const Q& x) { return x != 0; })) {
            rows.push_back(r);
            basis.push_back(v);
        }
    }
    const int k = static_cast<int>(rows.size());

    std::vector<int> cols(16);
    std::iota(cols.begin(), cols.end(), 0);
    std::vector<bool> pick(16, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<int> s;
        for (int j = 0; j < 16; ++j)
            if (pick[j]) s.push_back(j);
        // Solve the k x k system by Gauss-Jordan elimination.
        std::vector<std::vector<Q>> m(k, std::vector<Q>(k + 1));
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) m[i][j] = a[rows[i]][s[j]];
            m[i][k] = p[rows[i]];
        }
        bool singular = false;
        for (int c = 0; c < k && !singular; ++c) {
            int piv = c;
            while (piv < k && m[piv][c] == 0) ++piv;
            if (piv == k) {
                singular = true;
                break;
            }
            std::swap(m[piv], m[c]);
            for (int i = 0; i < k; ++i) {
                if (i == c || m[i][c] == 0) continue;
                const Q f = m[i][c] / m[c][c];
                for (int j = c; j <= k; ++j) m[i][j] -= f * m[c][j];
            }
        }
        if (singular) continue;
        std::array<Q, 16> w{};
        bool nonneg = true;
        for (int i = 0; i < k; ++i) {
            w[s[i]] = m[i][k] / m[i][i];
            if (w[s[i]] < 0) nonneg = false;
        }
        if (!nonneg) continue;
        bool all_rows = true;
        for (int r = 0; r < 16 && all_rows; ++r) {
            Q sum = 0;
            for (int j = 0; j < 16; ++j)
                if (a[r][j]) sum += w[j];
            all_rows = sum == p[r];
        }
        if (all_rows) return w;
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return std::nullopt;
}

/// Fine's criterion for two binary observables per party: a no-signaling table
/// is local iff all eight CHSH inequalities hold. Expects doubles, cells as above.
inline bool chsh_local(const std::array<double, 16>& p, double slack = 1e-12) {
    double e[4];
    for (int c = 0; c < 4; ++c) e[c] = p[c * 4 + 0] + p[c * 4 + 3] - p[c * 4 + 1] - p[c * 4 + 2];
    for (int minus = 0; minus < 4; ++minus) {
        double s = 0;
        for (int c = 0; c < 4; ++c) s += c == minus ? -e[c] : e[c];
        if (std::abs(s) > 2 + slack) return false;
    }
    return true;
}

}  // namespace oracle
