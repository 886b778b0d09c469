#include "flowtri/linalg.hpp"

#include "flowtri/errors.hpp"

#include <algorithm>
#include <utility>

namespace flowtri::linalg {

namespace {

// Floor division, needed for HNF reduction with negative entries.
Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

int rank(const IntMat& m) {
    if (m.empty()) return 0;
    RatMat a(m.size(), RatVec(m[0].size()));
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m[0].size(); ++j) a[i][j] = Rat(m[i][j]);

    const size_t rows = a.size(), cols = a[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        for (size_t i = r + 1; i < rows; ++i) {
            if (a[i][c] == 0) continue;
            Rat f = a[i][c] / a[r][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return static_cast<int>(r);
}

Int det(IntMat m) {
    const size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw InvalidInputError("det: matrix not square");
    if (n == 0) return 1;

    Int prev = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && m[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(m[k], m[s]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i) {
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

IntMat hnf_rows(IntMat m) {
    if (m.empty()) return m;
    const size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // Gcd-reduce column c on rows r..end until one nonzero entry remains.
        while (true) {
            size_t best = rows;
            for (size_t i = r; i < rows; ++i) {
                if (m[i][c] == 0) continue;
                if (best == rows || abs(m[i][c]) < abs(m[best][c])) best = i;
            }
            if (best == rows) break;
            std::swap(m[r], m[best]);
            bool others = false;
            for (size_t i = r + 1; i < rows; ++i) {
                if (m[i][c] == 0) continue;
                others = true;
                Int q = m[i][c] / m[r][c];  // truncated is fine mid-reduction
                for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
            }
            if (!others) break;
        }
        if (m[r][c] == 0) continue;
        if (m[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) m[r][j] = -m[r][j];
        for (size_t i = 0; i < r; ++i) {
            Int q = floor_div(m[i][c], m[r][c]);
            if (q == 0) continue;
            for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

IntMat kernel(const IntMat& m) {
    if (m.empty()) return {};
    const size_t r = m.size(), n = m[0].size();

    // Row-reduce a = m^T while mirroring the unimodular ops on u = I_n.
    // Rows of u aligned with zero rows of the echelon form span the kernel.
    IntMat a(n, IntVec(r));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < r; ++j) a[i][j] = m[j][i];
    IntMat u(n, IntVec(n, 0));
    for (size_t i = 0; i < n; ++i) u[i][i] = 1;

    size_t row = 0;
    for (size_t c = 0; c < r && row < n; ++c) {
        while (true) {
            size_t best = n;
            for (size_t i = row; i < n; ++i) {
                if (a[i][c] == 0) continue;
                if (best == n || abs(a[i][c]) < abs(a[best][c])) best = i;
            }
            if (best == n) break;
            std::swap(a[row], a[best]);
            std::swap(u[row], u[best]);
            bool others = false;
            for (size_t i = row + 1; i < n; ++i) {
                if (a[i][c] == 0) continue;
                others = true;
                Int q = a[i][c] / a[row][c];
                for (size_t j = 0; j < r; ++j) a[i][j] -= q * a[row][j];
                for (size_t j = 0; j < n; ++j) u[i][j] -= q * u[row][j];
            }
            if (!others) break;
        }
        if (a[row][c] != 0) ++row;
    }

    IntMat ker;
    for (size_t i = row; i < n; ++i) ker.push_back(u[i]);
    return hnf_rows(std::move(ker));
}

namespace {

enum class SolveOutcome { Solved, Inconsistent, RankDeficient };

SolveOutcome solve_impl(RatMat& a, RatVec& b, RatVec& x) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    if (b.size() != rows) throw InvalidInputError("solve: size mismatch");

    std::vector<size_t> pivot_col;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t piv = r;
        while (piv < rows && a[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        std::swap(b[piv], b[r]);
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            Rat f = a[i][c] / a[r][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivot_col.push_back(c);
        ++r;
    }
    for (size_t i = r; i < rows; ++i)
        if (b[i] != 0) return SolveOutcome::Inconsistent;
    if (pivot_col.size() != cols) return SolveOutcome::RankDeficient;
    x.assign(cols, Rat(0));
    for (size_t k = 0; k < cols; ++k) x[pivot_col[k]] = b[k] / a[k][pivot_col[k]];
    return SolveOutcome::Solved;
}

}  // namespace

std::optional<RatVec> solve(RatMat a, RatVec b) {
    RatVec x;
    switch (solve_impl(a, b, x)) {
        case SolveOutcome::Solved: return x;
        case SolveOutcome::Inconsistent: return std::nullopt;
        case SolveOutcome::RankDeficient:
            throw InvalidInputError("solve: matrix does not have full column rank");
    }
    return std::nullopt;
}

std::optional<RatVec> solve_unique(RatMat a, RatVec b) {
    RatVec x;
    if (solve_impl(a, b, x) == SolveOutcome::Solved) return x;
    return std::nullopt;
}

}  // namespace flowtri::linalg
