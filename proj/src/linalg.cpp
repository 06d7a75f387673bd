#include "polar/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace polar {

int rref_inplace(const Field& F, Mat& M) {
    int rank = 0;
    for (int col = 0; col < M.cols && rank < M.rows; ++col) {
        int piv = -1;
        for (int r = rank; r < M.rows; ++r)
            if (M.at(r, col) != 0) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int c = 0; c < M.cols; ++c) std::swap(M.at(piv, c), M.at(rank, c));
        fe pinv = F.inv(M.at(rank, col));
        if (pinv != 1)
            for (int c = col; c < M.cols; ++c) M.at(rank, c) = F.mul(M.at(rank, c), pinv);
        for (int r = 0; r < M.rows; ++r) {
            if (r == rank) continue;
            fe f = M.at(r, col);
            if (f == 0) continue;
            for (int c = col; c < M.cols; ++c)
                M.at(r, c) = F.sub(M.at(r, c), F.mul(f, M.at(rank, c)));
        }
        ++rank;
    }
    return rank;
}

Mat kernel(const Field& F, const Mat& M) {
    Mat R = M;
    int rank = rref_inplace(F, R);
    std::vector<int> pivots;
    std::vector<bool> is_pivot(M.cols, false);
    for (int r = 0; r < rank; ++r) {
        int c = 0;
        while (c < M.cols && R.at(r, c) == 0) ++c;
        pivots.push_back(c);
        is_pivot[c] = true;
    }
    Mat K(0, M.cols);
    for (int fc = 0; fc < M.cols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<fe> v(M.cols, 0);
        v[fc] = 1;
        for (int r = 0; r < rank; ++r) v[pivots[r]] = F.neg(R.at(r, fc));
        K.append_row(v);
    }
    rref_inplace(F, K);
    return K;
}

fe det(const Field& F, Mat M) {
    if (M.rows != M.cols) throw std::invalid_argument("det of non-square matrix");
    fe d = 1;
    for (int col = 0; col < M.cols; ++col) {
        int piv = -1;
        for (int r = col; r < M.rows; ++r)
            if (M.at(r, col) != 0) { piv = r; break; }
        if (piv < 0) return 0;
        if (piv != col) {
            for (int c = 0; c < M.cols; ++c) std::swap(M.at(piv, c), M.at(col, c));
            d = F.neg(d);
        }
        fe pv = M.at(col, col);
        d = F.mul(d, pv);
        fe pinv = F.inv(pv);
        for (int r = col + 1; r < M.rows; ++r) {
            fe f = F.mul(M.at(r, col), pinv);
            if (f == 0) continue;
            for (int c = col; c < M.cols; ++c)
                M.at(r, c) = F.sub(M.at(r, c), F.mul(f, M.at(col, c)));
        }
    }
    return d;
}

Subspace span_of(const Field& F, Mat rows) {
    int rank = rref_inplace(F, rows);
    Mat basis(rank, rows.cols);
    std::copy(rows.a.begin(), rows.a.begin() + (std::size_t)rank * rows.cols, basis.a.begin());
    return Subspace{rows.cols, std::move(basis)};
}

Subspace span_of_vector(const Field& F, std::span<const fe> v) {
    Mat m(1, (int)v.size());
    std::copy(v.begin(), v.end(), m.a.begin());
    return span_of(F, std::move(m));
}

Subspace sum(const Field& F, const Subspace& A, const Subspace& B) {
    if (A.ambient != B.ambient) throw std::invalid_argument("ambient dimension mismatch");
    Mat m(0, A.ambient);
    m.a.reserve(A.basis.a.size() + B.basis.a.size());
    for (int r = 0; r < A.dim(); ++r) m.append_row(A.basis.row(r));
    for (int r = 0; r < B.dim(); ++r) m.append_row(B.basis.row(r));
    return span_of(F, std::move(m));
}

Subspace intersect(const Field& F, const Subspace& A, const Subspace& B) {
    if (A.ambient != B.ambient) throw std::invalid_argument("ambient dimension mismatch");
    int d = A.ambient;
    // Zassenhaus: rows [a|a] for a in A, [b|0] for b in B; after elimination
    // the rows with zero left half carry a basis of A∩B in the right half.
    Mat Z(A.dim() + B.dim(), 2 * d);
    for (int r = 0; r < A.dim(); ++r)
        for (int c = 0; c < d; ++c) {
            Z.at(r, c) = A.basis.at(r, c);
            Z.at(r, d + c) = A.basis.at(r, c);
        }
    for (int r = 0; r < B.dim(); ++r)
        for (int c = 0; c < d; ++c) Z.at(A.dim() + r, c) = B.basis.at(r, c);
    rref_inplace(F, Z);
    Mat I(0, d);
    for (int r = 0; r < Z.rows; ++r) {
        bool left_zero = true;
        for (int c = 0; c < d; ++c)
            if (Z.at(r, c) != 0) { left_zero = false; break; }
        if (!left_zero) continue;
        bool right_zero = true;
        for (int c = 0; c < d; ++c)
            if (Z.at(r, d + c) != 0) { right_zero = false; break; }
        if (right_zero) continue;
        std::vector<fe> v(d);
        for (int c = 0; c < d; ++c) v[c] = Z.at(r, d + c);
        I.append_row(v);
    }
    return span_of(F, std::move(I));
}

std::vector<fe> reduce_against(const Field& F, const Mat& rref_basis, std::span<const fe> v) {
    std::vector<fe> r(v.begin(), v.end());
    for (int row = 0; row < rref_basis.rows; ++row) {
        int c = 0;
        while (c < rref_basis.cols && rref_basis.at(row, c) == 0) ++c;
        if (c == rref_basis.cols) continue;
        fe f = r[c];
        if (f == 0) continue;
        for (int j = c; j < rref_basis.cols; ++j)
            r[j] = F.sub(r[j], F.mul(f, rref_basis.at(row, j)));
    }
    return r;
}

bool contains_vector(const Field& F, const Subspace& U, std::span<const fe> v) {
    std::vector<fe> r = reduce_against(F, U.basis, v);
    for (fe x : r)
        if (x != 0) return false;
    return true;
}

bool subspace_leq(const Field& F, const Subspace& A, const Subspace& B) {
    for (int r = 0; r < A.dim(); ++r)
        if (!contains_vector(F, B, A.basis.row(r))) return false;
    return true;
}

std::uint64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (std::uint64_t)(n - k + i);
        r /= (std::uint64_t)i;
    }
    return r;
}

std::uint64_t subset_rank(int n, std::span<const int> s) {
    std::uint64_t r = 0;
    int k = (int)s.size();
    int prev = -1;
    for (int i = 0; i < k; ++i) {
        for (int v = prev + 1; v < s[i]; ++v) r += binom(n - 1 - v, k - 1 - i);
        prev = s[i];
    }
    return r;
}

std::vector<int> subset_unrank(int n, int k, std::uint64_t r) {
    std::vector<int> s(k);
    int v = 0;
    for (int i = 0; i < k; ++i) {
        for (;; ++v) {
            std::uint64_t c = binom(n - 1 - v, k - 1 - i);
            if (r < c) break;
            r -= c;
        }
        s[i] = v++;
    }
    return s;
}

std::vector<fe> wedge_of_rows(const Field& F, const Mat& rows) {
    int k = rows.rows, n = rows.cols;
    std::uint64_t width = binom(n, k);
    std::vector<fe> out(width, 0);
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    Mat minor(k, k);
    for (std::uint64_t pos = 0; pos < width; ++pos) {
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) minor.at(r, c) = rows.at(r, idx[c]);
        out[pos] = det(F, minor);
        // next lexicographic k-subset
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

void canonical_scale(const Field& F, std::span<fe> v) {
    for (fe x : v)
        if (x != 0) {
            if (x == 1) return;
            fe s = F.inv(x);
            for (fe& y : v) y = F.mul(y, s);
            return;
        }
}

std::vector<fe> plucker(const Field& F, const Subspace& U, bool canonical) {
    if (U.dim() == 0) throw std::invalid_argument("plucker of zero subspace");
    std::vector<fe> v = wedge_of_rows(F, U.basis);
    if (canonical) canonical_scale(F, v);
    return v;
}

std::vector<fe> RowReducer::reduce(std::span<const fe> v) const {
    std::vector<fe> r(v.begin(), v.end());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        fe f = r[pivots_[i]];
        if (f == 0) continue;
        const std::vector<fe>& b = rows_[i];
        for (int c = pivots_[i]; c < cols_; ++c) r[c] = F_->sub(r[c], F_->mul(f, b[c]));
    }
    return r;
}

bool RowReducer::add(std::span<const fe> v) {
    if ((int)v.size() != cols_) throw std::invalid_argument("row length mismatch");
    std::vector<fe> r = reduce(v);
    int piv = 0;
    while (piv < cols_ && r[piv] == 0) ++piv;
    if (piv == cols_) return false;
    fe s = F_->inv(r[piv]);
    if (s != 1)
        for (int c = piv; c < cols_; ++c) r[c] = F_->mul(r[c], s);
    auto it = std::lower_bound(pivots_.begin(), pivots_.end(), piv);
    std::size_t at = (std::size_t)(it - pivots_.begin());
    pivots_.insert(it, piv);
    rows_.insert(rows_.begin() + at, std::move(r));
    return true;
}

bool RowReducer::would_increase(std::span<const fe> v) const {
    std::vector<fe> r = reduce(v);
    for (fe x : r)
        if (x != 0) return true;
    return false;
}

int rank_over(const Field& F, const std::vector<std::vector<fe>>& vectors, bool subfield_only) {
    if (vectors.empty()) return 0;
    std::size_t len = vectors[0].size();
    for (const auto& v : vectors) {
        if (v.size() != len) throw std::invalid_argument("mixed vector lengths");
        if (subfield_only)
            for (fe x : v)
                if (!F.sigma_fixed(x))
                    throw std::invalid_argument("coordinate not fixed by sigma");
    }
    RowReducer R(F, (int)len);
    for (const auto& v : vectors) R.add(v);
    return R.rank();
}

}  // namespace polar
