#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "polar/gf.hpp"

namespace polar {

// Dense row-major matrix over a Field. Values are immutable canonical
// encodings; the Field reference is passed to every operation instead of
// being stored, so matrices stay trivially copyable.
struct Mat {
    int rows = 0, cols = 0;
    std::vector<fe> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a((std::size_t)r * c, 0) {}

    fe& at(int r, int c) { return a[(std::size_t)r * cols + c]; }
    fe at(int r, int c) const { return a[(std::size_t)r * cols + c]; }
    std::span<fe> row(int r) { return {a.data() + (std::size_t)r * cols, (std::size_t)cols}; }
    std::span<const fe> row(int r) const {
        return {a.data() + (std::size_t)r * cols, (std::size_t)cols};
    }
    void append_row(std::span<const fe> v) {
        a.insert(a.end(), v.begin(), v.end());
        ++rows;
    }
    bool operator==(const Mat&) const = default;
};

// In-place reduced row echelon form. Returns the rank; zero rows are moved
// to the bottom but not removed.
int rref_inplace(const Field& F, Mat& M);

// Right kernel {x : M x^T = 0}, rows in RREF.
Mat kernel(const Field& F, const Mat& M);

fe det(const Field& F, Mat M);

// A linear subspace of F^ambient in canonical form: basis matrix in RREF with
// no zero rows. Two Subspace values are equal exactly when the canonical
// matrices coincide, which makes them directly hashable and serialisable.
struct Subspace {
    int ambient = 0;
    Mat basis;

    int dim() const { return basis.rows; }
    bool operator==(const Subspace&) const = default;
    static Subspace zero(int ambient) { return Subspace{ambient, Mat(0, ambient)}; }
};

Subspace span_of(const Field& F, Mat rows);
Subspace span_of_vector(const Field& F, std::span<const fe> v);
Subspace sum(const Field& F, const Subspace& A, const Subspace& B);
// Zassenhaus intersection; together with sum it satisfies
// dim A + dim B = dim(A+B) + dim(A∩B).
Subspace intersect(const Field& F, const Subspace& A, const Subspace& B);

// Residual of v after elimination against the RREF basis of U; zero iff v in U.
std::vector<fe> reduce_against(const Field& F, const Mat& rref_basis, std::span<const fe> v);
bool contains_vector(const Field& F, const Subspace& U, std::span<const fe> v);
bool subspace_leq(const Field& F, const Subspace& A, const Subspace& B);

std::uint64_t binom(int n, int k);
// Lexicographic rank/unrank of sorted k-subsets of {0, ..., n-1}.
std::uint64_t subset_rank(int n, std::span<const int> s);
std::vector<int> subset_unrank(int n, int k, std::uint64_t r);

// Pluecker coordinates of a rank-k subspace: the k x k minors of the basis
// matrix over sorted column subsets in lexicographic order. `canonical`
// rescales so the first nonzero coordinate is 1.
std::vector<fe> plucker(const Field& F, const Subspace& U, bool canonical = true);
std::vector<fe> wedge_of_rows(const Field& F, const Mat& rows);  // unscaled minors
void canonical_scale(const Field& F, std::span<fe> v);

// Incremental rank accumulator: keeps a pivot-indexed reduced row set.
class RowReducer {
public:
    RowReducer(const Field& F, int cols) : F_(&F), cols_(cols) {}
    bool add(std::span<const fe> v);                  // true if rank increased
    bool would_increase(std::span<const fe> v) const; // no state change
    int rank() const { return (int)rows_.size(); }
    // Rows currently held (reduced, pivot-normalised), in pivot order.
    const std::vector<std::vector<fe>>& rows() const { return rows_; }

private:
    std::vector<fe> reduce(std::span<const fe> v) const;
    const Field* F_;
    int cols_;
    std::vector<std::vector<fe>> rows_;  // sorted by pivot column
    std::vector<int> pivots_;
};

// Rank of a stack of equal-length vectors; with subfield_only every entry
// must be sigma-fixed, and elimination then never leaves the subfield (the
// pivots and multipliers all lie in it), so the result is the rank over the
// fixed field.
int rank_over(const Field& F, const std::vector<std::vector<fe>>& vectors, bool subfield_only = false);

}  // namespace polar
