#pragma once

#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>

#include "polar/forms.hpp"

namespace polar {

// Two-point relations of the line Grassmannian Gamma_2 with their partial
// order (Hasse: 0 < 1 < {2p, 2q} < 2s < 3, 2p and 2q incomparable) and the
// numeric distance mu.
enum class Rel : std::uint8_t { R0 = 0, R1, R2p, R2q, R2s, R3 };

const char* rel_name(Rel r);
std::optional<Rel> rel_from_name(std::string_view s);
int rel_mu(Rel r);
bool rel_less(Rel a, Rel b);  // strict order

// Classifies the relation of two t.i. 2-spaces from dim<x,y>_V, total
// isotropy, and the radical dimension.
Rel classify_pair(const FormSpace& V, const Subspace& x, const Subspace& y);

// Interning store for fixed-stride blocks of field elements (canonical RREF
// matrices flattened row-major). Ids are dense and stable; sort_lex reorders
// blocks lexicographically for reproducible ids.
class BlockSet {
public:
    explicit BlockSet(int stride);
    std::uint32_t insert(std::span<const fe> block);  // id of block, inserting if new
    std::optional<std::uint32_t> find(std::span<const fe> block) const;
    std::uint32_t size() const { return (std::uint32_t)hashes_.size(); }
    std::span<const fe> at(std::uint32_t id) const {
        return {data.data() + (std::size_t)id * stride, (std::size_t)stride};
    }
    void sort_lex();

    int stride;
    std::vector<fe> data;

private:
    void rehash(std::size_t cap);
    const fe* at_ptr(std::uint32_t id) const { return data.data() + (std::size_t)id * stride; }
    std::vector<std::uint32_t> table_;  // id + 1; 0 = empty
    std::vector<std::uint64_t> hashes_;
};

// All totally isotropic j-spaces of a FormSpace, canonical and lex-sorted.
struct Level {
    int j = 0;
    int ambient = 0;
    BlockSet set;

    Level(int j_, int ambient_) : j(j_), ambient(ambient_), set(j_ * ambient_) {}
    std::uint32_t size() const { return set.size(); }
    Subspace subspace(std::uint32_t id) const;
    std::optional<std::uint32_t> find(const Subspace& s) const;
};

// Lazily enumerated tower of t.i. levels for one FormSpace. Enumeration is
// by recursive extension: a t.i. j-space is <U, v> for a t.i. (j-1)-space U
// and an isotropic vector v in a complement of U inside U^perp; canonical
// RREF interning removes duplicates.
class PolarComplex {
public:
    explicit PolarComplex(const FormSpace& V) : V_(&V) {}
    const FormSpace& space() const { return *V_; }
    std::shared_ptr<const Level> level(int j);

private:
    const FormSpace* V_;
    std::vector<std::shared_ptr<const Level>> levels_;
};

struct ClosureReport {
    std::vector<std::uint32_t> seed;
    std::vector<std::uint8_t> in;  // membership bitmap over point ids
    std::uint32_t count = 0;
    int rounds = 0;
    std::uint64_t lines_triggered = 0;
};

// The polar k-Grassmannian as an indexed point-line geometry. Points are the
// t.i. k-spaces (ids into level k); a line is the pencil between an incident
// (k-1)-space D and (k+1)-space U for k < n, or all points over a fixed
// (n-1)-space D for k = n. Lines are uniform-width sorted index arrays.
class Geometry {
public:
    const FormSpace* V = nullptr;
    int k = 0;
    std::shared_ptr<const Level> pts;   // level k
    std::shared_ptr<const Level> Ds;    // level k-1 (null when k == 1)
    std::shared_ptr<const Level> Us;    // level k+1 (null when k == n)

    std::uint32_t line_size = 0;
    std::vector<std::uint32_t> line_pts;            // num_lines * line_size, sorted per line
    std::vector<std::uint32_t> line_D, line_U;      // descriptor ids (empty when absent)
    std::vector<std::uint32_t> adj_off, adj_line;   // CSR point -> incident line ids

    std::uint32_t num_points() const { return pts->size(); }
    std::uint32_t num_lines() const {
        return line_size ? (std::uint32_t)(line_pts.size() / line_size) : 0;
    }
    std::span<const std::uint32_t> line(std::uint32_t l) const {
        return {line_pts.data() + (std::size_t)l * line_size, (std::size_t)line_size};
    }
    std::span<const std::uint32_t> lines_on(std::uint32_t p) const {
        return {adj_line.data() + adj_off[p], adj_line.data() + adj_off[p + 1]};
    }
    Subspace point_subspace(std::uint32_t id) const { return pts->subspace(id); }
    std::optional<std::uint32_t> find_point(const Subspace& s) const { return pts->find(s); }
    bool on_line(std::uint32_t p, std::uint32_t l) const;
    std::optional<std::uint32_t> find_line(std::uint32_t d_id, std::uint32_t u_id) const;

    std::unordered_map<std::uint64_t, std::uint32_t> flag_to_line;
};

Geometry build_geometry(PolarComplex& C, int k);

// Least fixpoint of "a line with two members is wholly absorbed".
ClosureReport closure(const Geometry& G, std::span<const std::uint32_t> seed);
bool is_subspace_set(const Geometry& G, const std::vector<std::uint8_t>& in);

// Closure state that can grow point by point, with a cheap growth preview
// implemented by an undo log (no state copies).
class IncrementalClosure {
public:
    explicit IncrementalClosure(const Geometry& G);
    void add(std::uint32_t p);
    std::uint32_t preview_growth(std::uint32_t p);
    std::uint32_t count() const { return count_; }
    bool contains(std::uint32_t p) const { return in_[p] != 0; }
    const std::vector<std::uint8_t>& in() const { return in_; }

private:
    std::uint32_t absorb(std::uint32_t p, bool log);
    void rollback();
    const Geometry* G_;
    std::vector<std::uint8_t> in_;
    std::vector<std::uint16_t> cnt_;
    std::vector<std::uint8_t> absorbed_;
    std::uint32_t count_ = 0;
    std::vector<std::uint32_t> log_pts_, log_lines_, log_absorbed_;
    std::vector<std::uint32_t> wave_, next_;
};

Rel classify(const Geometry& G, std::uint32_t x, std::uint32_t y);

// Gate of p on l: with >= 2 distinct relations along l the unique point
// realising the unique minimal one; with a single relation there is no gate
// and the result is empty. Poset violations (more than two relations,
// incomparable pair, non-unique minimum) throw.
std::optional<std::uint32_t> project_to_line(const Geometry& G, std::uint32_t p, std::uint32_t l);

struct ParallelLines {
    std::uint32_t l = 0, m = 0;        // line ids through p and q
    std::uint32_t p_mate = 0, q_mate = 0;  // p' on l, q' on m
    Rel main = Rel::R0, cross = Rel::R0;
};

// Adapted-basis construction of a parallel line pair through two
// non-collinear points of Gamma_2; verifies (par-i) and (par-ii).
ParallelLines parallel_lines(const Geometry& G, std::uint32_t p, std::uint32_t q);

// H = {K : K meets W nontrivially} for a non-degenerate codim-2 W of Witt
// index n-1. Returns the membership bitmap.
std::vector<std::uint8_t> hyperplane_W(const Geometry& G, const Subspace& W);

struct HyperplaneChecks {
    bool proper = false;
    bool every_line_1_or_all = false;
    bool maximal = false;  // sampled extensions close to everything
};
HyperplaneChecks verify_hyperplane(const Geometry& G, const std::vector<std::uint8_t>& H,
                                   int samples, std::uint64_t seed);

// BFS connectivity of the collinearity graph restricted to the complement of
// a proper subspace S.
bool complement_connected(const Geometry& G, const std::vector<std::uint8_t>& S);

// Points of Gamma_k incident with a t.i. subspace X of dimension != k.
std::vector<std::uint32_t> residue(const Geometry& G, const Subspace& X);

// Apartment Sigma(E): ids of all E_{J,K} with |J| + |K| = k, J and K disjoint.
std::vector<std::uint32_t> apartment(const Geometry& G, const std::vector<std::vector<fe>>& E);
std::vector<std::uint32_t> apartment(const Geometry& G);  // designated basis

std::vector<std::int32_t> bfs_distances(const Geometry& G, std::uint32_t src);

// Coordinate injection of the standard 2(n-1)-space onto the witt_complement
// subspace W of V (zero columns inserted at the P and Q slots).
struct WittEmbedding {
    const FormSpace* big = nullptr;
    const FormSpace* sub = nullptr;
    std::vector<fe> lift_vec(std::span<const fe> v) const;
    Subspace lift(const Subspace& s) const;
};
WittEmbedding witt_embedding(const FormSpace& V, const FormSpace& Wstd);

// <S>_{Gamma_k(W)} contained in <S, Res_k(P), Res_k(Q)>_{Gamma_k(V)}?
bool residue_span_check(const Geometry& GV, const Geometry& GW, const WittEmbedding& emb,
                        const Subspace& P, const Subspace& Q,
                        std::span<const std::uint32_t> S_ids_in_W);

}  // namespace polar
