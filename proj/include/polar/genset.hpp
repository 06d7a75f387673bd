#pragma once

#include "polar/embedding.hpp"

namespace polar {

// Provenance of a generating-set point through the inductive construction.
enum class GenTag : std::uint8_t {
    BaseApartment,  // k = 1 base: hyperbolic basis points
    BaseDual,       // k = n base: greedy certified search
    Carried,        // S_{n-1,k}(W), lifted into V
    HatPK1,         // <L, P> for L in S_{n-1,k-1}(W)
    HatQK1,         // <L, Q>
    HatK2           // k-object over M in S_{n-1,k-2}(W) avoiding the residue hyperplane
};
const char* gen_tag_name(GenTag t);

struct GenSetBuild {
    std::vector<Subspace> points;  // in the coordinates of the target space
    std::vector<GenTag> tags;
    std::vector<std::string> trace;  // recursion log, one entry per assembled level
};

struct GreedyOptions {
    std::uint64_t seed = 0;
    int restarts = 32;
};

std::uint64_t expected_rank(FormKind kind, int n, int k);  // d_k
// C(m,k) = C(m-2,k) + 2 C(m-2,k-1) + C(m-2,k-2)
bool binomial_identity_a(int m, int k);
// C(2n,k) - C(2n,k-2) = C(2n-2,k) + 2 C(2n-2,k-1) - 2 C(2n-2,k-3) - C(2n-2,k-4)
bool binomial_identity_b(int n, int k);

// Rank certification is restricted to the fields the theorems cover:
// symplectic needs odd characteristic, Hermitian needs F != F_4.
bool certification_eligible(const FormSpace& V);
// Brouwer/Li lower bound (4^n + 2)/3 for the F_4 Hermitian dual polar space.
std::uint64_t li_bound(int n);

// The inductive generating set S^f_{n,k}. Base cases: k = 1 apartment
// points, k = n rank-guided greedy; otherwise the disjoint union of the
// carried set and the two hat lifts over the witt_complement subspace.
GenSetBuild build_genset(const FormSpace& V, int k, const GreedyOptions& opts = {});

std::pair<Subspace, Subspace> hat_lift_k1(const FormSpace& V, const Subspace& L,
                                          const Subspace& P, const Subspace& Q);
Subspace hat_lift_k2(const FormSpace& V, const Subspace& M, const Subspace& W,
                     const Subspace& P, const Subspace& Q);

enum class Verdict : std::uint8_t { CertifiedMinimal, GeneratesUnverified, FailsToGenerate };
const char* verdict_name(Verdict v);

struct RankCertificate {
    std::uint32_t set_size = 0;
    std::uint64_t lower_bound = 0;  // embedding dimension (Baer for Hermitian k = n)
    std::uint64_t d_k = 0;
    bool closure_full = false;
    Verdict verdict = Verdict::FailsToGenerate;
    bool exploratory = false;               // certification-ineligible field
    std::optional<std::uint64_t> li = {};   // reported for F_4 Hermitian
};

// Certified-minimal requires closure = all points and |S| equal to the
// embedding-dimension lower bound of Eq. dim(W) <= |S|.
RankCertificate certify(const Geometry& G, const EmbeddedGeometry& E,
                        std::span<const std::uint32_t> ids);

// Greedy base for k = n: repeatedly add the first point (in pass order)
// whose image extends the embedded span, falling back to the first point
// outside the current closure; restarts shuffle the pass order.
std::vector<std::uint32_t> greedy_generating_set(const Geometry& G, const EmbeddedGeometry& E,
                                                 const GreedyOptions& opts);

// Point ids of a build against a geometry of the same space.
std::vector<std::uint32_t> resolve_ids(const Geometry& G, const GenSetBuild& S);

}  // namespace polar
