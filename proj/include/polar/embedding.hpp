#pragma once

#include "polar/geometry.hpp"

namespace polar {

// Grassmann embedding U -> wedge^k U of a polar k-Grassmannian into the
// C(2n, k)-dimensional exterior power, one canonical Pluecker vector per
// point, plus the span dimensions used for rank lower bounds.
struct EmbeddedGeometry {
    const Geometry* G = nullptr;
    int width = 0;  // C(2n, k)
    std::vector<fe> vec;  // num_points * width, canonically scaled
    int span_dim = 0;     // rank over F of all image vectors
    std::optional<int> baer_dim;  // Hermitian k = n: rank over the fixed field

    std::span<const fe> at(std::uint32_t i) const {
        return {vec.data() + (std::size_t)i * width, (std::size_t)width};
    }
};

// Computes the embedding; with verify set it checks injectivity and that
// every line's image has coordinate rank 2.
EmbeddedGeometry embed(const Geometry& G, int threads = 1, bool verify = true);

// The semilinear involution on wedge^n V induced by conjugation composed
// with the duality U -> U^perp of the Hermitian form (the fixed points form
// the Baer subspace the dual embedding lands in, after per-point scaling).
class BaerStructure {
public:
    BaerStructure(const FormSpace& V, int k);

    int width() const { return width_; }
    std::vector<fe> theta(std::span<const fe> x) const;
    // lambda with lambda*x fixed by theta, nullopt when theta(x) is not
    // proportional to x; the proportionality ratio always has norm 1.
    std::optional<std::vector<fe>> normalize(std::span<const fe> x) const;
    // Coordinates of a theta-fixed vector over the fixed-field basis of
    // Fix(theta); every entry is sigma-fixed.
    std::vector<fe> baer_coordinates(std::span<const fe> fixed_vec) const;

private:
    const FormSpace* V_;
    int k_, width_;
    std::vector<std::uint32_t> tau_;  // index permutation S -> complement of swapped S
    std::vector<fe> coef_;            // theta(e_S) = coef_[S] * e_{tau(S)}
    Mat basis_, basis_inv_;           // K-basis of Fix(theta) and its inverse
};

// Pluecker index blocks by membership of the P and Q coordinate slots
// (positions n-1 and 2n-1): 0 = neither, 1 = P only, 2 = Q only, 3 = both.
std::vector<int> wedge_blocks(int two_n, int k);

// Induced action of a linear map T on wedge^k: image of the basis wedge e_S
// is the minor vector of the rows T[s], s in S.
Mat induced_exterior_matrix(const Field& F, const Mat& T, int k);
std::vector<fe> apply_matrix(const Field& F, std::span<const fe> v, const Mat& M);

// Deterministic isotropic directions generating enough unitary transvection
// root groups: the 1-spaces of the apartment lines plus one non-apartment
// isotropic vector per hyperbolic plane.
std::vector<std::vector<fe>> su_generator_isotropics(const FormSpace& V);

// F_p-basis of the fixed subfield (subfield_only) or of the whole field,
// viewed as an F_p-vector space via base-p digits.
std::vector<fe> additive_basis(const Field& F, bool subfield_only);

// Dimension reached by closing the span of a seed vector of wedge^k V under
// the induced unitary transvections t_{u, lambda}, lambda in the fixed field.
int su_submodule_closure(const FormSpace& V, int k, std::span<const fe> seed);

// [A, T_u] = [A, T_u^sigma] for a 1-space A of wedge^k V and isotropic u:
// the commutator spans with lambda over F agree with lambda over the fixed
// subfield.
bool bracket_equality_check(const FormSpace& V, int k, std::span<const fe> a_vec,
                            std::span<const fe> u);

}  // namespace polar
