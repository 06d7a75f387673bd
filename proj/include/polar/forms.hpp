#pragma once

#include <optional>

#include "polar/linalg.hpp"

namespace polar {

enum class FormKind : std::uint8_t { Symplectic, Hermitian };

// V = F^{2n} with a non-degenerate symplectic or sigma-Hermitian form whose
// Gram matrix, with respect to the standard basis, is the hyperbolic one:
// f(e_i, e_{n+i}) = 1, f(e_{n+i}, e_i) = -1 (symplectic) or 1 (Hermitian),
// all other basis pairings zero. The standard basis is therefore the
// designated hyperbolic basis, which keeps apartments and the inductive
// decomposition coordinate-aligned.
class FormSpace {
public:
    FormSpace(const Field& F, int n, FormKind kind);

    const Field& field() const { return *F_; }
    int n() const { return n_; }
    int dim() const { return 2 * n_; }
    FormKind kind() const { return kind_; }
    bool hermitian() const { return kind_ == FormKind::Hermitian; }
    fe delta() const { return delta_; }
    fe sigma(fe a) const { return hermitian() ? F_->frob(a) : a; }

    fe eval(std::span<const fe> u, std::span<const fe> v) const;
    Mat gram() const;
    bool isotropic(std::span<const fe> v) const { return eval(v, v) == 0; }

    std::vector<fe> unit(int i) const;  // 0-based standard basis vector

    Subspace perp(const Subspace& U) const;
    Subspace radical(const Subspace& U) const { return intersect(*F_, U, perp(U)); }
    bool totally_isotropic(const Subspace& U) const;

    // Hyperbolic basis of a subspace W on which the restricted form is
    // non-degenerate with Witt index dim(W)/2. Returns 2m vectors ordered
    // e'_1..e'_m, f'_1..f'_m with f(e'_i, f'_i) = 1 and all other pairings 0.
    // On the full standard space this reproduces the standard basis.
    std::vector<std::vector<fe>> hyperbolic_basis(const Subspace& W) const;

    // Deterministic building blocks of the above.
    std::vector<fe> isotropic_in(const Subspace& W) const;
    std::vector<fe> hyperbolic_partner(const Subspace& W, std::span<const fe> e) const;

    // Completes a partially filled hyperbolic frame (slot i holds e'_i / f'_i)
    // to a full hyperbolic basis; filled slots must already satisfy the
    // hyperbolic relations. Returns [e'_1..e'_n, f'_1..f'_n].
    std::vector<std::vector<fe>> complete_hyperbolic(
        std::vector<std::optional<std::vector<fe>>> eslots,
        std::vector<std::optional<std::vector<fe>>> fslots) const;

    // t_{u,lambda}(v) = v + lambda * delta * f(v,u) * u (Hermitian; delta = 1
    // for the symplectic variant). u must be isotropic. For lambda in the
    // fixed subfield the map is an isometry of f.
    std::vector<fe> transvect(std::span<const fe> u, fe lambda, std::span<const fe> v) const;
    Mat transvection_matrix(std::span<const fe> u, fe lambda) const;

    struct WittParts {
        Subspace W;  // <e_1..e_{n-1}, f_1..f_{n-1}>: non-degenerate, Witt index n-1
        Subspace P;  // <e_n>
        Subspace Q;  // <f_n>, so W^perp = <P,Q> is a hyperbolic line
    };
    WittParts witt_complement() const;

private:
    const Field* F_;
    int n_;
    FormKind kind_;
    fe delta_;
};

}  // namespace polar
