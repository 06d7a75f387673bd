#include "polar/forms.hpp"

#include <stdexcept>

namespace polar {

FormSpace::FormSpace(const Field& F, int n, FormKind kind) : F_(&F), n_(n), kind_(kind) {
    if (n < 1) throw std::invalid_argument("Witt index must be positive");
    if (kind == FormKind::Hermitian) {
        if (!F.is_square_extension())
            throw std::invalid_argument("Hermitian form needs a quadratic extension field");
        delta_ = F.delta();
    } else {
        delta_ = 1;
    }
}

fe FormSpace::eval(std::span<const fe> u, std::span<const fe> v) const {
    if ((int)u.size() != dim() || (int)v.size() != dim())
        throw std::invalid_argument("vector dimension mismatch");
    const Field& F = *F_;
    fe acc = 0;
    if (hermitian()) {
        for (int i = 0; i < n_; ++i) {
            acc = F.add(acc, F.mul(u[i], F.frob(v[n_ + i])));
            acc = F.add(acc, F.mul(u[n_ + i], F.frob(v[i])));
        }
    } else {
        for (int i = 0; i < n_; ++i) {
            acc = F.add(acc, F.mul(u[i], v[n_ + i]));
            acc = F.sub(acc, F.mul(u[n_ + i], v[i]));
        }
    }
    return acc;
}

Mat FormSpace::gram() const {
    Mat G(dim(), dim());
    for (int i = 0; i < n_; ++i) {
        G.at(i, n_ + i) = 1;
        G.at(n_ + i, i) = hermitian() ? (fe)1 : F_->neg(1);
    }
    return G;
}

std::vector<fe> FormSpace::unit(int i) const {
    std::vector<fe> v(dim(), 0);
    v[i] = 1;
    return v;
}

Subspace FormSpace::perp(const Subspace& U) const {
    if (U.ambient != dim()) throw std::invalid_argument("ambient mismatch");
    const Field& F = *F_;
    // f(u, v) = (u G) . sigma(v), so perp(U) = sigma(ker(U G)).
    Mat B(U.dim(), dim());
    for (int r = 0; r < U.dim(); ++r) {
        auto row = U.basis.row(r);
        for (int i = 0; i < n_; ++i) {
            B.at(r, n_ + i) = row[i];
            B.at(r, i) = hermitian() ? row[n_ + i] : F.neg(row[n_ + i]);
        }
    }
    Mat K = kernel(F, B);
    if (hermitian())
        for (fe& x : K.a) x = F.frob(x);
    return span_of(F, std::move(K));
}

bool FormSpace::totally_isotropic(const Subspace& U) const {
    for (int i = 0; i < U.dim(); ++i) {
        if (hermitian() && eval(U.basis.row(i), U.basis.row(i)) != 0) return false;
        for (int j = i + 1; j < U.dim(); ++j)
            if (eval(U.basis.row(i), U.basis.row(j)) != 0) return false;
    }
    return true;
}

std::vector<fe> FormSpace::isotropic_in(const Subspace& W) const {
    const Field& F = *F_;
    if (W.dim() == 0) throw std::invalid_argument("no isotropic vector in zero space");
    for (int r = 0; r < W.dim(); ++r)
        if (isotropic(W.basis.row(r))) return std::vector<fe>(W.basis.row(r).begin(), W.basis.row(r).end());
    // Hermitian with every basis row anisotropic. Diagonal values lie in the
    // fixed subfield, so the norm equation below is always solvable.
    if (!hermitian()) throw std::logic_error("symplectic vector must be isotropic");
    if (W.dim() < 2) throw std::invalid_argument("anisotropic subspace");
    std::vector<fe> u(W.basis.row(0).begin(), W.basis.row(0).end());
    fe a = eval(u, u);
    // v = second row made orthogonal to u
    std::vector<fe> v(W.basis.row(1).begin(), W.basis.row(1).end());
    fe c = F.div(eval(v, u), a);
    for (int i = 0; i < dim(); ++i) v[i] = F.sub(v[i], F.mul(c, u[i]));
    fe b = eval(v, v);
    if (b == 0) return v;
    // x = u + t v isotropic iff N(t) = -a/b
    fe t = F.solve_norm(F.neg(F.div(a, b)));
    std::vector<fe> x(dim());
    for (int i = 0; i < dim(); ++i) x[i] = F.add(u[i], F.mul(t, v[i]));
    if (!isotropic(x)) throw std::logic_error("isotropic search failed");
    return x;
}

std::vector<fe> FormSpace::hyperbolic_partner(const Subspace& W, std::span<const fe> e) const {
    const Field& F = *F_;
    int pick = -1;
    fe c = 0;
    for (int r = 0; r < W.dim(); ++r) {
        c = eval(e, W.basis.row(r));
        if (c != 0) { pick = r; break; }
    }
    if (pick < 0) throw std::invalid_argument("vector has no partner: degenerate restriction");
    // scale so f(e, y) = 1; the form is conjugate-linear in its second slot
    fe s = hermitian() ? F.frob(F.inv(c)) : F.inv(c);
    std::vector<fe> y(dim());
    auto w = W.basis.row(pick);
    for (int i = 0; i < dim(); ++i) y[i] = F.mul(s, w[i]);
    fe b = eval(y, y);
    if (b != 0) {
        // y + t e stays paired 1 with e; f(y+te, y+te) = b + Tr(t)
        fe t = hermitian() ? F.solve_trace(F.neg(b)) : (throw std::logic_error("symplectic f(y,y) != 0"), (fe)0);
        for (int i = 0; i < dim(); ++i) y[i] = F.add(y[i], F.mul(t, e[i]));
    }
    return y;
}

std::vector<std::vector<fe>> FormSpace::hyperbolic_basis(const Subspace& W) const {
    const Field& F = *F_;
    if (W.dim() % 2 != 0) throw std::invalid_argument("odd-dimensional subspace has no hyperbolic basis");
    if (radical(W).dim() != 0) throw std::invalid_argument("degenerate subspace");
    std::vector<std::vector<fe>> es, fs;
    Subspace cur = W;
    while (cur.dim() > 0) {
        std::vector<fe> e = isotropic_in(cur);
        std::vector<fe> f = hyperbolic_partner(cur, e);
        es.push_back(e);
        fs.push_back(f);
        Mat pair(0, dim());
        pair.append_row(e);
        pair.append_row(f);
        cur = intersect(F, cur, perp(span_of(F, std::move(pair))));
    }
    std::vector<std::vector<fe>> out;
    out.reserve(2 * es.size());
    for (auto& e : es) out.push_back(std::move(e));
    for (auto& f : fs) out.push_back(std::move(f));
    return out;
}

std::vector<std::vector<fe>> FormSpace::complete_hyperbolic(
    std::vector<std::optional<std::vector<fe>>> eslots,
    std::vector<std::optional<std::vector<fe>>> fslots) const {
    const Field& F = *F_;
    if ((int)eslots.size() != n_ || (int)fslots.size() != n_)
        throw std::invalid_argument("slot count mismatch");

    auto filled_except = [&](const std::vector<fe>* skip) {
        std::vector<const std::vector<fe>*> out;
        for (auto& s : eslots)
            if (s && &*s != skip) out.push_back(&*s);
        for (auto& s : fslots)
            if (s && &*s != skip) out.push_back(&*s);
        return out;
    };

    // Solve f(z, w) = 0 for listed z, f(u, w) = 1, w isotropic; adding
    // multiples of u preserves the linear conditions since u is orthogonal
    // to every other filled vector in a valid partial frame.
    auto solve_partner = [&](const std::vector<fe>& u) {
        auto others = filled_except(&u);
        int rows = (int)others.size() + 1;
        Mat A(rows, dim());
        std::vector<fe> rhs(rows, 0);
        auto load = [&](int r, std::span<const fe> z) {
            // f(z, w) as a linear functional of x := sigma(w)
            for (int i = 0; i < n_; ++i) {
                A.at(r, n_ + i) = z[i];
                A.at(r, i) = hermitian() ? z[n_ + i] : F.neg(z[n_ + i]);
            }
        };
        for (int r = 0; r < (int)others.size(); ++r) load(r, *others[r]);
        load(rows - 1, u);
        rhs[rows - 1] = 1;
        // particular solution via RREF of [A | rhs], free variables zero
        Mat aug(rows, dim() + 1);
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < dim(); ++c) aug.at(r, c) = A.at(r, c);
            aug.at(r, dim()) = rhs[r];
        }
        int rank = rref_inplace(F, aug);
        std::vector<fe> x(dim(), 0);
        for (int r = 0; r < rank; ++r) {
            int c = 0;
            while (c <= dim() && aug.at(r, c) == 0) ++c;
            if (c == dim()) throw std::invalid_argument("inconsistent frame: no partner exists");
            x[c] = aug.at(r, dim());
        }
        std::vector<fe> w(dim());
        for (int i = 0; i < dim(); ++i) w[i] = hermitian() ? F.frob(x[i]) : x[i];
        fe b = eval(w, w);
        if (b != 0) {
            fe t = hermitian() ? F.solve_trace(F.neg(b)) : (throw std::logic_error("symplectic partner not isotropic"), (fe)0);
            for (int i = 0; i < dim(); ++i) w[i] = F.add(w[i], F.mul(t, u[i]));
        }
        return w;
    };

    for (int i = 0; i < n_; ++i) {
        if (eslots[i] && !fslots[i]) fslots[i] = solve_partner(*eslots[i]);
        else if (fslots[i] && !eslots[i]) eslots[i] = solve_partner(*fslots[i]);
    }

    // Remaining pairs come from a hyperbolic basis of the perp of the frame.
    Mat filled(0, dim());
    for (auto& s : eslots)
        if (s) filled.append_row(*s);
    for (auto& s : fslots)
        if (s) filled.append_row(*s);
    if (filled.rows < 2 * n_) {
        Subspace rest = perp(span_of(F, std::move(filled)));
        auto hb = hyperbolic_basis(rest);
        int m = (int)hb.size() / 2, at = 0;
        for (int i = 0; i < n_ && at < m; ++i) {
            if (eslots[i]) continue;
            eslots[i] = hb[at];
            fslots[i] = hb[m + at];
            ++at;
        }
        if (at != m) throw std::logic_error("frame completion mismatch");
    }

    std::vector<std::vector<fe>> out;
    for (auto& s : eslots) out.push_back(std::move(*s));
    for (auto& s : fslots) out.push_back(std::move(*s));
    return out;
}

std::vector<fe> FormSpace::transvect(std::span<const fe> u, fe lambda, std::span<const fe> v) const {
    if (!isotropic(u)) throw std::invalid_argument("transvection direction must be isotropic");
    const Field& F = *F_;
    fe c = F.mul(F.mul(lambda, delta_), eval(v, u));
    std::vector<fe> out(v.begin(), v.end());
    for (int i = 0; i < dim(); ++i) out[i] = F.add(out[i], F.mul(c, u[i]));
    return out;
}

Mat FormSpace::transvection_matrix(std::span<const fe> u, fe lambda) const {
    if (!isotropic(u)) throw std::invalid_argument("transvection direction must be isotropic");
    const Field& F = *F_;
    // v -> v + lambda*delta*f(v,u)*u with f(v,u) = v . c where c = G sigma(u)
    std::vector<fe> c(dim(), 0);
    for (int i = 0; i < n_; ++i) {
        c[i] = sigma(u[n_ + i]);
        c[n_ + i] = hermitian() ? sigma(u[i]) : F.neg(u[i]);
    }
    fe ld = F.mul(lambda, delta_);
    Mat T(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        T.at(i, i) = 1;
        fe f = F.mul(ld, c[i]);
        if (f == 0) continue;
        for (int j = 0; j < dim(); ++j) T.at(i, j) = F.add(T.at(i, j), F.mul(f, u[j]));
    }
    return T;
}

FormSpace::WittParts FormSpace::witt_complement() const {
    if (n_ < 2) throw std::invalid_argument("witt_complement needs n >= 2");
    const Field& F = *F_;
    Mat w(0, dim());
    for (int i = 0; i < n_ - 1; ++i) w.append_row(unit(i));
    for (int i = 0; i < n_ - 1; ++i) w.append_row(unit(n_ + i));
    WittParts parts;
    parts.W = span_of(F, std::move(w));
    parts.P = span_of_vector(F, unit(n_ - 1));
    parts.Q = span_of_vector(F, unit(2 * n_ - 1));
    return parts;
}

}  // namespace polar
