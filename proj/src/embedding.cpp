#include "polar/embedding.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace polar {

namespace {

std::vector<std::vector<int>> all_subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        out.push_back(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

}  // namespace

EmbeddedGeometry embed(const Geometry& G, int threads, bool verify) {
    const FormSpace& V = *G.V;
    const Field& F = V.field();
    int d = V.dim(), k = G.k;
    EmbeddedGeometry E;
    E.G = &G;
    E.width = (int)binom(d, k);
    std::uint32_t P = G.num_points();
    E.vec.assign((std::size_t)P * E.width, 0);

    auto work = [&](std::uint32_t lo, std::uint32_t hi) {
        Mat rows(k, d);
        for (std::uint32_t i = lo; i < hi; ++i) {
            auto block = G.pts->set.at(i);
            std::copy(block.begin(), block.end(), rows.a.begin());
            std::vector<fe> w = wedge_of_rows(F, rows);
            canonical_scale(F, w);
            std::copy(w.begin(), w.end(), E.vec.begin() + (std::size_t)i * E.width);
        }
    };
    if (threads <= 1 || P < 4096) {
        work(0, P);
    } else {
        std::vector<std::thread> pool;
        std::uint32_t chunk = (P + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::uint32_t lo = (std::uint32_t)t * chunk, hi = std::min(P, lo + chunk);
            if (lo < hi) pool.emplace_back(work, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    if (verify) {
        BlockSet seen(E.width);
        for (std::uint32_t i = 0; i < P; ++i) {
            if (seen.insert(E.at(i)) != i) throw std::logic_error("embedding not injective");
        }
        for (std::uint32_t l = 0; l < G.num_lines(); ++l) {
            RowReducer R(F, E.width);
            for (std::uint32_t x : G.line(l)) R.add(E.at(x));
            if (R.rank() != 2) throw std::logic_error("line image is not a line");
        }
    }

    RowReducer R(F, E.width);
    for (std::uint32_t i = 0; i < P; ++i) R.add(E.at(i));
    E.span_dim = R.rank();

    if (V.hermitian() && k == V.n()) {
        BaerStructure B(V, k);
        std::vector<std::vector<fe>> coords;
        coords.reserve(P);
        for (std::uint32_t i = 0; i < P; ++i) {
            auto nv = B.normalize(E.at(i));
            if (!nv) throw std::logic_error("sigma-normalisation failed for a dual polar point");
            coords.push_back(B.baer_coordinates(*nv));
        }
        E.baer_dim = rank_over(F, coords, /*subfield_only=*/true);
    }
    return E;
}

// ---------------------------------------------------------------------------
// Baer structure

BaerStructure::BaerStructure(const FormSpace& V, int k) : V_(&V), k_(k) {
    if (!V.hermitian()) throw std::invalid_argument("Baer structure needs a Hermitian space");
    if (k != V.n()) throw std::invalid_argument("Baer structure is for the dual case k = n");
    const Field& F = V.field();
    int d = V.dim(), n = V.n();
    width_ = (int)binom(d, k);
    auto subsets = all_subsets(d, k);

    fe g = (fe)1;  // f(e_{n+i}, e_i) for the Hermitian Gram matrix
    auto swap_idx = [&](int i) { return i < n ? i + n : i - n; };
    tau_.resize(width_);
    coef_.resize(width_);
    std::vector<int> buf(k), comp;
    for (int si = 0; si < width_; ++si) {
        const auto& S = subsets[si];
        // phi(e_i) = w(i) e*_{swap(i)}; wedge and sort, tracking the sign
        fe c = 1;
        for (int i : S)
            if (i < n) c = F.mul(c, g);
        for (int i = 0; i < k; ++i) buf[i] = swap_idx(S[i]);
        int inv = 0;
        for (int i = 0; i < k; ++i)
            for (int j = i + 1; j < k; ++j)
                if (buf[i] > buf[j]) ++inv;
        if (inv & 1) c = F.neg(c);
        std::sort(buf.begin(), buf.end());
        // pairing with the complement: e_T ^ e_{T^c} = sh(T) e_{all}
        comp.clear();
        std::vector<bool> used(d, false);
        for (int i : buf) used[i] = true;
        for (int i = 0; i < d; ++i)
            if (!used[i]) comp.push_back(i);
        int sh = 0;
        for (int a : buf)
            for (int b : comp)
                if (a > b) ++sh;
        if (sh & 1) c = F.neg(c);
        tau_[si] = (std::uint32_t)subset_rank(d, comp);
        coef_[si] = c;
    }
    // force theta^2 = id (the composition squares to a constant +-1)
    fe c2 = F.mul(coef_[0], coef_[tau_[0]]);
    for (int si = 0; si < width_; ++si)
        if (F.mul(coef_[si], coef_[tau_[si]]) != c2) throw std::logic_error("theta^2 not scalar");
    if (c2 != 1) {
        fe mu = F.solve_norm(F.inv(c2));
        for (fe& c : coef_) c = F.mul(c, mu);
    }

    // Fixed-field basis of Fix(theta): one vector per self-paired index with
    // a sigma-adapted scalar, two per orbit pair.
    fe gamma = 0;  // least element outside the fixed subfield
    for (std::uint32_t x = 0; x < F.q(); ++x)
        if (!F.sigma_fixed((fe)x)) { gamma = (fe)x; break; }
    basis_ = Mat(0, width_);
    for (int si = 0; si < width_; ++si) {
        std::uint32_t t = tau_[si];
        if (t == (std::uint32_t)si) {
            std::vector<fe> v(width_, 0);
            // need x with sigma(x) * coef = x
            v[si] = (coef_[si] == 1) ? (fe)1 : F.delta();
            basis_.append_row(v);
        } else if ((std::uint32_t)si < t) {
            for (fe a : {(fe)1, gamma}) {
                std::vector<fe> v(width_, 0);
                v[si] = a;
                v[t] = F.mul(F.frob(a), coef_[si]);
                basis_.append_row(v);
            }
        }
    }
    if (basis_.rows != width_) throw std::logic_error("Baer basis has wrong size");
    for (int r = 0; r < basis_.rows; ++r) {
        auto img = theta(basis_.row(r));
        if (!std::equal(img.begin(), img.end(), basis_.row(r).begin()))
            throw std::logic_error("Baer basis vector not theta-fixed");
    }
    // invert the basis matrix
    Mat aug(width_, 2 * width_);
    for (int r = 0; r < width_; ++r) {
        for (int c = 0; c < width_; ++c) aug.at(r, c) = basis_.at(r, c);
        aug.at(r, width_ + r) = 1;
    }
    if (rref_inplace(F, aug) != width_) throw std::logic_error("Baer basis singular");
    basis_inv_ = Mat(width_, width_);
    for (int r = 0; r < width_; ++r)
        for (int c = 0; c < width_; ++c) basis_inv_.at(r, c) = aug.at(r, width_ + c);
}

std::vector<fe> BaerStructure::theta(std::span<const fe> x) const {
    const Field& F = V_->field();
    std::vector<fe> out(width_, 0);
    for (int si = 0; si < width_; ++si)
        if (x[si]) out[tau_[si]] = F.mul(F.frob(x[si]), coef_[si]);
    return out;
}

std::optional<std::vector<fe>> BaerStructure::normalize(std::span<const fe> x) const {
    const Field& F = V_->field();
    std::vector<fe> y = theta(x);
    fe rho = 0;
    for (int i = 0; i < width_; ++i) {
        if ((x[i] == 0) != (y[i] == 0)) return std::nullopt;
        if (x[i] && !rho) rho = F.div(y[i], x[i]);
    }
    if (!rho) return std::nullopt;
    for (int i = 0; i < width_; ++i)
        if (x[i] && F.div(y[i], x[i]) != rho) return std::nullopt;
    if (F.norm(rho) != 1) throw std::logic_error("proportionality ratio has norm != 1");
    // lambda * x theta-fixed  <=>  sigma(lambda) rho = lambda
    for (std::uint32_t l = 1; l < F.q(); ++l) {
        if (F.mul(F.frob((fe)l), rho) == (fe)l) {
            std::vector<fe> out(x.begin(), x.end());
            for (fe& v : out) v = F.mul(v, (fe)l);
            return out;
        }
    }
    return std::nullopt;
}

std::vector<fe> BaerStructure::baer_coordinates(std::span<const fe> fixed_vec) const {
    return apply_matrix(V_->field(), fixed_vec, basis_inv_);
}

// ---------------------------------------------------------------------------

std::vector<int> wedge_blocks(int two_n, int k) {
    auto subsets = all_subsets(two_n, k);
    std::vector<int> out(subsets.size());
    int pidx = two_n / 2 - 1, qidx = two_n - 1;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        bool hasp = std::find(subsets[i].begin(), subsets[i].end(), pidx) != subsets[i].end();
        bool hasq = std::find(subsets[i].begin(), subsets[i].end(), qidx) != subsets[i].end();
        out[i] = (hasp ? 1 : 0) | (hasq ? 2 : 0);
    }
    return out;
}

Mat induced_exterior_matrix(const Field& F, const Mat& T, int k) {
    int d = T.rows;
    auto subsets = all_subsets(d, k);
    int width = (int)subsets.size();
    Mat M(width, width);
    Mat rows(k, d);
    for (int si = 0; si < width; ++si) {
        for (int r = 0; r < k; ++r)
            std::copy(T.row(subsets[si][r]).begin(), T.row(subsets[si][r]).end(), rows.row(r).begin());
        std::vector<fe> img = wedge_of_rows(F, rows);
        std::copy(img.begin(), img.end(), M.row(si).begin());
    }
    return M;
}

std::vector<fe> apply_matrix(const Field& F, std::span<const fe> v, const Mat& M) {
    std::vector<fe> out(M.cols, 0);
    for (int r = 0; r < M.rows; ++r) {
        if (!v[r]) continue;
        for (int c = 0; c < M.cols; ++c)
            if (M.at(r, c)) out[c] = F.add(out[c], F.mul(v[r], M.at(r, c)));
    }
    return out;
}

std::vector<std::vector<fe>> su_generator_isotropics(const FormSpace& V) {
    if (!V.hermitian()) throw std::invalid_argument("unitary generators need a Hermitian space");
    const Field& F = V.field();
    int n = V.n(), d = V.dim();
    BlockSet seen(d);
    std::vector<std::vector<fe>> out;
    auto push = [&](std::vector<fe> v) {
        canonical_scale(F, v);
        std::uint32_t before = seen.size();
        if (seen.insert(v) == before) out.push_back(std::move(v));
    };
    for (int i = 0; i < d; ++i) push(V.unit(i));
    // 1-spaces of the apartment's t.i. lines <e_i, e_j>, j != i +- n
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            if (j == i + n) continue;
            for (std::uint32_t c = 1; c < F.q(); ++c) {
                std::vector<fe> v = V.unit(i);
                v[j] = (fe)c;
                push(std::move(v));
            }
        }
    // one non-apartment isotropic point per hyperbolic plane <e_i, f_i>
    for (int i = 0; i < n; ++i) {
        std::vector<fe> v = V.unit(i);
        v[n + i] = F.delta();
        if (!V.isotropic(v)) throw std::logic_error("plane vector not isotropic");
        push(std::move(v));
    }
    return out;
}

std::vector<fe> additive_basis(const Field& F, bool subfield_only) {
    const Field& Fp = Field::get(F.p(), 1);
    RowReducer R(Fp, F.m());
    std::vector<fe> out;
    for (std::uint32_t x = 1; x < F.q(); ++x) {
        if (subfield_only && !F.sigma_fixed((fe)x)) continue;
        std::vector<fe> digits(F.m(), 0);
        std::uint32_t v = x;
        for (int i = 0; i < F.m() && v; ++i) {
            digits[i] = (fe)(v % F.p());
            v /= F.p();
        }
        if (R.add(digits)) out.push_back((fe)x);
    }
    return out;
}

int su_submodule_closure(const FormSpace& V, int k, std::span<const fe> seed) {
    const Field& F = V.field();
    int width = (int)binom(V.dim(), k);
    if ((int)seed.size() != width) throw std::invalid_argument("seed length mismatch");
    bool nonzero = false;
    for (fe x : seed) nonzero |= x != 0;
    if (!nonzero) throw std::invalid_argument("seed must be nonzero");

    std::vector<Mat> gens;
    for (const auto& u : su_generator_isotropics(V))
        for (fe lam : additive_basis(F, /*subfield_only=*/true))
            gens.push_back(induced_exterior_matrix(F, V.transvection_matrix(u, lam), k));

    RowReducer R(F, width);
    std::vector<std::vector<fe>> queue;
    R.add(seed);
    queue.emplace_back(seed.begin(), seed.end());
    while (!queue.empty() && R.rank() < width) {
        std::vector<fe> v = std::move(queue.back());
        queue.pop_back();
        for (const Mat& g : gens) {
            std::vector<fe> img = apply_matrix(F, v, g);
            if (R.add(img)) {
                queue.push_back(std::move(img));
                if (R.rank() == width) break;
            }
        }
    }
    return R.rank();
}

bool bracket_equality_check(const FormSpace& V, int k, std::span<const fe> a_vec,
                            std::span<const fe> u) {
    const Field& F = V.field();
    int width = (int)binom(V.dim(), k);
    auto commutator = [&](bool subfield_only) {
        Mat rows(0, width);
        for (fe lam : additive_basis(F, subfield_only)) {
            Mat M = induced_exterior_matrix(F, V.transvection_matrix(u, lam), k);
            std::vector<fe> img = apply_matrix(F, a_vec, M);
            for (int i = 0; i < width; ++i) img[i] = F.sub(img[i], a_vec[i]);
            rows.append_row(img);
        }
        return span_of(F, std::move(rows));
    };
    return commutator(true) == commutator(false);
}

}  // namespace polar
