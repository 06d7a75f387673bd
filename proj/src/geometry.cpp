#include "polar/geometry.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace polar {

const char* rel_name(Rel r) {
    switch (r) {
        case Rel::R0: return "0";
        case Rel::R1: return "1";
        case Rel::R2p: return "2p";
        case Rel::R2q: return "2q";
        case Rel::R2s: return "2s";
        case Rel::R3: return "3";
    }
    return "?";
}

std::optional<Rel> rel_from_name(std::string_view s) {
    for (Rel r : {Rel::R0, Rel::R1, Rel::R2p, Rel::R2q, Rel::R2s, Rel::R3})
        if (s == rel_name(r)) return r;
    return std::nullopt;
}

int rel_mu(Rel r) {
    switch (r) {
        case Rel::R0: return 0;
        case Rel::R1: return 1;
        case Rel::R2p:
        case Rel::R2q:
        case Rel::R2s: return 2;
        case Rel::R3: return 3;
    }
    return -1;
}

bool rel_less(Rel a, Rel b) {
    if (a == b) return false;
    auto rank = [](Rel r) {
        switch (r) {
            case Rel::R0: return 0;
            case Rel::R1: return 1;
            case Rel::R2p:
            case Rel::R2q: return 2;
            case Rel::R2s: return 3;
            case Rel::R3: return 4;
        }
        return -1;
    };
    // 2p and 2q are the only incomparable pair at distinct ranks' level
    if ((a == Rel::R2p && b == Rel::R2q) || (a == Rel::R2q && b == Rel::R2p)) return false;
    return rank(a) < rank(b);
}

Rel classify_pair(const FormSpace& V, const Subspace& x, const Subspace& y) {
    if (x.dim() != 2 || y.dim() != 2) throw std::invalid_argument("relation classification needs k = 2");
    if (x == y) return Rel::R0;
    const Field& F = V.field();
    Subspace s = sum(F, x, y);
    bool ti = V.totally_isotropic(s);
    if (s.dim() == 3) return ti ? Rel::R1 : Rel::R2q;
    if (s.dim() == 4) {
        if (ti) return Rel::R2p;
        int r = V.radical(s).dim();
        if (r == 2) return Rel::R2s;
        if (r == 0) return Rel::R3;
    }
    throw std::logic_error("pair outside the two-point relation table");
}

// ---------------------------------------------------------------------------
// BlockSet

namespace {
std::uint64_t fnv1a(std::span<const fe> block) {
    std::uint64_t h = 1469598103934665603ull;
    for (fe x : block) {
        h ^= (std::uint64_t)x + 1;
        h *= 1099511628211ull;
    }
    return h;
}
}  // namespace

BlockSet::BlockSet(int stride_) : stride(stride_) { rehash(64); }

void BlockSet::rehash(std::size_t cap) {
    table_.assign(cap, 0);
    for (std::uint32_t id = 0; id < hashes_.size(); ++id) {
        std::size_t at = hashes_[id] & (cap - 1);
        while (table_[at]) at = (at + 1) & (cap - 1);
        table_[at] = id + 1;
    }
}

std::uint32_t BlockSet::insert(std::span<const fe> block) {
    std::uint64_t h = fnv1a(block);
    std::size_t mask = table_.size() - 1;
    std::size_t at = h & mask;
    while (table_[at]) {
        std::uint32_t id = table_[at] - 1;
        if (hashes_[id] == h && std::equal(block.begin(), block.end(), at_ptr(id))) return id;
        at = (at + 1) & mask;
    }
    std::uint32_t id = (std::uint32_t)hashes_.size();
    hashes_.push_back(h);
    data.insert(data.end(), block.begin(), block.end());
    table_[at] = id + 1;
    if ((hashes_.size() + 1) * 10 >= table_.size() * 7) rehash(table_.size() * 2);
    return id;
}

std::optional<std::uint32_t> BlockSet::find(std::span<const fe> block) const {
    std::uint64_t h = fnv1a(block);
    std::size_t mask = table_.size() - 1;
    std::size_t at = h & mask;
    while (table_[at]) {
        std::uint32_t id = table_[at] - 1;
        if (hashes_[id] == h && std::equal(block.begin(), block.end(), at_ptr(id))) return id;
        at = (at + 1) & mask;
    }
    return std::nullopt;
}

void BlockSet::sort_lex() {
    std::uint32_t n = size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    const fe* base = data.data();
    int st = stride;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return std::lexicographical_compare(base + (std::size_t)a * st, base + (std::size_t)(a + 1) * st,
                                            base + (std::size_t)b * st, base + (std::size_t)(b + 1) * st);
    });
    std::vector<fe> nd(data.size());
    std::vector<std::uint64_t> nh(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        std::copy(base + (std::size_t)order[i] * st, base + (std::size_t)(order[i] + 1) * st,
                  nd.begin() + (std::size_t)i * st);
        nh[i] = hashes_[order[i]];
    }
    data.swap(nd);
    hashes_.swap(nh);
    rehash(table_.size());
}

Subspace Level::subspace(std::uint32_t id) const {
    Mat m(j, ambient);
    auto b = set.at(id);
    std::copy(b.begin(), b.end(), m.a.begin());
    return Subspace{ambient, std::move(m)};
}

std::optional<std::uint32_t> Level::find(const Subspace& s) const {
    if (s.dim() != j || s.ambient != ambient) return std::nullopt;
    return set.find(s.basis.a);
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

// Rows of a complement of U inside X (both RREF), greedily picked from X's
// basis rows.
Mat complement_rows(const Field& F, const Subspace& X, const Subspace& U) {
    Mat comp(0, X.ambient);
    RowReducer R(F, X.ambient);
    for (int r = 0; r < U.dim(); ++r) R.add(U.basis.row(r));
    for (int r = 0; r < X.dim(); ++r)
        if (R.add(X.basis.row(r))) comp.append_row(X.basis.row(r));
    return comp;
}

// Calls fn(v) for one representative v of every 1-space of the row space of
// C, in deterministic order (coefficient tuples with leading entry 1).
template <typename Fn>
void for_each_projective_point(const Field& F, const Mat& C, Fn&& fn) {
    int d = C.rows, cols = C.cols;
    std::uint32_t q = F.q();
    std::vector<fe> coef(d, 0), v(cols);
    for (int lead = 0; lead < d; ++lead) {
        std::fill(coef.begin(), coef.end(), 0);
        coef[lead] = 1;
        // odometer over coefficients after `lead`
        for (;;) {
            for (int c = 0; c < cols; ++c) {
                fe acc = C.at(lead, c);
                for (int i = lead + 1; i < d; ++i)
                    if (coef[i]) acc = F.add(acc, F.mul(coef[i], C.at(i, c)));
                v[c] = acc;
            }
            fn(std::span<const fe>(v));
            int i = d - 1;
            while (i > lead && coef[i] == (fe)(q - 1)) coef[i--] = 0;
            if (i == lead) break;
            ++coef[i];
        }
    }
}

// All RREF matrices with `j` rows over F^dim (i.e. all j-subspaces of F^dim).
std::vector<Mat> rref_patterns(const Field& F, int dim, int j) {
    std::vector<Mat> out;
    if (j == 0) {
        out.emplace_back(0, dim);
        return out;
    }
    std::vector<int> piv(j);
    for (int i = 0; i < j; ++i) piv[i] = i;
    std::uint32_t q = F.q();
    for (;;) {
        // free positions: (r, c) with c > piv[r], c not a pivot column
        std::vector<std::pair<int, int>> free;
        std::vector<bool> is_piv(dim, false);
        for (int r = 0; r < j; ++r) is_piv[piv[r]] = true;
        for (int r = 0; r < j; ++r)
            for (int c = piv[r] + 1; c < dim; ++c)
                if (!is_piv[c]) free.push_back({r, c});
        std::vector<fe> vals(free.size(), 0);
        for (;;) {
            Mat m(j, dim);
            for (int r = 0; r < j; ++r) m.at(r, piv[r]) = 1;
            for (std::size_t i = 0; i < free.size(); ++i) m.at(free[i].first, free[i].second) = vals[i];
            out.push_back(std::move(m));
            std::size_t i = vals.size();
            while (i > 0 && vals[i - 1] == (fe)(q - 1)) vals[--i] = 0;
            if (i == 0) break;
            ++vals[i - 1];
        }
        // next pivot combination
        int i = j - 1;
        while (i >= 0 && piv[i] == dim - j + i) --i;
        if (i < 0) break;
        ++piv[i];
        for (int r = i + 1; r < j; ++r) piv[r] = piv[r - 1] + 1;
    }
    return out;
}

}  // namespace

std::shared_ptr<const Level> PolarComplex::level(int j) {
    const FormSpace& V = *V_;
    if (j < 1 || j > V.n()) throw std::invalid_argument("level out of range");
    if ((int)levels_.size() < V.n()) levels_.resize(V.n());
    if (levels_[j - 1]) return levels_[j - 1];

    const Field& F = V.field();
    int d = V.dim();
    auto lvl = std::make_shared<Level>(j, d);

    if (j == 1) {
        Mat full(d, d);
        for (int i = 0; i < d; ++i) full.at(i, i) = 1;
        for_each_projective_point(F, full, [&](std::span<const fe> v) {
            if (V.isotropic(v)) lvl->set.insert(v);
        });
    } else {
        auto prev = level(j - 1);
        bool need_iso = V.hermitian();  // symplectic vectors are always isotropic
        Mat rows(j, d);
        for (std::uint32_t id = 0; id < prev->size(); ++id) {
            Subspace U = prev->subspace(id);
            Subspace Up = V.perp(U);
            Mat comp = complement_rows(F, Up, U);
            for_each_projective_point(F, comp, [&](std::span<const fe> v) {
                if (need_iso && !V.isotropic(v)) return;
                std::copy(U.basis.a.begin(), U.basis.a.end(), rows.a.begin());
                std::copy(v.begin(), v.end(), rows.a.begin() + (std::size_t)(j - 1) * d);
                Mat r = rows;
                if (rref_inplace(F, r) != j) throw std::logic_error("extension not independent");
                lvl->set.insert(r.a);
            });
        }
    }
    lvl->set.sort_lex();
    levels_[j - 1] = lvl;
    return lvl;
}

// ---------------------------------------------------------------------------
// Geometry construction

Geometry build_geometry(PolarComplex& C, int k) {
    const FormSpace& V = C.space();
    if (k < 1 || k > V.n()) throw std::invalid_argument("k out of range");
    const Field& F = V.field();
    int d = V.dim();

    Geometry G;
    G.V = &V;
    G.k = k;
    G.pts = C.level(k);
    if (k >= 2) G.Ds = C.level(k - 1);
    if (k < V.n()) G.Us = C.level(k + 1);

    struct RawLine {
        std::vector<std::uint32_t> pts;
        std::uint32_t D, U;
    };
    std::vector<RawLine> raw;

    if (k < V.n()) {
        // lines <-> flags (D, U); enumerate subspace patterns of F^{k+1} once
        auto kpats = rref_patterns(F, k + 1, k);
        auto dpats = rref_patterns(F, k + 1, k - 1);
        std::vector<std::vector<std::uint32_t>> incidence(dpats.size());
        for (std::size_t di = 0; di < dpats.size(); ++di) {
            Subspace dsub{k + 1, dpats[di]};
            for (std::size_t ki = 0; ki < kpats.size(); ++ki)
                if (subspace_leq(F, dsub, Subspace{k + 1, kpats[ki]}))
                    incidence[di].push_back((std::uint32_t)ki);
        }
        auto mul_into = [&](const Mat& pat, std::span<const fe> ubasis, Mat& out) {
            // pat (r x (k+1)) times U basis ((k+1) x d)
            for (int r = 0; r < pat.rows; ++r)
                for (int c = 0; c < d; ++c) {
                    fe acc = 0;
                    for (int i = 0; i <= k; ++i)
                        if (pat.at(r, i)) acc = F.add(acc, F.mul(pat.at(r, i), ubasis[(std::size_t)i * d + c]));
                    out.at(r, c) = acc;
                }
        };
        Mat kbuf((int)k, d), dbuf(k - 1, d);
        std::vector<std::uint32_t> kid(kpats.size()), did(dpats.size());
        for (std::uint32_t u = 0; u < G.Us->size(); ++u) {
            auto ub = G.Us->set.at(u);
            for (std::size_t ki = 0; ki < kpats.size(); ++ki) {
                mul_into(kpats[ki], ub, kbuf);
                Mat r = kbuf;
                rref_inplace(F, r);
                auto id = G.pts->set.find(r.a);
                if (!id) throw std::logic_error("pencil point missing from level");
                kid[ki] = *id;
            }
            for (std::size_t di = 0; di < dpats.size(); ++di) {
                if (k == 1) {
                    did[di] = 0;
                    continue;
                }
                mul_into(dpats[di], ub, dbuf);
                Mat r = dbuf;
                rref_inplace(F, r);
                auto id = G.Ds->set.find(r.a);
                if (!id) throw std::logic_error("line base missing from level");
                did[di] = *id;
            }
            for (std::size_t di = 0; di < dpats.size(); ++di) {
                RawLine rl;
                rl.D = (k == 1) ? UINT32_MAX : did[di];
                rl.U = u;
                for (std::uint32_t ki : incidence[di]) rl.pts.push_back(kid[ki]);
                std::sort(rl.pts.begin(), rl.pts.end());
                raw.push_back(std::move(rl));
            }
        }
    } else {
        // dual polar lines: one per t.i. (n-1)-space D
        Mat rows(k, d);
        for (std::uint32_t di = 0; di < G.Ds->size(); ++di) {
            Subspace D = G.Ds->subspace(di);
            Subspace Dp = V.perp(D);
            Mat comp = complement_rows(F, Dp, D);
            RawLine rl;
            rl.D = di;
            rl.U = UINT32_MAX;
            for_each_projective_point(F, comp, [&](std::span<const fe> v) {
                if (V.hermitian() && !V.isotropic(v)) return;
                std::copy(D.basis.a.begin(), D.basis.a.end(), rows.a.begin());
                std::copy(v.begin(), v.end(), rows.a.begin() + (std::size_t)(k - 1) * d);
                Mat r = rows;
                rref_inplace(F, r);
                auto id = G.pts->set.find(r.a);
                if (!id) throw std::logic_error("dual line point missing from level");
                rl.pts.push_back(*id);
            });
            std::sort(rl.pts.begin(), rl.pts.end());
            rl.pts.erase(std::unique(rl.pts.begin(), rl.pts.end()), rl.pts.end());
            raw.push_back(std::move(rl));
        }
    }

    if (raw.empty()) throw std::logic_error("geometry without lines");
    G.line_size = (std::uint32_t)raw[0].pts.size();
    for (const auto& rl : raw) {
        if (rl.pts.size() != G.line_size) throw std::logic_error("non-uniform line size");
    }
    if (G.line_size < 3) throw std::logic_error("thin line");

    std::vector<std::uint32_t> order(raw.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return raw[a].pts < raw[b].pts;
    });

    std::uint32_t L = (std::uint32_t)raw.size();
    G.line_pts.reserve((std::size_t)L * G.line_size);
    G.line_D.reserve(L);
    G.line_U.reserve(L);
    for (std::uint32_t i = 0; i < L; ++i) {
        const RawLine& rl = raw[order[i]];
        G.line_pts.insert(G.line_pts.end(), rl.pts.begin(), rl.pts.end());
        G.line_D.push_back(rl.D);
        G.line_U.push_back(rl.U);
        G.flag_to_line.emplace(((std::uint64_t)rl.D << 32) | rl.U, i);
    }

    // CSR point -> lines
    std::uint32_t P = G.num_points();
    G.adj_off.assign(P + 1, 0);
    for (std::uint32_t x : G.line_pts) ++G.adj_off[x + 1];
    for (std::uint32_t i = 0; i < P; ++i) G.adj_off[i + 1] += G.adj_off[i];
    G.adj_line.resize(G.line_pts.size());
    std::vector<std::uint32_t> cur(G.adj_off.begin(), G.adj_off.end() - 1);
    for (std::uint32_t l = 0; l < L; ++l)
        for (std::uint32_t x : G.line(l)) G.adj_line[cur[x]++] = l;
    return G;
}

bool Geometry::on_line(std::uint32_t p, std::uint32_t l) const {
    auto pts_ = line(l);
    return std::binary_search(pts_.begin(), pts_.end(), p);
}

std::optional<std::uint32_t> Geometry::find_line(std::uint32_t d_id, std::uint32_t u_id) const {
    auto it = flag_to_line.find(((std::uint64_t)d_id << 32) | u_id);
    if (it == flag_to_line.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------------------
// Closure and graph utilities

ClosureReport closure(const Geometry& G, std::span<const std::uint32_t> seed) {
    std::uint32_t P = G.num_points(), L = G.num_lines();
    ClosureReport rep;
    rep.seed.assign(seed.begin(), seed.end());
    rep.in.assign(P, 0);
    std::vector<std::uint16_t> cnt(L, 0);
    std::vector<std::uint8_t> absorbed(L, 0);
    std::vector<std::uint32_t> wave, next;
    for (std::uint32_t s : seed) {
        if (s >= P) throw std::invalid_argument("seed index out of range");
        if (!rep.in[s]) {
            rep.in[s] = 1;
            ++rep.count;
            wave.push_back(s);
        }
    }
    while (!wave.empty()) {
        ++rep.rounds;
        for (std::uint32_t p : wave) {
            for (std::uint32_t l : G.lines_on(p)) {
                if (absorbed[l]) continue;
                if (++cnt[l] < 2) continue;
                absorbed[l] = 1;
                ++rep.lines_triggered;
                for (std::uint32_t x : G.line(l)) {
                    if (!rep.in[x]) {
                        rep.in[x] = 1;
                        ++rep.count;
                        next.push_back(x);
                    }
                }
            }
        }
        wave.swap(next);
        next.clear();
    }
    return rep;
}

bool is_subspace_set(const Geometry& G, const std::vector<std::uint8_t>& in) {
    for (std::uint32_t l = 0; l < G.num_lines(); ++l) {
        std::uint32_t c = 0;
        for (std::uint32_t x : G.line(l)) c += in[x];
        if (c >= 2 && c != G.line_size) return false;
    }
    return true;
}

IncrementalClosure::IncrementalClosure(const Geometry& G)
    : G_(&G), in_(G.num_points(), 0), cnt_(G.num_lines(), 0), absorbed_(G.num_lines(), 0) {}

std::uint32_t IncrementalClosure::absorb(std::uint32_t p, bool log) {
    std::uint32_t added = 0;
    if (in_[p]) return 0;
    in_[p] = 1;
    ++added;
    if (log) log_pts_.push_back(p);
    wave_.assign(1, p);
    while (!wave_.empty()) {
        next_.clear();
        for (std::uint32_t x : wave_) {
            for (std::uint32_t l : G_->lines_on(x)) {
                if (absorbed_[l]) continue;
                ++cnt_[l];
                if (log) log_lines_.push_back(l);
                if (cnt_[l] < 2) continue;
                absorbed_[l] = 1;
                if (log) log_absorbed_.push_back(l);
                for (std::uint32_t y : G_->line(l)) {
                    if (in_[y]) continue;
                    in_[y] = 1;
                    ++added;
                    if (log) log_pts_.push_back(y);
                    next_.push_back(y);
                }
            }
        }
        wave_.swap(next_);
    }
    return added;
}

void IncrementalClosure::rollback() {
    for (std::uint32_t p : log_pts_) in_[p] = 0;
    for (std::uint32_t l : log_lines_) --cnt_[l];
    for (std::uint32_t l : log_absorbed_) absorbed_[l] = 0;
    log_pts_.clear();
    log_lines_.clear();
    log_absorbed_.clear();
}

void IncrementalClosure::add(std::uint32_t p) { count_ += absorb(p, /*log=*/false); }

std::uint32_t IncrementalClosure::preview_growth(std::uint32_t p) {
    std::uint32_t added = absorb(p, /*log=*/true);
    rollback();
    return added;
}

Rel classify(const Geometry& G, std::uint32_t x, std::uint32_t y) {
    return classify_pair(*G.V, G.point_subspace(x), G.point_subspace(y));
}

std::optional<std::uint32_t> project_to_line(const Geometry& G, std::uint32_t p, std::uint32_t l) {
    if (G.on_line(p, l)) throw std::invalid_argument("point lies on the line");
    auto pts_ = G.line(l);
    std::vector<Rel> codes(pts_.size());
    Subspace ps = G.point_subspace(p);
    for (std::size_t i = 0; i < pts_.size(); ++i)
        codes[i] = classify_pair(*G.V, ps, G.point_subspace(pts_[i]));
    std::vector<Rel> distinct;
    for (Rel c : codes)
        if (std::find(distinct.begin(), distinct.end(), c) == distinct.end()) distinct.push_back(c);
    if (distinct.size() == 1) return std::nullopt;
    if (distinct.size() > 2) throw std::logic_error("more than two relations along a line");
    Rel a = distinct[0], b = distinct[1];
    Rel lo;
    if (rel_less(a, b)) lo = a;
    else if (rel_less(b, a)) lo = b;
    else throw std::logic_error("incomparable relations along a line");
    std::optional<std::uint32_t> gate;
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] != lo) continue;
        if (gate) throw std::logic_error("minimal relation not unique on line");
        gate = pts_[i];
    }
    return gate;
}

namespace {

Rel cross_of(Rel r) {
    switch (r) {
        case Rel::R3: return Rel::R2s;
        case Rel::R2s: return Rel::R2q;
        case Rel::R2q: return Rel::R1;
        case Rel::R2p: return Rel::R1;
        default: throw std::invalid_argument("no parallel-line row for this relation");
    }
}

}  // namespace

ParallelLines parallel_lines(const Geometry& G, std::uint32_t p, std::uint32_t q) {
    const FormSpace& V = *G.V;
    const Field& F = V.field();
    if (G.k != 2) throw std::invalid_argument("parallel_lines needs k = 2");
    Rel code = classify(G, p, q);
    if (code == Rel::R0 || code == Rel::R1)
        throw std::invalid_argument("points must be non-collinear and distinct");
    int n = V.n();
    if (code == Rel::R2p && n < 4) throw std::invalid_argument("relation 2p needs n >= 4");
    if (n < 3) throw std::invalid_argument("parallel line table needs n >= 3");

    Subspace sp = G.point_subspace(p), sq = G.point_subspace(q);
    std::vector<std::optional<std::vector<fe>>> es(n), fs(n);
    auto row_vec = [](const Subspace& s, int r) {
        return std::vector<fe>(s.basis.row(r).begin(), s.basis.row(r).end());
    };

    if (code == Rel::R3) {
        es[0] = row_vec(sp, 0);
        es[1] = row_vec(sp, 1);
        // dual basis of q against (e1, e2): f(e_i, y_j) = delta_ij. The form
        // is conjugate-linear in its second slot, so solve for sigma-coords.
        Mat sys(2, 3);
        for (int j = 0; j < 2; ++j) {
            for (int i = 0; i < 2; ++i) sys.at(i, j) = V.sigma(V.eval(sp.basis.row(i), sq.basis.row(j)));
        }
        for (int target = 0; target < 2; ++target) {
            Mat aug = sys;
            aug.at(target, 2) = 1;
            aug.at(1 - target, 2) = 0;
            if (rref_inplace(F, aug) != 2) throw std::logic_error("degenerate pairing for relation 3");
            fe c0 = V.sigma(aug.at(0, 2)), c1 = V.sigma(aug.at(1, 2));
            std::vector<fe> y(V.dim());
            for (int i = 0; i < V.dim(); ++i)
                y[i] = F.add(F.mul(c0, sq.basis.at(0, i)), F.mul(c1, sq.basis.at(1, i)));
            fs[target] = std::move(y);
        }
    } else if (code == Rel::R2s) {
        Subspace rad = V.radical(sum(F, sp, sq));
        Subspace a = intersect(F, sp, rad), b = intersect(F, sq, rad);
        if (a.dim() != 1 || b.dim() != 1) throw std::logic_error("2s radical trace mismatch");
        std::vector<fe> x2 = row_vec(a, 0), y3 = row_vec(b, 0);
        std::vector<fe> x1 = row_vec(sp, contains_vector(F, a, sp.basis.row(0)) ? 1 : 0);
        std::vector<fe> y1 = row_vec(sq, contains_vector(F, b, sq.basis.row(0)) ? 1 : 0);
        fe c = V.eval(x1, y1);
        fe s = V.hermitian() ? F.frob(F.inv(c)) : F.inv(c);
        for (fe& v : y1) v = F.mul(s, v);
        es[0] = std::move(x1);
        es[1] = std::move(x2);
        fs[0] = std::move(y1);
        fs[2] = std::move(y3);
    } else if (code == Rel::R2q) {
        Subspace a = intersect(F, sp, sq);
        if (a.dim() != 1) throw std::logic_error("2q intersection trace mismatch");
        std::vector<fe> x2 = row_vec(a, 0);
        std::vector<fe> x1 = row_vec(sp, contains_vector(F, a, sp.basis.row(0)) ? 1 : 0);
        std::vector<fe> y1 = row_vec(sq, contains_vector(F, a, sq.basis.row(0)) ? 1 : 0);
        fe c = V.eval(x1, y1);
        fe s = V.hermitian() ? F.frob(F.inv(c)) : F.inv(c);
        for (fe& v : y1) v = F.mul(s, v);
        es[0] = std::move(x1);
        es[1] = std::move(x2);
        fs[0] = std::move(y1);
    } else {  // R2p
        es[0] = row_vec(sp, 0);
        es[1] = row_vec(sp, 1);
        es[2] = row_vec(sq, 0);
        es[3] = row_vec(sq, 1);
    }

    auto E = V.complete_hyperbolic(std::move(es), std::move(fs));
    auto ee = [&](int i) { return std::span<const fe>(E[i - 1]); };
    auto ff = [&](int i) { return std::span<const fe>(E[n + i - 1]); };
    auto two = [&](std::span<const fe> a, std::span<const fe> b) {
        Mat m(0, V.dim());
        m.append_row(a);
        m.append_row(b);
        return span_of(F, std::move(m));
    };

    Subspace pm, qm;
    switch (code) {
        case Rel::R3: pm = two(ee(1), ee(3)); qm = two(ff(1), ff(3)); break;
        case Rel::R2s: pm = two(ee(1), ff(3)); qm = two(ff(1), ee(2)); break;
        case Rel::R2q: pm = two(ee(2), ff(3)); qm = two(ee(2), ee(3)); break;
        default: pm = two(ee(1), ee(3)); qm = two(ee(2), ff(4)); break;  // R2p
    }

    auto locate_line = [&](const Subspace& x, const Subspace& xm) {
        Subspace D = intersect(F, x, xm);
        Subspace U = sum(F, x, xm);
        if (D.dim() != 1 || U.dim() != 3 || !V.totally_isotropic(U))
            throw std::logic_error("parallel construction produced a non-pencil");
        auto did = G.Ds->find(D), uid = G.Us->find(U);
        if (!did || !uid) throw std::logic_error("pencil flag not found");
        auto lid = G.find_line(*did, *uid);
        if (!lid) throw std::logic_error("pencil line not found");
        return *lid;
    };

    ParallelLines out;
    out.main = code;
    out.cross = cross_of(code);
    auto pmid = G.find_point(pm), qmid = G.find_point(qm);
    if (!pmid || !qmid) throw std::logic_error("mate points not found");
    out.p_mate = *pmid;
    out.q_mate = *qmid;
    out.l = locate_line(sp, pm);
    out.m = locate_line(sq, qm);

    // verify the table row
    if (classify(G, out.p_mate, out.q_mate) != code || classify(G, p, out.q_mate) != out.cross ||
        classify(G, out.p_mate, q) != out.cross)
        throw std::logic_error("parallel table verification failed");
    // (par-i): exactly two relations between l and m
    std::vector<Rel> seen;
    for (std::uint32_t a : G.line(out.l))
        for (std::uint32_t b : G.line(out.m)) {
            Rel r = classify(G, a, b);
            if (std::find(seen.begin(), seen.end(), r) == seen.end()) seen.push_back(r);
        }
    if (seen.size() != 2) throw std::logic_error("(par-i) failed");
    // (par-ii): mutually inverse projections
    for (std::uint32_t a : G.line(out.l)) {
        auto g = project_to_line(G, a, out.m);
        if (!g) throw std::logic_error("(par-ii): projection undefined");
        auto back = project_to_line(G, *g, out.l);
        if (!back || *back != a) throw std::logic_error("(par-ii): projections not mutually inverse");
    }
    if (project_to_line(G, p, out.m) == q) throw std::logic_error("proj_m(p) = q");
    return out;
}

std::vector<std::uint8_t> hyperplane_W(const Geometry& G, const Subspace& W) {
    const FormSpace& V = *G.V;
    const Field& F = V.field();
    if (V.n() < 3) throw std::invalid_argument("hyperplane_W needs n >= 3");
    if (W.ambient != V.dim() || W.dim() != V.dim() - 2)
        throw std::invalid_argument("W must have codimension 2");
    if (V.radical(W).dim() != 0) throw std::invalid_argument("W must be non-degenerate");
    if ((int)V.hyperbolic_basis(W).size() != V.dim() - 2)
        throw std::invalid_argument("W must have Witt index n-1");

    std::uint32_t P = G.num_points();
    std::vector<std::uint8_t> in(P, 0);
    int k = G.k, d = V.dim();
    Mat resid(k, d);
    for (std::uint32_t i = 0; i < P; ++i) {
        auto block = G.pts->set.at(i);
        for (int r = 0; r < k; ++r) {
            auto v = reduce_against(F, W.basis, block.subspan((std::size_t)r * d, d));
            std::copy(v.begin(), v.end(), resid.row(r).begin());
        }
        Mat m = resid;
        in[i] = rref_inplace(F, m) < k;  // K meets W iff rows collapse mod W
    }
    return in;
}

HyperplaneChecks verify_hyperplane(const Geometry& G, const std::vector<std::uint8_t>& H,
                                   int samples, std::uint64_t seed) {
    HyperplaneChecks out;
    std::uint32_t P = G.num_points();
    std::uint32_t hsize = 0;
    for (std::uint8_t b : H) hsize += b;
    out.proper = hsize < P;
    out.every_line_1_or_all = true;
    for (std::uint32_t l = 0; l < G.num_lines(); ++l) {
        std::uint32_t c = 0;
        for (std::uint32_t x : G.line(l)) c += H[x];
        if (!(c == 1 || c == G.line_size)) {
            out.every_line_1_or_all = false;
            break;
        }
    }
    std::vector<std::uint32_t> outside;
    for (std::uint32_t i = 0; i < P; ++i)
        if (!H[i]) outside.push_back(i);
    std::vector<std::uint32_t> base;
    for (std::uint32_t i = 0; i < P; ++i)
        if (H[i]) base.push_back(i);
    out.maximal = !outside.empty();
    std::mt19937_64 rng(seed);
    for (int s = 0; s < samples && out.maximal; ++s) {
        std::uint32_t x = outside[rng() % outside.size()];
        std::vector<std::uint32_t> ext = base;
        ext.push_back(x);
        if (closure(G, ext).count != P) out.maximal = false;
    }
    return out;
}

bool complement_connected(const Geometry& G, const std::vector<std::uint8_t>& S) {
    if (!is_subspace_set(G, S)) throw std::invalid_argument("S is not a subspace");
    std::uint32_t P = G.num_points();
    std::uint32_t inside = 0;
    for (std::uint8_t b : S) inside += b;
    if (inside == P) throw std::invalid_argument("S must be proper");
    std::uint32_t target = P - inside;
    std::vector<std::uint8_t> vis(P, 0);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t i = 0; i < P; ++i)
        if (!S[i]) {
            stack.push_back(i);
            vis[i] = 1;
            break;
        }
    std::uint32_t seen = 1;
    while (!stack.empty()) {
        std::uint32_t p = stack.back();
        stack.pop_back();
        for (std::uint32_t l : G.lines_on(p))
            for (std::uint32_t x : G.line(l))
                if (!S[x] && !vis[x]) {
                    vis[x] = 1;
                    ++seen;
                    stack.push_back(x);
                }
    }
    return seen == target;
}

std::vector<std::uint32_t> residue(const Geometry& G, const Subspace& X) {
    const FormSpace& V = *G.V;
    const Field& F = V.field();
    if (!V.totally_isotropic(X)) throw std::invalid_argument("X must be totally isotropic");
    if (X.dim() == G.k) throw std::invalid_argument("residue needs dim X != k");
    std::vector<std::uint32_t> out;
    std::uint32_t P = G.num_points();
    int d = V.dim();
    if (X.dim() == 0) {
        out.resize(P);
        std::iota(out.begin(), out.end(), 0);
        return out;
    }
    for (std::uint32_t i = 0; i < P; ++i) {
        auto block = G.pts->set.at(i);
        Mat kb(G.k, d);
        std::copy(block.begin(), block.end(), kb.a.begin());
        bool inc;
        if (X.dim() < G.k) {
            inc = true;
            for (int r = 0; r < X.dim() && inc; ++r) {
                auto v = reduce_against(F, kb, X.basis.row(r));
                for (fe y : v)
                    if (y != 0) { inc = false; break; }
            }
        } else {
            inc = true;
            for (int r = 0; r < G.k && inc; ++r) {
                auto v = reduce_against(F, X.basis, kb.row(r));
                for (fe y : v)
                    if (y != 0) { inc = false; break; }
            }
        }
        if (inc) out.push_back(i);
    }
    return out;
}

std::vector<std::uint32_t> apartment(const Geometry& G, const std::vector<std::vector<fe>>& E) {
    const FormSpace& V = *G.V;
    const Field& F = V.field();
    int n = V.n();
    if ((int)E.size() != 2 * n) throw std::invalid_argument("hyperbolic basis needs 2n vectors");
    for (int i = 0; i < 2 * n; ++i)
        for (int j = i; j < 2 * n; ++j) {
            fe want = (j == i + n) ? (fe)1 : (fe)0;
            if (V.eval(E[i], E[j]) != want) throw std::invalid_argument("basis is not hyperbolic");
        }
    std::vector<std::uint32_t> out;
    int k = G.k;
    // subsets J, K of {0..n-1}, disjoint, |J| + |K| = k
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        // each chosen slot takes e_j or f_j independently
        for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
            Mat m(0, V.dim());
            for (int i = 0; i < k; ++i) m.append_row(E[idx[i] + ((mask >> i) & 1 ? n : 0)]);
            Subspace s = span_of(F, std::move(m));
            if (s.dim() != k || !V.totally_isotropic(s)) throw std::logic_error("apartment member not t.i.");
            auto id = G.find_point(s);
            if (!id) throw std::logic_error("apartment member missing");
            out.push_back(*id);
        }
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint32_t> apartment(const Geometry& G) {
    std::vector<std::vector<fe>> E;
    for (int i = 0; i < G.V->dim(); ++i) E.push_back(G.V->unit(i));
    return apartment(G, E);
}

std::vector<std::int32_t> bfs_distances(const Geometry& G, std::uint32_t src) {
    std::vector<std::int32_t> dist(G.num_points(), -1);
    std::vector<std::uint32_t> wave{src}, next;
    dist[src] = 0;
    std::int32_t d = 0;
    while (!wave.empty()) {
        ++d;
        for (std::uint32_t p : wave)
            for (std::uint32_t l : G.lines_on(p))
                for (std::uint32_t x : G.line(l))
                    if (dist[x] < 0) {
                        dist[x] = d;
                        next.push_back(x);
                    }
        wave.swap(next);
        next.clear();
    }
    return dist;
}

WittEmbedding witt_embedding(const FormSpace& V, const FormSpace& Wstd) {
    if (&V.field() != &Wstd.field() || V.kind() != Wstd.kind() || Wstd.n() != V.n() - 1)
        throw std::invalid_argument("witt embedding shape mismatch");
    return WittEmbedding{&V, &Wstd};
}

std::vector<fe> WittEmbedding::lift_vec(std::span<const fe> v) const {
    int ns = sub->n();
    std::vector<fe> out(big->dim(), 0);
    for (int i = 0; i < ns; ++i) {
        out[i] = v[i];
        out[big->n() + i] = v[ns + i];
    }
    return out;
}

Subspace WittEmbedding::lift(const Subspace& s) const {
    Mat m(0, big->dim());
    for (int r = 0; r < s.dim(); ++r) m.append_row(lift_vec(s.basis.row(r)));
    return span_of(big->field(), std::move(m));
}

bool residue_span_check(const Geometry& GV, const Geometry& GW, const WittEmbedding& emb,
                        const Subspace& P, const Subspace& Q,
                        std::span<const std::uint32_t> S_ids_in_W) {
    if (GV.k != GW.k) throw std::invalid_argument("grassmannian index mismatch");
    ClosureReport cw = closure(GW, S_ids_in_W);
    std::vector<std::uint32_t> seed;
    for (std::uint32_t s : S_ids_in_W) {
        auto id = GV.find_point(emb.lift(GW.point_subspace(s)));
        if (!id) throw std::logic_error("lifted point missing");
        seed.push_back(*id);
    }
    for (std::uint32_t r : residue(GV, P)) seed.push_back(r);
    for (std::uint32_t r : residue(GV, Q)) seed.push_back(r);
    ClosureReport cv = closure(GV, seed);
    for (std::uint32_t i = 0; i < GW.num_points(); ++i) {
        if (!cw.in[i]) continue;
        auto id = GV.find_point(emb.lift(GW.point_subspace(i)));
        if (!id || !cv.in[*id]) return false;
    }
    return true;
}

}  // namespace polar
