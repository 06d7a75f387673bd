#include "polar/gf.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace polar {

bool is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; (long long)d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

// Dense polynomial arithmetic over GF(p), coefficients little-endian.
// Only used while constructing a Field; everything afterwards is table-based.
using Poly = std::vector<int>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& mod, int p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    int m = (int)mod.size() - 1;
    for (int i = (int)c.size() - 1; i >= m; --i) {
        int lead = c[i];
        if (lead == 0) continue;
        // mod is monic
        for (int j = 0; j <= m; ++j) {
            int idx = i - m + j;
            c[idx] = ((c[idx] - lead * mod[j]) % p + p) % p;
        }
    }
    c.resize(m);
    trim(c);
    return c;
}

Poly poly_pow_mod(Poly base, unsigned long long e, const Poly& mod, int p) {
    Poly r = {1};
    while (e) {
        if (e & 1) r = poly_mul_mod(r, base, mod, p);
        base = poly_mul_mod(base, base, mod, p);
        e >>= 1;
    }
    return r;
}

Poly poly_mod(Poly a, const Poly& b, int p) {
    // b monic after normalisation by caller
    trim(a);
    int db = (int)b.size() - 1;
    while ((int)a.size() - 1 >= db && !a.empty()) {
        int lead = a.back();
        int shift = (int)a.size() - 1 - db;
        if (lead != 0)
            for (int j = 0; j <= db; ++j)
                a[shift + j] = ((a[shift + j] - lead * b[j]) % p + p) % p;
        a.pop_back();
        trim(a);
    }
    return a;
}

Poly poly_monic(Poly a, int p) {
    trim(a);
    if (a.empty()) return a;
    int lead = a.back();
    // lead^-1 mod p by Fermat
    int linv = 1, base = lead, e = p - 2;
    while (e) {
        if (e & 1) linv = linv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    for (int& c : a) c = c * linv % p;
    return a;
}

Poly poly_gcd(Poly a, Poly b, int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = poly_mod(a, poly_monic(b, p), p);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(a, p);
}

// Rabin irreducibility: f (monic, degree m) is irreducible over GF(p) iff
// x^(p^m) == x mod f and gcd(x^(p^(m/r)) - x, f) = 1 for every prime r | m.
bool poly_irreducible(const Poly& f, int p) {
    int m = (int)f.size() - 1;
    if (m < 1) return false;
    if (m == 1) return true;
    Poly x = {0, 1};
    auto x_pow_p_k = [&](int k) {
        unsigned long long e = 1;
        for (int i = 0; i < k; ++i) e *= (unsigned long long)p;
        return poly_pow_mod(x, e, f, p);
    };
    Poly top = x_pow_p_k(m);
    if (top != x) return false;
    for (int r = 2; r <= m; ++r) {
        if (m % r != 0) continue;
        bool rp = true;
        for (int d = 2; d * d <= r; ++d)
            if (r % d == 0) { rp = false; break; }
        if (!rp) continue;
        Poly g = x_pow_p_k(m / r);
        // g - x
        Poly diff = g;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = ((diff[1] - 1) % p + p) % p;
        trim(diff);
        Poly gc = poly_gcd(f, diff, p);
        if (!(gc.size() == 1 && gc[0] == 1)) return false;
    }
    return true;
}

struct ConwayEntry {
    int p, m;
    std::initializer_list<int> coeffs;  // little-endian, monic
};

// Conway polynomials (Luebeck's tables) for the fields this toolkit meets in
// practice. Anything else falls back to the least lexicographic irreducible.
const ConwayEntry kConway[] = {
    {2, 2, {1, 1, 1}},
    {2, 3, {1, 1, 0, 1}},
    {2, 4, {1, 1, 0, 0, 1}},
    {2, 6, {1, 1, 0, 1, 1, 0, 1}},
    {3, 2, {2, 2, 1}},
    {3, 3, {1, 2, 0, 1}},
    {3, 4, {2, 0, 0, 2, 1}},
    {5, 2, {2, 4, 1}},
    {7, 2, {3, 6, 1}},
    {11, 2, {2, 7, 1}},
    {13, 2, {2, 12, 1}},
};

int least_primitive_root(int p) {
    std::vector<int> pf;
    int n = p - 1;
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            pf.push_back(d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) pf.push_back(n);
    for (int g = 1; g < p; ++g) {
        bool ok = true;
        for (int r : pf) {
            int e = (p - 1) / r, acc = 1, b = g;
            while (e) {
                if (e & 1) acc = acc * b % p;
                b = b * b % p;
                e >>= 1;
            }
            if (acc == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root");
}

std::vector<fe> defining_polynomial(int p, int m) {
    if (m == 1) {
        // Conway convention for prime fields: x - g, g the least primitive root.
        int g = least_primitive_root(p);
        return {(fe)((p - g) % p), 1};
    }
    for (const auto& e : kConway)
        if (e.p == p && e.m == m) return std::vector<fe>(e.coeffs.begin(), e.coeffs.end());
    // Least lexicographic monic irreducible: scan constant-first coefficient
    // tuples in increasing numeric order.
    std::vector<int> c(m, 0);
    for (;;) {
        Poly f(c.begin(), c.end());
        f.push_back(1);
        if (f[0] != 0 && poly_irreducible(f, p)) return std::vector<fe>(f.begin(), f.end());
        int i = 0;
        while (i < m && ++c[i] == p) c[i++] = 0;
        if (i == m) throw std::logic_error("no irreducible polynomial found");
    }
}

std::vector<int> prime_factors(std::uint32_t n) {
    std::vector<int> pf;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) {
            pf.push_back((int)d);
            while (n % d == 0) n /= d;
        }
    if (n > 1) pf.push_back((int)n);
    return pf;
}

}  // namespace

Field::Field(int p, int m, std::vector<fe> poly) : p_(p), m_(m), poly_(std::move(poly)) {
    long long q = 1;
    for (int i = 0; i < m; ++i) {
        q *= p;
        if (q > 65536) throw std::invalid_argument("field size exceeds 2^16");
    }
    q_ = (std::uint32_t)q;

    Poly mod(poly_.begin(), poly_.end());
    if (!poly_irreducible(mod, p))
        throw std::logic_error("defining polynomial not irreducible");

    auto decode = [&](fe v) {
        Poly a;
        std::uint32_t x = v;
        while (x) {
            a.push_back((int)(x % p));
            x /= (std::uint32_t)p;
        }
        return a;
    };
    auto encode = [&](const Poly& a) {
        std::uint32_t v = 0;
        for (int i = (int)a.size() - 1; i >= 0; --i) v = v * (std::uint32_t)p + (std::uint32_t)a[i];
        return (fe)v;
    };

    neg_tab_.resize(q_);
    for (std::uint32_t v = 0; v < q_; ++v) {
        Poly a = decode((fe)v);
        for (int& c : a) c = (p - c) % p;
        neg_tab_[v] = encode(a);
    }
    if ((std::uint64_t)q_ * q_ <= (1u << 20)) {
        add_tab_.resize((std::size_t)q_ * q_);
        for (std::uint32_t a = 0; a < q_; ++a)
            for (std::uint32_t b = 0; b < q_; ++b) {
                Poly x = decode((fe)a), y = decode((fe)b);
                if (x.size() < y.size()) x.swap(y);
                for (std::size_t i = 0; i < y.size(); ++i) x[i] = (x[i] + y[i]) % p;
                add_tab_[(std::size_t)a * q_ + b] = encode(x);
            }
    }

    // Least multiplicative generator, then log/antilog tables.
    auto pmul = [&](fe a, fe b) { return encode(poly_mul_mod(decode(a), decode(b), mod, p)); };
    std::vector<int> pf = prime_factors(q_ - 1);
    auto ppow = [&](fe a, std::uint32_t e) {
        fe r = 1, b = a;
        while (e) {
            if (e & 1) r = pmul(r, b);
            b = pmul(b, b);
            e >>= 1;
        }
        return r;
    };
    for (std::uint32_t g = 1; g < q_; ++g) {
        bool ok = g != 1 || q_ == 2;
        for (int r : pf)
            if (ppow((fe)g, (q_ - 1) / (std::uint32_t)r) == 1) { ok = false; break; }
        if (ok) { gen_ = (fe)g; break; }
    }
    if (gen_ == 0) throw std::logic_error("no multiplicative generator");

    exp_tab_.resize(2 * (q_ - 1));
    log_tab_.assign(q_, 0);
    fe cur = 1;
    for (std::uint32_t i = 0; i < q_ - 1; ++i) {
        exp_tab_[i] = cur;
        exp_tab_[i + q_ - 1] = cur;
        log_tab_[cur] = (std::uint16_t)i;
        cur = pmul(cur, gen_);
    }
    if (cur != 1) throw std::logic_error("generator order mismatch");

    inv_tab_.resize(q_);
    inv_tab_[0] = 0;
    for (std::uint32_t a = 1; a < q_; ++a)
        inv_tab_[a] = exp_tab_[(q_ - 1 - log_tab_[a]) % (q_ - 1)];

    if (m_ % 2 == 0) {
        q0_ = 1;
        for (int i = 0; i < m_ / 2; ++i) q0_ *= (std::uint32_t)p;
        frob_tab_.resize(q_);
        trace_tab_.resize(q_);
        norm_tab_.resize(q_);
        for (std::uint32_t a = 0; a < q_; ++a) {
            fe fa = ppow((fe)a, q0_);
            frob_tab_[a] = fa;
            trace_tab_[a] = add((fe)a, fa);
            norm_tab_[a] = pmul((fe)a, fa);
        }
        if (p == 2) {
            delta_ = 1;
        } else {
            for (std::uint32_t d = 1; d < q_; ++d)
                if (trace_tab_[d] == 0) { delta_ = (fe)d; break; }
        }
    }
}

fe Field::add_slow(fe a, fe b) const {
    std::uint32_t r = 0, mult = 1, x = a, y = b;
    while (x || y) {
        r += mult * ((x % (std::uint32_t)p_ + y % (std::uint32_t)p_) % (std::uint32_t)p_);
        x /= (std::uint32_t)p_;
        y /= (std::uint32_t)p_;
        mult *= (std::uint32_t)p_;
    }
    return (fe)r;
}

fe Field::inv(fe a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return inv_tab_[a];
}

fe Field::pow(fe a, long long e) const {
    if (a == 0) {
        if (e < 0) throw std::domain_error("inverse of zero");
        return e == 0 ? (fe)1 : (fe)0;
    }
    long long ord = (long long)(q_ - 1);
    long long le = ((e % ord) + ord) % ord;
    return exp_tab_[(std::uint32_t)(((std::uint64_t)log_tab_[a] * (std::uint64_t)le) % (std::uint64_t)ord)];
}

fe Field::from_int(long long v) const {
    long long r = ((v % p_) + p_) % p_;
    return (fe)r;
}

void Field::require_sigma() const {
    if (m_ % 2 != 0)
        throw std::invalid_argument("field is not a quadratic extension");
}

std::uint32_t Field::q0() const {
    require_sigma();
    return q0_;
}

fe Field::frob(fe a) const {
    require_sigma();
    return frob_tab_[a];
}

fe Field::trace(fe a) const {
    require_sigma();
    return trace_tab_[a];
}

fe Field::norm(fe a) const {
    require_sigma();
    return norm_tab_[a];
}

fe Field::solve_norm(fe a) const {
    require_sigma();
    if (!sigma_fixed(a)) throw std::invalid_argument("norm target not in fixed subfield");
    for (std::uint32_t x = 0; x < q_; ++x)
        if (norm_tab_[x] == a) return (fe)x;
    throw std::logic_error("norm not surjective");
}

fe Field::solve_trace(fe a) const {
    require_sigma();
    if (!sigma_fixed(a)) throw std::invalid_argument("trace target not in fixed subfield");
    for (std::uint32_t x = 0; x < q_; ++x)
        if (trace_tab_[x] == a) return (fe)x;
    throw std::logic_error("trace not surjective");
}

fe Field::delta() const {
    require_sigma();
    return delta_;
}

const Field& Field::get(int p, int m) {
    if (!is_prime(p)) throw std::invalid_argument("characteristic must be prime");
    if (m < 1) throw std::invalid_argument("degree must be positive");
    static std::mutex mu;
    static std::map<std::pair<int, int>, Field*>* registry = new std::map<std::pair<int, int>, Field*>();
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(p, m);
    auto it = registry->find(key);
    if (it != registry->end()) return *it->second;
    Field* f = new Field(p, m, defining_polynomial(p, m));
    (*registry)[key] = f;
    return *f;
}

}  // namespace polar
