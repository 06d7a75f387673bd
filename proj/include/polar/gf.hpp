#pragma once

#include <cstdint>
#include <vector>

namespace polar {

// Canonical field element encoding: integer in [0, p^m), base-p digits are
// the coefficients of the residue polynomial, constant term least significant.
using fe = std::uint16_t;

// Exact arithmetic in GF(p^m) with p^m <= 2^16. Immutable after construction;
// all operations are pure table lookups (log/antilog for multiplication), so
// a Field can be shared freely across threads.
class Field {
public:
    // Interned registry: the same (p, m) always yields the same object with a
    // fixed defining polynomial (Conway where tabulated, otherwise the least
    // monic irreducible in lexicographic coefficient order, constant term
    // most significant in the comparison). Encodings are therefore stable
    // across runs and usable in file formats.
    static const Field& get(int p, int m);

    int p() const { return p_; }
    int m() const { return m_; }
    std::uint32_t q() const { return q_; }
    const std::vector<fe>& modulus() const { return poly_; }  // length m+1, monic
    fe generator() const { return gen_; }

    fe add(fe a, fe b) const {
        return add_tab_.empty() ? add_slow(a, b) : add_tab_[(std::size_t)a * q_ + b];
    }
    fe neg(fe a) const { return neg_tab_[a]; }
    fe sub(fe a, fe b) const { return add(a, neg(b)); }
    fe mul(fe a, fe b) const {
        if (a == 0 || b == 0) return 0;
        return exp_tab_[(std::uint32_t)log_tab_[a] + log_tab_[b]];
    }
    fe inv(fe a) const;
    fe div(fe a, fe b) const { return mul(a, inv(b)); }
    fe pow(fe a, long long e) const;
    fe from_int(long long v) const;  // embeds v mod p in the prime subfield

    bool is_square_extension() const { return m_ % 2 == 0; }

    // Quadratic-extension structure GF(q0^2) / GF(q0), q0 = p^(m/2).
    // sigma is the Galois involution x -> x^q0.
    std::uint32_t q0() const;
    fe frob(fe a) const;
    fe trace(fe a) const;  // a + a^q0
    fe norm(fe a) const;   // a * a^q0
    bool sigma_fixed(fe a) const { return frob(a) == a; }
    fe solve_norm(fe a) const;   // least x with N(x) = a; a must be sigma-fixed
    fe solve_trace(fe a) const;  // least x with Tr(x) = a; a must be sigma-fixed
    // char 2: 1; otherwise the least nonzero d with d + d^sigma = 0.
    fe delta() const;

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

private:
    Field(int p, int m, std::vector<fe> poly);
    fe add_slow(fe a, fe b) const;
    void require_sigma() const;

    int p_, m_;
    std::uint32_t q_;
    std::vector<fe> poly_;
    fe gen_ = 0;
    std::vector<fe> exp_tab_;   // size 2(q-1), exp_tab_[i] = g^i
    std::vector<std::uint16_t> log_tab_;
    std::vector<fe> neg_tab_, inv_tab_, add_tab_;
    std::vector<fe> frob_tab_, trace_tab_, norm_tab_;
    std::uint32_t q0_ = 0;
    fe delta_ = 0;
};

bool is_prime(int n);

}  // namespace polar
