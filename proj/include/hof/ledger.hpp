#pragma once

#include <hof/common.hpp>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace hof {

// Formal commutative algebra for the residue ledgers: monomials in the
// symbols T(u) = conj integral_z^a F_u and the residue constants a(u),
// with exact rational coefficients.
namespace ledger {

using Monomial = std::multiset<std::string>;
using Poly = std::map<Monomial, Rational>;

inline std::string sym_T(const std::vector<int>& u) {
    std::string s = "T(";
    for (size_t i = 0; i < u.size(); ++i) s += (i ? "," : "") + std::to_string(u[i]);
    return s + ")";
}
inline std::string sym_a(const std::vector<int>& u) {
    std::string s = "a(";
    for (size_t i = 0; i < u.size(); ++i) s += (i ? "," : "") + std::to_string(u[i]);
    return s + ")";
}

inline Poly poly_const(Rational c) {
    Poly p;
    if (c != 0) p[{}] = std::move(c);
    return p;
}
inline Poly poly_sym(const std::string& s) {
    Poly p;
    p[{s}] = 1;
    return p;
}
inline Poly add(const Poly& x, const Poly& y) {
    Poly r = x;
    for (const auto& [m, c] : y) {
        r[m] += c;
        if (r[m] == 0) r.erase(m);
    }
    return r;
}
inline Poly mul(const Poly& x, const Poly& y) {
    Poly r;
    for (const auto& [mx, cx] : x)
        for (const auto& [my, cy] : y) {
            Monomial m = mx;
            m.insert(my.begin(), my.end());
            r[m] += cx * cy;
            if (r[m] == 0) r.erase(m);
        }
    return r;
}

inline std::vector<int> slice(const std::vector<int>& u, int from, int to) {
    return {u.begin() + from, u.begin() + to};
}

// S_{i_1..i_t} = sum_{r=1}^t T(u[0..r)) S(u[r..]), S_empty = 1
inline Poly S_poly(const std::vector<int>& u) {
    if (u.empty()) return poly_const(1);
    Poly r;
    for (int cut = 1; cut <= (int)u.size(); ++cut)
        r = add(r, mul(poly_sym(sym_T(slice(u, 0, cut))), S_poly(slice(u, cut, (int)u.size()))));
    return r;
}

// R_{i_1..i_t} = a(u) + sum_{r=1}^{t-2} T(u[0..r)) R(u[r..])   (t >= 2)
inline Poly R_poly(const std::vector<int>& u) {
    if (u.size() < 2) throw domain_error("R_poly: order must be >= 2");
    Poly r = poly_sym(sym_a(u));
    for (int cut = 1; cut <= (int)u.size() - 2; ++cut)
        r = add(r, mul(poly_sym(sym_T(slice(u, 0, cut))), R_poly(slice(u, cut, (int)u.size()))));
    return r;
}

// closed form of Lemma 3.8(i): sum_{j=0}^{t-2} S(u[0..j)) a(u[j..])
inline Poly R_closed(const std::vector<int>& u) {
    if (u.size() < 2) throw domain_error("R_closed: order must be >= 2");
    Poly r;
    for (int j = 0; j <= (int)u.size() - 2; ++j)
        r = add(r, mul(S_poly(slice(u, 0, j)), poly_sym(sym_a(slice(u, j, (int)u.size())))));
    return r;
}

}  // namespace ledger
}  // namespace hof
