#pragma once

#include <hof/common.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace hof {

// Signed label vector (i_1, ..., i_t), entries in {±1, ..., ±g}.  Negative
// entries mark conjugated period factors.  The admissible sets:
//   I' : no j with (i_j, i_{j+1}) = (-1, 1)
//   I  : I' and i_t > 0
struct IndexVector {
    std::vector<int> v;

    int order() const { return (int)v.size(); }

    bool in_I_prime() const {
        for (size_t j = 0; j + 1 < v.size(); ++j)
            if (v[j] == -1 && v[j + 1] == 1) return false;
        return true;
    }
    bool in_I() const { return in_I_prime() && !v.empty() && v.back() > 0; }

    bool operator==(const IndexVector& o) const { return v == o.v; }
};

// label order 1 < -1 < 2 < -2 < ... < g < -g
inline int label_rank(int j) { return 2 * (std::abs(j) - 1) + (j < 0 ? 1 : 0); }
inline int rank_label(int r) { return (r % 2 == 0 ? 1 : -1) * (r / 2 + 1); }

inline bool index_vector_less(const IndexVector& x, const IndexVector& y) {
    size_t n = std::min(x.v.size(), y.v.size());
    for (size_t i = 0; i < n; ++i) {
        int rx = label_rank(x.v[i]), ry = label_rank(y.v[i]);
        if (rx != ry) return rx < ry;
    }
    return x.v.size() < y.v.size();
}

enum class IndexSet { I, IPrime };

// All admissible vectors in canonical order.  Guard: (2g)^t <= 10^7.
inline std::vector<IndexVector> enumerate_index_vectors(int g, int t, IndexSet which) {
    if (g < 1 || t < 1) throw domain_error("enumerate_index_vectors: need g >= 1, t >= 1");
    double total = std::pow(2.0 * g, (double)t);
    if (total > 1e7) throw domain_error("enumerate_index_vectors: size guard (2g)^t <= 1e7 exceeded");
    std::vector<IndexVector> out;
    IndexVector cur;
    cur.v.reserve(t);
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == t) {
            if (which == IndexSet::I ? cur.in_I() : cur.in_I_prime()) out.push_back(cur);
            return;
        }
        for (int r = 0; r < 2 * g; ++r) {
            int lab = rank_label(r);
            if (pos > 0 && cur.v[pos - 1] == -1 && lab == 1) continue;  // prune forbidden pattern
            cur.v.push_back(lab);
            self(self, pos + 1);
            cur.v.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

struct CountTable {
    std::vector<BigInt> b;  // b[t] = |I'(g,t)|, with b[0] = 1 seeding the recurrence
    std::vector<BigInt> a;  // a[t] = |I(g,t)|, a[0] unused (0)
};

// b_1 = 2g, b_2 = 4g^2 - 1, b_t = 2g b_{t-1} - b_{t-2}; a_t = b_t - g b_{t-1}.
inline CountTable count_sequences(int g, int t_max) {
    if (g < 0 || t_max < 1) throw domain_error("count_sequences: need g >= 0, t_max >= 1");
    CountTable T;
    T.b.resize(t_max + 1);
    T.a.resize(t_max + 1);
    T.b[0] = 1;
    T.a[0] = 0;
    if (g == 0) {  // no labels at all: both sets are empty for t >= 1
        for (int t = 1; t <= t_max; ++t) { T.b[t] = 0; T.a[t] = 0; }
        return T;
    }
    if (t_max >= 1) T.b[1] = 2 * g;
    for (int t = 2; t <= t_max; ++t) T.b[t] = 2 * g * T.b[t - 1] - T.b[t - 2];
    for (int t = 1; t <= t_max; ++t) T.a[t] = T.b[t] - g * T.b[t - 1];
    return T;
}

// Floating cross-checks: a_t and b_t are the degree-t Chebyshev values at g
// (first resp. second kind).  Never authoritative.
inline double chebyshev_T(double g, int t) {
    if (g >= 1.0) return std::cosh(t * std::acosh(g));
    return std::cos(t * std::acos(g));
}
inline double chebyshev_U(double g, int t) {
    if (g == 1.0) return t + 1.0;
    if (g > 1.0) {
        double u = std::acosh(g);
        return std::sinh((t + 1) * u) / std::sinh(u);
    }
    double u = std::acos(g);
    return std::sin((t + 1) * u) / std::sin(u);
}

// dim S_k^t / S_k^{t-1}.  Weight 2: a_t (0 when g = 0), exact via the integer
// recurrence.  Weight >= 4: dim_Sk * b_{t-1} (t >= 2 is the quotient order).
inline BigInt dim_quotient(int g, int t, int weight, BigInt dim_Sk = 0) {
    if (weight < 2 || weight % 2 != 0) throw domain_error("dim_quotient: weight must be even and >= 2");
    if (g < 0 || t < 1) throw domain_error("dim_quotient: need g >= 0, t >= 1");
    if (g == 0) return 0;
    if (weight == 2) {
        auto T = count_sequences(g, t);
        return T.a[t];
    }
    if (t < 2) throw domain_error("dim_quotient: weight >= 4 needs quotient order t >= 2");
    auto T = count_sequences(g, t - 1);
    return dim_Sk * T.b[t - 1];
}

}  // namespace hof
