#pragma once

#include <hof/common.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <vector>

namespace hof {

// Element of Gamma0(N) viewed in PSL2(Z): exact integer entries with
// ad - bc = 1, sign-normalized so that c > 0, or c == 0 and d > 0.
struct GroupElement {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    GroupElement() = default;
    GroupElement(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_)
        : a(a_), b(b_), c(c_), d(d_) {
        check_det();
        normalize();
    }

    static GroupElement identity() { return {}; }

    void check_det() const {
        __int128 det = (__int128)a * d - (__int128)b * c;
        if (det != 1) throw domain_error("GroupElement: determinant must be 1");
    }

    void normalize() {
        if (c < 0 || (c == 0 && d < 0)) { a = -a; b = -b; c = -c; d = -d; }
    }

    bool is_identity() const { return a == 1 && b == 0 && c == 0 && d == 1; }

    GroupElement inverse() const { return {d, -b, -c, a}; }

    GroupElement operator*(const GroupElement& o) const {
        __int128 ra = (__int128)a * o.a + (__int128)b * o.c;
        __int128 rb = (__int128)a * o.b + (__int128)b * o.d;
        __int128 rc = (__int128)c * o.a + (__int128)d * o.c;
        __int128 rd = (__int128)c * o.b + (__int128)d * o.d;
        auto fits = [](__int128 v) {
            return v <= INT64_MAX && v >= INT64_MIN;
        };
        if (!fits(ra) || !fits(rb) || !fits(rc) || !fits(rd))
            throw domain_error("GroupElement: entry overflow in composition");
        return {(std::int64_t)ra, (std::int64_t)rb, (std::int64_t)rc, (std::int64_t)rd};
    }

    bool operator==(const GroupElement& o) const {
        return a == o.a && b == o.b && c == o.c && d == o.d;
    }
    bool operator<(const GroupElement& o) const {
        return std::array{a, b, c, d} < std::array{o.a, o.b, o.c, o.d};
    }

    Complex j(Complex z) const { return (double)c * z + (double)d; }

    // Moebius image computed through the determinant identity, so that
    // Im(gz) = Im z / |j|^2 holds to machine precision even for large entries
    Complex apply(Complex z) const {
        double x = z.real(), y = z.imag();
        double jr = (double)c * x + (double)d, ji = (double)c * y;
        double den = jr * jr + ji * ji;
        double wx = (((double)a * x + (double)b) * jr + (double)a * (double)c * y * y) / den;
        return {wx, y / den};
    }

    std::string str() const {
        return "[[" + std::to_string(a) + "," + std::to_string(b) + "],[" +
               std::to_string(c) + "," + std::to_string(d) + "]]";
    }
};

inline GroupElement translation(std::int64_t k) { return {1, k, 0, 1}; }

struct MoebiusImage {
    Complex w;    // gamma z
    Complex j;    // cz + d
    Complex eps;  // j/|j|
};

// w = (az+b)/(cz+d), j = cz+d, eps = j/|j|.  Rejects points off the upper
// half plane; the identity Im w = Im z / |j|^2 holds exactly in this model.
inline MoebiusImage moebius_apply(const GroupElement& g, Complex z) {
    if (!(z.imag() > 0.0)) throw domain_error("moebius_apply: Im z must be positive");
    MoebiusImage m;
    m.j = g.j(z);
    m.w = g.apply(z);
    m.eps = m.j / std::abs(m.j);
    return m;
}

// Real 2x2 matrix with det 1, used for cusp scaling maps.
struct Mat2d {
    double a = 1, b = 0, c = 0, d = 1;

    static Mat2d identity() { return {}; }

    Mat2d inverse() const { return {d, -b, -c, a}; }

    Complex apply(Complex z) const {
        if (std::abs(c) < 1e-300 && std::abs(d) < 1e-300)
            throw domain_error("Mat2d: singular bottom row");
        return (a * z + b) / (c * z + d);
    }
    // image of the cusp infinity (a/c, or infinity when c = 0)
    bool fixes_infinity() const { return std::abs(c) < 1e-12; }
    double image_of_infinity() const { return a / c; }

    Mat2d operator*(const Mat2d& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
};

inline Mat2d to_real(const GroupElement& g) {
    return {(double)g.a, (double)g.b, (double)g.c, (double)g.d};
}

struct CuspData {
    std::string label;
    bool at_infinity = true;
    Rational representative = 0;  // ignored when at_infinity
    Mat2d scaling;                // sigma_a, maps infinity to the cusp
    double width = 1.0;
    GroupElement parabolic;       // generator of Gamma_a, derived from sigma_a
};

struct GroupData {
    int level = 1;
    int genus = 0;
    double volume = 0.0;
    std::vector<CuspData> cusps;
    std::vector<GroupElement> generators;

    // generators plus cusp parabolics plus all inverses; the move set for
    // orbit searches
    std::vector<GroupElement> moves() const {
        std::vector<GroupElement> out;
        auto push = [&out](const GroupElement& g) {
            if (g.is_identity()) return;
            if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
        };
        for (const auto& g : generators) { push(g); push(g.inverse()); }
        for (const auto& cu : cusps) { push(cu.parabolic); push(cu.parabolic.inverse()); }
        return out;
    }

    std::vector<std::string> check_invariants() const;
};

// --- coset enumeration ----------------------------------------------------

// One representative per coset of Gamma_inf \ Gamma0(N) with 0 < c <= c_max,
// parametrized by pairs (c, d): N | c, gcd(c, d) = 1, 0 <= d < c, ordered by
// (c, d).  The identity (c = 0) leads the sequence.
inline std::vector<GroupElement> coset_reps_infinity(const GroupData& G, std::int64_t c_max) {
    if (c_max < 0) throw domain_error("coset_reps_infinity: c_max must be >= 0");
    std::vector<GroupElement> reps;
    reps.push_back(GroupElement::identity());
    for (std::int64_t c = G.level; c <= c_max; c += G.level) {
        for (std::int64_t d = 0; d < c; ++d) {
            if (std::gcd(c, d) != 1) continue;
            // extended gcd on (d, c): 1 = s0*d + t0*c, so a = s0, b = -t0
            std::int64_t r0 = d, r1 = c;
            std::int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1;
            while (r1 != 0) {
                std::int64_t q = r0 / r1;
                std::int64_t r2 = r0 - q * r1; r0 = r1; r1 = r2;
                std::int64_t s2 = s0 - q * s1; s0 = s1; s1 = s2;
                std::int64_t t2 = t0 - q * t1; t0 = t1; t1 = t2;
            }
            reps.emplace_back(s0, -t0, c, d);
        }
    }
    return reps;
}

// --- fundamental domain reduction ------------------------------------------

struct ReductionResult {
    Complex z0;
    GroupElement gamma;  // z = gamma z0
    int iterations = 0;
};

namespace detail {
// fold the real part into [-w/2, w/2) using the parabolic at infinity
inline void fold_translation(const GroupData& G, Complex& w, GroupElement& acc) {
    GroupElement t = translation(1);
    for (const auto& cu : G.cusps)
        if (cu.at_infinity) t = cu.parabolic;
    double step = (double)t.b;  // t = [[1, step],[0,1]] up to sign
    if (t.c != 0 || t.a != 1) return;
    if (step == 0) return;
    double k = std::floor(w.real() / step + 0.5);
    if (k != 0) {
        GroupElement tk = translation(-(std::int64_t)k * t.b);
        w = w - k * step;
        acc = acc * tk.inverse();
    }
}
}  // namespace detail

// Find gamma with z = gamma z0 and Im z0 (locally) maximal over the orbit,
// searching words in the configured generators.  Deterministic; idempotent on
// already-reduced points.
inline ReductionResult reduce_to_fundamental(const GroupData& G, Complex z,
                                             int iter_cap = 400) {
    if (!(z.imag() > 0.0)) throw domain_error("reduce_to_fundamental: Im z must be positive");
    const auto mv = G.moves();
    Complex w = z;
    GroupElement acc = GroupElement::identity();  // z = acc * w
    detail::fold_translation(G, w, acc);
    int it = 0;
    const double rel_gain = 1.0 + 1e-13;
    while (true) {
        if (++it > iter_cap)
            throw domain_error("reduce_to_fundamental: iteration cap exceeded (bad generators?)");
        double best = w.imag();
        GroupElement best_g;
        bool found = false;
        // single moves, then two-move lookahead if stuck
        for (const auto& g : mv) {
            Complex cand = g.apply(w);
            if (cand.imag() > best * rel_gain) { best = cand.imag(); best_g = g; found = true; }
        }
        if (!found) {
            for (const auto& g1 : mv) {
                Complex w1 = g1.apply(w);
                for (const auto& g2 : mv) {
                    Complex cand = g2.apply(w1);
                    if (cand.imag() > best * rel_gain) {
                        best = cand.imag(); best_g = g2 * g1; found = true;
                    }
                }
            }
        }
        if (!found) break;
        w = best_g.apply(w);
        acc = acc * best_g.inverse();
        detail::fold_translation(G, w, acc);
    }
    detail::fold_translation(G, w, acc);
    return {w, acc, it};
}

// The representatives enumerate double cosets Gamma_inf \ Gamma / Gamma_inf;
// the single cosets behind the series are their right translates rep * T^n.
// This helper iterates the translate window |n - n0| <= K around the center
// that minimizes |c x + d + c n|.
template <typename F>
inline void for_each_coset_translate(const GroupElement& rep, Complex z, std::int64_t window,
                                     F&& f) {
    if (rep.c == 0) {  // the identity: a single coset
        f(z);
        return;
    }
    double center = -((double)rep.c * z.real() + (double)rep.d) / (double)rep.c;
    std::int64_t n0 = (std::int64_t)std::llround(center);
    for (std::int64_t n = n0 - window; n <= n0 + window; ++n) f(z + Complex((double)n, 0.0));
}

// y_Gamma(z) truncated to the enumerated orbit slice: max over cusps a and
// the windowed coset translates gamma (c <= c_max) of Im(sigma_a^{-1} gamma z).
inline double y_gamma(const GroupData& G, Complex z, std::int64_t c_max) {
    if (!(z.imag() > 0.0)) throw domain_error("y_gamma: Im z must be positive");
    auto reps = coset_reps_infinity(G, c_max);
    double best = 0.0;
    for (const auto& cu : G.cusps) {
        Mat2d si = cu.scaling.inverse();
        for (const auto& g : reps) {
            std::int64_t window =
                g.c == 0 ? std::max<std::int64_t>(c_max / G.level, 1)
                         : (c_max + g.c - 1) / g.c;
            if (g.c == 0) {
                for (std::int64_t n = -window; n <= window; ++n) {
                    Complex w = si.apply(g.apply(z + Complex((double)n, 0.0)));
                    best = std::max(best, w.imag());
                }
            } else {
                for_each_coset_translate(g, z, window, [&](Complex zn) {
                    Complex w = si.apply(g.apply(zn));
                    best = std::max(best, w.imag());
                });
            }
        }
    }
    return best;
}

inline std::vector<std::string> GroupData::check_invariants() const {
    std::vector<std::string> issues;
    if (cusps.size() < 2)
        issues.push_back("fewer than 2 cusps (outside the standing assumption m >= 2)");
    for (const auto& g : generators) {
        if (g.c % level != 0)
            issues.push_back("generator " + g.str() + " has c not divisible by the level");
    }
    for (const auto& cu : cusps) {
        // sigma maps infinity to the representative
        if (cu.at_infinity) {
            if (!cu.scaling.fixes_infinity()) issues.push_back("cusp " + cu.label + ": scaling does not fix infinity");
        } else {
            if (cu.scaling.fixes_infinity()) {
                issues.push_back("cusp " + cu.label + ": scaling fixes infinity but representative is finite");
            } else {
                double img = cu.scaling.image_of_infinity();
                double want = (double)cu.representative;
                if (std::abs(img - want) > 1e-9)
                    issues.push_back("cusp " + cu.label + ": scaling sends infinity to the wrong point");
            }
        }
        // sigma^{-1} Gamma_a sigma generated by the unit translation, checked
        // on the stored parabolic generator
        Mat2d conj = cu.scaling.inverse() * to_real(cu.parabolic) * cu.scaling;
        auto near = [](double x, double y) { return std::abs(x - y) < 1e-6; };
        bool unit = (near(conj.a, 1) && near(conj.d, 1) && near(conj.c, 0) && near(std::abs(conj.b), 1)) ||
                    (near(conj.a, -1) && near(conj.d, -1) && near(conj.c, 0) && near(std::abs(conj.b), 1));
        if (!unit)
            issues.push_back("cusp " + cu.label + ": parabolic does not conjugate to the unit translation");
    }
    return issues;
}

}  // namespace hof
