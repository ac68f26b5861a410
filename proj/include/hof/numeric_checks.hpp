#pragma once

#include <hof/periods.hpp>
#include <hof/report.hpp>

#include <random>

namespace hof {

// ---------------------------------------------------------------------------
// Sample machinery.  All nontrivial checks are run at points on perturbed
// isometric circles so that every series evaluation stays at a height where
// the attached tail bound is far below the residual budget; no step of a
// checked identity is evaluated through the identity itself.
// ---------------------------------------------------------------------------

// elements [[a, b], [c, d]] of the group with c = level and small |d|
inline std::vector<GroupElement> small_c_pool(const GroupData& G, int max_d = 14) {
    std::vector<GroupElement> pool;
    std::int64_t N = G.level;
    for (std::int64_t d = -max_d; d <= max_d; ++d) {
        for (std::int64_t a = -max_d; a <= max_d; ++a) {
            __int128 det_part = (__int128)a * d - 1;
            if (det_part % N != 0) continue;
            std::int64_t b = (std::int64_t)(det_part / N);
            GroupElement g(a, b, N, d);
            if (std::find(pool.begin(), pool.end(), g) == pool.end()) pool.push_back(g);
        }
    }
    return pool;
}

// trace-2 family: conjugates of the parabolic fixing the zero cusp
inline std::vector<GroupElement> parabolic_conjugates(const GroupData& G, int k_range = 2) {
    std::vector<GroupElement> out;
    std::int64_t N = G.level;
    for (std::int64_t k = -k_range; k <= k_range; ++k)
        out.push_back(GroupElement(1 + N * k, -N * k * k, N, 1 - N * k));
    return out;
}

// point on the isometric circle of g: |j(g, z)| = rho, angle theta
inline Complex isometric_sample(const GroupElement& g, double rho, double theta) {
    return Complex((-(double)g.d + rho * std::cos(theta)) / (double)g.c,
                   rho * std::sin(theta) / (double)g.c);
}

// ---------------------------------------------------------------------------
// (3.13) and annihilation, evaluated two-sided with direct summation only.
// ---------------------------------------------------------------------------

inline VerificationReport verify_numeric_cocycle(PeriodEngine& E, int t, int trials,
                                                 unsigned seed, double tol) {
    WallTimer timer;
    VerificationReport rep;
    rep.suite = "numeric-cocycle";
    rep.anchor = t == 1 ? "modularity" : "eq-3.13";
    rep.params["t"] = std::to_string(t);
    rep.params["trials"] = std::to_string(trials);
    rep.params["seed"] = std::to_string(seed);
    rep.params["terms"] = std::to_string(E.terms());
    rep.tolerance = tol;
    std::vector<int> v(t, 1);
    std::mt19937_64 rng(seed);
    auto pool = small_c_pool(E.group());
    std::uniform_real_distribution<double> rho_d(0.9, 1.1), th_d(kPi / 3, 2 * kPi / 3);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);

    for (int trial = 0; trial < trials; ++trial) {
        const GroupElement& g = pool[pick(rng)];
        Complex z = isometric_sample(g, rho_d(rng), th_d(rng));
        Complex gz = g.apply(z);
        Complex j = g.j(z);
        NumValue lhs_a = E.evalF(v, gz);
        NumValue lhs_b = E.evalF(v, z);
        Complex lhs = lhs_a.value / (j * j) - lhs_b.value;
        double budget = lhs_a.tol / std::norm(j) + lhs_b.tol;
        Complex rhs{0.0, 0.0};
        for (int r = 1; r < t; ++r) {
            NumValue piv = E.period_of({v.begin() + r, v.end()}, g);
            NumValue fpre = E.evalF({v.begin(), v.begin() + r}, z);
            rhs += fpre.value * piv.value;
            budget += piv.tol * std::abs(fpre.value) + std::abs(piv.value) * fpre.tol;
        }
        double scale = std::max({std::abs(lhs_b.value), std::abs(rhs), 1e-6});
        double residual = std::abs(lhs - rhs) / scale;
        std::string name = "trial " + std::to_string(trial) + " gamma=" + g.str();
        if (budget / scale > tol) {
            rep.add_numeric(name + " (budget)", budget / scale, tol, "tail budget exceeds tolerance",
                            "");
        }
        rep.add_numeric(name, residual, tol);
    }
    rep.wall_ms = timer.ms();
    return rep;
}

// F_v | (g1 - 1)...(gt - 1) = 0, expanded into the 2^t point values.  The
// letters are drawn from the trace-2 family as (d^{-1}, d) resp.
// (d^{-1}, d, d), which keeps every needed point at usable height.
inline VerificationReport verify_numeric_annihilation(PeriodEngine& E, int t, double tol) {
    WallTimer timer;
    VerificationReport rep;
    rep.suite = "numeric-annihilation";
    rep.anchor = "slash-difference annihilation";
    rep.params["t"] = std::to_string(t);
    rep.params["terms"] = std::to_string(E.terms());
    rep.tolerance = tol;
    std::vector<int> v(t, 1);
    const double theta = std::acos(4.0 / 5.0);

    for (const auto& d : parabolic_conjugates(E.group())) {
        if (d.c == 0) continue;
        for (double th : {theta, theta * 1.15}) {
            Complex z = isometric_sample(d, 1.0, th);
            // letters (d^{-1}, d) for t = 2, (d^{-1}, d, d) for t = 3:
            // the slash expansion only needs F at z, dz, d^{-1}z (t = 2)
            // plus d^2 z (t = 3)
            std::vector<GroupElement> letters;
            letters.push_back(d.inverse());
            for (int i = 1; i < t; ++i) letters.push_back(d);
            // expand F|(l1-1)...(lt-1)(z) = sum over subsets S, sign (-1)^{t-|S|},
            // of (F|_2 prod_{i in S} l_i)(z)
            Complex acc{0.0, 0.0};
            double budget = 0.0, scale = 1e-6;
            for (unsigned mask = 0; mask < (1u << t); ++mask) {
                GroupElement w = GroupElement::identity();
                for (int i = 0; i < t; ++i)
                    if (mask & (1u << i)) w = w * letters[i];
                int sign = ((t - __builtin_popcount(mask)) % 2 == 0) ? 1 : -1;
                Complex jw = w.j(z);
                NumValue val = E.evalF(v, w.apply(z));
                Complex term = val.value / (jw * jw);
                acc += (double)sign * term;
                budget += val.tol / std::norm(jw);
                scale = std::max(scale, std::abs(term));
            }
            double residual = std::abs(acc) / scale;
            std::string name = "delta=" + d.str() + " theta=" + std::to_string(th);
            if (budget / scale > tol)
                rep.add_numeric(name + " (budget)", budget / scale, tol,
                                "tail budget exceeds tolerance", "");
            rep.add_numeric(name, residual, tol);
        }
    }
    rep.wall_ms = timer.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// Period structure: additivity, inverse antisymmetry, basepoint independence.
// ---------------------------------------------------------------------------

// seeded words with controlled lower-left entry
inline std::vector<GroupElement> seeded_word_pool(const GroupData& G, int count, unsigned seed,
                                                  std::int64_t c_cap = 40) {
    std::mt19937_64 rng(seed);
    auto base = small_c_pool(G, 8);
    std::uniform_int_distribution<size_t> pick(0, base.size() - 1);
    std::uniform_int_distribution<int> shift(-3, 3);
    std::vector<GroupElement> out;
    int guard = 0;
    while ((int)out.size() < count && ++guard < 10000) {
        GroupElement g = translation(shift(rng)) * base[pick(rng)] * translation(shift(rng));
        if (std::llabs(g.c) > c_cap) continue;
        out.push_back(g);
    }
    return out;
}

inline VerificationReport verify_period_structure(PeriodEngine& E, int pairs, unsigned seed,
                                                  double tol) {
    WallTimer timer;
    VerificationReport rep;
    rep.suite = "period-structure";
    rep.anchor = "eq-2.3 / path concatenation";
    rep.params["pairs"] = std::to_string(pairs);
    rep.params["seed"] = std::to_string(seed);
    rep.tolerance = tol;
    auto pool = seeded_word_pool(E.group(), 4 * pairs, seed);
    std::mt19937_64 rng(seed ^ 0x9e3779b9u);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    int done = 0, guard = 0;
    while (done < pairs && ++guard < 20000) {
        GroupElement g = pool[pick(rng)], h = pool[pick(rng)];
        GroupElement gh = g * h;
        if (std::llabs(gh.c) > 40) continue;
        NumValue pg = E.period1(g), ph = E.period1(h), pgh = E.period1(gh);
        double scale = std::max({std::abs(pg.value), std::abs(ph.value), 1e-3});
        rep.add_numeric("additivity " + g.str() + " * " + h.str(),
                        std::abs(pgh.value - pg.value - ph.value) / scale, tol);
        NumValue pginv = E.period1(g.inverse());
        rep.add_numeric("inverse " + g.str(),
                        std::abs(pg.value + pginv.value) / scale, tol);
        ++done;
    }
    // basepoint independence of the defining difference
    std::uniform_real_distribution<double> xr(-0.4, 0.4), yr(0.8, 2.0);
    for (int i = 0; i < 5; ++i) {
        GroupElement g = pool[pick(rng)];
        Complex z1{xr(rng), yr(rng)}, z2{xr(rng), yr(rng)};
        auto diff = [&](Complex z0) {
            NumValue a1 = E.evalA_anywhere({1}, g.apply(z0));
            NumValue a0 = E.evalA_anywhere({1}, z0);
            return a1 - a0;
        };
        NumValue d1 = diff(z1), d2 = diff(z2);
        double scale = std::max(std::abs(d1.value), 1e-3);
        double combined = (d1.tol + d2.tol) / scale + 1e-10;
        rep.add_numeric("basepoint " + g.str(), std::abs(d1.value - d2.value) / scale,
                        std::max(tol, combined));
    }
    rep.wall_ms = timer.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// Growth probes: fitted polylog degree of |A_v| along ladders toward a
// translated cusp, and boundedness of y |f| at order 1.
// ---------------------------------------------------------------------------

struct GrowthFit {
    double degree = 0.0;
    double fit_residual = 0.0;
    int points = 0;
};

inline GrowthFit fit_polylog(const std::vector<double>& ys, const std::vector<double>& vals) {
    // least squares of log|val| against log log y
    std::vector<double> xs, zs;
    for (size_t i = 0; i < ys.size(); ++i) {
        if (vals[i] <= 0 || ys[i] <= 1.5) continue;
        xs.push_back(std::log(std::log(ys[i])));
        zs.push_back(std::log(vals[i]));
    }
    GrowthFit f;
    f.points = (int)xs.size();
    if (xs.size() < 3) return f;
    double n = (double)xs.size(), sx = 0, sz = 0, sxx = 0, sxz = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i]; sz += zs[i]; sxx += xs[i] * xs[i]; sxz += xs[i] * zs[i];
    }
    double denom = n * sxx - sx * sx;
    f.degree = (n * sxz - sx * sz) / denom;
    double a0 = (sz - f.degree * sx) / n, rss = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double r = zs[i] - (a0 + f.degree * xs[i]);
        rss += r * r;
    }
    f.fit_residual = std::sqrt(rss / n);
    return f;
}

inline VerificationReport growth_probe(PeriodEngine& E, int t, unsigned seed) {
    WallTimer timer;
    VerificationReport rep;
    rep.suite = "growth-probe";
    rep.anchor = "lemma-2.1";
    rep.params["t"] = std::to_string(t);
    rep.params["seed"] = std::to_string(seed);
    std::vector<int> v(t, 1);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> xr(0.05, 0.45);
    auto pool = small_c_pool(E.group(), 6);
    std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
    GroupElement g = pool[pick(rng)];
    for (int tries = 0; tries < 20 && std::abs(E.period1(g).value) < 1e-2; ++tries)
        g = pool[pick(rng)];  // avoid lattice points with vanishing base period
    double x0 = xr(rng);

    std::vector<double> ys, avals, fvals;
    for (double ly = std::log(2.0); ly <= std::log(1e4) + 1e-9;
         ly += (std::log(1e4) - std::log(2.0)) / 24.0) {
        double y = std::exp(ly);
        Complex w{x0, y};
        // transport identity: A(g w) = A(w) + Pi(g) + sum_r Pi_suf(g) A_pre(w)
        NumValue a = E.evalA(v, w) + E.period_of(v, g);
        Complex fval = E.evalF(v, w).value;
        for (int r = 1; r < t; ++r) {
            NumValue piv = E.period_of({v.begin() + r, v.end()}, g);
            a.value += piv.value * E.evalA({v.begin(), v.begin() + r}, w).value;
            fval += piv.value * E.evalF({v.begin(), v.begin() + r}, w).value;
        }
        ys.push_back(y);
        avals.push_back(std::abs(a.value));
        // Im(g w) |F(g w)| = Im(w) |(F|_2 g)(w)|
        fvals.push_back(w.imag() * std::abs(fval));
    }
    GrowthFit fa = fit_polylog(ys, avals);
    rep.params["fitted_degree"] = std::to_string(fa.degree);
    rep.add_numeric("polylog degree of |A_v| along gamma=" + g.str(), fa.degree,
                    (double)t + 0.5);
    if (t == 1) {
        double m = 0;
        for (double fv : fvals) m = std::max(m, fv);
        rep.add_numeric("boundedness of y|f| on the ladder", m, 1.0);
    }
    rep.wall_ms = timer.ms();
    return rep;
}

}  // namespace hof
