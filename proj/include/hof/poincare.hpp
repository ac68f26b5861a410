#pragma once

#include <hof/group.hpp>
#include <hof/period_cache.hpp>
#include <hof/periods.hpp>
#include <hof/report.hpp>

#include <cstdlib>
#include <functional>
#include <future>
#include <thread>

namespace hof {

// ---------------------------------------------------------------------------
// Truncated coset sums over Gamma_inf \ Gamma at the infinite cusp:
//   U_{a m}(z, s, k) = sum Im(gz)^s e(m gz) eps(g, z)^{-k} [* multiplier]
// absolutely convergent for Re s > 1; everything here stays in that region.
// ---------------------------------------------------------------------------

enum class SeriesKind { U, E, Q, Z };

struct SeriesSpec {
    SeriesKind kind = SeriesKind::E;
    int m = 0;
    Complex s{2.0, 0.0};
    int k = 0;
    std::int64_t c_max = 200;
    std::vector<int> f_index = {1};  // attached form for Q/Z kinds
    double re_s_margin = 0.05;
    double min_im = 0.3;  // public evaluation floor; identity suites lower it

    void validate() const {
        if (s.real() <= 1.0 + re_s_margin)
            throw domain_error("SeriesSpec: Re s must exceed 1 + margin (convergence region)");
        if (k % 2 != 0) throw domain_error("SeriesSpec: weight k must be even");
        if (m < 0) throw domain_error("SeriesSpec: m must be nonnegative");
        if (kind == SeriesKind::E && (m != 0 || k != 0))
            throw domain_error("SeriesSpec: Eisenstein kind requires m = 0, k = 0");
    }
};

inline int env_threads() {
    if (const char* v = std::getenv("HOF_THREADS")) {
        int n = std::atoi(v);
        if (n >= 1) return n;
    }
    return 1;
}

// deterministic pairwise tree reduction, identical for any thread count
inline Complex tree_sum(const std::vector<Complex>& xs, size_t lo, size_t hi, int par_depth) {
    if (hi - lo <= 64) {
        Complex s{0.0, 0.0};
        for (size_t i = lo; i < hi; ++i) s += xs[i];
        return s;
    }
    size_t mid = lo + (hi - lo) / 2;
    if (par_depth > 0) {
        auto fut = std::async(std::launch::async, tree_sum, std::cref(xs), lo, mid, par_depth - 1);
        Complex right = tree_sum(xs, mid, hi, par_depth - 1);
        return fut.get() + right;
    }
    return tree_sum(xs, lo, mid, par_depth) + tree_sum(xs, mid, hi, par_depth);
}

inline Complex tree_sum(const std::vector<Complex>& xs) {
    int threads = env_threads();
    int depth = 0;
    while ((1 << depth) < threads) ++depth;
    return tree_sum(xs, 0, xs.size(), depth);
}

// Evaluator with optional attached period engine (Q/Z multipliers) and cache.
class PoincareLab {
  public:
    explicit PoincareLab(GroupData G) : G_(std::move(G)) {}
    PoincareLab(GroupData G, PeriodEngine* engine, PeriodCache* cache = nullptr)
        : G_(std::move(G)), engine_(engine), cache_(cache) {}

    const GroupData& group() const { return G_; }

    // Sum over the single cosets Gamma_inf gamma with 0 < c <= c_max and
    // |c Re(gamma z)| window-bounded: each stored representative is expanded
    // through its right T-translates.
    EvalResult eval_series(const SeriesSpec& spec, Complex z) const {
        spec.validate();
        if (!(z.imag() >= spec.min_im))
            throw domain_error("eval_series: Im z below the evaluation floor");
        auto reps = coset_reps_infinity(G_, spec.c_max);
        std::vector<Complex> terms;
        double mult_sup = 1.0;
        // Im(gz)^s through real pow when s is real (exact on integer powers)
        auto im_pow = [&spec](double y) {
            if (spec.s.imag() == 0.0) return Complex(std::pow(y, spec.s.real()), 0.0);
            return std::exp(spec.s * std::log(y));
        };
        for (const auto& g : reps) {
            std::int64_t window = g.c == 0 ? 0 : (spec.c_max + g.c - 1) / g.c;
            for_each_coset_translate(g, z, window, [&](Complex zn) {
                auto mi = moebius_apply(g, zn);
                Complex w = mi.w;
                Complex term = im_pow(w.imag()) * efun((double)spec.m * w);
                if (spec.k != 0) term *= std::pow(mi.eps, Complex(-(double)spec.k, 0.0));
                if (spec.kind == SeriesKind::Q || spec.kind == SeriesKind::Z) {
                    Complex mult = multiplier(spec, g, zn, w);
                    mult_sup = std::max(mult_sup, std::abs(mult));
                    term *= mult;
                }
                terms.push_back(term);
            });
        }
        double trunc = truncation_bound(spec, z.imag()) * mult_sup;
        return {tree_sum(terms), trunc};
    }

    // Tail of the truncated double sum: the c > c_max block (at most c coprime
    // residues modulo c, Im(gz) <= 1/(c^2 y)) plus the dropped d-translates
    // beyond the window |c x + d| ~ c_max.
    double truncation_bound(const SeriesSpec& spec, double y) const {
        double sigma = spec.s.real();
        double N = (double)G_.level, C = (double)spec.c_max;
        double k0 = std::max(std::floor(C / N), 1.0);
        // sum_{c > C, N | c} phi(c) (c^2 y)^{-sigma} <= y^-s N^{1-2s} k0^{2-2s}/(2s-2)
        double tail_c = std::pow(y, -sigma) * std::pow(N, 1.0 - 2.0 * sigma) *
                        std::pow(k0, 2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0);
        // per kept c: residues with |cx + d| > ~C contribute
        // 2 y^sigma / c * integral_{C}^inf u^{-2 sigma} du, summed over the
        // phi(c) <= c representative classes
        double tail_d = 0.0;
        for (double c = N; c <= C; c += N)
            tail_d += 2.0 * std::pow(y, sigma) * std::pow(C, 1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0);
        return tail_c + tail_d;
    }

  private:
    // Z multiplier: the conjugated period over the representative (the right
    // T-translates share it).  Q multiplier: the conjugated primitive at the
    // actual coset point.
    Complex multiplier(const SeriesSpec& spec, const GroupElement& g, Complex /*zn*/,
                       Complex w) const {
        if (!engine_) throw domain_error("eval_series: Q/Z kinds need an attached period engine");
        if (spec.kind == SeriesKind::Q) {
            NumValue az = engine_->evalA_anywhere(spec.f_index, w);
            return std::conj(az.value);
        }
        NumValue p;
        const auto& f = engine_->newform();
        if (cache_) {
            auto hit = cache_->lookup(f.level, f.label, g);
            if (hit) {
                p = {hit->value, hit->tol};
            } else {
                p = engine_->period_of(spec.f_index, g);
                auto recs = engine_->drain_records();
                for (const auto& r : recs)
                    if (r.gamma == g) cache_->insert(r);
            }
        } else {
            p = engine_->period_of(spec.f_index, g);
        }
        return std::conj(p.value);
    }

    GroupData G_;
    PeriodEngine* engine_ = nullptr;
    PeriodCache* cache_ = nullptr;
};

// ---------------------------------------------------------------------------
// Maass raising/lowering by central differences with one Richardson level.
// ---------------------------------------------------------------------------

struct MaassOp {
    enum Kind { R, L } kind = R;
    int k = 0;              // weight
    double h_rel = 1e-3;    // step = h_rel * Im z
};

struct MaassValue {
    Complex value;
    double fd_estimate = 0.0;  // discretization estimate from the Richardson pair
};

// R_k = 2iy d/dz + k/2,  L_k = -2iy d/dzbar - k/2, with
// d/dz = (d/dx - i d/dy)/2 and d/dzbar = (d/dx + i d/dy)/2.
inline MaassValue maass_apply(const MaassOp& op, const std::function<Complex(Complex)>& F,
                              Complex z) {
    double y = z.imag();
    if (!(y > 0)) throw domain_error("maass_apply: Im z must be positive");
    auto d_at = [&](double h) {
        if (z.imag() - h <= 0) throw domain_error("maass_apply: stencil below the domain floor");
        Complex fx = (F(z + h) - F(z - h)) / (2.0 * h);
        Complex fy = (F(z + h * kI) - F(z - h * kI)) / (2.0 * h);
        Complex dz = 0.5 * (fx - kI * fy);
        Complex dzb = 0.5 * (fx + kI * fy);
        return std::make_pair(dz, dzb);
    };
    double h = op.h_rel * y;
    auto [dz1, dzb1] = d_at(h);
    auto [dz2, dzb2] = d_at(h / 2);
    Complex dz = (4.0 * dz2 - dz1) / 3.0;
    Complex dzb = (4.0 * dzb2 - dzb1) / 3.0;
    MaassValue out;
    if (op.kind == MaassOp::R) {
        out.value = 2.0 * kI * y * dz + 0.5 * (double)op.k * F(z);
        out.fd_estimate = std::abs(dz2 - dz1) / 3.0 * 2.0 * y;
    } else {
        out.value = -2.0 * kI * y * dzb - 0.5 * (double)op.k * F(z);
        out.fd_estimate = std::abs(dzb2 - dzb1) / 3.0 * 2.0 * y;
    }
    return out;
}

// theta_{tau,k} psi(z) = psi(tau z) / eps(tau, z)^k
inline Complex theta_apply(const GroupElement& tau, int k,
                           const std::function<Complex(Complex)>& psi, Complex z) {
    auto mi = moebius_apply(tau, z);
    return psi(mi.w) / std::pow(mi.eps, (double)k);
}

// ---------------------------------------------------------------------------
// Identity checks in the convergence region.
// ---------------------------------------------------------------------------

enum class PoincareIdentity { Eq3_1, Eq3_6, Eq3_7, RnE, Eq3_2 };

struct PoincareParams {
    Complex s{3.0, 0.0};
    int k = 2;
    int m = 0;
    std::int64_t c_max = 200;
    double tol = 1e-4;
    int n = 1;  // for RnE
};

inline VerificationReport check_identity(const PoincareLab& lab, PoincareIdentity which,
                                         PoincareParams P) {
    WallTimer timer;
    VerificationReport rep;
    rep.tolerance = P.tol;
    rep.params["s"] = std::to_string(P.s.real()) + "+" + std::to_string(P.s.imag()) + "i";
    rep.params["k"] = std::to_string(P.k);
    rep.params["m"] = std::to_string(P.m);
    rep.params["c_max"] = std::to_string(P.c_max);

    auto U = [&](Complex s, int k, int m) {
        return [&lab, s, k, m, &P](Complex z) {
            SeriesSpec sp;
            sp.kind = (m == 0 && k == 0) ? SeriesKind::E : SeriesKind::U;
            if (sp.kind == SeriesKind::U) { sp.m = m; sp.k = k; }
            sp.s = s;
            sp.c_max = P.c_max;
            sp.min_im = 0.02;
            return lab.eval_series(sp, z).value;
        };
    };
    std::vector<Complex> grid;
    for (double x : {0.13, 0.41})
        for (double y : {0.6, 1.1, 2.3}) grid.emplace_back(x, y);

    switch (which) {
        case PoincareIdentity::Eq3_7: {
            rep.suite = "poincare-3.7";
            rep.anchor = "eq-3.7";
            auto Uk = U(P.s, P.k, P.m);
            auto Ulow = U(P.s, P.k - 2, P.m);
            for (Complex z : grid) {
                MaassOp op{MaassOp::L, P.k};
                Complex lhs = maass_apply(op, Uk, z).value;
                Complex rhs = (P.s - 0.5 * P.k) * Ulow(z);
                double scale = std::max(std::abs(rhs), 1e-8);
                rep.add_numeric("z=" + std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i",
                                std::abs(lhs - rhs) / scale, P.tol);
            }
            break;
        }
        case PoincareIdentity::Eq3_6: {
            rep.suite = "poincare-3.6";
            rep.anchor = "eq-3.6";
            auto Uk = U(P.s, P.k, P.m);
            auto Up2 = U(P.s, P.k + 2, P.m);
            auto Up2s = U(P.s + 1.0, P.k + 2, P.m);
            for (Complex z : grid) {
                MaassOp op{MaassOp::R, P.k};
                Complex lhs = maass_apply(op, Uk, z).value;
                Complex rhs = (P.s + 0.5 * P.k) * Up2(z) - 4.0 * kPi * (double)P.m * Up2s(z);
                double scale = std::max(std::abs(rhs), 1e-8);
                rep.add_numeric("z=" + std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i",
                                std::abs(lhs - rhs) / scale, P.tol);
            }
            break;
        }
        case PoincareIdentity::Eq3_1: {
            rep.suite = "poincare-3.1";
            rep.anchor = "eq-3.1";
            // single-gamma terms mu(s, k, F) = F(gz) Im(gz)^s e(m gz) eps^{-k}
            std::vector<GroupElement> gs = {GroupElement::identity(), translation(1)};
            gs.push_back(GroupElement(1, 0, lab.group().level, 1));
            struct FH {
                std::string name;
                std::function<Complex(Complex)> F, dF;
            };
            std::vector<FH> fhs = {
                {"F=1", [](Complex) { return Complex{1, 0}; }, [](Complex) { return Complex{0, 0}; }},
                {"F=e(w)", [](Complex w) { return efun(w); },
                 [](Complex w) { return 2.0 * kPi * kI * efun(w); }},
            };
            for (const auto& g : gs) {
                for (const auto& fh : fhs) {
                    auto mu = [&](Complex s, int k, const std::function<Complex(Complex)>& F) {
                        return [&, s, k, F](Complex z) {
                            auto mi = moebius_apply(g, z);
                            return F(mi.w) * std::pow(Complex(mi.w.imag(), 0.0), s) *
                                   efun((double)P.m * mi.w) * std::pow(mi.eps, -(double)k);
                        };
                    };
                    Complex z = grid[2];
                    MaassOp op{MaassOp::R, P.k};
                    Complex lhs = maass_apply(op, mu(P.s, P.k, fh.F), z).value;
                    Complex rhs = 2.0 * kI * mu(P.s + 1.0, P.k + 2, fh.dF)(z) +
                                  (P.s + 0.5 * P.k) * mu(P.s, P.k + 2, fh.F)(z) -
                                  4.0 * kPi * (double)P.m * mu(P.s + 1.0, P.k + 2, fh.F)(z);
                    double scale = std::max(std::abs(rhs), 1e-8);
                    rep.add_numeric("gamma=" + g.str() + " " + fh.name, std::abs(lhs - rhs) / scale,
                                    P.tol);
                }
            }
            break;
        }
        case PoincareIdentity::RnE: {
            rep.suite = "poincare-RnE";
            rep.anchor = "R^n Eisenstein";
            auto E0 = U(P.s, 0, 0);
            for (Complex z : grid) {
                Complex lhs;
                if (P.n == 1) {
                    lhs = maass_apply({MaassOp::R, 0}, E0, z).value;
                } else if (P.n == 2) {
                    auto R0E = [&](Complex w) { return maass_apply({MaassOp::R, 0}, E0, w).value; };
                    lhs = maass_apply({MaassOp::R, 2, 2e-3}, R0E, z).value;
                } else {
                    throw domain_error("RnE: n <= 2 supported");
                }
                Complex fac = P.s;
                for (int i = 1; i < P.n; ++i) fac *= (P.s + (double)i);
                Complex rhs = fac * U(P.s, 2 * P.n, 0)(z);
                double scale = std::max(std::abs(rhs), 1e-8);
                rep.add_numeric("n=" + std::to_string(P.n) + " z=" + std::to_string(z.real()) + "+" +
                                    std::to_string(z.imag()) + "i",
                                std::abs(lhs - rhs) / scale, P.tol);
            }
            break;
        }
        case PoincareIdentity::Eq3_2: {
            rep.suite = "poincare-3.2";
            rep.anchor = "eq-3.2";
            // zero Fourier mode of E(sigma_b z, s) fitted to A y^s + B y^{1-s}
            // at two heights, validated at a third; nonzero mode decay check
            const int nx = 64;
            auto mode = [&](const Mat2d& sigma, double y, int mm) {
                Complex acc{0, 0};
                for (int i = 0; i < nx; ++i) {
                    double x = (i + 0.5) / nx;
                    Complex z = sigma.apply(Complex(x, y));
                    SeriesSpec sp;
                    sp.kind = SeriesKind::E;
                    sp.s = P.s;
                    sp.c_max = P.c_max;
                    sp.min_im = 0.02;
                    Complex val = lab.eval_series(sp, z).value;
                    acc += val * efun(Complex(-(double)mm * x, 0.0));
                }
                return acc / (double)nx;
            };
            for (const auto& cu : lab.group().cusps) {
                double y1 = 0.9, y2 = 1.7, y3 = 1.3;
                Complex c1 = mode(cu.scaling, y1, 0), c2 = mode(cu.scaling, y2, 0),
                        c3 = mode(cu.scaling, y3, 0);
                // solve [y^s  y^{1-s}] [A B]^T = c at y1, y2
                Complex a11 = std::pow(Complex(y1, 0), P.s), a12 = std::pow(Complex(y1, 0), 1.0 - P.s);
                Complex a21 = std::pow(Complex(y2, 0), P.s), a22 = std::pow(Complex(y2, 0), 1.0 - P.s);
                Complex det = a11 * a22 - a12 * a21;
                Complex A = (c1 * a22 - a12 * c2) / det;
                Complex B = (a11 * c2 - c1 * a21) / det;
                Complex pred = A * std::pow(Complex(y3, 0), P.s) + B * std::pow(Complex(y3, 0), 1.0 - P.s);
                double scale = std::max(std::abs(c3), 1e-8);
                rep.add_numeric("cusp " + cu.label + " constant-term fit",
                                std::abs(pred - c3) / scale, 1e-3);
                // delta_{ab}: leading coefficient A is 1 at the infinite cusp,
                // small elsewhere
                double a_err = cu.at_infinity ? std::abs(A - Complex{1, 0}) : std::abs(A);
                rep.add_numeric("cusp " + cu.label + " delta coefficient", a_err, 1e-2);
                // nonzero modes decay like e^{-2 pi y}
                double m1 = std::abs(mode(cu.scaling, y1, 1));
                double m2 = std::abs(mode(cu.scaling, y2, 1));
                double decay_ok = (m1 < 1e-12) ? 0.0
                                               : m2 / (m1 * std::exp(-2.0 * kPi * (y2 - y1)) * 10.0);
                rep.add_numeric("cusp " + cu.label + " mode-1 decay", decay_ok, 1.0);
            }
            break;
        }
    }
    rep.wall_ms = timer.ms();
    return rep;
}

}  // namespace hof
