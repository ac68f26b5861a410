#include <hof/group_io.hpp>
#include <hof/period_cache.hpp>
#include <hof/poincare.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

using namespace hof;

namespace {
const std::string kDataDir = HOF_DATA_DIR;

GroupData level11() { return load_group_config(kDataDir + "/gamma0_11.json"); }

PeriodEngine make_engine(int terms = 200) {
    auto lf = load_newform(kDataDir + "/newform_11_2.txt", terms);
    return PeriodEngine(level11(), std::move(lf.series), terms);
}
}  // namespace

TEST_CASE("series spec validation") {
    SeriesSpec sp;
    sp.s = {1.02, 0.0};
    CHECK_THROWS_AS(sp.validate(), domain_error);
    sp.s = {2.0, 0.0};
    sp.k = 3;
    sp.kind = SeriesKind::U;
    CHECK_THROWS_AS(sp.validate(), domain_error);
    sp.k = 2;
    CHECK_NOTHROW(sp.validate());

    PoincareLab lab(level11());
    sp.min_im = 0.3;
    CHECK_THROWS_AS(lab.eval_series(sp, Complex{0.0, 0.1}), domain_error);
}

TEST_CASE("identity term only at c_max = 0") {
    PoincareLab lab(level11());
    SeriesSpec sp;
    sp.kind = SeriesKind::E;
    sp.s = {3.0, 0.0};
    sp.c_max = 0;
    auto ev = lab.eval_series(sp, Complex{0.0, 5.0});
    CHECK(ev.value.real() == 125.0);
    CHECK(ev.value.imag() == 0.0);
}

TEST_CASE("doubling c_max stays within the truncation estimate") {
    PoincareLab lab(level11());
    for (int k : {0, 2}) {
        for (int m : {0, 1}) {
            if (k == 0 && m != 0) continue;
            SeriesSpec sp;
            sp.kind = (k == 0 && m == 0) ? SeriesKind::E : SeriesKind::U;
            if (sp.kind == SeriesKind::U) { sp.k = k; sp.m = m; }
            sp.s = {2.5, 0.0};
            sp.c_max = 100;
            sp.min_im = 0.02;
            for (Complex z : {Complex{0.2, 0.7}, Complex{-0.37, 1.3}}) {
                auto e1 = lab.eval_series(sp, z);
                SeriesSpec sp2 = sp;
                sp2.c_max = 200;
                auto e2 = lab.eval_series(sp2, z);
                CHECK(std::abs(e2.value - e1.value) <= e1.tail);
            }
        }
    }
}

TEST_CASE("absolute-value majorant is monotone in c_max") {
    PoincareLab lab(level11());
    // on the imaginary axis with real s the Eisenstein terms are positive,
    // so the truncated value is itself the majorant
    SeriesSpec sp;
    sp.kind = SeriesKind::E;
    sp.s = {3.0, 0.0};
    double prev = 0.0;
    for (std::int64_t cmax : {0, 11, 22, 44, 88, 176}) {
        sp.c_max = cmax;
        double val = lab.eval_series(sp, Complex{0.0, 1.0}).value.real();
        CHECK(val >= prev - 1e-15);
        prev = val;
    }
}

TEST_CASE("weight covariance within the truncation budget") {
    auto G = level11();
    PoincareLab lab(G);
    SeriesSpec sp;
    sp.kind = SeriesKind::U;
    sp.s = {2.5, 0.0};
    sp.k = 2;
    sp.m = 1;
    sp.c_max = 300;
    sp.min_im = 0.002;
    Complex z{0.15, 1.1};
    auto base = lab.eval_series(sp, z);
    for (const auto& g : G.generators) {
        auto mi = moebius_apply(g, z);
        auto moved = lab.eval_series(sp, mi.w);
        Complex eps_k = std::pow(mi.eps, (double)sp.k);
        double budget = 3.0 * (moved.tail + base.tail) + 1e-10;
        CHECK(std::abs(moved.value - eps_k * base.value) <= budget);
    }
}

TEST_CASE("Z and Q kinds against the period engine") {
    auto E = make_engine();
    PeriodCache cache;  // in-memory
    PoincareLab lab(level11(), &E, &cache);

    SeriesSpec sp;
    sp.kind = SeriesKind::Z;
    sp.s = {2.5, 0.0};
    sp.k = 2;
    sp.m = 1;
    sp.c_max = 33;
    sp.f_index = {1};
    Complex z{0.21, 1.2};
    auto zval = lab.eval_series(sp, z);

    // assemble the same truncated sum directly from periods
    auto reps = coset_reps_infinity(E.group(), sp.c_max);
    Complex manual{0, 0};
    for (const auto& g : reps) {
        Complex mult = std::conj(E.period_of({1}, g).value);
        std::int64_t window = g.c == 0 ? 0 : (sp.c_max + g.c - 1) / g.c;
        for_each_coset_translate(g, z, window, [&](Complex zn) {
            auto mi = moebius_apply(g, zn);
            manual += mult * std::pow(Complex(mi.w.imag(), 0.0), sp.s) * efun(1.0 * mi.w) *
                      std::pow(mi.eps, -2.0);
        });
    }
    CHECK(std::abs(zval.value - manual) <= 1e-9 * std::max(1.0, std::abs(manual)));

    // the cached multiplier is the conjugated classical period
    bool checked = false;
    for (const auto& g : reps) {
        if (g.c == 0) continue;
        auto rec = cache.lookup(11, E.newform().label, g);
        REQUIRE(rec.has_value());
        CHECK(std::abs(rec->value - E.period1(g).value) <= 1e-9);
        checked = true;
        break;
    }
    CHECK(checked);

    SeriesSpec sq = sp;
    sq.kind = SeriesKind::Q;
    sq.c_max = 22;
    CHECK_NOTHROW(lab.eval_series(sq, z));
}

TEST_CASE("maass operators on closed forms") {
    auto one = [](Complex) { return Complex{1.0, 0.0}; };
    CHECK(std::abs(maass_apply({MaassOp::R, 0}, one, Complex{0.3, 2.0}).value) < 1e-12);

    Complex s{3.0, 0.0};
    auto ys = [s](Complex z) { return std::pow(Complex(z.imag(), 0.0), s); };
    for (int k : {0, 2, 4}) {
        Complex z{0.1, 2.0};
        Complex got = maass_apply({MaassOp::R, k}, ys, z).value;
        Complex want = (s + 0.5 * k) * ys(z);
        CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
        Complex gotL = maass_apply({MaassOp::L, k}, ys, z).value;
        Complex wantL = (s - 0.5 * k) * ys(z);
        CHECK(std::abs(gotL - wantL) <= 1e-6 * std::abs(wantL));
    }

    // Delta = -L_2 R_0 on y^s gives s(1-s) y^s
    auto R0ys = [&](Complex w) { return maass_apply({MaassOp::R, 0}, ys, w).value; };
    Complex z{0.2, 2.0};
    Complex delta = -maass_apply({MaassOp::L, 2, 2e-3}, R0ys, z).value;
    Complex want = s * (1.0 - s) * ys(z);
    CHECK(std::abs(delta - want) <= 1e-5 * std::abs(want));

    CHECK_THROWS_AS(maass_apply({MaassOp::R, 0, 2.0}, one, Complex{0.0, 0.5}), domain_error);
}

TEST_CASE("theta twist commutes with raising") {
    PoincareLab lab(level11());
    SeriesSpec sp;
    sp.kind = SeriesKind::U;
    sp.s = {2.5, 0.0};
    sp.k = 2;
    sp.m = 1;
    sp.c_max = 150;
    sp.min_im = 0.002;
    auto psi = [&](Complex w) { return lab.eval_series(sp, w).value; };
    GroupElement tau(1, 0, 11, 1);
    Complex z{-0.08, 0.95};  // keep the twisted stencil at usable height
    Complex left = theta_apply(tau, sp.k + 2,
                               [&](Complex u) { return maass_apply({MaassOp::R, sp.k}, psi, u).value; },
                               z);
    Complex right = maass_apply({MaassOp::R, sp.k},
                                [&](Complex u) { return theta_apply(tau, sp.k, psi, u); }, z)
                        .value;
    CHECK(std::abs(left - right) <= 1e-4 * std::max(1.0, std::abs(right)));
}

TEST_CASE("identity suites at the acceptance parameters") {
    PoincareLab lab(level11());
    PoincareParams P;
    P.c_max = 200;
    P.tol = 1e-4;

    SECTION("lowering on U") {
        P.s = {3.0, 0.0};
        P.k = 2;
        P.m = 0;
        auto rep = check_identity(lab, PoincareIdentity::Eq3_7, P);
        INFO(rep.text());
        CHECK(rep.pass());
    }
    SECTION("raising on U, m = 0 and m = 1") {
        for (int m : {0, 1}) {
            P.s = {2.5, 0.0};
            P.k = 2;
            P.m = m;
            auto rep = check_identity(lab, PoincareIdentity::Eq3_6, P);
            INFO(rep.text());
            CHECK(rep.pass());
        }
    }
    SECTION("single-term raising") {
        P.s = {2.5, 0.0};
        P.k = 2;
        P.m = 1;
        auto rep = check_identity(lab, PoincareIdentity::Eq3_1, P);
        INFO(rep.text());
        CHECK(rep.pass());
    }
    SECTION("iterated raising against the weighted series") {
        for (int n : {1, 2}) {
            P.s = {2.5, 0.0};
            P.n = n;
            auto rep = check_identity(lab, PoincareIdentity::RnE, P);
            INFO(rep.text());
            CHECK(rep.pass());
        }
    }
    SECTION("Eisenstein constant term shape") {
        P.s = {2.0, 0.0};
        P.c_max = 2000;
        auto rep = check_identity(lab, PoincareIdentity::Eq3_2, P);
        INFO(rep.text());
        CHECK(rep.pass());
    }
}
