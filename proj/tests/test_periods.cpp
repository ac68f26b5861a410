#include <hof/group_io.hpp>
#include <hof/numeric_checks.hpp>
#include <hof/periods.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace hof;

namespace {
const std::string kDataDir = HOF_DATA_DIR;

PeriodEngine make_engine(int terms = 200) {
    auto G = load_group_config(kDataDir + "/gamma0_11.json");
    auto lf = load_newform(kDataDir + "/newform_11_2.txt", terms);
    return PeriodEngine(std::move(G), std::move(lf.series), terms);
}

// independent oracle: composite Simpson along the vertical segment from z up
// to x + i*ytop; the integral from the cusp runs down that path (dw = i dy)
Complex simpson_vertical(const std::function<Complex(Complex)>& f, Complex z, double ytop,
                         int panels = 512) {
    double h = (ytop - z.imag()) / (2 * panels);
    Complex acc = f(z) + f(Complex(z.real(), ytop));
    for (int i = 1; i < 2 * panels; ++i) {
        Complex w(z.real(), z.imag() + i * h);
        acc += f(w) * ((i % 2) ? 4.0 : 2.0);
    }
    return -(acc * (h / 3.0)) * kI;
}
}  // namespace

TEST_CASE("build_iterated structure") {
    auto E = make_engine();
    SECTION("order 1 is the newform itself") {
        const QSeries& F1 = E.iterated({1});
        CHECK(F1.n0 == 1);
        for (int n = 1; n <= 200; ++n)
            CHECK(F1.coeff(n) == E.newform().coeff(n));
    }
    SECTION("order 2 leading coefficient") {
        const QSeries& F2 = E.iterated({1, 1});
        CHECK(F2.n0 == 2);
        Complex expect = 1.0 / (2.0 * kPi * kI);
        CHECK(std::abs(F2.coeff(2) - expect) < 1e-15);
        CHECK(F2.cuspidal());
    }
    SECTION("order 3 starts at q^3") {
        const QSeries& F3 = E.iterated({1, 1, 1});
        CHECK(F3.n0 == 3);
        CHECK(F3.cuspidal());
    }
    SECTION("only the attached label is available") {
        CHECK_THROWS_AS(E.iterated({2}), domain_error);
        CHECK_THROWS_AS(E.iterated({-1, 1}), domain_error);
    }
}

TEST_CASE("iterated forms match nested quadrature") {
    auto E = make_engine();
    auto feval = [&](Complex w) { return evaluate(E.newform(), w, 0.0).value; };
    double ytop = 12.0;
    std::vector<Complex> samples = {{0.13, 0.9}, {-0.31, 1.4}, {0.42, 2.1}};
    for (Complex z : samples) {
        // order 1: termwise primitive against Simpson
        Complex a1_quad = simpson_vertical(feval, z, ytop);
        Complex a1 = E.evalA({1}, z).value;
        CHECK(std::abs(a1 - a1_quad) <= 1e-6 * std::max(1.0, std::abs(a1)));

        // order 2: F_{1,1} = f * A_1
        Complex f2 = E.evalF({1, 1}, z).value;
        CHECK(std::abs(f2 - feval(z) * a1_quad) <= 1e-6 * std::max(1.0, std::abs(f2)));

        // order 3: A_{1,1} by nested quadrature, then F_{1,1,1} = f * A_{1,1}
        auto f11 = [&](Complex w) { return feval(w) * simpson_vertical(feval, w, ytop, 96); };
        Complex a11_quad = simpson_vertical(f11, z, ytop, 96);
        Complex f3 = E.evalF({1, 1, 1}, z).value;
        CHECK(std::abs(f3 - feval(z) * a11_quad) <= 1e-6 * std::max(1.0, std::abs(f3)));
    }
}

TEST_CASE("periods: identity, additivity, inverses, basepoints") {
    auto E = make_engine();
    CHECK(E.period_of({1}, GroupElement::identity()).value == Complex{0, 0});
    CHECK(E.period_of({1}, translation(3)).value == Complex{0, 0});

    auto rep = verify_period_structure(E, 20, 42, 1e-9);
    INFO(rep.text());
    CHECK(rep.pass());
}

TEST_CASE("period stabilization under basepoint doubling") {
    auto E = make_engine();
    auto pool = small_c_pool(E.group(), 6);
    for (size_t i = 0; i < pool.size(); i += 7) {
        const auto& g = pool[i];
        NumValue p1 = E.period_of(std::vector<int>{1, 1}, g);
        NumValue p2 = E.period_of_at({1, 1}, g, 0.55);
        CHECK(std::abs(p1.value - p2.value) <= std::max(1e-11, 20 * (p1.tol + p2.tol)));
    }
}

TEST_CASE("numeric cocycle law") {
    auto E = make_engine();
    SECTION("order 1: modularity") {
        auto rep = verify_numeric_cocycle(E, 1, 10, 42, 1e-10);
        INFO(rep.text());
        CHECK(rep.pass());
    }
    SECTION("order 2") {
        auto rep = verify_numeric_cocycle(E, 2, 10, 42, 1e-8);
        INFO(rep.text());
        CHECK(rep.pass());
    }
    SECTION("order 3") {
        auto rep = verify_numeric_cocycle(E, 3, 10, 42, 1e-6);
        INFO(rep.text());
        CHECK(rep.pass());
    }
}

TEST_CASE("numeric annihilation") {
    auto E = make_engine();
    auto rep2 = verify_numeric_annihilation(E, 2, 1e-8);
    INFO(rep2.text());
    CHECK(rep2.pass());
    auto rep3 = verify_numeric_annihilation(E, 3, 1e-6);
    INFO(rep3.text());
    CHECK(rep3.pass());
}

TEST_CASE("tails shrink with the truncation order") {
    auto E100 = make_engine(100);
    auto E200 = make_engine(200);
    for (double y : {0.05, 0.08, 0.12}) {
        double t100 = tail_bound(E100.newform(), y);
        double t200 = tail_bound(E200.newform(), y);
        CHECK(t200 < t100);
    }
}

TEST_CASE("growth probes") {
    auto E = make_engine();
    for (int t = 1; t <= 3; ++t) {
        auto rep = growth_probe(E, t, 42);
        INFO(rep.text());
        CHECK(rep.pass());
    }
}
