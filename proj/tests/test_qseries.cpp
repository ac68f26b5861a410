#include <hof/group_io.hpp>
#include <hof/qseries.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <random>

using namespace hof;

namespace {
const std::string kDataDir = HOF_DATA_DIR;

// independent oracle: integer q-expansion of q prod (1-q^n)^2 (1-q^{11n})^2
std::vector<long long> eta_product_oracle(int nmax) {
    std::vector<long long> P(nmax + 1, 0);
    P[0] = 1;
    auto mul_factor = [&](int k) {
        std::vector<long long> Q = P;
        for (int i = 0; i <= nmax; ++i) {
            if (P[i] == 0) continue;
            if (i + k <= nmax) Q[i + k] -= 2 * P[i];
            if (i + 2 * k <= nmax) Q[i + 2 * k] += P[i];
        }
        P = std::move(Q);
    };
    for (int k = 1; k <= nmax; ++k) {
        mul_factor(k);
        if (11 * k <= nmax) mul_factor(11 * k);
    }
    std::vector<long long> a(nmax + 1, 0);  // a[n] = coeff of q^n
    for (int n = 1; n <= nmax; ++n) a[n] = P[n - 1];
    return a;
}

QSeries qs(std::vector<Complex> coeffs, int n0 = 1) {
    QSeries f;
    f.n0 = n0;
    f.c = std::move(coeffs);
    f.refresh_growth();
    return f;
}
}  // namespace

TEST_CASE("level-11 newform file matches the eta-product oracle") {
    auto lf = load_newform(kDataDir + "/newform_11_2.txt", 200);
    const QSeries& f = lf.series;
    CHECK(lf.warnings.empty());
    CHECK(f.level == 11);
    CHECK(f.weight == 2);
    CHECK(f.n0 == 1);
    CHECK(f.cuspidal());
    CHECK(std::abs(f.coeff(1) - Complex{1, 0}) == 0.0);
    CHECK(std::abs(f.coeff(2) - Complex{-2, 0}) == 0.0);
    CHECK(std::abs(f.coeff(3) - Complex{-1, 0}) == 0.0);

    auto oracle = eta_product_oracle(200);
    for (int n = 1; n <= 200; ++n)
        CHECK(f.coeff(n).real() == (double)oracle[n]);
}

TEST_CASE("degenerate and malformed files") {
    std::string zero_path = "zero_series_test.txt";
    {
        std::ofstream out(zero_path);
        out << "# level=11 weight=2 label=zero count=3\n1 0\n2 0\n3 0\n";
    }
    auto lf = load_newform(zero_path);
    CHECK(lf.series.cuspidal());
    auto ev = evaluate(lf.series, Complex{0.0, 1.0});
    CHECK(ev.value == Complex{0.0, 0.0});
    CHECK(ev.tail == 0.0);
    CHECK(!lf.warnings.empty());  // a(1) != 1
    std::remove(zero_path.c_str());

    std::string bad_path = "bad_series_test.txt";
    {
        std::ofstream out(bad_path);
        out << "# level=11 weight=2 label=bad count=5\n1 1\n2 -2\n";
    }
    CHECK_THROWS_AS(load_newform(bad_path), config_error);
    std::remove(bad_path.c_str());
}

TEST_CASE("multiplication") {
    auto f = qs({{1, 0}, {1, 0}});  // q + q^2
    auto g = qs({{1, 0}});          // q
    auto h = multiply(f, g, 10);
    CHECK(h.n0 == 2);
    CHECK(h.coeff(2) == Complex{1, 0});
    CHECK(h.coeff(3) == Complex{1, 0});
    CHECK(h.coeff(4) == Complex{0, 0});

    QSeries zero;
    zero.n0 = 1;
    auto fz = multiply(f, zero, 10);
    CHECK(evaluate(fz, Complex{0, 1}).value == Complex{0, 0});

    auto lf = load_newform(kDataDir + "/newform_11_2.txt", 200);
    auto ff = multiply(lf.series, lf.series, 200);
    CHECK(ff.n0 == 2);
    CHECK(ff.coeff(2) == Complex{1, 0});  // a(1)^2

    QSeries wide = qs({{1, 0}});
    wide.width = 2.0;
    CHECK_THROWS_AS(multiply(f, wide, 10), domain_error);
}

TEST_CASE("antiderivative and derivative") {
    auto f = qs({{1, 0}});
    auto a = antiderivative(f);
    Complex expect = 1.0 / (2.0 * kPi * kI);
    CHECK(std::abs(a.coeff(1) - expect) < 1e-16);

    auto lf = load_newform(kDataDir + "/newform_11_2.txt", 200);
    auto af = antiderivative(lf.series);
    auto back = derivative(af);
    for (int n = 1; n <= 200; ++n)
        CHECK(std::abs(back.coeff(n) - lf.series.coeff(n)) <= 1e-14 * std::abs(lf.series.coeff(n)));

    // primitive of the level-11 form decays like e^{-2 pi y}
    auto ev = evaluate(af, Complex{0.0, 2.0});
    CHECK(std::abs(ev.value) <= std::exp(-2.0 * kPi * 2.0) * 1.2);

    QSeries noncusp;
    noncusp.n0 = 0;
    noncusp.c = {{1, 0}};
    CHECK_THROWS_AS(antiderivative(noncusp), domain_error);
}

TEST_CASE("evaluation: single term, dual path, linearity") {
    auto f = qs({{1, 0}});
    Complex z{0.3, 0.8};
    CHECK(std::abs(evaluate(f, z).value - efun(z)) < 1e-15);

    // direct-sum oracle against the Horner path
    auto lf = load_newform(kDataDir + "/newform_11_2.txt", 200);
    Complex zi{0.0, 1.0};
    Complex direct{0, 0};
    for (int n = 1; n <= 200; ++n) direct += lf.series.coeff(n) * efun((double)n * zi);
    Complex horner = evaluate(lf.series, zi).value;
    CHECK(std::abs(direct - horner) <= 1e-13 * std::abs(horner));

    // linearity in the coefficients
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Complex> c1, c2, sum;
        for (int n = 0; n < 16; ++n) {
            c1.emplace_back(u(rng), u(rng));
            c2.emplace_back(u(rng), u(rng));
            sum.push_back(c1.back() + 2.0 * c2.back());
        }
        Complex z2{u(rng), 1.0 + 0.5 * u(rng)};
        Complex lhs = evaluate(qs(std::move(sum)), z2).value;
        Complex rhs = evaluate(qs(std::move(c1)), z2).value + 2.0 * evaluate(qs(std::move(c2)), z2).value;
        CHECK(std::abs(lhs - rhs) <= 1e-13 * (std::abs(lhs) + 1.0));
    }

    CHECK_THROWS_AS(evaluate(f, Complex{0.0, 0.01}), domain_error);
}

TEST_CASE("tail bound decays with height") {
    auto lf = load_newform(kDataDir + "/newform_11_2.txt", 200);
    auto af = antiderivative(lf.series);
    // the attached bound decays at least like e^{-2 pi y}; sample low heights
    // where the bound is representable at this truncation
    std::vector<double> ys = {0.02, 0.03, 0.04, 0.05, 0.06};
    std::vector<double> lt;
    for (double y : ys) lt.push_back(std::log(evaluate(af, Complex{0.0, y}, 0.0).tail));
    for (size_t i = 0; i + 1 < ys.size(); ++i) {
        double slope = (lt[i + 1] - lt[i]) / (ys[i + 1] - ys[i]);
        CHECK(slope < -2.0 * kPi);  // at least e^{-2 pi y} per unit height
    }
}

TEST_CASE("modularity of the loaded data end to end") {
    auto G = load_group_config(kDataDir + "/gamma0_11.json");
    auto lf = load_newform(kDataDir + "/newform_11_2.txt", 200);
    const QSeries& f = lf.series;
    // nontrivial group elements force low evaluation points; sample on
    // isometric circles where both heights stay near 1/c
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> th(kPi / 3, 2 * kPi / 3), rho(0.9, 1.1);
    for (const auto& g : G.generators) {
        if (g.c == 0) {
            Complex z{0.2, 1.0};
            Complex lhs = evaluate(f, g.apply(z)).value / std::pow(g.j(z), 2.0);
            CHECK(std::abs(lhs - evaluate(f, z).value) <= 1e-12);
            continue;
        }
        for (int trial = 0; trial < 5; ++trial) {
            double r = rho(rng), t = th(rng);
            Complex z{(-(double)g.d + r * std::cos(t)) / (double)g.c,
                      r * std::sin(t) / (double)g.c};
            auto e1 = evaluate(f, g.apply(z), 0.0);
            auto e0 = evaluate(f, z, 0.0);
            Complex j = g.j(z);
            double resid = std::abs(e1.value / (j * j) - e0.value);
            double budget = 10.0 * (e1.tail / std::norm(j) + e0.tail) + 1e-12 * std::abs(e0.value);
            CHECK(resid <= std::max(budget, 1e-10 * std::abs(e0.value)));
        }
    }
}
