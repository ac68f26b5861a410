#include <hof/index_sets.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace hof;

namespace {
// brute-force oracle: enumerate all label vectors and filter
std::vector<std::vector<int>> brute_force(int g, int t, bool require_I) {
    std::vector<std::vector<int>> out, all;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == t) { all.push_back(cur); return; }
        for (int j = 1; j <= g; ++j)
            for (int s : {+1, -1}) {
                cur.push_back(s * j);
                self(self, pos + 1);
                cur.pop_back();
            }
    };
    rec(rec, 0);
    for (auto& v : all) {
        bool ok = true;
        for (size_t i = 0; i + 1 < v.size(); ++i)
            if (v[i] == -1 && v[i + 1] == 1) ok = false;
        if (require_I && v.back() < 0) ok = false;
        if (ok) out.push_back(v);
    }
    return out;
}
}  // namespace

TEST_CASE("enumeration matches the hand cases") {
    auto i12 = enumerate_index_vectors(1, 2, IndexSet::I);
    REQUIRE(i12.size() == 1);
    CHECK(i12[0].v == std::vector<int>{1, 1});

    CHECK(enumerate_index_vectors(2, 2, IndexSet::IPrime).size() == 15);

    auto i11 = enumerate_index_vectors(1, 1, IndexSet::I);
    REQUIRE(i11.size() == 1);
    CHECK(i11[0].v == std::vector<int>{1});
}

TEST_CASE("enumeration in canonical order without duplicates") {
    auto vs = enumerate_index_vectors(2, 3, IndexSet::IPrime);
    for (size_t i = 0; i + 1 < vs.size(); ++i) {
        CHECK(index_vector_less(vs[i], vs[i + 1]));
        CHECK(!(vs[i] == vs[i + 1]));
    }
}

TEST_CASE("counts match enumeration for 1 <= g <= 3, t <= 6") {
    for (int g = 1; g <= 3; ++g) {
        auto T = count_sequences(g, 6);
        for (int t = 1; t <= 6; ++t) {
            CHECK(BigInt(enumerate_index_vectors(g, t, IndexSet::IPrime).size()) == T.b[t]);
            CHECK(BigInt(enumerate_index_vectors(g, t, IndexSet::I).size()) == T.a[t]);
            CHECK(BigInt(brute_force(g, t, false).size()) == T.b[t]);
            CHECK(BigInt(brute_force(g, t, true).size()) == T.a[t]);
        }
    }
}

TEST_CASE("recurrence values and identities") {
    auto T1 = count_sequences(1, 8);
    for (int t = 1; t <= 8; ++t) CHECK(T1.b[t] == t + 1);

    auto T2 = count_sequences(2, 4);
    CHECK(T2.b[1] == 4);
    CHECK(T2.b[2] == 15);
    CHECK(T2.b[3] == 56);
    CHECK(T2.b[4] == 209);

    auto T0 = count_sequences(0, 5);
    for (int t = 1; t <= 5; ++t) CHECK(T0.a[t] == 0);

    for (int g = 1; g <= 4; ++g) {
        auto T = count_sequences(g, 7);
        CHECK(T.b[2] == 4 * g * g - 1);  // b0 = 1 seeds the recurrence consistently
        for (int t = 1; t <= 7; ++t) CHECK(T.b[t] - T.a[t] == g * T.b[t - 1]);
    }

    // strict monotonicity for g >= 2
    for (int g = 2; g <= 3; ++g) {
        auto T = count_sequences(g, 7);
        for (int t = 1; t < 7; ++t) CHECK(T.a[t + 1] > T.a[t]);
    }
}

TEST_CASE("Chebyshev closed forms as floating cross-checks") {
    for (int g = 1; g <= 3; ++g) {
        auto T = count_sequences(g, 6);
        for (int t = 1; t <= 6; ++t) {
            double at = T.a[t].convert_to<double>();
            double bt = T.b[t].convert_to<double>();
            CHECK(std::abs(chebyshev_T(g, t) - at) <= 1e-9 * std::max(1.0, at));
            CHECK(std::abs(chebyshev_U(g, t) - bt) <= 1e-9 * std::max(1.0, bt));
        }
    }
}

TEST_CASE("quotient dimensions") {
    CHECK(dim_quotient(2, 3, 2) == 26);
    CHECK(dim_quotient(1, 4, 2) == 1);
    CHECK(dim_quotient(0, 3, 2) == 0);
    CHECK(dim_quotient(3, 2, 8, 2) == 12);  // 2 * 2g at quotient order 2
    CHECK(dim_quotient(2, 3, 4, 1) == 15);  // b_2 = 4g^2 - 1

    CHECK_THROWS_AS(dim_quotient(2, 3, 3), domain_error);
    CHECK_THROWS_AS(dim_quotient(2, 3, 0), domain_error);
    CHECK_THROWS_AS(dim_quotient(2, 1, 4, 1), domain_error);
}

TEST_CASE("weight-2 table rows against the closed polynomials") {
    for (int g = 1; g <= 5; ++g) {
        BigInt G = g;
        CHECK(dim_quotient(g, 1, 2) == G);
        CHECK(dim_quotient(g, 2, 2) == 2 * G * G - 1);
        CHECK(dim_quotient(g, 3, 2) == 4 * G * G * G - 3 * G);
        CHECK(dim_quotient(g, 4, 2) == 8 * G * G * G * G - 8 * G * G + 1);
        CHECK(dim_quotient(g, 5, 2) == 16 * pow(G, 5) - 20 * pow(G, 3) + 5 * G);
    }
}

TEST_CASE("size guard") {
    CHECK_THROWS_AS(enumerate_index_vectors(3, 15, IndexSet::I), domain_error);
}
