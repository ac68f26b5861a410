#pragma once

#include <hof/common.hpp>

#include <vector>

namespace hof {

// Shuffle of type (r, t): order-preserving maps phi (r-1 slots) and psi
// (t-r slots) into {1, ..., t-1} with disjoint complementary images.
struct Shuffle {
    std::vector<int> phi;  // increasing, size r-1
    std::vector<int> psi;  // increasing, size t-r

    bool partitions(int t) const {
        std::vector<bool> hit(t, false);
        auto mark = [&](const std::vector<int>& m) {
            for (int x : m) {
                if (x < 1 || x > t - 1 || hit[x]) return false;
                hit[x] = true;
            }
            return true;
        };
        if (!mark(phi) || !mark(psi)) return false;
        for (int x = 1; x <= t - 1; ++x)
            if (!hit[x]) return false;
        return true;
    }
};

// All C(t-1, r-1) shuffles, ordered lexicographically by the image of phi.
inline std::vector<Shuffle> enumerate_shuffles(int r, int t) {
    if (r < 1 || t < 1 || r > t) throw domain_error("enumerate_shuffles: need 1 <= r <= t");
    std::vector<Shuffle> out;
    const int k = r - 1, n = t - 1;
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i + 1;
    auto emit = [&]() {
        Shuffle s;
        s.phi = comb;
        std::vector<bool> used(n + 1, false);
        for (int x : comb) used[x] = true;
        for (int x = 1; x <= n; ++x)
            if (!used[x]) s.psi.push_back(x);
        out.push_back(std::move(s));
    };
    if (k == 0) {
        emit();
        return out;
    }
    while (true) {
        emit();
        int i = k - 1;
        while (i >= 0 && comb[i] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
    return out;
}

inline BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) { r *= (n - i); r /= (i + 1); }
    return r;
}

}  // namespace hof
