#pragma once

#include <hof/common.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace hof {

struct EvalResult {
    Complex value{0.0, 0.0};
    double tail = 0.0;  // bound on the dropped Fourier tail
};

// Truncated Fourier series sum_{n >= n0} c(n) e(n z / width) with the crude
// growth model |c(n)| <= growth * n past the stored range.
struct QSeries {
    int n0 = 0;
    std::vector<Complex> c;  // c[k] is the coefficient of n = n0 + k
    double width = 1.0;
    double growth = 2.0;
    // provenance of loaded data
    int level = 0, weight = 0;
    std::string label;

    bool cuspidal() const { return n0 >= 1; }
    bool empty() const { return c.empty(); }
    int n_max() const { return n0 + (int)c.size() - 1; }

    Complex coeff(int n) const {
        int k = n - n0;
        if (k < 0 || k >= (int)c.size()) return {0.0, 0.0};
        return c[k];
    }

    void refresh_growth() {
        double g = 2.0;
        for (int k = 0; k < (int)c.size(); ++k) {
            int n = n0 + k;
            if (n > 0) g = std::max(g, std::abs(c[k]) / n);
        }
        growth = g;
    }

    void drop_leading_zeros() {
        size_t k = 0;
        while (k < c.size() && std::abs(c[k]) == 0.0) ++k;
        if (k > 0) {
            c.erase(c.begin(), c.begin() + k);
            n0 += (int)k;
        }
        if (c.empty()) n0 = 1;  // zero series counts as cuspidal
    }
};

// sum_{n > N} n r^n = r^{N+1} ((N+1) - N r) / (1-r)^2
inline double geometric_tail(int N, double r) {
    if (r >= 1.0) return std::numeric_limits<double>::infinity();
    if (r <= 0.0) return 0.0;
    return std::pow(r, N + 1) * ((N + 1) - N * r) / ((1.0 - r) * (1.0 - r));
}

inline double tail_bound(const QSeries& f, double y) {
    double r = std::exp(-2.0 * kPi * y / f.width);
    return f.growth * geometric_tail(std::max(f.n_max(), 0), r);
}

// Horner evaluation in q = e(z/width); the attached tail is a bound on the
// dropped terms under the growth model.
inline EvalResult evaluate(const QSeries& f, Complex z, double y_min_override = -1.0) {
    double y_min = y_min_override >= 0.0 ? y_min_override : 0.2 * f.width;
    if (z.imag() < y_min)
        throw domain_error("evaluate: Im z below the evaluation floor");
    if (f.c.empty()) return {Complex{0.0, 0.0}, 0.0};
    Complex q = efun(z / f.width);
    Complex acc{0.0, 0.0};
    for (int k = (int)f.c.size() - 1; k >= 0; --k) acc = acc * q + f.c[k];
    Complex qn0 = std::pow(q, f.n0);
    return {acc * qn0, tail_bound(f, z.imag())};
}

inline QSeries multiply(const QSeries& f, const QSeries& g, int N) {
    if (f.width != g.width) throw domain_error("multiply: width mismatch");
    QSeries h;
    h.width = f.width;
    h.n0 = f.n0 + g.n0;
    if (f.c.empty() || g.c.empty() || h.n0 > N) {
        h.n0 = std::max(h.n0, 1);
        return h;
    }
    int len = N - h.n0 + 1;
    h.c.assign(len, Complex{0.0, 0.0});
    for (int i = 0; i < (int)f.c.size(); ++i) {
        if (f.n0 + i + g.n0 > N) break;
        for (int j = 0; j < (int)g.c.size(); ++j) {
            int n = f.n0 + i + g.n0 + j;
            if (n > N) break;
            h.c[n - h.n0] += f.c[i] * g.c[j];
        }
    }
    h.refresh_growth();
    return h;
}

// termwise primitive from the cusp: coefficients c(n)/(2 pi i n), constant
// term zero; represents the integral from i*infinity along vertical paths
inline QSeries antiderivative(const QSeries& f) {
    if (!f.cuspidal()) throw domain_error("antiderivative: input must be cuspidal (n0 >= 1)");
    QSeries a = f;
    for (int k = 0; k < (int)a.c.size(); ++k) {
        int n = a.n0 + k;
        a.c[k] = a.c[k] * (f.width / (2.0 * kPi * kI * (double)n));
    }
    a.refresh_growth();
    return a;
}

// termwise derivative; inverse of antiderivative on coefficients
inline QSeries derivative(const QSeries& f) {
    QSeries d = f;
    for (int k = 0; k < (int)d.c.size(); ++k) {
        int n = d.n0 + k;
        d.c[k] = d.c[k] * (2.0 * kPi * kI * (double)n / f.width);
    }
    d.refresh_growth();
    return d;
}

struct LoadResult {
    QSeries series;
    std::vector<std::string> warnings;
};

// Coefficient file: `# level=N weight=K label=STR count=M`, then M lines
// `n c(n)` with exact integer or p/q rational coefficients.
inline LoadResult load_newform(const std::string& path, int max_terms = 0) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open coefficient file: " + path);
    LoadResult out;
    QSeries& f = out.series;
    f.width = 1.0;
    std::string header;
    if (!std::getline(in, header) || header.empty() || header[0] != '#')
        throw config_error("coefficient file missing header: " + path);
    int count = 0;
    {
        std::istringstream hs(header.substr(1));
        std::string tok;
        while (hs >> tok) {
            auto eq = tok.find('=');
            if (eq == std::string::npos) continue;
            std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
            if (k == "level") f.level = std::stoi(v);
            else if (k == "weight") f.weight = std::stoi(v);
            else if (k == "label") f.label = v;
            else if (k == "count") count = std::stoi(v);
        }
    }
    if (count <= 0) throw config_error("coefficient file header lacks count: " + path);
    if (max_terms > 0) count = std::min(count, max_terms);
    f.n0 = 1;
    f.c.assign(count, Complex{0.0, 0.0});
    std::string line;
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long n;
        std::string cs;
        if (!(ls >> n >> cs)) throw config_error("malformed coefficient line: " + line);
        if (n < 1) throw config_error("coefficient index must be >= 1");
        if (n > count) continue;
        double val;
        auto slash = cs.find('/');
        if (slash == std::string::npos) {
            val = (double)BigInt(cs).convert_to<double>();
        } else {
            Rational r(BigInt(cs.substr(0, slash)), BigInt(cs.substr(slash + 1)));
            val = r.convert_to<double>();
        }
        f.c[n - 1] = Complex{val, 0.0};
        ++seen;
    }
    if (seen < count)
        throw config_error("coefficient file shorter than its declared count: " + path);
    if (std::abs(f.coeff(1) - Complex{1.0, 0.0}) > 0)
        out.warnings.push_back("a(1) != 1: series is not newform-normalized");
    f.drop_leading_zeros();
    f.refresh_growth();
    return out;
}

}  // namespace hof
