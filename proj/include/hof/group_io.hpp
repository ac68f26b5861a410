#pragma once

#include <hof/group.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>

namespace hof {

namespace detail {

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    return Rational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
}

// round sigma T sigma^{-1} to an exact parabolic element fixing the cusp
inline GroupElement derive_parabolic(const Mat2d& sigma, int level) {
    Mat2d p = sigma * Mat2d{1, 1, 0, 1} * sigma.inverse();
    auto rnd = [](double x) { return (std::int64_t)std::llround(x); };
    std::int64_t a = rnd(p.a), b = rnd(p.b), c = rnd(p.c), d = rnd(p.d);
    double err = std::max({std::abs(p.a - (double)a), std::abs(p.b - (double)b),
                           std::abs(p.c - (double)c), std::abs(p.d - (double)d)});
    if (err > 1e-6)
        throw config_error("cusp scaling does not conjugate the unit translation into the group");
    GroupElement g(a, b, c, d);
    if (g.c % level != 0)
        throw config_error("derived cusp parabolic has c not divisible by the level");
    return g;
}

}  // namespace detail

inline GroupData group_from_json(const nlohmann::json& j) {
    GroupData G;
    G.level = j.at("level").get<int>();
    if (G.level < 1) throw config_error("level must be positive");
    G.genus = j.at("genus").get<int>();
    if (G.genus < 0) throw config_error("genus must be nonnegative");
    G.volume = j.at("volume").get<double>();
    if (!(G.volume > 0)) throw config_error("volume must be positive");

    for (const auto& jc : j.at("cusps")) {
        CuspData cu;
        cu.label = jc.at("label").get<std::string>();
        std::string rep = jc.at("representative").get<std::string>();
        if (rep == "inf") {
            cu.at_infinity = true;
        } else {
            cu.at_infinity = false;
            cu.representative = detail::parse_rational(rep);
        }
        const auto& sc = jc.at("scaling");
        cu.scaling = Mat2d{sc.at(0).at(0).get<double>(), sc.at(0).at(1).get<double>(),
                           sc.at(1).at(0).get<double>(), sc.at(1).at(1).get<double>()};
        double det = cu.scaling.a * cu.scaling.d - cu.scaling.b * cu.scaling.c;
        if (std::abs(det - 1.0) > 1e-9)
            throw config_error("cusp " + cu.label + ": scaling matrix must have determinant 1");
        cu.width = jc.at("width").get<double>();
        if (!(cu.width > 0)) throw config_error("cusp width must be positive");
        cu.parabolic = detail::derive_parabolic(cu.scaling, G.level);
        G.cusps.push_back(cu);
    }
    if (G.cusps.empty()) throw config_error("at least one cusp required");

    for (const auto& jg : j.at("generators")) {
        GroupElement g(jg.at(0).at(0).get<std::int64_t>(), jg.at(0).at(1).get<std::int64_t>(),
                       jg.at(1).at(0).get<std::int64_t>(), jg.at(1).at(1).get<std::int64_t>());
        if (g.c % G.level != 0)
            throw config_error("generator " + g.str() + " has c not divisible by the level");
        G.generators.push_back(g);
    }
    if (G.generators.empty()) throw config_error("at least one generator required");
    return G;
}

inline GroupData load_group_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open group config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error("malformed group config " + path + ": " + e.what());
    }
    return group_from_json(j);
}

}  // namespace hof
