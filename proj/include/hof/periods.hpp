#pragma once

#include <hof/group.hpp>
#include <hof/qseries.hpp>
#include <hof/report.hpp>

#include <map>
#include <random>
#include <vector>

namespace hof {

struct NumValue {
    Complex value{0.0, 0.0};
    double tol = 0.0;  // accumulated tail/transport budget

    NumValue operator+(const NumValue& o) const { return {value + o.value, tol + o.tol}; }
    NumValue operator-(const NumValue& o) const { return {value - o.value, tol + o.tol}; }
};

struct PeriodRecord {
    int level = 0;
    std::string label;
    GroupElement gamma;
    Complex value;
    double y_used = 0.0;
    double tol = 0.0;
};

// Numerical engine for the iterated forms F_v built from one weight-2
// newform: Fourier-side construction, direct evaluation, periods over the
// path cusp -> gamma(cusp), and transported evaluation at low points.
//
// All values carry an explicit error budget assembled from the series tail
// bounds; nothing silently exceeds it.
class PeriodEngine {
  public:
    PeriodEngine(GroupData group, QSeries newform, int terms)
        : G_(std::move(group)), f_(std::move(newform)), terms_(terms) {
        if (!f_.cuspidal()) throw domain_error("PeriodEngine: newform must be cuspidal");
        if (terms_ > (int)f_.c.size())
            throw domain_error("PeriodEngine: not enough coefficients loaded");
        f_.c.resize(terms_);
        f_.refresh_growth();
    }

    const GroupData& group() const { return G_; }
    const QSeries& newform() const { return f_; }
    int terms() const { return terms_; }

    // Fourier expansion of F_v at the cusp: innermost-out alternation of
    // antiderivative and multiplication.  Entries of v must be positive; with
    // one attached newform every positive label refers to it.
    const QSeries& iterated(const std::vector<int>& v) {
        check_vector(v);
        auto it = fmemo_.find(v);
        if (it != fmemo_.end()) return it->second;
        QSeries cur;
        for (int i = (int)v.size() - 1; i >= 0; --i) {
            if (i == (int)v.size() - 1) {
                cur = f_;
            } else {
                cur = multiply(f_, antiderivative(cur), terms_);
            }
        }
        return fmemo_.emplace(v, std::move(cur)).first->second;
    }

    // A_v = integral of F_v from the cusp (termwise primitive)
    const QSeries& antider(const std::vector<int>& v) {
        check_vector(v);
        auto it = amemo_.find(v);
        if (it != amemo_.end()) return it->second;
        QSeries a = antiderivative(iterated(v));
        return amemo_.emplace(v, std::move(a)).first->second;
    }

    NumValue evalF(const std::vector<int>& v, Complex z) {
        auto r = evaluate(iterated(v), z, hard_floor_);
        return {r.value, r.tail};
    }
    NumValue evalA(const std::vector<int>& v, Complex z) {
        auto r = evaluate(antider(v), z, hard_floor_);
        return {r.value, r.tail};
    }

    // Pi_v(gamma) = integral of F_v from the cusp to gamma(cusp), computed as
    // a difference of primitives at a basepoint on the isometric circle with
    // the lower-order transport corrections subtracted.  Exact in exact
    // arithmetic for any basepoint; the basepoint only controls the tails.
    NumValue period_of(const std::vector<int>& v, const GroupElement& g) {
        check_vector(v);
        auto key = std::make_pair(v, g);
        auto it = pmemo_.find(key);
        if (it != pmemo_.end()) return it->second;
        NumValue out = period_at(v, g, 1.0);
        pmemo_.emplace(key, out);
        return out;
    }

    // classical period of the newform itself
    NumValue period1(const GroupElement& g) { return period_of({1}, g); }

    // unmemoized variant for stabilization checks at another circle height
    NumValue period_of_at(const std::vector<int>& v, const GroupElement& g, double circle_height) {
        check_vector(v);
        return period_at(v, g, circle_height);
    }

    // basepoint for the difference: top of the isometric circle of g
    static Complex isometric_point(const GroupElement& g, double height = 1.0) {
        if (g.c == 0) throw domain_error("isometric_point: translation has no isometric circle");
        return Complex(-(double)g.d / (double)g.c, height / (double)g.c);
    }

    // A_v at arbitrary points: direct when the tail allows, otherwise through
    // fundamental-domain reduction and the transport identity
    NumValue evalA_anywhere(const std::vector<int>& v, Complex z) {
        if (direct_ok(z)) return evalA(v, z);
        auto red = reduce_to_fundamental(G_, z);
        GroupElement del = red.gamma;  // z = del z0
        Complex z0 = red.z0;
        if (!direct_ok(z0))
            throw domain_error("evalA_anywhere: reduction did not reach a usable height");
        // A(del z0) = A(z0) + Pi_v(del) + sum_r Pi_{v[r..]}(del) A_{v[..r]}(z0)
        NumValue out = evalA(v, z0) + period_of(v, del);
        for (int r = 1; r < (int)v.size(); ++r) {
            NumValue piv = period_of({v.begin() + r, v.end()}, del);
            NumValue apre = evalA({v.begin(), v.begin() + r}, z0);
            out.value += piv.value * apre.value;
            out.tol += piv.tol * std::abs(apre.value) + std::abs(piv.value) * apre.tol;
        }
        return out;
    }

    // F_v at arbitrary points through the same transport
    NumValue evalF_anywhere(const std::vector<int>& v, Complex z) {
        if (direct_ok(z)) return evalF(v, z);
        auto red = reduce_to_fundamental(G_, z);
        GroupElement del = red.gamma;
        Complex z0 = red.z0;
        if (!direct_ok(z0))
            throw domain_error("evalF_anywhere: reduction did not reach a usable height");
        Complex j = del.j(z0);
        NumValue out = evalF(v, z0);
        for (int r = 1; r < (int)v.size(); ++r) {
            NumValue piv = period_of({v.begin() + r, v.end()}, del);
            NumValue fpre = evalF({v.begin(), v.begin() + r}, z0);
            out.value += piv.value * fpre.value;
            out.tol += piv.tol * std::abs(fpre.value) + std::abs(piv.value) * fpre.tol;
        }
        double jj = std::norm(j);
        out.value *= j * j;
        out.tol *= jj;
        return out;
    }

    std::vector<PeriodRecord> drain_records() { return std::move(records_); }

  private:
    GroupData G_;
    QSeries f_;
    int terms_;
    double hard_floor_ = 1e-4;
    std::map<std::vector<int>, QSeries> fmemo_, amemo_;
    std::map<std::pair<std::vector<int>, GroupElement>, NumValue> pmemo_;
    std::vector<PeriodRecord> records_;

    void check_vector(const std::vector<int>& v) const {
        if (v.empty()) throw domain_error("iterated: empty index vector");
        for (int j : v)
            if (j != 1)
                throw domain_error(
                    "iterated: only positive labels backed by the attached newform (g = 1)");
    }

    bool direct_ok(Complex z) const {
        if (z.imag() < hard_floor_) return false;
        return tail_bound(f_, z.imag()) < 1e-10;
    }

    NumValue period_at(const std::vector<int>& v, const GroupElement& g, double circle_height) {
        if (g.is_identity()) return {Complex{0, 0}, 0.0};
        if (g.c == 0) {
            // parabolic translation fixing the cusp: the path closes up
            return {Complex{0, 0}, 0.0};
        }
        Complex zs = isometric_point(g, circle_height);
        NumValue ag = evalA(v, g.apply(zs));
        NumValue a0 = evalA(v, zs);
        NumValue out = ag - a0;
        for (int r = 1; r < (int)v.size(); ++r) {
            NumValue piv = period_of({v.begin() + r, v.end()}, g);
            NumValue apre = evalA({v.begin(), v.begin() + r}, zs);
            out.value -= piv.value * apre.value;
            out.tol += piv.tol * std::abs(apre.value) + std::abs(piv.value) * apre.tol;
        }
        records_.push_back({f_.level, f_.label, g, out.value, zs.imag(), out.tol});
        return out;
    }
};

}  // namespace hof
