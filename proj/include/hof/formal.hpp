#pragma once

#include <hof/common.hpp>

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <span>
#include <sstream>
#include <vector>

namespace hof {

// ---------------------------------------------------------------------------
// Free-group words.  Letters are signed ints: |l| is the symbol, the sign is
// the exponent.  Symbols below kParabolicSym are generic group letters
// gamma_1, gamma_2, ...; symbols >= kParabolicSym are parabolic letters
// pi_{a_k} with k = sym - kParabolicSym.
// ---------------------------------------------------------------------------

inline constexpr int kParabolicSym = 1 << 20;

inline bool is_parabolic_letter(int le) { return std::abs(le) >= kParabolicSym; }

struct FormalWord {
    std::vector<int> ls;  // reduced

    FormalWord() = default;
    explicit FormalWord(std::vector<int> letters) : ls(std::move(letters)) { reduce(); }
    static FormalWord letter(int le) { return FormalWord{std::vector<int>{le}}; }

    void reduce() {
        std::vector<int> out;
        for (int l : ls) {
            if (l == 0) throw domain_error("FormalWord: zero letter");
            if (!out.empty() && out.back() == -l) out.pop_back();
            else out.push_back(l);
        }
        ls = std::move(out);
    }

    bool empty() const { return ls.empty(); }

    FormalWord operator*(const FormalWord& o) const {
        std::vector<int> cat = ls;
        cat.insert(cat.end(), o.ls.begin(), o.ls.end());
        return FormalWord(std::move(cat));
    }

    FormalWord inverse() const {
        std::vector<int> inv(ls.rbegin(), ls.rend());
        for (int& l : inv) l = -l;
        return FormalWord(std::move(inv));
    }

    bool operator==(const FormalWord& o) const { return ls == o.ls; }

    std::string str() const {
        if (ls.empty()) return "1";
        std::string s;
        for (int l : ls) {
            if (!s.empty()) s += ".";
            int sym = std::abs(l);
            s += is_parabolic_letter(l) ? "p" + std::to_string(sym - kParabolicSym)
                                        : "g" + std::to_string(sym);
            if (l < 0) s += "'";
        }
        return s;
    }
};

// ---------------------------------------------------------------------------
// Constant factors: period symbols <f_j, gamma> (label-indexed, additive in
// the word) and opaque integral constants attached to composite integrands.
// ---------------------------------------------------------------------------

struct PeriodFactor {
    bool composite = false;
    // single: label j (negative = conjugated); eis marks Eisenstein labels
    int label = 0;
    bool eis = false;
    // composite: conjugation flag, basepoint tag (0 = cusp, 1 = point i) and
    // the canonical key of the integrand product
    bool conj = false;
    int bp = 0;
    std::string payload;
    int letter = 0;  // positive symbol; exponents are normalized away

    std::string key() const {
        std::string s = (is_parabolic_letter(letter) ? "p" + std::to_string(letter - kParabolicSym)
                                                     : "g" + std::to_string(letter)) + "|";
        if (!composite) {
            s += (eis ? "e" : "f") + std::to_string(label);
        } else {
            s += std::string(conj ? "~" : "") + "J" + std::to_string(bp) + "[" + payload + "]";
        }
        return s;
    }

    friend bool operator<(const PeriodFactor& x, const PeriodFactor& y) {
        if (x.letter != y.letter) return x.letter < y.letter;
        if (x.composite != y.composite) return !x.composite;
        if (!x.composite) {
            if (x.eis != y.eis) return !x.eis;
            return x.label < y.label;
        }
        if (x.conj != y.conj) return !x.conj;
        if (x.bp != y.bp) return x.bp < y.bp;
        return x.payload < y.payload;
    }
    friend bool operator==(const PeriodFactor& x, const PeriodFactor& y) {
        return x.letter == y.letter && x.composite == y.composite && x.label == y.label &&
               x.eis == y.eis && x.conj == y.conj && x.bp == y.bp && x.payload == y.payload;
    }
};

// flips the complex conjugation of a constant factor
inline PeriodFactor conj_factor(PeriodFactor p) {
    if (!p.composite) {
        if (p.eis) throw domain_error("conjugated Eisenstein period not modeled");
        p.label = -p.label;
    } else {
        p.conj = !p.conj;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Atoms: the basic form symbols carrying declared transformation laws.
// ---------------------------------------------------------------------------

enum class AtomKind {
    F,    // iterated form F_{i_1..i_t}; t = 1 is the cusp form f_j itself
    Eis,  // Eisenstein basis symbol f_{g+i}
    Z,    // base element Z_{i_1..i_t} with all-negative prefix, i_t > 0
    Y,    // base element Y_{i_1..i_q; m} of weight k, prefix all negative
    P,    // Poincare series symbol P_{a m, k}
    Int,  // antiderivative of a product of atoms from a basepoint
    Opq,  // opaque symbol with declared annihilation order (shuffle lemma)
};

struct Atom;
using AtomPtr = std::shared_ptr<const Atom>;

struct Atom {
    AtomKind kind;
    std::vector<int> idx;          // labels (F, Z) or prefix (Y)
    int m = 0;                     // P, Y
    int weight = 2;
    int order = 1;                 // annihilated by `order` slash differences
    int bp = 0;                    // Int
    std::vector<AtomPtr> payload;  // Int: integrand product
    std::string tag;               // Opq
    std::vector<int> applied;      // Opq: letters already applied
    std::string key;

    static std::string join(const std::vector<int>& v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    }
    void make_key() {
        switch (kind) {
            case AtomKind::F: key = "F(" + join(idx) + ")"; break;
            case AtomKind::Eis: key = "E(" + join(idx) + ")"; break;
            case AtomKind::Z: key = "Z(" + join(idx) + ")"; break;
            case AtomKind::Y: key = "Y(" + join(idx) + ";" + std::to_string(m) + ",w" + std::to_string(weight) + ")"; break;
            case AtomKind::P: key = "P(" + std::to_string(m) + ",w" + std::to_string(weight) + ")"; break;
            case AtomKind::Int: {
                std::string pl;
                for (const auto& a : payload) pl += a->key + "*";
                key = "A" + std::to_string(bp) + "[" + pl + "]";
                break;
            }
            case AtomKind::Opq: key = "O(" + tag + ")[" + join(applied) + "]"; break;
        }
    }
};

inline AtomPtr atom_f(int j) {
    if (j < 1) throw domain_error("atom_f: label must be positive");
    auto a = std::make_shared<Atom>();
    a->kind = AtomKind::F;
    a->idx = {j};
    a->weight = 2;
    a->order = 1;
    a->make_key();
    return a;
}

inline AtomPtr atom_eis(int i) {
    auto a = std::make_shared<Atom>();
    a->kind = AtomKind::Eis;
    a->idx = {i};
    a->weight = 2;
    a->order = 1;
    a->make_key();
    return a;
}

// F_{i_1..i_t}, all labels positive
inline AtomPtr atom_F(const std::vector<int>& v) {
    if (v.empty()) throw domain_error("atom_F: empty index");
    for (int j : v)
        if (j < 1) throw domain_error("atom_F: labels must be positive");
    if (v.size() == 1) return atom_f(v[0]);
    auto a = std::make_shared<Atom>();
    a->kind = AtomKind::F;
    a->idx = v;
    a->weight = 2;
    a->order = (int)v.size();
    a->make_key();
    return a;
}

// base Z_{i_1..i_t}: i_1..i_{t-1} < 0, i_t > 0, no (-1, 1) pattern
inline AtomPtr atom_Z(const std::vector<int>& v) {
    if (v.size() < 2) throw domain_error("atom_Z: order must be >= 2");
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i] >= 0) throw domain_error("atom_Z: prefix must be negative");
        if (v[i] == -1 && v[i + 1] == 1) throw domain_error("atom_Z: forbidden (-1,1) pattern");
    }
    if (v.back() < 1) throw domain_error("atom_Z: last label must be positive");
    auto a = std::make_shared<Atom>();
    a->kind = AtomKind::Z;
    a->idx = v;
    a->weight = 2;
    a->order = (int)v.size();
    a->make_key();
    return a;
}

inline AtomPtr atom_P(int m, int weight) {
    auto a = std::make_shared<Atom>();
    a->kind = AtomKind::P;
    a->m = m;
    a->weight = weight;
    a->order = 1;
    a->make_key();
    return a;
}

// base Y_{i_1..i_q; m} of weight k, all i_j < 0; order q+1
inline AtomPtr atom_Y(const std::vector<int>& prefix, int m, int weight) {
    if (prefix.empty()) return atom_P(m, weight);
    for (int j : prefix)
        if (j >= 0) throw domain_error("atom_Y: prefix must be negative");
    auto a = std::make_shared<Atom>();
    a->kind = AtomKind::Y;
    a->idx = prefix;
    a->m = m;
    a->weight = weight;
    a->order = (int)prefix.size() + 1;
    a->make_key();
    return a;
}

inline AtomPtr atom_opaque(const std::string& tag, int weight, int order,
                           std::vector<int> applied = {}) {
    auto a = std::make_shared<Atom>();
    a->kind = AtomKind::Opq;
    a->tag = tag;
    a->weight = weight;
    a->order = order;
    a->applied = std::move(applied);
    a->make_key();
    return a;
}

inline AtomPtr atom_int(std::vector<AtomPtr> payload, int bp) {
    if (payload.empty()) throw domain_error("atom_int: empty integrand");
    int w = 0, ord = 1 - (int)payload.size();
    for (const auto& p : payload) { w += p->weight; ord += p->order; }
    if (w != 2) throw domain_error("atom_int: integrand must have weight 2");
    std::sort(payload.begin(), payload.end(),
              [](const AtomPtr& x, const AtomPtr& y) { return x->key < y->key; });
    auto a = std::make_shared<Atom>();
    a->kind = AtomKind::Int;
    a->payload = std::move(payload);
    a->bp = bp;
    a->weight = 0;
    a->order = ord + 1;
    a->make_key();
    return a;
}

// ---------------------------------------------------------------------------
// Normalized expressions: sums of (rational coefficient) x (sorted constant
// factors) x (sorted atom product).
// ---------------------------------------------------------------------------

struct Term {
    Rational coef = 1;
    std::vector<PeriodFactor> consts;
    std::vector<AtomPtr> forms;

    void sort_parts() {
        std::sort(consts.begin(), consts.end());
        std::sort(forms.begin(), forms.end(),
                  [](const AtomPtr& x, const AtomPtr& y) { return x->key < y->key; });
    }
    std::string body_key() const {
        std::string s;
        for (const auto& f : forms) s += f->key + "*";
        s += "|";
        for (const auto& c : consts) s += c.key() + "*";
        return s;
    }
};

struct FormalExpr {
    std::vector<Term> terms;  // normalized: sorted by body key, merged, no zeros

    static FormalExpr zero() { return {}; }

    static FormalExpr from_term(Term t) {
        FormalExpr e;
        e.terms.push_back(std::move(t));
        e.normalize();
        return e;
    }
    static FormalExpr from_atom(AtomPtr a) {
        Term t;
        t.forms.push_back(std::move(a));
        return from_term(std::move(t));
    }
    static FormalExpr constant(Rational c) {
        Term t;
        t.coef = std::move(c);
        return from_term(std::move(t));
    }

    bool is_zero() const { return terms.empty(); }

    void normalize() {
        for (auto& t : terms) t.sort_parts();
        std::sort(terms.begin(), terms.end(),
                  [](const Term& x, const Term& y) { return x.body_key() < y.body_key(); });
        std::vector<Term> out;
        for (auto& t : terms) {
            if (t.coef == 0) continue;
            if (!out.empty() && out.back().body_key() == t.body_key()) out.back().coef += t.coef;
            else out.push_back(std::move(t));
            if (!out.empty() && out.back().coef == 0) out.pop_back();
        }
        terms = std::move(out);
    }

    FormalExpr operator+(const FormalExpr& o) const {
        FormalExpr r;
        r.terms = terms;
        r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
        r.normalize();
        return r;
    }
    FormalExpr operator-(const FormalExpr& o) const { return *this + o * Rational(-1); }

    FormalExpr operator*(const Rational& c) const {
        FormalExpr r = *this;
        for (auto& t : r.terms) t.coef *= c;
        r.normalize();
        return r;
    }

    FormalExpr operator*(const FormalExpr& o) const {
        FormalExpr r;
        for (const auto& s : terms)
            for (const auto& t : o.terms) {
                Term u;
                u.coef = s.coef * t.coef;
                u.consts = s.consts;
                u.consts.insert(u.consts.end(), t.consts.begin(), t.consts.end());
                u.forms = s.forms;
                u.forms.insert(u.forms.end(), t.forms.begin(), t.forms.end());
                r.terms.push_back(std::move(u));
            }
        r.normalize();
        return r;
    }

    bool operator==(const FormalExpr& o) const {
        if (terms.size() != o.terms.size()) return false;
        for (size_t i = 0; i < terms.size(); ++i) {
            if (!(terms[i].coef == o.terms[i].coef)) return false;
            if (terms[i].body_key() != o.terms[i].body_key()) return false;
        }
        return true;
    }

    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        for (size_t i = 0; i < terms.size(); ++i) {
            const auto& t = terms[i];
            if (i) os << " + ";
            os << t.coef.str();
            for (const auto& c : t.consts) os << " <" << c.key() << ">";
            for (const auto& f : t.forms) os << " " << f->key;
        }
        return os.str();
    }
};

// ---------------------------------------------------------------------------
// Slash action.  Everything is driven by the single-letter difference law
// e |-> e|(l - 1); letters extend to words by composition (right action) and
// to the group ring by linearity.
// ---------------------------------------------------------------------------

inline FormalExpr slash_diff_letter(const FormalExpr& e, int le);

namespace detail {

// <f_j, letter> for a cuspidal label j (j < 0 = conjugated), additive normal
// form: exponent folded into the sign, parabolic letters vanish.
inline FormalExpr cusp_period_expr(int label, int le) {
    if (is_parabolic_letter(le)) return FormalExpr::zero();
    Term t;
    if (le < 0) { t.coef = -1; le = -le; }
    PeriodFactor p;
    p.label = label;
    p.letter = le;
    t.consts.push_back(p);
    return FormalExpr::from_term(std::move(t));
}

// <f_{g+i}, letter>: additive, but parabolic letters stay as (possibly
// nonzero) formal constants
inline FormalExpr eis_period_expr(int label, int le) {
    Term t;
    if (le < 0) { t.coef = -1; le = -le; }
    PeriodFactor p;
    p.eis = true;
    p.label = label;
    p.letter = le;
    t.consts.push_back(p);
    return FormalExpr::from_term(std::move(t));
}

inline FormalExpr conj_consts(const FormalExpr& e) {
    FormalExpr r = e;
    for (auto& t : r.terms) {
        if (!t.forms.empty()) throw domain_error("conj_consts: expected a constant expression");
        for (auto& c : t.consts) c = conj_factor(c);
    }
    r.normalize();
    return r;
}

FormalExpr product_diff(const std::vector<AtomPtr>& forms, int le);

// The integral constant attached to a weight-2 integrand over the path from
// the basepoint to its letter-translate.  Single cusp-form or Eisenstein
// integrands reduce to period symbols; inverse letters are rewritten through
// the integrand's own slash expansion so that only positive letters remain.
inline FormalExpr integral_period_expr(const std::vector<AtomPtr>& integrand, int le,
                                       bool conj, int bp) {
    if (integrand.empty()) throw domain_error("integral_period_expr: empty integrand");
    if (integrand.size() == 1 && integrand[0]->kind == AtomKind::F && integrand[0]->order == 1) {
        int j = integrand[0]->idx[0];
        return cusp_period_expr(conj ? -j : j, le);
    }
    if (integrand.size() == 1 && integrand[0]->kind == AtomKind::Eis) {
        if (conj) throw domain_error("conjugated Eisenstein integrand not modeled");
        return eis_period_expr(integrand[0]->idx[0], le);
    }
    if (le > 0) {
        Term t;
        PeriodFactor p;
        p.composite = true;
        p.conj = conj;
        p.bp = bp;
        std::string pl;
        for (const auto& a : integrand) pl += a->key + "*";
        p.payload = pl;
        p.letter = le;
        t.consts.push_back(p);
        return FormalExpr::from_term(std::move(t));
    }
    // Pi_X(l^{-1}) = -Pi_X(l) - Pi_{X|(l-1)}(l^{-1})
    FormalExpr base = integral_period_expr(integrand, -le, conj, bp);
    FormalExpr corr = FormalExpr::zero();
    FormalExpr dX = product_diff(integrand, -le);
    for (const auto& t : dX.terms) {
        FormalExpr pi = integral_period_expr(t.forms, le, conj, bp);
        Term ct;
        ct.coef = t.coef;
        ct.consts = t.consts;
        FormalExpr cexpr = FormalExpr::from_term(std::move(ct));
        if (conj) cexpr = conj_consts(cexpr);
        corr = corr + cexpr * pi;
    }
    return base * Rational(-1) - corr;
}

// antiderivative of a normalized weight-2 expression from the basepoint;
// linear, constants pulled out
inline FormalExpr antideriv_expr(const FormalExpr& e, int bp) {
    FormalExpr r;
    for (const auto& t : e.terms) {
        if (t.forms.empty()) throw domain_error("antideriv_expr: constant integrand");
        Term u;
        u.coef = t.coef;
        u.consts = t.consts;
        u.forms.push_back(atom_int(t.forms, bp));
        r.terms.push_back(std::move(u));
    }
    r.normalize();
    return r;
}

inline FormalExpr atom_diff(const AtomPtr& a, int le) {
    FormalExpr r = FormalExpr::zero();
    switch (a->kind) {
        case AtomKind::Eis:
        case AtomKind::P:
            return r;
        case AtomKind::F: {
            int t = (int)a->idx.size();
            if (t == 1) return r;
            for (int cut = 1; cut <= t - 1; ++cut) {
                std::vector<int> pre(a->idx.begin(), a->idx.begin() + cut);
                std::vector<AtomPtr> suf = {atom_F({a->idx.begin() + cut, a->idx.end()})};
                r = r + integral_period_expr(suf, le, false, 0) * FormalExpr::from_atom(atom_F(pre));
            }
            return r;
        }
        case AtomKind::Z: {
            int t = (int)a->idx.size();
            for (int cut = 1; cut <= t - 1; ++cut) {
                std::vector<int> pre_abs;
                for (int i = 0; i < cut; ++i) pre_abs.push_back(std::abs(a->idx[i]));
                std::vector<AtomPtr> integrand = {atom_F(pre_abs)};
                std::vector<int> suf(a->idx.begin() + cut, a->idx.end());
                AtomPtr rest = (suf.size() >= 2) ? atom_Z(suf) : atom_f(suf[0]);
                r = r + integral_period_expr(integrand, le, true, 0) * FormalExpr::from_atom(rest);
            }
            return r;
        }
        case AtomKind::Y: {
            int q = (int)a->idx.size();
            for (int cut = 1; cut <= q; ++cut) {
                std::vector<int> pre_abs;
                for (int i = 0; i < cut; ++i) pre_abs.push_back(std::abs(a->idx[i]));
                std::vector<AtomPtr> integrand = {atom_F(pre_abs)};
                std::vector<int> suf(a->idx.begin() + cut, a->idx.end());
                AtomPtr rest = atom_Y(suf, a->m, a->weight);
                r = r + integral_period_expr(integrand, le, true, 0) * FormalExpr::from_atom(rest);
            }
            return r;
        }
        case AtomKind::Int: {
            FormalExpr c = integral_period_expr(a->payload, le, false, a->bp);
            FormalExpr dpl = product_diff(a->payload, le);
            if (!dpl.is_zero()) c = c + antideriv_expr(dpl, a->bp);
            return c;
        }
        case AtomKind::Opq: {
            // annihilated once `order` differences have been applied
            std::vector<int> ap = a->applied;
            ap.push_back(le);
            if ((int)ap.size() >= a->order) return FormalExpr::zero();
            return FormalExpr::from_atom(atom_opaque(a->tag, a->weight, a->order, std::move(ap)));
        }
    }
    return r;
}

// (A_1 ... A_p)|(l-1) via subset expansion of the product rule
inline FormalExpr product_diff(const std::vector<AtomPtr>& forms, int le) {
    size_t p = forms.size();
    std::vector<FormalExpr> diffs(p);
    for (size_t i = 0; i < p; ++i) diffs[i] = atom_diff(forms[i], le);
    FormalExpr r = FormalExpr::zero();
    for (size_t mask = 1; mask < (size_t(1) << p); ++mask) {
        FormalExpr piece = FormalExpr::constant(1);
        bool dead = false;
        for (size_t i = 0; i < p && !dead; ++i) {
            if (mask & (size_t(1) << i)) {
                if (diffs[i].is_zero()) { dead = true; break; }
                piece = piece * diffs[i];
            } else {
                piece = piece * FormalExpr::from_atom(forms[i]);
            }
        }
        if (!dead) r = r + piece;
    }
    return r;
}

}  // namespace detail

inline FormalExpr slash_diff_letter(const FormalExpr& e, int le) {
    FormalExpr r = FormalExpr::zero();
    for (const auto& t : e.terms) {
        if (t.forms.empty()) continue;  // constants are invariant
        Term head;
        head.coef = t.coef;
        head.consts = t.consts;
        r = r + FormalExpr::from_term(std::move(head)) * detail::product_diff(t.forms, le);
    }
    return r;
}

inline FormalExpr slash_letter(const FormalExpr& e, int le) {
    return e + slash_diff_letter(e, le);
}

inline FormalExpr slash_word(const FormalExpr& e, const FormalWord& w) {
    FormalExpr r = e;
    for (int le : w.ls) r = slash_letter(r, le);
    return r;
}

// e|(w - 1)
inline FormalExpr slash_diff_word(const FormalExpr& e, const FormalWord& w) {
    return slash_word(e, w) - e;
}

// e|(w_1 - 1)(w_2 - 1)...(w_s - 1)
inline FormalExpr slash_diff_chain(const FormalExpr& e, std::span<const FormalWord> ws) {
    FormalExpr r = e;
    for (const auto& w : ws) r = slash_diff_word(r, w);
    return r;
}

inline FormalExpr slash_diff_chain(const FormalExpr& e, std::initializer_list<int> letters) {
    FormalExpr r = e;
    for (int le : letters) r = slash_diff_word(r, FormalWord::letter(le));
    return r;
}

// <f_j, w> with the additive normal form in w
inline FormalExpr period_symbol(int label, const FormalWord& w, bool eisenstein = false) {
    FormalExpr r = FormalExpr::zero();
    for (int le : w.ls)
        r = r + (eisenstein ? detail::eis_period_expr(label, le)
                            : detail::cusp_period_expr(label, le));
    return r;
}

}  // namespace hof
