// hof: verification workbench for spaces of higher-order cusp forms.
//
// Subcommands: dims, shuffles, qseries, verify symbolic, verify numeric,
// poincare.  Exit codes: 0 pass, 1 verification failure, 2 usage/config
// error.

#include <hof/basis.hpp>
#include <hof/group_io.hpp>
#include <hof/index_sets.hpp>
#include <hof/numeric_checks.hpp>
#include <hof/period_cache.hpp>
#include <hof/poincare.hpp>
#include <hof/qseries.hpp>
#include <hof/report.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace hof;

namespace {

const std::string kDataDir = HOF_DATA_DIR;

Complex parse_complex(const std::string& s) {
    // RE or RE+IMi / RE-IMi
    if (s.empty()) throw config_error("empty complex literal");
    size_t split = std::string::npos;
    for (size_t i = 1; i < s.size(); ++i)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    if (s.back() == 'i' && split != std::string::npos) {
        double re = std::stod(s.substr(0, split));
        std::string ims = s.substr(split, s.size() - split - 1);
        double im = (ims == "+" ? 1.0 : ims == "-" ? -1.0 : std::stod(ims));
        return {re, im};
    }
    if (s.back() == 'i') {
        std::string ims = s.substr(0, s.size() - 1);
        return {0.0, ims.empty() ? 1.0 : std::stod(ims)};
    }
    return {std::stod(s), 0.0};
}

std::string cache_path() {
    if (const char* p = std::getenv("HOF_CACHE")) return p;
    return "hof_periods.jsonl";
}

int emit(const VerificationReport& rep, bool json) {
    if (json)
        std::cout << rep.to_json().dump(2) << "\n";
    else
        std::cout << rep.text();
    return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for higher-order cusp form classification data"};
    app.require_subcommand(1);
    unsigned seed = 42;
    bool json = false;

    // ---- dims ----
    auto* dims = app.add_subcommand("dims", "dimension of S_k^t / S_k^{t-1}");
    int d_g = 1, d_t = 1, d_weight = 2;
    std::int64_t d_dimsk = -1;
    bool d_table = false;
    dims->add_option("--genus", d_g, "genus g")->required();
    dims->add_option("--t", d_t, "order t");
    dims->add_option("--weight", d_weight, "even weight (default 2)");
    dims->add_option("--dim-sk", d_dimsk, "dim S_k for weights >= 4");
    dims->add_flag("--table", d_table, "print the t x g table");

    // ---- shuffles ----
    auto* shuf = app.add_subcommand("shuffles", "shuffles of type (r, t)");
    int s_r = 1, s_t = 1;
    bool s_verify = false;
    shuf->add_option("--r", s_r)->required();
    shuf->add_option("--t", s_t)->required();
    shuf->add_flag("--verify-lemma", s_verify, "check the product expansion against the shuffle sum");
    shuf->add_flag("--json", json);

    // ---- qseries ----
    auto* qs = app.add_subcommand("qseries", "evaluate a coefficient file");
    std::string q_file = kDataDir + "/newform_11_2.txt", q_eval;
    int q_terms = 200;
    qs->add_option("--file", q_file, "coefficient file");
    qs->add_option("--eval", q_eval, "point x+yi")->required();
    qs->add_option("--terms", q_terms, "truncation order");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "verification suites");
    verify->require_subcommand(1);

    auto* vsym = verify->add_subcommand("symbolic", "exact symbolic suites");
    std::string suite;
    int v_g = 2, v_t = 4;
    vsym->add_option("--suite", suite, "flaw | lemma310 | lemma38 | zbasis | ybasis | independence")
        ->required();
    vsym->add_option("--g", v_g, "genus bound");
    vsym->add_option("--t", v_t, "order bound");
    vsym->add_flag("--json", json);

    auto* vnum = verify->add_subcommand("numeric", "numeric suites on the configured group");
    int n_level = 11, n_t = 2, n_trials = 10, n_terms = 200;
    double n_tol = -1.0;
    std::string n_group = kDataDir + "/gamma0_11.json";
    std::string n_coeffs = kDataDir + "/newform_11_2.txt";
    std::string n_suite = "cocycle";
    vnum->add_option("--level", n_level, "group level (config must match)");
    vnum->add_option("--suite", n_suite, "cocycle | annihilation | periods | growth");
    vnum->add_option("--t", n_t, "iteration order");
    vnum->add_option("--trials", n_trials, "sample count");
    vnum->add_option("--terms", n_terms, "Fourier truncation");
    vnum->add_option("--seed", seed, "sampling seed");
    vnum->add_option("--tol", n_tol, "residual tolerance");
    vnum->add_option("--group", n_group, "group config path");
    vnum->add_option("--coeffs", n_coeffs, "coefficient file path");
    vnum->add_flag("--json", json);

    // ---- poincare ----
    auto* poin = app.add_subcommand("poincare", "identity checks in the convergence region");
    std::string p_check, p_s = "3.0";
    int p_k = 2, p_m = 0, p_n = 1, p_level = 11;
    std::int64_t p_cmax = 200;
    double p_tol = 1e-4;
    std::string p_group = kDataDir + "/gamma0_11.json";
    poin->add_option("--check", p_check, "3.1 | 3.6 | 3.7 | RnE | 3.2")->required();
    poin->add_option("--level", p_level);
    poin->add_option("--s", p_s, "spectral parameter, RE[+IMi]");
    poin->add_option("--k", p_k, "weight");
    poin->add_option("--m", p_m, "Fourier index");
    poin->add_option("--n", p_n, "raising power for RnE");
    poin->add_option("--cmax", p_cmax, "coset truncation");
    poin->add_option("--tol", p_tol, "residual tolerance");
    poin->add_option("--group", p_group, "group config path");
    poin->add_flag("--json", json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (dims->parsed()) {
            if (d_table) {
                if (d_weight == 2) {
                    std::cout << "dim(S_2^t/S_2^{t-1}) for g = 1..5\n";
                    for (int t = 1; t <= 5; ++t) {
                        std::cout << "t=" << t << ":";
                        for (int g = 1; g <= 5; ++g) std::cout << " " << dim_quotient(g, t, 2);
                        std::cout << "\n";
                    }
                } else {
                    BigInt dsk = d_dimsk < 0 ? 1 : BigInt(d_dimsk);
                    std::cout << "dim(S_k^t/S_k^{t-1}) / dim(S_k) multipliers, g = 1..5\n";
                    for (int t = 2; t <= 5; ++t) {
                        std::cout << "t=" << t << ":";
                        for (int g = 1; g <= 5; ++g)
                            std::cout << " " << dim_quotient(g, t, d_weight, dsk);
                        std::cout << "\n";
                    }
                }
                return 0;
            }
            BigInt dsk = d_dimsk < 0 ? 1 : BigInt(d_dimsk);
            if (d_weight >= 4 && d_dimsk < 0)
                throw config_error("--dim-sk is required for weights >= 4");
            std::cout << dim_quotient(d_g, d_t, d_weight, dsk) << "\n";
            return 0;
        }

        if (shuf->parsed()) {
            if (s_verify) {
                auto rep = verify_lemma_3_10(s_t);
                return emit(rep, json);
            }
            auto sh = enumerate_shuffles(s_r, s_t);
            std::cout << sh.size() << " shuffle(s) of type (" << s_r << ", " << s_t << ")\n";
            for (const auto& s : sh) {
                std::cout << "  phi: [";
                for (size_t i = 0; i < s.phi.size(); ++i) std::cout << (i ? "," : "") << s.phi[i];
                std::cout << "]  psi: [";
                for (size_t i = 0; i < s.psi.size(); ++i) std::cout << (i ? "," : "") << s.psi[i];
                std::cout << "]\n";
            }
            return 0;
        }

        if (qs->parsed()) {
            auto lf = load_newform(q_file, q_terms);
            for (const auto& w : lf.warnings) std::cerr << "warning: " << w << "\n";
            Complex z = parse_complex(q_eval);
            auto ev = evaluate(lf.series, z);
            std::cout << "value = " << ev.value.real() << (ev.value.imag() < 0 ? " - " : " + ")
                      << std::abs(ev.value.imag()) << "i   tail <= " << ev.tail << "\n";
            return 0;
        }

        if (vsym->parsed()) {
            VerificationReport rep;
            if (suite == "flaw") rep = verify_F_law(std::min(v_g, 2), std::min(v_t, 4));
            else if (suite == "lemma310") rep = verify_lemma_3_10(v_t);
            else if (suite == "lemma38") rep = verify_lemma_3_8(v_g, v_t);
            else if (suite == "zbasis") rep = verify_Z_basis(v_g, v_t);
            else if (suite == "ybasis") rep = verify_Y_basis(v_g, v_t);
            else if (suite == "independence") rep = verify_independence_witness(v_g, v_t);
            else throw config_error("unknown symbolic suite: " + suite);
            return emit(rep, json);
        }

        if (vnum->parsed()) {
            auto G = load_group_config(n_group);
            if (G.level != n_level)
                throw config_error("--level does not match the group config");
            auto lf = load_newform(n_coeffs, n_terms);
            for (const auto& w : lf.warnings) std::cerr << "warning: " << w << "\n";
            PeriodEngine E(std::move(G), std::move(lf.series), n_terms);
            VerificationReport rep;
            if (n_suite == "cocycle") {
                double tol = n_tol > 0 ? n_tol : (n_t <= 1 ? 1e-10 : n_t == 2 ? 1e-8 : 1e-6);
                rep = verify_numeric_cocycle(E, n_t, n_trials, seed, tol);
            } else if (n_suite == "annihilation") {
                double tol = n_tol > 0 ? n_tol : (n_t <= 2 ? 1e-8 : 1e-6);
                rep = verify_numeric_annihilation(E, n_t, tol);
            } else if (n_suite == "periods") {
                rep = verify_period_structure(E, n_trials, seed, n_tol > 0 ? n_tol : 1e-9);
            } else if (n_suite == "growth") {
                rep = growth_probe(E, n_t, seed);
            } else {
                throw config_error("unknown numeric suite: " + n_suite);
            }
            PeriodCache cache(cache_path());
            for (const auto& r : E.drain_records()) cache.insert(r);
            cache.save();
            return emit(rep, json);
        }

        if (poin->parsed()) {
            auto G = load_group_config(p_group);
            if (G.level != p_level)
                throw config_error("--level does not match the group config");
            PoincareLab lab(G);
            PoincareParams P;
            P.s = parse_complex(p_s);
            P.k = p_k;
            P.m = p_m;
            P.n = p_n;
            P.c_max = p_cmax;
            P.tol = p_tol;
            PoincareIdentity which;
            if (p_check == "3.1") which = PoincareIdentity::Eq3_1;
            else if (p_check == "3.6") which = PoincareIdentity::Eq3_6;
            else if (p_check == "3.7") which = PoincareIdentity::Eq3_7;
            else if (p_check == "RnE") which = PoincareIdentity::RnE;
            else if (p_check == "3.2") which = PoincareIdentity::Eq3_2;
            else throw config_error("unknown identity: " + p_check);
            auto rep = check_identity(lab, which, P);
            return emit(rep, json);
        }
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
