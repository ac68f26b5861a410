#pragma once

#include <hof/common.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <map>
#include <string>
#include <vector>

namespace hof {

struct CaseResult {
    std::string name;
    bool pass = true;
    bool exact = true;      // exact symbolic check (no residual attached)
    double residual = 0.0;  // max relative residual for numeric checks
    std::string lhs, rhs;   // excerpts, filled on failure
};

// Structured outcome of one verification suite.  The JSON body is stable and
// timestamp-free; wall time is only shown in the text rendering.
struct VerificationReport {
    std::string suite;
    std::string anchor;  // identity label, e.g. "(3.6)" or "lemma-3.10"
    std::map<std::string, std::string> params;
    std::vector<CaseResult> cases;
    double tolerance = 0.0;  // 0 for exact suites
    double wall_ms = 0.0;

    void add_exact(const std::string& name, bool ok,
                   const std::string& lhs = "", const std::string& rhs = "") {
        CaseResult c;
        c.name = name;
        c.pass = ok;
        c.exact = true;
        if (!ok) { c.lhs = lhs; c.rhs = rhs; }
        cases.push_back(std::move(c));
    }
    void add_numeric(const std::string& name, double residual, double tol,
                     const std::string& lhs = "", const std::string& rhs = "") {
        CaseResult c;
        c.name = name;
        c.exact = false;
        c.residual = residual;
        c.pass = residual <= tol;
        if (!c.pass) { c.lhs = lhs; c.rhs = rhs; }
        cases.push_back(std::move(c));
    }

    bool pass() const {
        for (const auto& c : cases)
            if (!c.pass) return false;
        return true;
    }
    bool exact() const {
        for (const auto& c : cases)
            if (!c.exact) return false;
        return true;
    }
    double max_residual() const {
        double r = 0;
        for (const auto& c : cases) r = std::max(r, c.residual);
        return r;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["anchor"] = anchor;
        j["params"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : params) j["params"][k] = v;
        j["tolerance"] = tolerance;
        j["cases"] = nlohmann::ordered_json::array();
        nlohmann::ordered_json failures = nlohmann::ordered_json::array();
        for (const auto& c : cases) {
            nlohmann::ordered_json jc;
            jc["name"] = c.name;
            jc["pass"] = c.pass;
            if (c.exact) jc["exact"] = true;
            else jc["residual"] = c.residual;
            j["cases"].push_back(jc);
            if (!c.pass) {
                nlohmann::ordered_json jf;
                jf["case"] = c.name;
                jf["lhs"] = c.lhs;
                jf["rhs"] = c.rhs;
                failures.push_back(jf);
            }
        }
        j["failures"] = failures;
        j["n_cases"] = cases.size();
        j["max_residual"] = max_residual();
        j["exact"] = exact();
        j["pass"] = pass();
        return j;
    }

    std::string text() const {
        std::string s = suite + " [" + anchor + "]";
        for (const auto& [k, v] : params) s += " " + k + "=" + v;
        s += "\n";
        for (const auto& c : cases) {
            s += std::string("  ") + (c.pass ? "pass" : "FAIL") + "  " + c.name;
            if (!c.exact) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "  residual=%.3e", c.residual);
                s += buf;
            }
            s += "\n";
            if (!c.pass && (!c.lhs.empty() || !c.rhs.empty()))
                s += "        lhs: " + c.lhs + "\n        rhs: " + c.rhs + "\n";
        }
        char buf[128];
        if (cases.empty())
            s += "  pass (vacuous), 0 cases\n";
        std::snprintf(buf, sizeof buf, "  => %s, %zu case(s), max residual %.3e, %.1f ms\n",
                      pass() ? "PASS" : "FAIL", cases.size(), max_residual(), wall_ms);
        s += buf;
        return s;
    }
};

class WallTimer {
  public:
    WallTimer() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace hof
