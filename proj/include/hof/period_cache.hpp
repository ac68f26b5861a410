#pragma once

#include <hof/group.hpp>
#include <hof/periods.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <map>
#include <mutex>

namespace hof {

// JSON-lines period cache:
//   {"level": N, "label": "...", "gamma": [[a,b],[c,d]], "value": [re,im],
//    "y_used": ..., "tol": ...}
// Readers either miss or see a fully written record; the file is rewritten
// atomically (tmp + rename).
class PeriodCache {
  public:
    PeriodCache() = default;
    explicit PeriodCache(std::string path) : path_(std::move(path)) { load(); }

    const std::string& path() const { return path_; }

    std::optional<PeriodRecord> lookup(int level, const std::string& label,
                                       const GroupElement& g) const {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = map_.find(key(level, label, g));
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void insert(const PeriodRecord& r) {
        std::lock_guard<std::mutex> lk(mu_);
        map_[key(r.level, r.label, r.gamma)] = r;
        dirty_ = true;
    }

    size_t size() const {
        std::lock_guard<std::mutex> lk(mu_);
        return map_.size();
    }

    void save() const {
        std::lock_guard<std::mutex> lk(mu_);
        if (path_.empty() || !dirty_) return;
        std::string tmp = path_ + ".tmp";
        {
            std::ofstream out(tmp);
            if (!out) throw config_error("cannot write period cache: " + tmp);
            for (const auto& [k, r] : map_) {
                nlohmann::ordered_json j;
                j["level"] = r.level;
                j["label"] = r.label;
                j["gamma"] = {{r.gamma.a, r.gamma.b}, {r.gamma.c, r.gamma.d}};
                j["value"] = {r.value.real(), r.value.imag()};
                j["y_used"] = r.y_used;
                j["tol"] = r.tol;
                out << j.dump() << "\n";
            }
        }
        std::rename(tmp.c_str(), path_.c_str());
        dirty_ = false;
    }

  private:
    static std::string key(int level, const std::string& label, const GroupElement& g) {
        return std::to_string(level) + "|" + label + "|" + g.str();
    }

    void load() {
        std::ifstream in(path_);
        if (!in) return;  // absent cache is an empty cache
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded()) continue;  // partial trailing write
            PeriodRecord r;
            r.level = j.at("level").get<int>();
            r.label = j.at("label").get<std::string>();
            auto jg = j.at("gamma");
            r.gamma = GroupElement(jg.at(0).at(0).get<std::int64_t>(), jg.at(0).at(1).get<std::int64_t>(),
                                   jg.at(1).at(0).get<std::int64_t>(), jg.at(1).at(1).get<std::int64_t>());
            r.value = Complex(j.at("value").at(0).get<double>(), j.at("value").at(1).get<double>());
            r.y_used = j.at("y_used").get<double>();
            r.tol = j.at("tol").get<double>();
            map_[key(r.level, r.label, r.gamma)] = r;
        }
    }

    std::string path_;
    mutable std::mutex mu_;
    std::map<std::string, PeriodRecord> map_;
    mutable bool dirty_ = false;
};

}  // namespace hof
