#include "walg/report.hpp"

#include <cstdio>
#include <sstream>

namespace walg {

void Report::add(const std::string& anchor, const CheckRecord& c) {
    records_.push_back({c.name, anchor, c.pass, c.data, c.witness});
}

void Report::add(const std::string& anchor, const std::vector<CheckRecord>& cs) {
    for (const auto& c : cs) add(anchor, c);
}

void Report::add_items(const std::string& anchor, const std::vector<ValidationItem>& items) {
    for (const auto& it : items) records_.push_back({it.name, anchor, it.pass, nlohmann::json::object(), it.witness});
}

void Report::add_error(const std::string& anchor, const std::string& name, const WalgError& e) {
    records_.push_back({name, anchor, false, {{"error", error_kind_name(e.kind())}}, e.what()});
}

void Report::merge(const Report& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
    for (auto it = other.sections_.begin(); it != other.sections_.end(); ++it) sections_[it.key()] = it.value();
    timings_.insert(timings_.end(), other.timings_.begin(), other.timings_.end());
}

bool Report::all_pass() const {
    for (const auto& r : records_)
        if (!r.pass) return false;
    return true;
}

nlohmann::json Report::to_json() const {
    nlohmann::json recs = nlohmann::json::array();
    int failed = 0;
    for (const auto& r : records_) {
        nlohmann::json j = {{"name", r.name}, {"anchor", r.anchor}, {"status", r.pass ? "pass" : "fail"}, {"data", r.data}};
        if (!r.witness.empty()) j["witness"] = r.witness;
        recs.push_back(std::move(j));
        failed += r.pass ? 0 : 1;
    }
    return {{"title", title_},
            {"records", recs},
            {"sections", sections_},
            {"summary", {{"total", records_.size()}, {"failed", failed}}}};
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "== " << title_ << " ==\n";
    std::size_t w = 0;
    for (const auto& r : records_) w = std::max(w, r.name.size());
    int failed = 0;
    for (const auto& r : records_) {
        os << (r.pass ? "PASS  " : "FAIL  ") << r.name << std::string(w + 2 - r.name.size(), ' ') << r.anchor << "\n";
        if (!r.pass) {
            ++failed;
            os << "      witness: " << r.witness << "\n";
        }
    }
    for (const auto& [stage, s] : timings_) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f s", s);
        os << "time  " << stage << ": " << buf << "\n";
    }
    os << records_.size() - failed << "/" << records_.size() << " checks passed\n";
    return os.str();
}

} // namespace walg
