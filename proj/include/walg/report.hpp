#pragma once

#include <string>
#include <vector>

#include "walg/check.hpp"
#include "walg/errors.hpp"
#include "walg/lie.hpp"

namespace walg {

struct ReportRecord {
    std::string name;
    std::string anchor;  // the statement this record verifies
    bool pass = true;
    nlohmann::json data = nlohmann::json::object();
    std::string witness;
};

/// Ordered check records plus named data sections. The JSON form carries no timings, so it is
/// byte-identical across runs with the same input.
class Report {
public:
    explicit Report(std::string title) : title_(std::move(title)) {}

    void add(const std::string& anchor, const CheckRecord& c);
    void add(const std::string& anchor, const std::vector<CheckRecord>& cs);
    void add_items(const std::string& anchor, const std::vector<ValidationItem>& items);
    /// A failed record whose witness is the error text.
    void add_error(const std::string& anchor, const std::string& name, const WalgError& e);
    void section(const std::string& key, nlohmann::json value) { sections_[key] = std::move(value); }
    void timing(const std::string& stage, double seconds) { timings_.emplace_back(stage, seconds); }
    void merge(const Report& other);

    bool all_pass() const;
    const std::vector<ReportRecord>& records() const { return records_; }
    nlohmann::json to_json() const;
    /// One line per record, then the failures' witnesses and stage timings.
    std::string to_text() const;

private:
    std::string title_;
    std::vector<ReportRecord> records_;
    nlohmann::json sections_ = nlohmann::json::object();
    std::vector<std::pair<std::string, double>> timings_;
};

} // namespace walg
