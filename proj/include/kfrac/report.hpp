#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "kfrac/verdict.hpp"

namespace kfrac {

using Json = nlohmann::ordered_json;

// Finite doubles as numbers; inf and nan as the strings "inf", "-inf", "nan".
Json num(double v);

struct Report {
    std::string command;
    Json meta = Json::object();
    std::vector<Json> values;  // flat objects, each with a "name"
    std::vector<Verdict> verdicts;

    bool pass() const;
    void add(Verdict v) { verdicts.push_back(std::move(v)); }
};

std::string to_json_text(const Report& r);
// Header is the union of row keys in first-seen order; floats with %.17g.
std::string to_csv_text(const Report& r);
// <dir>/<command>.json and .csv, each written to a temporary file and renamed.
void write_report(const Report& r, const std::filesystem::path& dir);
void write_atomic(const std::filesystem::path& path, const std::string& text);

// One line per verdict: PASS/FAIL name: lhs relation rhs (tol) margin.
std::string summary_line(const Verdict& v);

}  // namespace kfrac
