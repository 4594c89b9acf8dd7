#include "kfrac/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kfrac/error.hpp"

namespace kfrac {

Json num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

bool Report::pass() const {
    for (const auto& v : verdicts)
        if (!v.pass) return false;
    return true;
}

namespace {

Json verdict_json(const Verdict& v) {
    Json j;
    j["name"] = v.name;
    j["pass"] = v.pass;
    j["relation"] = v.relation;
    j["lhs"] = num(v.lhs);
    j["rhs"] = num(v.rhs);
    j["tolerance"] = num(v.tolerance);
    j["margin"] = num(v.margin);
    return j;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return fmt(v.get<double>());
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

}  // namespace

std::string to_json_text(const Report& r) {
    Json j;
    j["meta"] = r.meta;
    j["meta"]["command"] = r.command;
    j["values"] = Json::array();
    for (const auto& row : r.values) j["values"].push_back(row);
    j["verdicts"] = Json::array();
    for (const auto& v : r.verdicts) j["verdicts"].push_back(verdict_json(v));
    j["pass"] = r.pass();
    return j.dump(2) + "\n";
}

std::string to_csv_text(const Report& r) {
    std::vector<std::string> cols;
    for (const auto& row : r.values)
        for (const auto& [k, v] : row.items())
            if (std::find(cols.begin(), cols.end(), k) == cols.end()) cols.push_back(k);
    std::string out;
    for (std::size_t c = 0; c < cols.size(); ++c) out += (c ? "," : "") + csv_field(cols[c]);
    out += "\r\n";
    for (const auto& row : r.values) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out += ",";
            if (row.contains(cols[c])) out += csv_field(row.at(cols[c]));
        }
        out += "\r\n";
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
        out << text;
        out.flush();
        if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

void write_report(const Report& r, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_atomic(dir / (r.command + ".json"), to_json_text(r));
    write_atomic(dir / (r.command + ".csv"), to_csv_text(r));
}

std::string summary_line(const Verdict& v) {
    return std::string(v.pass ? "PASS " : "FAIL ") + v.name + ": " + fmt(v.lhs) + " " + v.relation + " " + fmt(v.rhs) +
           " (tol " + fmt(v.tolerance) + ", margin " + fmt(v.margin) + ")";
}

}  // namespace kfrac
