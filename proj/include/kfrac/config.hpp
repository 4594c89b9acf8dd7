#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace kfrac {

// Flat `key = value` configuration with `#` comments. Keys are fixed; a key may be prefixed
// by a subcommand name ("inversion.frac.alphas") to override it for that subcommand only.
class Config {
public:
    static Config defaults();
    // defaults, then text
    static Config parse(std::string_view text, const std::string& origin = "<string>");
    static Config load(const std::filesystem::path& path);  // defaults, then the file

    void set(const std::string& key, const std::string& value);
    // Copy with the overrides of subcommand sub applied.
    Config scoped(const std::string& sub) const;

    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    long get_int(const std::string& key) const;
    std::vector<double> get_list(const std::string& key) const;
    bool is_auto(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    void apply(std::string_view text, const std::string& origin);

    std::map<std::string, std::string> kv_;
    std::map<std::string, std::map<std::string, std::string>> overrides_;
};

const std::vector<std::string>& subcommand_names();
std::string_view default_config_text();

}  // namespace kfrac
