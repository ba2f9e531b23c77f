#pragma once

#include <map>
#include <string>
#include <vector>

namespace bench {

// Flat key=value configuration: '#' starts a comment, blank lines are
// skipped, later assignments win. Values are read with typed getters that
// throw on malformed numbers. validate() rejects unknown keys so config
// typos fail loudly instead of silently using defaults.
class Config {
public:
    static Config from_file(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_str(const std::string& key, const std::string& def) const;
    double get_num(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_flag(const std::string& key, bool def) const;

    void validate(const std::vector<std::string>& allowed) const;
    const std::map<std::string, std::string>& items() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

// every key any preset or the CLI understands
const std::vector<std::string>& known_config_keys();

}  // namespace bench
