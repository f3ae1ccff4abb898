#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fairprice::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kDataError = 1, kUsageError = 2 };

/// Runs the command line `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Plain-text `key=value` run record. `argv` entries replay the run.
class Manifest {
public:
    void add(std::string key, std::string value);
    std::string str() const;
    static Manifest parse(const std::string& text);

    std::vector<std::string> values(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

} // namespace fairprice::cli
