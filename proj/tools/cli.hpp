#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ik::cli {

/// Exit statuses.
constexpr int kYes = 0;    // accept / true / found
constexpr int kNo = 1;     // reject / false / none
constexpr int kUsage = 2;  // usage, format or resource error

/// Bad command-line input discovered after parsing (unknown element, ...).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A `key: value` block followed by free-form lines.
class Report {
public:
  void field(const std::string& key, const std::string& value) {
    fields_.emplace_back(key, value);
  }
  void field(const std::string& key, std::size_t value) { field(key, std::to_string(value)); }
  void line(const std::string& text) { body_ << text << "\n"; }
  void text(const std::string& text) { body_ << text; }

  std::string str() const {
    std::ostringstream out;
    for (const auto& [k, v] : fields_) out << k << ": " << v << "\n";
    auto body = body_.str();
    if (!body.empty()) out << "\n" << body;
    return out.str();
  }

private:
  std::vector<std::pair<std::string, std::string>> fields_;
  std::ostringstream body_;
};

/// Contents of a file; throws UsageError when it cannot be read.
std::string slurp(const std::string& path);

struct LatticeArgs {
  std::string command;
  std::string file;
  std::vector<std::string> elements;  // a, b for construct and rs
  std::vector<std::string> filter, ideal;
  std::size_t gamma = 2, depth = 2;
};

int run_lattice(const LatticeArgs& args, Report& report);

}  // namespace ik::cli
