#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace urnlab {

/// key=value arguments of a spec or law descriptor such as
/// "kind=binomial c=1 alpha=0.3". Tokens are separated by whitespace or commas.
class DescriptorArgs {
 public:
  explicit DescriptorArgs(std::string_view text);

  const std::string& kind() const { return kind_; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double number(const std::string& key, double fallback) const;
  double number(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  /// Raises if any key other than `kind` and `allowed` was given.
  void allow_only(const std::set<std::string>& allowed) const;

 private:
  std::string text_;
  std::string kind_;
  std::map<std::string, std::string> values_;
};

std::string format_number(double v);

}  // namespace urnlab
