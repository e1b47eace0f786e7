#include "urnlab/descriptor.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "urnlab/error.hpp"

namespace urnlab {

namespace {

double to_double(const std::string& key, const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    raise(ErrorCode::InvalidArgument, "argument '" + key + "' is not a number: '" + s + "'");
  return v;
}

}  // namespace

DescriptorArgs::DescriptorArgs(std::string_view text) : text_(text) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',')
      ++j;
    const std::string token(text.substr(i, j - i));
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0)
      raise(ErrorCode::InvalidArgument, "expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    if (values_.count(key) || (key == "kind" && !kind_.empty()))
      raise(ErrorCode::InvalidArgument, "duplicate argument '" + key + "'");
    if (key == "kind") kind_ = token.substr(eq + 1);
    else values_[key] = token.substr(eq + 1);
    i = j;
  }
  if (kind_.empty()) raise(ErrorCode::InvalidArgument, "descriptor '" + text_ + "' has no kind");
}

double DescriptorArgs::number(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double(key, it->second);
}

double DescriptorArgs::number(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    raise(ErrorCode::InvalidArgument, "kind=" + kind_ + " requires argument '" + key + "'");
  return to_double(key, it->second);
}

std::vector<double> DescriptorArgs::numbers(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    raise(ErrorCode::InvalidArgument, "kind=" + kind_ + " requires argument '" + key + "'");
  std::vector<double> out;
  const std::string& s = it->second;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto bar = s.find('/', start);
    const auto piece = s.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
    out.push_back(to_double(key, piece));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

void DescriptorArgs::allow_only(const std::set<std::string>& allowed) const {
  for (const auto& [key, value] : values_)
    if (!allowed.count(key))
      raise(ErrorCode::InvalidArgument, "kind=" + kind_ + " does not accept argument '" + key + "'");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // Prefer the shortest form that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shortbuf[32];
    std::snprintf(shortbuf, sizeof shortbuf, "%.*g", prec, v);
    double back = 0.0;
    std::from_chars(shortbuf, shortbuf + std::char_traits<char>::length(shortbuf), back);
    if (back == v) return shortbuf;
  }
  return buf;
}

}  // namespace urnlab
