#include "text_reader.h"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "hofa/error.h"

namespace hofa::detail {

TextReader::TextReader(std::istream& in, std::string source_name)
    : in_(in), source_(std::move(source_name)) {}

bool TextReader::fill() {
  std::string raw;
  while (pending_.empty()) {
    if (!std::getline(in_, raw)) return false;
    ++line_;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    std::string tok;
    while (ss >> tok) pending_.push_back(tok);
  }
  line_fresh_ = true;
  return true;
}

bool TextReader::at_end() { return pending_.empty() && !fill(); }

std::string TextReader::next_token(const std::string& what) {
  if (pending_.empty() && !fill()) {
    error("unexpected end of input while reading " + what);
  }
  std::string tok = std::move(pending_.front());
  pending_.pop_front();
  line_fresh_ = false;
  return tok;
}

long long TextReader::next_int64(const std::string& what) {
  const std::string tok = next_token(what);
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    error("expected integer for " + what + ", found '" + tok + "'");
  }
  return value;
}

int TextReader::next_int(const std::string& what) {
  const long long v = next_int64(what);
  if (v < -2147483647LL || v > 2147483647LL) error(what + " out of range");
  return static_cast<int>(v);
}

double TextReader::next_double(const std::string& what) {
  const std::string tok = next_token(what);
  char* end = nullptr;
  const double value = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty()) {
    error("expected number for " + what + ", found '" + tok + "'");
  }
  return value;
}

std::vector<std::string> TextReader::next_line() {
  if (!pending_.empty() && !line_fresh_) error("expected a line break before the next header");
  if (pending_.empty() && !fill()) return {};
  std::vector<std::string> tokens(pending_.begin(), pending_.end());
  pending_.clear();
  line_fresh_ = false;
  return tokens;
}

std::size_t TextReader::peek_line_width() {
  if (pending_.empty() && !fill()) return 0;
  return pending_.size();
}

void TextReader::expect_end() {
  if (!at_end()) error("unexpected trailing token '" + pending_.front() + "'");
}

void TextReader::error(const std::string& message) const {
  fail(ErrorCode::kParse, source_ + ":" + std::to_string(line_) + ": " + message);
}

}  // namespace hofa::detail
