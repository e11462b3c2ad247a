#pragma once

#include <cstddef>
#include <deque>
#include <istream>
#include <string>
#include <vector>

namespace hofa::detail {

// Whitespace tokenizer over a text stream that remembers line numbers for
// diagnostics. '#' starts a comment running to end of line.
class TextReader {
 public:
  TextReader(std::istream& in, std::string source_name);

  bool at_end();
  int line() const { return line_; }

  std::string next_token(const std::string& what);
  int next_int(const std::string& what);
  long long next_int64(const std::string& what);
  double next_double(const std::string& what);

  // Tokens of the next non-empty line. Must be called on a line boundary.
  std::vector<std::string> next_line();
  // Number of tokens on the upcoming line without consuming it (0 at end).
  std::size_t peek_line_width();

  void expect_end();
  [[noreturn]] void error(const std::string& message) const;

 private:
  bool fill();

  std::istream& in_;
  std::string source_;
  std::deque<std::string> pending_;
  int line_ = 0;
  bool line_fresh_ = false;  // pending_ holds a whole, untouched line
};

}  // namespace hofa::detail
