#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "llbc/core.hpp"
#include "llbc/model.hpp"

namespace llbc {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, SourceSpan span,
             std::vector<std::string> expected = {})
      : std::runtime_error(what), span_(span), expected_(std::move(expected)) {}

  const SourceSpan& span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::vector<std::string> expected_;
};

struct ParseOptions {
  /// Accept `x.l.r` freshness paths. Source files never carry them; rendered
  /// reducer states do.
  bool allow_fresh_paths = false;
};

Program parse_program(std::string_view text,
                      const UnitRegistry& units = UnitRegistry::defaults(),
                      ParseOptions options = {});

Expression parse_expression(std::string_view text,
                            const UnitRegistry& units = UnitRegistry::defaults(),
                            ParseOptions options = {});

LinearType parse_type(std::string_view text,
                      const UnitRegistry& units = UnitRegistry::defaults());

/// Comma-separated type list, possibly empty.
std::vector<LinearType> parse_type_list(
    std::string_view text,
    const UnitRegistry& units = UnitRegistry::defaults());

/// A `.llbc` script: an optional `-- types: A1, A2, ...` header line
/// followed by one program.
struct Script {
  std::optional<std::vector<LinearType>> declared;
  Program program;
};

Script parse_script(std::string_view text,
                    const UnitRegistry& units = UnitRegistry::defaults());

Script load_script(const std::string& path,
                   const UnitRegistry& units = UnitRegistry::defaults());

}  // namespace llbc
