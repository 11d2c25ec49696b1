#pragma once

#include "segedit/core/error.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace segedit {

struct EditInstruction {
    std::string source_prompt; // what to find
    std::string target_prompt; // what to paint in its place

    // Both prompts must be non-blank; throws InvalidArgument.
    void validate() const;
    friend bool operator==(EditInstruction const&, EditInstruction const&) = default;
};

class ParseError : public Error {
  public:
    enum class Kind { syntax, empty_clause };

    // line and column are 1-based; columns count code points.
    ParseError(Kind kind, int line, int column, std::string expected, std::string found);

    Kind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }
    std::string const& expected() const { return expected_; }
    std::string const& found() const { return found_; }

  private:
    Kind kind_;
    int line_;
    int column_;
    std::string expected_;
    std::string found_;
};

/// Parses an edit script:
///
///   script := clause (";" clause)* [";"]
///   clause := "replace" phrase "with" phrase
///
/// Keywords are case-insensitive. A phrase is one or more words (any
/// non-space UTF-8 text without ';'); "\with" puts a literal "with" in a
/// phrase. Words in a phrase are re-joined with single spaces.
std::vector<EditInstruction> parse_instructions(std::string_view script);

// Canonical script text; parse_instructions(render_instructions(v)) == v for
// any v produced by the parser.
std::string render_instructions(std::span<EditInstruction const> instructions);

} // namespace segedit
