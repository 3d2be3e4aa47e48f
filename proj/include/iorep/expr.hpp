#ifndef IOREP_EXPR_HPP
#define IOREP_EXPR_HPP

#include "iorep/ratfun.hpp"

#include <stdexcept>
#include <string>

namespace iorep {

/// Parse/validation failure with a 1-based source position.
class ModelError : public std::runtime_error {
  public:
    ModelError(int line, int col, const std::string &msg)
        : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line, col;
};

/// Parse an arithmetic expression over the registry's variables.
/// Grammar: identifiers [A-Za-z][A-Za-z0-9_]* with trailing apostrophes
/// (derivative names), integer literals, + - * / ^ and parentheses.
RatFun parse_expression(const std::string &text, const RegistryPtr &reg, int line_no = 1,
                        int col_offset = 0);

} // namespace iorep

#endif
