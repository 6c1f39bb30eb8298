#ifndef UNITRAT_PARSER_HPP
#define UNITRAT_PARSER_HPP

#include "unitrat/unitproduct.hpp"

namespace unitrat {

class parse_error : public std::invalid_argument {
public:
    parse_error(const std::string& msg, size_t line, size_t col)
        : std::invalid_argument(msg + " at line " + std::to_string(line) + ", column " +
                                std::to_string(col)),
          line_(line), col_(col) {}
    size_t line() const { return line_; }
    size_t col() const { return col_; }

private:
    size_t line_, col_;
};

/// Parsed sum of unit-product fractions. Variables are x1..xd with d
/// inferred from the largest index appearing anywhere in the input.
struct RationalExpr {
    size_t dim = 0;
    std::vector<UnitProductRational> terms;
    std::string source;
};

/// Grammar: input := frac (('+'|'-') frac)*; frac := poly ['/' denom];
/// denom := dfactor {'*' dfactor}; dfactor := '(' '1' '-' [coef '*'] mono ')'
/// ['^' nat]. Whitespace-insensitive; errors carry line/column; non-unit-
/// product denominators are rejected with an explanation.
RationalExpr parse(const std::string& text);

std::string print(const RationalExpr& expr);

} // namespace unitrat

#endif
