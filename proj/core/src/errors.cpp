#include "pnorm/errors.hpp"

namespace pnorm {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace pnorm
