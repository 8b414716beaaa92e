#pragma once

#include <string>

#include "llbc/model.hpp"

namespace llbc {

// Concrete ASCII syntax with minimal parentheses. The parser accepts
// everything these produce (with fresh paths enabled for reducer output).

std::string render(const LinearType& type);
std::string render(const Expression& e);
std::string render(const Transaction& t);
std::string render(const Program& p);

}  // namespace llbc
