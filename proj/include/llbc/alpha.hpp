#pragma once

#include <string>

#include "llbc/model.hpp"

namespace llbc {

/// Equality up to a bijective renaming of addresses, scoped per box.
/// Interfaces are compared in order; pending transactions as a multiset,
/// each transaction with unordered sides.
bool alpha_equivalent(const Program& a, const Program& b);

/// Rendering with pending transactions (and their sides) sorted. Equal keys
/// imply equal programs up to transaction order.
std::string canonical_key(const Program& p);

}  // namespace llbc
