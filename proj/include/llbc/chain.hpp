#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "llbc/model.hpp"

namespace llbc::chain {

struct Transfer {
  std::string from;
  std::string to;
  std::int64_t amount = 0;
  std::string unit;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

struct Block {
  std::vector<Transfer> transfers;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Blocks are stored newest first; the last block is the genesis block.
struct Chain {
  std::vector<Block> blocks;

  std::size_t height() const { return blocks.size(); }
  friend bool operator==(const Chain&, const Chain&) = default;
};

using AddressSet = std::set<std::string>;

class HeightMismatch : public std::runtime_error {
 public:
  HeightMismatch(std::size_t h1, std::size_t h2)
      : std::runtime_error("chain heights differ: " + std::to_string(h1) +
                           " vs " + std::to_string(h2)),
        h1_(h1),
        h2_(h2) {}
  std::size_t first() const { return h1_; }
  std::size_t second() const { return h2_; }

 private:
  std::size_t h1_, h2_;
};

class IsolationError : public std::runtime_error {
 public:
  explicit IsolationError(AddressSet shared);
  const AddressSet& shared() const { return shared_; }

 private:
  AddressSet shared_;
};

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AddressSet addresses(const Block& b);
AddressSet addresses(const Chain& c);

bool isolated(const Chain& c1, const Chain& c2);

/// Same-height blocks are pairwise disjoint. Weaker than `isolated`: spends
/// at different heights may still interfere. Throws HeightMismatch.
bool blockwise_isolated(const Chain& c1, const Chain& c2);

/// Block-by-block concatenation. A shorter chain is padded with empty
/// blocks at its newest end, so the genesis blocks line up.
Chain zip(const Chain& c1, const Chain& c2);

/// zip, after checking the address spaces are disjoint. Throws
/// IsolationError naming every shared address.
Chain compose_verify(const Chain& c1, const Chain& c2);

struct Rewired {
  Chain chain;
  std::map<std::string, std::string> left;   // c1 address -> "0" + address
  std::map<std::string, std::string> right;  // c2 address -> "1" + address
};

/// Tags every address of c1 with "0" and of c2 with "1", then zips. The two
/// images are always isolated.
Rewired compose_rewire(const Chain& c1, const Chain& c2);

/// Renames every address of the chain through `map`; unmapped addresses
/// are kept.
Chain relabel(const Chain& c, const std::map<std::string, std::string>& map);

/// `(to1, to2, ...){ txn(to, amount . unit); ... }` with one transaction per
/// transfer and each receiving address listed once, in order of first use.
Program chain_to_program(const Chain& c);

Chain chain_from_json(const std::string& text);
/// Two-space indented JSON with a trailing newline. Keys keep the order
/// from, to, amount, unit.
std::string chain_to_json(const Chain& c);

Chain load_chain(const std::string& path);

}  // namespace llbc::chain
