#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "llbc/chain.hpp"
#include "llbc/model.hpp"

namespace llbc::testgen {

using Focus = std::pair<Expression, LinearType>;

struct Options {
  int min_cuts = 1;
  int max_cuts = 3;
  int type_depth = 2;
  int budget = 3;
  double server_bias = 0.35;
  std::size_t max_depth = 6;
  std::size_t max_pending = 1000;
};

struct Generated {
  Program program;
  std::vector<LinearType> types;
};

// Random well-typed programs built as proof structures: every cut joins
// two freshly generated, disjoint pieces, so the result is acyclic and
// type-correct by construction. Names restart inside every box so that
// opening boxes has to rename.
class Generator {
 public:
  explicit Generator(std::uint64_t seed, Options opt = {})
      : rng_(seed), opt_(opt) {}

  LinearType type(int depth);
  Generated program();

  /// A term of type `t` with no free addresses.
  Expression closed(const LinearType& t);

  std::mt19937_64& rng() { return rng_; }

 private:
  struct Piece {
    Expression head;
    std::vector<Focus> extras;
    std::vector<Transaction> txns;
  };

  bool chance(double p);
  int uniform(int lo, int hi);
  Address fresh();

  Piece gen(const LinearType& t, int budget);
  Piece leaf(const LinearType& t);
  Piece axiom(const LinearType& t);
  Piece menu(const LinearType& t, int budget);
  Piece server(const LinearType& t, int budget);
  void close_extras(Piece& p);
  Generated attempt();

  std::mt19937_64 rng_;
  Options opt_;
  std::vector<int> names_;
};

/// Random chains over a small address pool so that collisions happen.
chain::Chain random_chain(std::mt19937_64& rng, std::size_t height,
                          const std::string& prefix, int pool);

}  // namespace llbc::testgen
