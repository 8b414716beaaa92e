#include "llbc/chain.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

#include "llbc/core.hpp"

namespace llbc::chain {

namespace {

std::string join(const AddressSet& s) {
  std::string out;
  for (const auto& a : s) out += (out.empty() ? "" : ",") + a;
  return out;
}

AddressSet intersection(const AddressSet& a, const AddressSet& b) {
  AddressSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::inserter(out, out.end()));
  return out;
}

}  // namespace

IsolationError::IsolationError(AddressSet shared)
    : std::runtime_error("chains share addresses: " + join(shared)),
      shared_(std::move(shared)) {}

AddressSet addresses(const Block& b) {
  AddressSet out;
  for (const auto& t : b.transfers) {
    out.insert(t.from);
    out.insert(t.to);
  }
  return out;
}

AddressSet addresses(const Chain& c) {
  AddressSet out;
  for (const auto& b : c.blocks) out.merge(addresses(b));
  return out;
}

bool isolated(const Chain& c1, const Chain& c2) {
  return intersection(addresses(c1), addresses(c2)).empty();
}

bool blockwise_isolated(const Chain& c1, const Chain& c2) {
  if (c1.height() != c2.height())
    throw HeightMismatch(c1.height(), c2.height());
  for (std::size_t i = 0; i < c1.height(); ++i)
    if (!intersection(addresses(c1.blocks[i]), addresses(c2.blocks[i]))
             .empty())
      return false;
  return true;
}

Chain zip(const Chain& c1, const Chain& c2) {
  std::size_t h = std::max(c1.height(), c2.height());
  std::size_t pad1 = h - c1.height(), pad2 = h - c2.height();
  Chain out;
  out.blocks.resize(h);
  for (std::size_t i = 0; i < h; ++i) {
    auto& ts = out.blocks[i].transfers;
    if (i >= pad1) {
      const auto& src = c1.blocks[i - pad1].transfers;
      ts.insert(ts.end(), src.begin(), src.end());
    }
    if (i >= pad2) {
      const auto& src = c2.blocks[i - pad2].transfers;
      ts.insert(ts.end(), src.begin(), src.end());
    }
  }
  return out;
}

Chain compose_verify(const Chain& c1, const Chain& c2) {
  AddressSet shared = intersection(addresses(c1), addresses(c2));
  if (!shared.empty()) throw IsolationError(std::move(shared));
  return zip(c1, c2);
}

Chain relabel(const Chain& c, const std::map<std::string, std::string>& map) {
  auto name = [&](const std::string& a) {
    auto it = map.find(a);
    return it == map.end() ? a : it->second;
  };
  Chain out = c;
  for (auto& b : out.blocks)
    for (auto& t : b.transfers) {
      t.from = name(t.from);
      t.to = name(t.to);
    }
  return out;
}

Rewired compose_rewire(const Chain& c1, const Chain& c2) {
  Rewired r;
  for (const auto& a : addresses(c1)) r.left[a] = "0" + a;
  for (const auto& a : addresses(c2)) r.right[a] = "1" + a;
  r.chain = zip(relabel(c1, r.left), relabel(c2, r.right));
  return r;
}

Program chain_to_program(const Chain& c) {
  Program p;
  AddressSet listed;
  for (const auto& b : c.blocks)
    for (const auto& t : b.transfers) {
      Expression to = Expression::addr(Address(t.to));
      if (listed.insert(t.to).second) p.interface.push_back(to);
      p.pending.push_back({to, repeat_unit(t.unit, t.amount), {}});
    }
  return p;
}

// ---------------------------------------------------------------------------
// JSON

using nlohmann::ordered_json;

namespace {

const ordered_json& field(const ordered_json& obj, const char* key,
                          const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw FormatError(where + ": missing \"" + key + "\"");
  return obj.at(key);
}

std::string string_field(const ordered_json& obj, const char* key,
                         const std::string& where) {
  const auto& v = field(obj, key, where);
  if (!v.is_string() || v.get<std::string>().empty())
    throw FormatError(where + ": \"" + key + "\" must be a non-empty string");
  return v.get<std::string>();
}

}  // namespace

Chain chain_from_json(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  const auto& blocks = field(doc, "blocks", "chain");
  if (!blocks.is_array()) throw FormatError("chain: \"blocks\" must be a list");
  Chain c;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    std::string where = "block " + std::to_string(i);
    const auto& ts = field(blocks[i], "transfers", where);
    if (!ts.is_array())
      throw FormatError(where + ": \"transfers\" must be a list");
    Block b;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      std::string at = where + " transfer " + std::to_string(k);
      Transfer t;
      t.from = string_field(ts[k], "from", at);
      t.to = string_field(ts[k], "to", at);
      t.unit = string_field(ts[k], "unit", at);
      const auto& amount = field(ts[k], "amount", at);
      if (!amount.is_number_integer() || amount.get<std::int64_t>() <= 0)
        throw FormatError(at + ": \"amount\" must be a positive integer");
      t.amount = amount.get<std::int64_t>();
      if (t.from == t.to)
        throw FormatError(at + ": sender and receiver are the same address");
      b.transfers.push_back(std::move(t));
    }
    c.blocks.push_back(std::move(b));
  }
  return c;
}

std::string chain_to_json(const Chain& c) {
  ordered_json blocks = ordered_json::array();
  for (const auto& b : c.blocks) {
    ordered_json ts = ordered_json::array();
    for (const auto& t : b.transfers) {
      ordered_json o;
      o["from"] = t.from;
      o["to"] = t.to;
      o["amount"] = t.amount;
      o["unit"] = t.unit;
      ts.push_back(std::move(o));
    }
    ordered_json block;
    block["transfers"] = std::move(ts);
    blocks.push_back(std::move(block));
  }
  ordered_json doc;
  doc["blocks"] = std::move(blocks);
  return doc.dump(2) + "\n";
}

Chain load_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return chain_from_json(buf.str());
}

}  // namespace llbc::chain
