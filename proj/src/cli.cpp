#include "llbc/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "llbc/chain.hpp"
#include "llbc/parser.hpp"
#include "llbc/reducer.hpp"
#include "llbc/render.hpp"
#include "llbc/typecheck.hpp"

namespace llbc {

namespace {

struct Source {
  std::string path;
  std::string text;
};

// Raised for failures that map to exit code 1.
struct DomainError {
  std::string record;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError{"kind=io path=" + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string position(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

std::string span_str(const Source& src, const SourceSpan& s) {
  if (s.end <= s.begin && s.line == 0) return "-";
  return position(src.text, s.begin) + "-" + position(src.text, s.end);
}

std::string escaped(const std::string& msg) {
  std::string out = "\"";
  for (char c : msg) {
    if (c == '"' || c == '\\') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

Script load(const Source& src, const UnitRegistry& units) {
  try {
    return parse_script(src.text, units);
  } catch (const ParseError& e) {
    std::string record = "kind=parse span=" + span_str(src, e.span());
    if (!e.expected().empty()) {
      std::string exp;
      for (const auto& x : e.expected()) exp += (exp.empty() ? "" : ",") + x;
      record += " expected=" + escaped(exp);
    }
    throw DomainError{record + " message=" + escaped(e.what())};
  }
}

TypedJudgment typecheck(const Source& src, const Script& s) {
  if (!s.declared)
    throw DomainError{"kind=type span=- rule=MissingDeclaration message=" +
                      escaped("script has no '-- types: A1, ...' header")};
  try {
    return check(s.program, *s.declared);
  } catch (const TypeError& e) {
    throw DomainError{"kind=type span=" + span_str(src, e.span()) +
                      " rule=" + to_string(e.kind()) +
                      " message=" + escaped(e.what())};
  }
}

NormalizeResult run_program(const Program& p, std::size_t fuel, bool trace,
                            std::ostream& out) {
  try {
    NormalizeResult r = normalize(p, fuel, trace);
    for (std::size_t i = 0; i < r.trace.size(); ++i)
      out << format_trace_line(i + 1, r.trace[i]) << '\n';
    return r;
  } catch (const FuelExhausted& e) {
    throw DomainError{"kind=fuel span=- steps=" + std::to_string(e.steps()) +
                      " last=" + escaped(render(e.last()))};
  }
}

nlohmann::json counts_json(const UnitCounts& counts) {
  nlohmann::json o = nlohmann::json::object();
  for (const auto& [unit, n] : counts)
    if (n != 0) o[unit] = n;
  return o;
}

std::string ledger_json(const Program& p, const UnitCounts& burned) {
  Ledger ledger;
  try {
    ledger = readback_ledger(p);
  } catch (const NotInLedgerForm& e) {
    throw DomainError{"kind=ledger span=- txn=" + std::to_string(e.index()) +
                      " message=" + escaped(e.what())};
  }
  nlohmann::json balances = nlohmann::json::object();
  for (const auto& [addr, held] : ledger) balances[addr.str()] = counts_json(held);
  nlohmann::json doc;
  doc["balances"] = std::move(balances);
  doc["burned"] = counts_json(burned);
  return doc.dump(2) + "\n";
}

chain::Chain load_chain_file(const std::string& path) {
  try {
    return chain::chain_from_json(read_file(path));
  } catch (const chain::FormatError& e) {
    throw DomainError{"kind=format path=" + path +
                      " message=" + escaped(e.what())};
  }
}

void write_output(const std::string& path, const std::string& data,
                  std::ostream& out) {
  if (path.empty()) {
    out << data;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << data)) throw DomainError{"kind=io path=" + path};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Linear-logic transaction scripts: check, run, read back ledgers "
               "and compose chains.",
               "llbc"};
  app.require_subcommand(1);

  std::string file;
  std::size_t fuel = 1000000;
  bool trace = false, run_first = false, blockwise = false;
  std::string mode, out_path;
  std::vector<std::string> chains;

  CLI::App* check_cmd = app.add_subcommand("check", "Parse and type-check a script");
  check_cmd->add_option("file", file, "Script")->required()->check(CLI::ExistingFile);

  CLI::App* run_cmd = app.add_subcommand("run", "Normalize a script");
  run_cmd->add_option("file", file, "Script")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--fuel", fuel, "Maximum number of steps")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--trace", trace, "Print every step");

  CLI::App* ledger_cmd =
      app.add_subcommand("ledger", "Read back the ledger of a script as JSON");
  ledger_cmd->add_option("file", file, "Script")->required()->check(CLI::ExistingFile);
  ledger_cmd->add_flag("--run", run_first, "Normalize first");
  ledger_cmd->add_option("--fuel", fuel, "Maximum number of steps")
      ->check(CLI::PositiveNumber);

  CLI::App* compose_cmd = app.add_subcommand("compose", "Tensor two chains");
  CLI::Option* mode_opt =
      compose_cmd->add_option("--mode", mode, "verify or rewire")
          ->check(CLI::IsMember({"verify", "rewire"}));
  CLI::Option* blockwise_opt = compose_cmd->add_flag(
      "--check-blockwise", blockwise, "Report weak and strong isolation");
  mode_opt->excludes(blockwise_opt);
  compose_cmd->add_option("-o,--output", out_path, "Output file")
      ->excludes(blockwise_opt);
  compose_cmd->add_option("chains", chains, "C1.json C2.json")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (compose_cmd->parsed() && mode.empty() && !blockwise)
      throw CLI::RequiredError("--mode or --check-blockwise");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return 2;
  }

  try {
    UnitRegistry units;
    try {
      units = UnitRegistry::from_environment();
    } catch (const std::exception& e) {
      throw DomainError{"kind=io message=" + escaped(e.what())};
    }

    if (check_cmd->parsed()) {
      Source src{file, read_file(file)};
      TypedJudgment j = typecheck(src, load(src, units));
      out << render(j.derivation.conclusion) << '\n';
    } else if (run_cmd->parsed()) {
      Source src{file, read_file(file)};
      Script s = load(src, units);
      NormalizeResult r = run_program(s.program, fuel, trace, out);
      out << render(r.program) << '\n';
    } else if (ledger_cmd->parsed()) {
      Source src{file, read_file(file)};
      Script s = load(src, units);
      Program p = s.program;
      UnitCounts burned;
      if (run_first) {
        NormalizeResult r = run_program(p, fuel, false, out);
        p = r.program;
        burned = r.accounting.burned;
      }
      out << ledger_json(p, burned);
    } else if (compose_cmd->parsed()) {
      chain::Chain c1 = load_chain_file(chains[0]);
      chain::Chain c2 = load_chain_file(chains[1]);
      if (blockwise) {
        bool weak;
        try {
          weak = chain::blockwise_isolated(c1, c2);
        } catch (const chain::HeightMismatch& e) {
          throw DomainError{"kind=height first=" + std::to_string(e.first()) +
                            " second=" + std::to_string(e.second())};
        }
        nlohmann::ordered_json doc;
        doc["blockwise_isolated"] = weak;
        doc["isolated"] = chain::isolated(c1, c2);
        out << doc.dump() << '\n';
      } else if (mode == "verify") {
        chain::Chain c;
        try {
          c = chain::compose_verify(c1, c2);
        } catch (const chain::IsolationError& e) {
          std::string shared;
          for (const auto& a : e.shared()) shared += (shared.empty() ? "" : ",") + a;
          throw DomainError{"kind=isolation shared=" + shared};
        }
        write_output(out_path, chain::chain_to_json(c), out);
      } else {
        write_output(out_path, chain::chain_to_json(chain::compose_rewire(c1, c2).chain),
                     out);
      }
    }
  } catch (const DomainError& e) {
    err << "ERROR " << e.record << '\n';
    return 1;
  }
  return 0;
}

}  // namespace llbc
