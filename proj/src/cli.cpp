#include "aaq/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "aaq/qelim.hpp"
#include "aaq/semantics.hpp"
#include "aaq/syntax.hpp"

namespace aaq {
namespace {

using nlohmann::ordered_json;

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitLimit = 3;

const char* kNodeLimitEnvVar = "AAQ_NODE_LIMIT";

struct CommonOpts {
  std::string format = "text";
  std::uint64_t node_limit = 0;  // 0: env var or built-in defaults
};

bool json_format(const CommonOpts& c) { return c.format == "json"; }

std::optional<std::uint64_t> env_node_limit() {
  const char* v = std::getenv(kNodeLimitEnvVar);
  if (!v || !*v) return std::nullopt;
  std::uint64_t parsed = 0;
  auto [end, ec] = std::from_chars(v, v + std::string_view(v).size(), parsed);
  if (ec != std::errc() || *end != '\0' || parsed == 0)
    throw Error(std::string(kNodeLimitEnvVar) +
                " must be a positive integer, got '" + v + "'");
  return parsed;
}

std::size_t parse_limit(const CommonOpts& c) {
  if (c.node_limit) return c.node_limit;
  if (auto e = env_node_limit()) return *e;
  return kDefaultParseNodeLimit;
}

ElimOptions elim_opts(const CommonOpts& c) {
  ElimOptions opts;
  if (c.node_limit)
    opts.node_limit = c.node_limit;
  else if (auto e = env_node_limit())
    opts.node_limit = *e;
  return opts;
}

std::string slurp(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The formula comes either inline or from --file; "-" names standard input.
std::string load_text(const std::string& inline_text, const std::string& file) {
  if (!inline_text.empty() && !file.empty())
    throw Error("give the formula either inline or via --file, not both");
  if (!file.empty()) {
    if (file == "-") return slurp(std::cin);
    std::ifstream in(file);
    if (!in) throw Error("cannot open '" + file + "'");
    return slurp(in);
  }
  if (inline_text.empty())
    throw Error("no formula given; pass it inline or via --file (- reads "
                "standard input)");
  return inline_text;
}

Env parse_binds(const std::vector<std::string>& binds) {
  Env env;
  for (const std::string& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == b.size())
      throw Error("malformed binding '" + b + "'; expected name=value");
    std::string name = b.substr(0, eq);
    std::string value = b.substr(eq + 1);
    try {
      env[name] = BigInt(value);
    } catch (const std::exception&) {
      throw Error("binding '" + b + "' has a non-integer value");
    }
  }
  return env;
}

bool contains_binder(const Formula& f) {
  if (std::holds_alternative<QBinder>(f)) return true;
  if (const auto* n = std::get_if<Not>(&f)) return contains_binder(*n->arg);
  if (const auto* n = std::get_if<And>(&f))
    return contains_binder(*n->lhs) || contains_binder(*n->rhs);
  if (const auto* n = std::get_if<Or>(&f))
    return contains_binder(*n->lhs) || contains_binder(*n->rhs);
  if (const auto* n = std::get_if<Implies>(&f))
    return contains_binder(*n->lhs) || contains_binder(*n->rhs);
  return false;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

std::string span_note(const SourceSpan& s) {
  return " (at characters " + std::to_string(s.start) + ".." +
         std::to_string(s.end) + ")";
}

void emit_json(std::ostream& out, const ordered_json& doc) {
  out << doc.dump(2) << "\n";
}

ordered_json trace_json(const EliminationTrace& trace) {
  ordered_json steps = ordered_json::array();
  for (const EliminationStep& s : trace.steps) {
    steps.push_back(ordered_json{
        {"variable", s.variable},
        {"atoms_before", s.atoms_before},
        {"atoms_after", s.atoms_after},
        {"nodes_before", s.nodes_before},
        {"nodes_after", s.nodes_after},
        {"degree", s.degree},
        {"cost_bound_ok", s.cost_bound_ok()},
    });
  }
  return steps;
}

ordered_json instance_json(const CorpusInstance& inst) {
  return ordered_json{
      {"index", inst.index},
      {"seed", inst.seed},
      {"sentence", inst.sentence},
      {"decide", inst.decide_value},
      {"oracle", inst.oracle_value},
      {"method", method_name(inst.oracle_method)},
      {"stable", inst.oracle_stable},
  };
}

ordered_json report_json(const CorpusReport& rep) {
  ordered_json disagreements = ordered_json::array();
  for (const CorpusInstance& d : rep.disagreements)
    disagreements.push_back(instance_json(d));
  ordered_json unstable = ordered_json::array();
  for (const CorpusInstance& u : rep.unstable)
    unstable.push_back(instance_json(u));
  return ordered_json{
      {"seed", rep.seed},
      {"count", rep.instance_count},
      {"agreements", rep.agreement_count},
      {"disagreements", disagreements},
      {"unstable", unstable},
  };
}

void print_instance_text(std::ostream& out, const CorpusInstance& inst) {
  out << "  [" << inst.index << "] seed=" << inst.seed
      << " decide=" << bool_str(inst.decide_value) << " "
      << method_name(inst.oracle_method) << "="
      << bool_str(inst.oracle_value)
      << (inst.oracle_stable ? "" : " (unstable)") << "  " << inst.sentence
      << "\n";
}

void print_report_text(std::ostream& out, const CorpusReport& rep) {
  out << "seed: " << rep.seed << "\n";
  out << "count: " << rep.instance_count << "\n";
  out << "agreements: " << rep.agreement_count << "\n";
  out << "disagreements: " << rep.disagreements.size() << "\n";
  for (const CorpusInstance& d : rep.disagreements)
    print_instance_text(out, d);
  out << "unstable: " << rep.unstable.size() << "\n";
  for (const CorpusInstance& u : rep.unstable) print_instance_text(out, u);
}

// ---------------------------------------------------------------------------
// Subcommand handlers

int do_decide(const CommonOpts& c, const std::string& text,
              const std::string& file, std::ostream& out) {
  FormulaPtr f = parse_formula(load_text(text, file), parse_limit(c));
  Verdict v = decide(*f, elim_opts(c));
  if (json_format(c))
    emit_json(out, ordered_json{{"verdict", v.value}, {"stable", v.stable}});
  else
    out << bool_str(v.value) << "\n";
  return v.value ? kExitTrue : kExitFalse;
}

int do_qe(const CommonOpts& c, const std::string& text,
          const std::string& file, std::ostream& out) {
  FormulaPtr f = parse_formula(load_text(text, file), parse_limit(c));
  QFPtr qf = qf_equivalent(*f, elim_opts(c));
  std::string printed = print_formula(*qf_to_formula(*qf));
  if (json_format(c))
    emit_json(out, ordered_json{{"qf", printed}});
  else
    out << printed << "\n";
  return kExitTrue;
}

int do_eval(const CommonOpts& c, const std::string& text,
            const std::string& file, const std::vector<std::string>& binds,
            std::ostream& out) {
  FormulaPtr f = parse_formula(load_text(text, file), parse_limit(c));
  if (contains_binder(*f))
    throw Error("eval expects a quantifier-free formula; use decide or qe "
                "for quantified ones");
  // Normalizing first means eval exercises the same sign-atom form the
  // eliminator produces.
  QFPtr qf = eliminate_all(*f, elim_opts(c));
  bool value = eval_qf(*qf, parse_binds(binds));
  if (json_format(c))
    emit_json(out, ordered_json{{"verdict", value}});
  else
    out << bool_str(value) << "\n";
  return kExitTrue;
}

int do_oracle(const CommonOpts& c, const std::string& text,
              const std::string& file, const std::string& method,
              const WindowOptions& wopts, std::ostream& out) {
  FormulaPtr f = parse_formula(load_text(text, file), parse_limit(c));
  Verdict v = method == "window" ? oracle_decide_window(*f, wopts)
                                 : oracle_decide_inner(*f);
  if (json_format(c))
    emit_json(out, ordered_json{{"verdict", v.value}, {"stable", v.stable}});
  else
    out << bool_str(v.value) << (v.stable ? "" : " (unstable)") << "\n";
  return kExitTrue;
}

int do_trace(const CommonOpts& c, const std::string& text,
             const std::string& file, std::ostream& out) {
  FormulaPtr f = parse_formula(load_text(text, file), parse_limit(c));
  EliminationTrace trace;
  QFPtr qf = eliminate_all(*f, elim_opts(c), &trace);
  std::string printed = print_formula(*qf_to_formula(*qf));
  std::optional<bool> verdict;
  if (free_vars(*f).empty()) verdict = eval_qf(*qf, {});
  if (json_format(c)) {
    ordered_json doc;
    if (verdict) doc["verdict"] = *verdict;
    doc["qf"] = printed;
    doc["stable"] = true;
    doc["trace"] = trace_json(trace);
    emit_json(out, doc);
  } else {
    std::size_t i = 0;
    for (const EliminationStep& s : trace.steps) {
      out << "step " << ++i << ": Q " << s.variable << ": atoms "
          << s.atoms_before << " -> " << s.atoms_after << ", nodes "
          << s.nodes_before << " -> " << s.nodes_after << ", degree "
          << s.degree << ", cost bound "
          << (s.cost_bound_ok() ? "ok" : "VIOLATED") << "\n";
    }
    out << "qf: " << printed << "\n";
    if (verdict) out << "verdict: " << bool_str(*verdict) << "\n";
  }
  return kExitTrue;
}

int do_fuzz(const CommonOpts& c, const CorpusOptions& copts, std::ostream& out,
            std::ostream& err) {
  if (copts.min_depth > copts.max_depth)
    throw Error("--min-depth must not exceed --max-depth");
  CorpusReport rep = cross_check(copts);
  if (json_format(c))
    emit_json(out, ordered_json{{"report", report_json(rep)}});
  else
    print_report_text(out, rep);
  // Timing is diagnostic only; keeping it off stdout keeps runs
  // byte-identical.
  err << "fuzz: " << rep.instance_count << " instances in " << rep.elapsed_ms
      << " ms\n";
  return kExitTrue;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedure for the almost-all quantifier Q over the "
               "naturals: decide closed sentences, compute quantifier-free "
               "equivalents, and cross-check against independent oracles."};
  app.name("aaq");
  app.require_subcommand(1);

  CommonOpts common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--node-limit", common.node_limit,
                 "Cap on parse-tree nodes and on the elimination's formula "
                 "size (defaults 100000 and 1000000; the " +
                     std::string(kNodeLimitEnvVar) +
                     " environment variable overrides both)")
      ->check(CLI::PositiveNumber);

  std::string text, file;
  const auto add_formula_args = [&](CLI::App* cmd, const char* what) {
    cmd->add_option("formula", text, what);
    cmd->add_option("--file", file,
                    "Read the formula from this file; - reads standard input");
    cmd->fallthrough();
  };

  CLI::App* decide_cmd = app.add_subcommand(
      "decide", "Decide a closed sentence; exit 0 true, 1 false");
  add_formula_args(decide_cmd, "The sentence to decide");

  CLI::App* qe_cmd = app.add_subcommand(
      "qe", "Print a quantifier-free formula equivalent over the naturals");
  add_formula_args(qe_cmd, "The formula to eliminate quantifiers from");

  std::vector<std::string> binds;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Evaluate a quantifier-free formula at integer bindings");
  add_formula_args(eval_cmd, "The quantifier-free formula to evaluate");
  eval_cmd->add_option("--bind", binds,
                       "Variable binding name=value (repeatable)");

  std::string method = "cauchy";
  WindowOptions wopts;
  const auto add_window_args = [&](CLI::App* cmd) {
    cmd->add_option("--base", wopts.base,
                    "Window oracle: first sampled point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--window", wopts.window,
                    "Window oracle: consecutive points per sample")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--levels", wopts.levels,
                    "Window oracle: times the base doubles before giving up")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
  };

  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Decide via an independent oracle instead of elimination");
  add_formula_args(oracle_cmd, "The closed sentence to decide");
  oracle_cmd
      ->add_option("--method", method,
                   "cauchy: sound, single quantified variable; window: "
                   "heuristic, any nesting")
      ->check(CLI::IsMember({"cauchy", "window"}))
      ->capture_default_str();
  add_window_args(oracle_cmd);

  CorpusOptions copts;
  CLI::App* fuzz_cmd = app.add_subcommand(
      "fuzz", "Cross-check the eliminator against the oracles on a "
              "deterministic random corpus");
  fuzz_cmd->fallthrough();
  fuzz_cmd->add_option("--seed", copts.seed, "Corpus seed")
      ->capture_default_str();
  fuzz_cmd->add_option("--count", copts.count, "Number of sentences")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fuzz_cmd->add_option("--degree", copts.degree, "Max monomial total degree")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  fuzz_cmd->add_option("--atoms", copts.atoms, "Max atoms per sentence")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fuzz_cmd
      ->add_option("--min-depth", copts.min_depth, "Min quantifier nesting")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fuzz_cmd
      ->add_option("--max-depth", copts.max_depth, "Max quantifier nesting")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  add_window_args(fuzz_cmd);

  CLI::App* trace_cmd = app.add_subcommand(
      "trace", "Eliminate quantifiers and print the per-step trace");
  add_formula_args(trace_cmd, "The formula to trace");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitTrue : kExitUsage;
  }

  try {
    if (*decide_cmd) return do_decide(common, text, file, out);
    if (*qe_cmd) return do_qe(common, text, file, out);
    if (*eval_cmd) return do_eval(common, text, file, binds, out);
    if (*oracle_cmd)
      return do_oracle(common, text, file, method, wopts, out);
    if (*fuzz_cmd) {
      copts.elim = elim_opts(common);
      copts.window = wopts;
      return do_fuzz(common, copts, out, err);
    }
    if (*trace_cmd) return do_trace(common, text, file, out);
    err << "error: no subcommand selected\n";
    return kExitUsage;
  } catch (const LimitError& e) {
    err << "error: " << e.what() << "\n";
    return kExitLimit;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << span_note(e.span) << "\n";
    return e.kind == ParseError::Kind::SizeLimit ? kExitLimit : kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace aaq
