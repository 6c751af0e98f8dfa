#include "dps/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dps/engine.hpp"
#include "dps/error.hpp"
#include "dps/program.hpp"
#include "dps/tableau.hpp"
#include "dps/unify.hpp"

namespace dps {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
}

int status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Syntax:
    case ErrorKind::DuplicateVariable:
    case ErrorKind::SortError:
    case ErrorKind::SortMismatch:
    case ErrorKind::IllFormedSpec:
    case ErrorKind::UnknownLemma:
    case ErrorKind::UnknownRelation:
    case ErrorKind::Io: return ExitUsage;
    default: return ExitFailure;
  }
}

const Spec& pick_spec(const Theory& theory, const std::string& name) {
  if (!name.empty()) return theory.spec(name);
  if (theory.specs.empty()) throw Error(ErrorKind::IllFormedSpec, "theory has no spec");
  return theory.specs.front();
}

json report_json(const MgiuReport& r) {
  return {{"unifier_ok", r.unifier_ok},
          {"extension_ok", r.extension_ok},
          {"most_general_ok", r.most_general_ok},
          {"reduce_ok", r.reduce_ok},
          {"mgiu", r.ok()}};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deductive synthesis of environment-carrying unification"};
  app.require_subcommand(1);

  std::string env_text = "{}";
  std::string theory_path, emit_path, weights_path, spec_name;
  long fuel = default_fuel;
  bool check_decrease = false, as_json = false, trace = false;
  std::size_t max_rows = 200;
  std::uint64_t seed = 0;
  std::vector<std::string> positional;

  auto* unify_cmd = app.add_subcommand("unify", "Unify two expressions under an environment");
  unify_cmd->add_option("--env", env_text, "Environment substitution");
  unify_cmd->add_option("--fuel", fuel, "Recursive call budget");
  unify_cmd->add_flag("--json", as_json, "Machine-readable output");
  unify_cmd->add_option("exprs", positional, "E1 E2")->expected(2)->required();

  auto* check_cmd = app.add_subcommand("check-mgiu", "Check the four mgiu conditions for a candidate");
  check_cmd->add_option("--env", env_text, "Environment substitution");
  check_cmd->add_flag("--json", as_json, "Machine-readable output");
  check_cmd->add_option("args", positional, "E1 E2 SUBST")->expected(3)->required();

  auto* replay_cmd = app.add_subcommand("replay", "Replay a derivation script");
  replay_cmd->add_option("script", positional, "Script file")->expected(1)->required();
  replay_cmd->add_option("--theory", theory_path, "Theory file")->required();
  replay_cmd->add_option("--spec", spec_name, "Spec name (default: the first)");
  replay_cmd->add_option("--emit", emit_path, "Write the program here");
  replay_cmd->add_flag("--trace", trace, "Print every derived row");
  replay_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* search_cmd = app.add_subcommand("search", "Best-first search for a derivation");
  search_cmd->add_option("--theory", theory_path, "Theory file")->required();
  search_cmd->add_option("--spec", spec_name, "Spec name (default: the first)");
  search_cmd->add_option("--max-rows", max_rows, "Row budget");
  search_cmd->add_option("--weights", weights_path, "Symbol weights file");
  search_cmd->add_option("--seed", seed, "Tie-break seed");
  search_cmd->add_option("--emit", emit_path, "Write the program here");
  search_cmd->add_flag("--trace", trace, "Print the final tableau");
  search_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* run_cmd = app.add_subcommand("run", "Interpret a program file");
  run_cmd->add_option("args", positional, "PROGRAM ARG...")->required();
  run_cmd->add_option("--env", env_text, "Environment, passed first when the program expects a substitution");
  run_cmd->add_option("--fuel", fuel, "Recursive call budget");
  run_cmd->add_flag("--check-decrease", check_decrease, "Check the u-relation at every self-call");
  run_cmd->add_flag("--json", as_json, "Machine-readable output");

  auto* selftest_cmd = app.add_subcommand("selftest", "Compare the algorithm with the oracle on a small universe");
  selftest_cmd->add_flag("--json", as_json, "Machine-readable output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return ExitUsage;
  }

  try {
    if (unify_cmd->parsed()) {
      Subst env = parse_subst(env_text);
      Expr e1 = parse_expr(positional[0]), e2 = parse_expr(positional[1]);
      Subst result = reference_unify(env, e1, e2, fuel);
      if (as_json) {
        out << json{{"env", to_string(env)}, {"e1", to_string(e1)}, {"e2", to_string(e2)},
                    {"result", to_string(result)}, {"unifiable", result.is_proper()}}
                   .dump()
            << "\n";
      } else {
        out << to_string(result) << "\n";
      }
      return result.is_proper() ? ExitOk : ExitNegative;
    }
    if (check_cmd->parsed()) {
      Subst env = parse_subst(env_text);
      Expr e1 = parse_expr(positional[0]), e2 = parse_expr(positional[1]);
      Subst candidate = parse_subst(positional[2]);
      MgiuReport r = mgiu_check(env, e1, e2, candidate);
      if (as_json) {
        json j = report_json(r);
        j["env"] = to_string(env);
        j["e1"] = to_string(e1);
        j["e2"] = to_string(e2);
        j["candidate"] = to_string(candidate);
        out << j.dump() << "\n";
      } else {
        out << "unifier_ok=" << (r.unifier_ok ? "true" : "false") << "\n"
            << "extension_ok=" << (r.extension_ok ? "true" : "false") << "\n"
            << "most_general_ok=" << (r.most_general_ok ? "true" : "false") << "\n"
            << "reduce_ok=" << (r.reduce_ok ? "true" : "false") << "\n"
            << "mgiu=" << (r.ok() ? "true" : "false") << "\n";
      }
      return r.ok() ? ExitOk : ExitNegative;
    }
    if (replay_cmd->parsed()) {
      Theory theory = load_theory(theory_path);
      const Spec& spec = pick_spec(theory, spec_name);
      std::string script = read_file(positional[0]);
      ReplayResult result;
      try {
        std::function<void(const std::string&)> on_row;
        if (trace && !as_json) on_row = [&](const std::string& line) { out << line << "\n"; };
        result = replay(theory, spec, script, on_row);
      } catch (const Error& e) {
        err << e.what() << "\n";
        return ExitFailure;
      }
      std::string text = emit(result.program);
      if (!emit_path.empty()) write_file(emit_path, text);
      if (as_json) {
        out << json{{"rows", result.log}, {"program", text}}.dump() << "\n";
      } else {
        out << text;
      }
      return ExitOk;
    }
    if (search_cmd->parsed()) {
      Theory theory = load_theory(theory_path);
      const Spec& spec = pick_spec(theory, spec_name);
      SearchConfig config;
      config.max_rows = max_rows;
      config.seed = seed;
      if (!weights_path.empty()) config.weights = parse_weights(read_file(weights_path));
      auto result = search(theory, spec, config);
      if (!result) {
        if (as_json) {
          out << json{{"found", false}}.dump() << "\n";
        } else {
          out << "no program within " << max_rows << " rows\n";
        }
        return ExitNegative;
      }
      std::string text = emit(result->program);
      if (!emit_path.empty()) write_file(emit_path, text);
      if (as_json) {
        out << json{{"found", true}, {"rows", result->tableau->rows().size()}, {"program", text}}.dump() << "\n";
      } else {
        if (trace) {
          for (const auto& r : result->tableau->rows()) out << render(r) << "\n";
        }
        out << text;
      }
      return ExitOk;
    }
    if (run_cmd->parsed()) {
      ProgramDef p = parse_program(read_file(positional[0]));
      std::vector<std::string> texts(positional.begin() + 1, positional.end());
      if (!p.params.empty() && p.params[0].second == Sort::Subst && texts.size() + 1 == p.params.size()) {
        texts.insert(texts.begin(), env_text);
      }
      if (texts.size() != p.params.size()) {
        err << "program " << p.name << " takes " << p.params.size() << " arguments\n";
        return ExitUsage;
      }
      std::vector<Value> values;
      for (std::size_t i = 0; i < texts.size(); ++i) values.push_back(parse_value(texts[i], p.params[i].second));
      InterpretOptions options;
      options.fuel = fuel;
      options.check_decrease = check_decrease;
      if (check_decrease && !p.decrease) p.decrease = "u-rel";
      Value v = interpret(p, values, options);
      bool negative = (v.sort == Sort::Subst && v.subst.is_failure()) || (v.sort == Sort::Bool && !v.truth);
      if (as_json) {
        out << json{{"result", to_string(v)}, {"negative", negative}}.dump() << "\n";
      } else {
        out << to_string(v) << "\n";
      }
      return negative ? ExitNegative : ExitOk;
    }
    if (selftest_cmd->parsed()) {
      std::vector<Expr> exprs =
          expressions_up_to({Expr::constant("a"), Expr::constant("b"), Expr::var("X"), Expr::var("Y")}, 3);
      std::vector<Subst> envs{Subst::empty(), parse_subst("{X -> a}"), parse_subst("{X -> Y}")};
      std::size_t checked = 0, disagreements = 0;
      for (const auto& env : envs) {
        for (const auto& e1 : exprs) {
          for (const auto& e2 : exprs) {
            Subst s = reference_unify(env, e1, e2), o = oracle_unify(env, e1, e2);
            bool agree = s.is_proper() == o.is_proper() && (s.is_failure() || (more_general(s, o) && more_general(o, s)));
            ++checked;
            if (!agree) ++disagreements;
          }
        }
      }
      if (as_json) {
        out << json{{"checked", checked}, {"disagreements", disagreements}}.dump() << "\n";
      } else {
        out << "checked " << checked << " triples, " << disagreements << " disagreements\n";
      }
      return disagreements == 0 ? ExitOk : ExitNegative;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return status_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return ExitFailure;
  }
  return ExitUsage;
}

}  // namespace dps
