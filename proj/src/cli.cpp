#include "procflow/cli.hpp"

#include "procflow/decision.hpp"
#include "procflow/model.hpp"
#include "procflow/render.hpp"
#include "procflow/simulate.hpp"
#include "procflow/textfmt.hpp"
#include "procflow/transform.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace procflow {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

ProcessModel load_model(const std::string& path) { return parse_model(read_file(path)); }

std::vector<std::string> split_commas(const std::string& list) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(list);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// The published decision table for the bundled journal fixture: task, label,
// whether the decision is an override of the default rule.
struct GoldenRow {
  const char* task;
  char label;
  bool override_;
};

constexpr GoldenRow kJournalGolden[] = {
    {"t1", 'A', false},  {"t2", 'S', false},  {"t3", 'A', false},  {"t4", 'A', false},
    {"t5", 'M', false},  {"t6", 'M', false},  {"t7", 'A', false},  {"t8", 'M', false},
    {"t9", 'M', false},  {"t10", 'M', true},  {"t11", 'M', false}, {"t12", 'S', false},
    {"t13", 'A', false}, {"t14", 'S', false}, {"t15", 'S', false}, {"t16", 'S', true},
    {"t17", 'S', true},  {"t18", 'M', false}, {"t19", 'A', false}, {"t20", 'S', true},
    {"t21", 'M', false}, {"t22", 'M', false},
};

int check_golden(const std::vector<LabeledDecision>& decisions, std::ostream& err) {
  int mismatches = 0;
  if (decisions.size() != std::size(kJournalGolden)) {
    err << "golden: expected " << std::size(kJournalGolden) << " decisions, got "
        << decisions.size() << "\n";
    ++mismatches;
  }
  for (const GoldenRow& row : kJournalGolden) {
    auto it = std::find_if(decisions.begin(), decisions.end(),
                           [&](const LabeledDecision& d) { return d.task == row.task; });
    if (it == decisions.end()) {
      err << "golden: missing decision for " << row.task << "\n";
      ++mismatches;
      continue;
    }
    if (label_letter(it->label) != row.label) {
      err << "golden: " << row.task << " expected " << row.label << ", got "
          << label_letter(it->label) << "\n";
      ++mismatches;
    }
    bool is_override = it->provenance == Provenance::Override;
    if (is_override != row.override_) {
      err << "golden: " << row.task << " provenance mismatch\n";
      ++mismatches;
    }
  }
  return mismatches;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::istream&, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"process model toolkit"};
  app.name("procflow");
  app.require_subcommand(1);

  std::string model_path, annot_path, second_path, out_path, packages_path, actors_list,
      script_path;
  int max_revisions = 1;
  bool golden = false;
  bool ucm_dot = false;

  CLI::App* validate = app.add_subcommand("validate", "check model invariants");
  validate->add_option("model", model_path)->required();

  CLI::App* decide = app.add_subcommand("decide", "derive automation decisions");
  decide->add_option("model", model_path)->required();
  decide->add_option("annotations", annot_path)->required();
  decide->add_flag("--check-golden", golden, "compare against the bundled journal table");

  CLI::App* tobe = app.add_subcommand("tobe", "derive the to-be model");
  tobe->add_option("model", model_path)->required();
  tobe->add_option("annotations", annot_path)->required();
  tobe->add_option("-o,--output", out_path)->required();

  CLI::App* diff = app.add_subcommand("diff", "diff two models");
  diff->add_option("a", model_path)->required();
  diff->add_option("b", second_path)->required();

  CLI::App* metrics = app.add_subcommand("metrics", "automation metrics");
  metrics->add_option("model", model_path)->required();
  metrics->add_option("annotations", annot_path)->required();

  CLI::App* usecases = app.add_subcommand("usecases", "extract use-case structure");
  usecases->add_option("model", model_path)->required();
  usecases->add_option("--packages", packages_path)->required();
  usecases->add_option("--actors", actors_list)->required();
  usecases->add_flag("--dot", ucm_dot, "emit DOT instead of the text listing");

  CLI::App* simulate = app.add_subcommand("simulate", "run an event script");
  simulate->add_option("model", model_path)->required();
  simulate->add_option("--script", script_path)->required();
  simulate->add_option("--max-revisions", max_revisions)->check(CLI::NonNegativeNumber);

  CLI::App* enumerate = app.add_subcommand("enumerate", "enumerate terminal outcomes");
  enumerate->add_option("model", model_path)->required();
  enumerate->add_option("--max-revisions", max_revisions)->check(CLI::NonNegativeNumber);

  CLI::App* render = app.add_subcommand("render", "emit a DOT diagram");
  render->add_option("model", model_path)->required();
  render->add_option("-o,--output", out_path);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    if (app.got_subcommand(validate)) {
      ValidationReport report = validate_model(load_model(model_path));
      out << report.to_text();
      return report.clean() ? 0 : 1;
    }

    if (app.got_subcommand(decide)) {
      ProcessModel model = load_model(model_path);
      AnnotationSet annotations = parse_annotations(read_file(annot_path));
      std::vector<LabeledDecision> decisions = decide_all(model, annotations);
      out << format_decisions(decisions);
      if (golden && check_golden(decisions, err) != 0) return 1;
      return 0;
    }

    if (app.got_subcommand(tobe)) {
      ProcessModel model = load_model(model_path);
      AnnotationSet annotations = parse_annotations(read_file(annot_path));
      ProcessModel target = derive_tobe(model, decide_all(model, annotations));
      write_file(out_path, serialize_model(target));
      return 0;
    }

    if (app.got_subcommand(diff)) {
      out << format_change_report(diff_models(load_model(model_path), load_model(second_path)));
      return 0;
    }

    if (app.got_subcommand(metrics)) {
      ProcessModel model = load_model(model_path);
      AnnotationSet annotations = parse_annotations(read_file(annot_path));
      out << format_metrics_kv(automation_metrics(decide_all(model, annotations)));
      return 0;
    }

    if (app.got_subcommand(usecases)) {
      ProcessModel model = load_model(model_path);
      std::vector<UseCasePackage> packages = parse_packages(read_file(packages_path));
      std::vector<std::string> actor_ids = split_commas(actors_list);
      UseCaseModel ucm = extract_use_cases(
          model, packages, std::set<std::string>(actor_ids.begin(), actor_ids.end()));
      out << (ucm_dot ? usecase_to_dot(ucm) : format_use_case_model(ucm));
      return 0;
    }

    if (app.got_subcommand(simulate)) {
      ProcessModel model = load_model(model_path);
      std::vector<Event> events = parse_event_script(read_file(script_path));
      SimState state = start_run(model, max_revisions);
      for (const Event& e : events) state = apply_event(state, e);
      out << format_event_log(state.log);
      if (state.terminal)
        out << "final " << state.current << "\n";
      else
        out << "pending "
            << (state.pending.kind == PendingKind::AwaitAgent
                    ? "agent"
                    : state.pending.kind == PendingKind::AwaitExternal ? "external" : "choose")
            << " " << state.pending.node << "\n";
      return 0;
    }

    if (app.got_subcommand(enumerate)) {
      ProcessModel model = load_model(model_path);
      for (const Outcome& o : enumerate_outcomes(model, max_revisions))
        out << o.end_node << " paths=" << o.paths << "\n";
      TerminationReport report = check_termination(model, max_revisions);
      out << "terminates=" << (report.terminates ? "true" : "false")
          << " max_steps=" << report.max_steps << "\n";
      return 0;
    }

    if (app.got_subcommand(render)) {
      std::string dot = process_to_dot(load_model(model_path));
      if (out_path.empty())
        out << dot;
      else
        write_file(out_path, dot);
      return 0;
    }
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace procflow
