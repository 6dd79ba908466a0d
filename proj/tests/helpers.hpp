#pragma once

#include "procflow/decision.hpp"
#include "procflow/model.hpp"
#include "procflow/textfmt.hpp"
#include "procflow/transform.hpp"

#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace testutil {

inline std::string read_fixture(const std::string& name) {
  std::string path = std::string(FIXTURE_DIR) + "/" + name;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline procflow::ProcessModel journal_asis() {
  return procflow::parse_model(read_fixture("journal.asis"));
}

inline procflow::AnnotationSet journal_annotations() {
  return procflow::parse_annotations(read_fixture("journal.annot"));
}

inline procflow::ProcessModel journal_tobe() {
  procflow::ProcessModel asis = journal_asis();
  return procflow::derive_tobe(asis, procflow::decide_all(asis, journal_annotations()));
}

// start -> one task -> end
inline procflow::ProcessModel minimal_model() {
  procflow::ProcessModel m;
  m.name = "Minimal";
  m.kind = procflow::ModelKind::AsIs;
  m.roles.push_back({"worker", "Worker"});
  m.nodes.push_back(procflow::StartNode{"start"});
  m.nodes.push_back(procflow::Task{"t", "Do the work", {"worker"}, std::nullopt});
  m.nodes.push_back(procflow::EndNode{"done"});
  m.flows.push_back({"start", "t", std::nullopt});
  m.flows.push_back({"t", "done", std::nullopt});
  m.end_marks.push_back("done");
  return m;
}

// ---------------------------------------------------------------------------
// Independent breadth-first reachability oracle over the raw flow list.
// ---------------------------------------------------------------------------

inline std::set<std::string> bfs_oracle(const procflow::ProcessModel& m,
                                        const std::string& from) {
  std::multimap<std::string, std::string> edges;
  for (const auto& f : m.flows) edges.insert({f.from, f.to});
  std::set<std::string> seen{from};
  std::deque<std::string> queue{from};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    auto [lo, hi] = edges.equal_range(cur);
    for (auto it = lo; it != hi; ++it) {
      if (seen.insert(it->second).second) queue.push_back(it->second);
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------
// Independent brute-force path walk: enumerates every gateway choice
// sequence, bounding each cycle-creating branch by max_rounds per path.
// ---------------------------------------------------------------------------

struct OracleResult {
  std::map<std::string, long long> outcomes;
  int max_steps = 0;
  bool every_path_finishes = true;
};

class PathOracle {
 public:
  PathOracle(const procflow::ProcessModel& m, int max_rounds, int cutoff = 0)
      : model_(m), max_rounds_(max_rounds), cutoff_(cutoff) {
    for (const auto& n : m.nodes) {
      if (const auto* g = std::get_if<procflow::DecisionGateway>(&n)) {
        for (const auto& [label, target] : g->branches) {
          if (bfs_oracle(m, target).count(g->id)) loops_.insert(g->id + "\t" + label);
        }
      }
    }
  }

  OracleResult run() {
    const procflow::StartNode* s = model_.start();
    step(s->id, {}, 0);
    return result_;
  }

 private:
  void step(const std::string& id, std::map<std::string, int> used, int steps) {
    if (cutoff_ > 0 && steps >= cutoff_) {
      result_.every_path_finishes = false;
      result_.max_steps = std::max(result_.max_steps, steps);
      return;
    }
    ++steps;
    const procflow::Node* node = model_.find_node(id);
    if (std::holds_alternative<procflow::EndNode>(*node)) {
      ++result_.outcomes[id];
      result_.max_steps = std::max(result_.max_steps, steps);
      return;
    }
    if (const auto* g = std::get_if<procflow::DecisionGateway>(node)) {
      bool any = false;
      for (const auto& [label, target] : g->branches) {
        std::string key = g->id + "\t" + label;
        if (loops_.count(key)) {
          auto next_used = used;
          if (next_used[key] >= max_rounds_) continue;
          ++next_used[key];
          step(target, next_used, steps);
        } else {
          step(target, used, steps);
        }
        any = true;
      }
      if (!any) {
        result_.every_path_finishes = false;
        result_.max_steps = std::max(result_.max_steps, steps);
      }
      return;
    }
    // start and task nodes have a single continuation
    for (const auto& f : model_.flows) {
      if (f.from == id) {
        step(f.to, used, steps);
        return;
      }
    }
  }

  const procflow::ProcessModel& model_;
  int max_rounds_;
  int cutoff_;
  std::set<std::string> loops_;
  OracleResult result_;
};

// ---------------------------------------------------------------------------
// Random valid model generator: a chain of tasks and gateways with forward
// jumps and occasional bounded back-edges, so every node stays reachable and
// every node can still reach an end.
// ---------------------------------------------------------------------------

struct GenOptions {
  int max_internal = 24;
  double gateway_prob = 0.25;
  double back_edge_prob = 0.2;
  int max_extra_branches = 3;
  bool tobe = false;
};

inline procflow::ProcessModel random_model(std::mt19937& rng, const GenOptions& opt = {}) {
  using namespace procflow;
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  ProcessModel m;
  m.kind = opt.tobe ? ModelKind::ToBe : ModelKind::AsIs;
  m.name = "Generated " + std::to_string(rng() % 100000);

  int role_count = 1 + static_cast<int>(rng() % 5);
  for (int i = 1; i <= role_count; ++i)
    m.roles.push_back({"r" + std::to_string(i), "Role " + std::to_string(i)});

  int internal = 1 + static_cast<int>(rng() % opt.max_internal);
  int end_count = 1 + static_cast<int>(rng() % 2);
  std::vector<std::string> end_ids;
  for (int i = 1; i <= end_count; ++i) end_ids.push_back("e" + std::to_string(i));

  auto random_roles = [&]() {
    std::vector<std::string> roles{"r" + std::to_string(1 + rng() % role_count)};
    if (role_count > 1 && coin(rng) < 0.2) {
      std::string extra = "r" + std::to_string(1 + rng() % role_count);
      if (extra != roles[0]) roles.push_back(extra);
    }
    return roles;
  };
  auto random_label = [&]() {
    switch (rng() % 3) {
      case 0: return AutomationLabel::Automatic;
      case 1: return AutomationLabel::Supported;
      default: return AutomationLabel::Manual;
    }
  };
  auto node_name = [](int i) { return "n" + std::to_string(i); };
  auto next_of = [&](int i) {
    return i + 1 < internal ? node_name(i + 1) : end_ids[rng() % end_ids.size()];
  };

  m.nodes.push_back(StartNode{"start"});
  m.flows.push_back({"start", node_name(0), std::nullopt});

  for (int i = 0; i < internal; ++i) {
    bool gateway = internal > 1 && coin(rng) < opt.gateway_prob;
    if (!gateway) {
      Task t{node_name(i), "Step " + std::to_string(i), random_roles(), std::nullopt};
      if (opt.tobe) t.label = random_label();
      m.flows.push_back({t.id, next_of(i), std::nullopt});
      m.nodes.push_back(std::move(t));
    } else {
      DecisionGateway g{node_name(i), "Choice " + std::to_string(i),
                        "r" + std::to_string(1 + rng() % role_count), {}};
      g.branches["go"] = next_of(i);
      int extras = 1 + static_cast<int>(rng() % opt.max_extra_branches);
      for (int b = 0; b < extras; ++b) {
        std::string label = "b" + std::to_string(b);
        std::string target;
        if (i > 0 && coin(rng) < opt.back_edge_prob) {
          target = node_name(static_cast<int>(rng() % i));
        } else if (i + 1 < internal && coin(rng) < 0.7) {
          target = node_name(i + 1 + static_cast<int>(rng() % (internal - i - 1)));
        } else {
          target = end_ids[rng() % end_ids.size()];
        }
        g.branches[label] = target;
      }
      for (const auto& [label, target] : g.branches)
        m.flows.push_back({g.id, target, label});
      m.nodes.push_back(std::move(g));
    }
  }

  // Keep only end nodes something actually flows into.
  std::set<std::string> targeted;
  for (const auto& f : m.flows) targeted.insert(f.to);
  for (const auto& e : end_ids) {
    if (targeted.count(e)) {
      m.nodes.push_back(EndNode{e});
      m.end_marks.push_back(e);
    }
  }
  return m;
}

}  // namespace testutil
