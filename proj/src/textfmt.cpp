#include "procflow/textfmt.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace procflow {

ParseError::ParseError(std::string code, SourceSpan span, const std::string& message)
    : std::runtime_error(code + " at " + std::to_string(span.line) + ":" +
                         std::to_string(span.column) + ": " + message),
      code_(std::move(code)),
      span_(span) {}

int level_rank(Level level) { return static_cast<int>(level); }

const char* level_keyword(Level level) {
  switch (level) {
    case Level::High: return "high";
    case Level::Medium: return "medium";
    case Level::Low: return "low";
  }
  return "?";
}

std::optional<Level> level_from_keyword(std::string_view word) {
  std::string lower(word);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "high") return Level::High;
  if (lower == "medium") return Level::Medium;
  if (lower == "low") return Level::Low;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

namespace {

enum class TokKind { Word, String, Arrow, Equals, Comma, LBrace, RBrace, LBracket, RBracket, Eof };

struct Token {
  TokKind kind = TokKind::Eof;
  std::string text;
  SourceSpan span;
};

const char* const kKeywords[] = {"process", "role",  "task", "gateway",  "branch",
                                 "flow",    "start", "end",  "annotate", "override",
                                 "package"};

bool is_keyword(const std::string& word) {
  for (const char* k : kKeywords) {
    if (word == k) return true;
  }
  return false;
}

bool is_identifier(const std::string& word) {
  if (word.empty() || word[0] < 'a' || word[0] > 'z') return false;
  return std::all_of(word.begin(), word.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  int line = 1;
  int col = 1;
  size_t i = 0;
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    SourceSpan span{line, col};
    if (c == '"') {
      std::string value;
      advance(1);
      bool closed = false;
      while (i < text.size()) {
        char d = text[i];
        if (d == '\n') break;
        if (d == '\\' && i + 1 < text.size() && (text[i + 1] == '"' || text[i + 1] == '\\')) {
          value.push_back(text[i + 1]);
          advance(2);
          continue;
        }
        if (d == '"') {
          advance(1);
          closed = true;
          break;
        }
        value.push_back(d);
        advance(1);
      }
      if (!closed) throw ParseError("unterminated-string", span, "missing closing quote");
      tokens.push_back({TokKind::String, value, span});
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      tokens.push_back({TokKind::Arrow, "->", span});
      advance(2);
      continue;
    }
    if (c == '=') { tokens.push_back({TokKind::Equals, "=", span}); advance(1); continue; }
    if (c == ',') { tokens.push_back({TokKind::Comma, ",", span}); advance(1); continue; }
    if (c == '{') { tokens.push_back({TokKind::LBrace, "{", span}); advance(1); continue; }
    if (c == '}') { tokens.push_back({TokKind::RBrace, "}", span}); advance(1); continue; }
    if (c == '[') { tokens.push_back({TokKind::LBracket, "[", span}); advance(1); continue; }
    if (c == ']') { tokens.push_back({TokKind::RBracket, "]", span}); advance(1); continue; }
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        word.push_back(text[i]);
        advance(1);
      }
      tokens.push_back({TokKind::Word, word, span});
      continue;
    }
    throw ParseError("unexpected-character", span, std::string("'") + c + "'");
  }
  tokens.push_back({TokKind::Eof, "", {line, col}});
  return tokens;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

class Cursor {
 public:
  explicit Cursor(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek() const { return tokens_[pos_]; }
  const Token& peek2() const { return tokens_[std::min(pos_ + 1, tokens_.size() - 1)]; }
  const Token& next() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }
  bool at(TokKind kind) const { return peek().kind == kind; }

  // `word =` opens an attribute even when the word doubles as a keyword
  bool at_attribute() const {
    return peek().kind == TokKind::Word && peek2().kind == TokKind::Equals;
  }

  Token expect(TokKind kind, const std::string& code, const std::string& what) {
    if (!at(kind)) throw ParseError(code, peek().span, "expected " + what);
    return next();
  }

  Token expect_identifier(const std::string& what) {
    const Token& t = peek();
    if (t.kind != TokKind::Word || is_keyword(t.text) || !is_identifier(t.text))
      throw ParseError("expected-identifier", t.span, "expected " + what);
    return next();
  }

 private:
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

struct Attr {
  std::string key;
  std::vector<Token> values;  // comma-separated word values, or one string
  SourceSpan span;

  const Token& single(const char* code = "malformed-attribute") const {
    if (values.size() != 1)
      throw ParseError(code, span, key + " takes a single value");
    return values.front();
  }
};

// key=value pairs until the next keyword, punctuation or EOF. Values are
// words or strings; word values may be comma-separated lists.
std::vector<Attr> parse_attrs(Cursor& cur) {
  std::vector<Attr> attrs;
  while (cur.at_attribute()) {
    Token key = cur.next();
    cur.expect(TokKind::Equals, "malformed-attribute", "'=' after " + key.text);
    if (!cur.at(TokKind::Word) && !cur.at(TokKind::String))
      throw ParseError("malformed-attribute", cur.peek().span, "expected value for " + key.text);
    Attr attr{key.text, {cur.next()}, key.span};
    while (attr.values.front().kind == TokKind::Word && cur.at(TokKind::Comma)) {
      cur.next();
      attr.values.push_back(cur.expect(TokKind::Word, "expected-identifier", "value after ','"));
    }
    attrs.push_back(std::move(attr));
  }
  return attrs;
}

struct RawFlow {
  std::string from;
  std::string to;
  std::optional<std::string> branch;
  SourceSpan from_span;
  SourceSpan to_span;
  SourceSpan branch_span;
};

}  // namespace

ProcessModel parse_model(const std::string& text) {
  Cursor cur(tokenize(text));
  ProcessModel model;

  Token process_kw = cur.peek();
  if (process_kw.kind != TokKind::Word || process_kw.text != "process")
    throw ParseError("unknown-keyword", process_kw.span, "expected 'process'");
  cur.next();
  model.name = cur.expect(TokKind::String, "unquoted-title", "quoted process name").text;
  for (const Attr& a : parse_attrs(cur)) {
    if (a.key == "kind") {
      const Token& value = a.single();
      std::string v = value.text;
      std::transform(v.begin(), v.end(), v.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      if (v == "asis")
        model.kind = ModelKind::AsIs;
      else if (v == "tobe")
        model.kind = ModelKind::ToBe;
      else
        throw ParseError("bad-kind", value.span, "kind must be asis or tobe");
    } else {
      throw ParseError("unknown-attribute", a.span, a.key);
    }
  }
  cur.expect(TokKind::LBrace, "expected-brace", "'{' after process header");

  std::vector<RawFlow> raw_flows;
  std::vector<std::pair<std::string, SourceSpan>> start_targets;
  std::vector<std::pair<std::string, SourceSpan>> end_stmts;
  std::set<std::string> declared;

  auto declare = [&](const std::string& id, SourceSpan span) {
    if (!declared.insert(id).second) throw ParseError("duplicate-id", span, id);
  };

  while (!cur.at(TokKind::RBrace)) {
    const Token& t = cur.peek();
    if (t.kind == TokKind::Eof)
      throw ParseError("unexpected-eof", t.span, "missing '}'");
    if (t.kind != TokKind::Word || !is_keyword(t.text))
      throw ParseError("unknown-keyword", t.span, t.text.empty() ? t.text : "'" + t.text + "'");
    std::string kw = cur.next().text;

    if (kw == "role") {
      Token id = cur.expect_identifier("role id");
      std::string title = id.text;
      if (cur.at(TokKind::String)) title = cur.next().text;
      for (const auto& r : model.roles) {
        if (r.id == id.text) throw ParseError("duplicate-id", id.span, id.text);
      }
      model.roles.push_back({id.text, title});
    } else if (kw == "task") {
      Token id = cur.expect_identifier("task id");
      declare(id.text, id.span);
      Task task;
      task.id = id.text;
      task.title = cur.expect(TokKind::String, "unquoted-title", "quoted task title").text;
      for (const Attr& a : parse_attrs(cur)) {
        if (a.key == "roles" || a.key == "role") {
          for (const Token& v : a.values) {
            if (v.kind != TokKind::Word || !is_identifier(v.text))
              throw ParseError("expected-identifier", v.span, "role id");
            task.roles.push_back(v.text);
          }
        } else if (a.key == "label") {
          const Token& value = a.single();
          if (value.text.size() != 1 || !label_from_letter(value.text[0]))
            throw ParseError("bad-label", value.span, "label must be A, S or M");
          task.label = label_from_letter(value.text[0]);
        } else {
          throw ParseError("unknown-attribute", a.span, a.key);
        }
      }
      model.nodes.push_back(std::move(task));
    } else if (kw == "gateway") {
      Token id = cur.expect_identifier("gateway id");
      declare(id.text, id.span);
      DecisionGateway gw;
      gw.id = id.text;
      gw.title = cur.expect(TokKind::String, "unquoted-title", "quoted gateway title").text;
      for (const Attr& a : parse_attrs(cur)) {
        if (a.key == "role") {
          const Token& value = a.single();
          if (value.kind != TokKind::Word || !is_identifier(value.text))
            throw ParseError("expected-identifier", value.span, "role id");
          gw.role = value.text;
        } else {
          throw ParseError("unknown-attribute", a.span, a.key);
        }
      }
      if (gw.role.empty())
        throw ParseError("missing-attribute", id.span, "gateway " + gw.id + " needs role=");
      model.nodes.push_back(std::move(gw));
    } else if (kw == "branch") {
      Token gid = cur.expect_identifier("gateway id");
      Token label = cur.expect_identifier("branch label");
      cur.expect(TokKind::Arrow, "malformed-flow", "'->' in branch");
      Token target = cur.expect_identifier("branch target");
      raw_flows.push_back({gid.text, target.text, label.text, gid.span, target.span, label.span});
    } else if (kw == "flow") {
      Token from = cur.expect_identifier("flow source");
      cur.expect(TokKind::Arrow, "malformed-flow", "'->' between flow endpoints");
      Token to = cur.expect_identifier("flow target");
      std::optional<std::string> branch;
      SourceSpan branch_span{};
      if (cur.at(TokKind::LBracket)) {
        cur.next();
        Token label = cur.expect_identifier("branch label");
        cur.expect(TokKind::RBracket, "malformed-flow", "']' after branch label");
        branch = label.text;
        branch_span = label.span;
      }
      raw_flows.push_back({from.text, to.text, branch, from.span, to.span, branch_span});
    } else if (kw == "start") {
      Token target = cur.expect_identifier("start target");
      if (!start_targets.empty())
        throw ParseError("duplicate-start", target.span, "start already declared");
      start_targets.push_back({target.text, target.span});
    } else if (kw == "end") {
      Token id = cur.expect_identifier("end id");
      end_stmts.push_back({id.text, id.span});
    } else {
      throw ParseError("unknown-keyword", t.span, "'" + kw + "' not allowed here");
    }
  }
  cur.next();  // consume '}'
  if (!cur.at(TokKind::Eof))
    throw ParseError("trailing-input", cur.peek().span, "content after '}'");

  // Resolution: end statements first (fresh ids declare EndNodes), then the
  // start marker and flows against the full node table.
  for (const auto& [id, span] : end_stmts) {
    if (!declared.count(id)) {
      declared.insert(id);
      model.nodes.push_back(EndNode{id});
    }
    model.end_marks.push_back(id);
  }
  if (!start_targets.empty()) {
    const auto& [target, span] = start_targets.front();
    if (!declared.count(target)) throw ParseError("unknown-node-reference", span, target);
    model.nodes.push_back(StartNode{"start"});
    model.flows.push_back({"start", target, std::nullopt});
  }
  for (const RawFlow& rf : raw_flows) {
    if (!declared.count(rf.from)) throw ParseError("unknown-node-reference", rf.from_span, rf.from);
    if (!declared.count(rf.to)) throw ParseError("unknown-node-reference", rf.to_span, rf.to);
    const Node* from = model.find_node(rf.from);
    bool is_gateway = std::holds_alternative<DecisionGateway>(*from);
    if (is_gateway) {
      if (!rf.branch)
        throw ParseError("gateway-flow-missing-branch", rf.from_span,
                         "flows out of " + rf.from + " need a branch label");
      for (auto& n : model.nodes) {
        if (DecisionGateway* g = std::get_if<DecisionGateway>(&n); g && g->id == rf.from) {
          if (!g->branches.emplace(*rf.branch, rf.to).second)
            throw ParseError("duplicate-branch", rf.branch_span, rf.from + " [" + *rf.branch + "]");
        }
      }
    } else if (rf.branch) {
      throw ParseError("branch-on-non-gateway", rf.branch_span,
                       rf.from + " is not a gateway");
    }
    model.flows.push_back({rf.from, rf.to, rf.branch});
  }
  return model;
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string serialize_model(const ProcessModel& model) {
  if (!validate_model(model).clean())
    throw ModelError("invalid-model", "serialize_model requires a clean model");

  std::ostringstream out;
  out << "process " << quote(model.name) << " kind="
      << (model.kind == ModelKind::AsIs ? "asis" : "tobe") << " {\n";

  std::vector<Role> roles = model.roles;
  std::sort(roles.begin(), roles.end(), [](const Role& a, const Role& b) { return a.id < b.id; });
  for (const auto& r : roles) out << "role " << r.id << " " << quote(r.title) << "\n";

  std::vector<const Task*> tasks = model.tasks();
  std::sort(tasks.begin(), tasks.end(), [](const Task* a, const Task* b) { return a->id < b->id; });
  for (const Task* t : tasks) {
    std::vector<std::string> rs = t->roles;
    std::sort(rs.begin(), rs.end());
    out << "task " << t->id << " " << quote(t->title) << " roles=";
    for (size_t i = 0; i < rs.size(); ++i) out << (i ? "," : "") << rs[i];
    if (t->label) out << " label=" << label_letter(*t->label);
    out << "\n";
  }

  std::vector<const DecisionGateway*> gws = model.gateways();
  std::sort(gws.begin(), gws.end(),
            [](const DecisionGateway* a, const DecisionGateway* b) { return a->id < b->id; });
  for (const DecisionGateway* g : gws)
    out << "gateway " << g->id << " " << quote(g->title) << " role=" << g->role << "\n";

  const StartNode* start = model.start();
  std::string start_id = start ? start->id : "";
  std::string start_target;
  std::vector<Flow> flows;
  for (const auto& f : model.flows) {
    if (f.from == start_id) {
      start_target = f.to;
      continue;
    }
    flows.push_back(f);
  }
  std::sort(flows.begin(), flows.end(), [](const Flow& a, const Flow& b) {
    return std::tie(a.from, a.branch, a.to) < std::tie(b.from, b.branch, b.to);
  });
  for (const auto& f : flows) {
    out << "flow " << f.from << " -> " << f.to;
    if (f.branch) out << " [" << *f.branch << "]";
    out << "\n";
  }

  out << "start " << start_target << "\n";

  std::vector<const EndNode*> ends = model.ends();
  std::sort(ends.begin(), ends.end(),
            [](const EndNode* a, const EndNode* b) { return a->id < b->id; });
  for (const EndNode* e : ends) out << "end " << e->id << "\n";

  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Annotation files
// ---------------------------------------------------------------------------

AnnotationSet parse_annotations(const std::string& text) {
  Cursor cur(tokenize(text));
  AnnotationSet set;

  while (!cur.at(TokKind::Eof)) {
    const Token& t = cur.peek();
    if (t.kind != TokKind::Word || (t.text != "annotate" && t.text != "override"))
      throw ParseError("unknown-keyword", t.span, "expected 'annotate' or 'override'");
    std::string kw = cur.next().text;
    Token id = cur.expect_identifier("task id");

    if (kw == "annotate") {
      if (set.entries.count(id.text)) throw ParseError("duplicate-annotate", id.span, id.text);
      std::optional<Level> benefit;
      std::optional<Level> cost;
      for (const Attr& a : parse_attrs(cur)) {
        if (a.key != "benefit" && a.key != "cost")
          throw ParseError("unknown-attribute", a.span, a.key);
        const Token& value = a.single();
        std::optional<Level> level = level_from_keyword(value.text);
        if (!level) throw ParseError("bad-level", value.span, value.text);
        if (a.key == "benefit")
          benefit = level;
        else
          cost = level;
      }
      if (!benefit || !cost)
        throw ParseError("missing-attribute", id.span,
                         "annotate " + id.text + " needs benefit= and cost=");
      set.entries[id.text] = Annotation{*benefit, *cost, std::nullopt};
    } else {
      auto it = set.entries.find(id.text);
      if (it == set.entries.end())
        throw ParseError("override-unknown-task", id.span, id.text + " has no annotate line");
      if (it->second.override)
        throw ParseError("duplicate-override", id.span, id.text);
      std::optional<AutomationLabel> label;
      std::string reason;
      bool reason_given = false;
      SourceSpan reason_span{};
      for (const Attr& a : parse_attrs(cur)) {
        if (a.key == "decision") {
          const Token& value = a.single();
          if (value.text.size() != 1 || !label_from_letter(value.text[0]))
            throw ParseError("bad-label", value.span, "decision must be A, S or M");
          label = label_from_letter(value.text[0]);
        } else if (a.key == "reason") {
          const Token& value = a.single();
          if (value.kind != TokKind::String)
            throw ParseError("unquoted-title", value.span, "reason must be quoted");
          reason = value.text;
          reason_given = true;
          reason_span = value.span;
        } else {
          throw ParseError("unknown-attribute", a.span, a.key);
        }
      }
      if (!label)
        throw ParseError("missing-attribute", id.span, "override needs decision=");
      if (!reason_given || reason.empty())
        throw ParseError("override-missing-reason", reason_given ? reason_span : id.span,
                         "override " + id.text + " needs a non-empty reason");
      it->second.override = DecisionOverride{*label, reason};
    }
  }
  return set;
}

// ---------------------------------------------------------------------------
// Package files
// ---------------------------------------------------------------------------

std::vector<UseCasePackage> parse_packages(const std::string& text) {
  Cursor cur(tokenize(text));
  std::vector<UseCasePackage> packages;
  while (!cur.at(TokKind::Eof)) {
    const Token& t = cur.peek();
    if (t.kind != TokKind::Word || t.text != "package")
      throw ParseError("unknown-keyword", t.span, "expected 'package'");
    cur.next();
    UseCasePackage pkg;
    pkg.name = cur.expect(TokKind::String, "unquoted-title", "quoted package name").text;
    while (cur.at(TokKind::Word) && !is_keyword(cur.peek().text))
      pkg.tasks.push_back(cur.expect_identifier("task id").text);
    packages.push_back(std::move(pkg));
  }
  return packages;
}

}  // namespace procflow
