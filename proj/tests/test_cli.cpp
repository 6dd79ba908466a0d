#include "procflow/cli.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::vector<std::string>& args) {
  std::istringstream in;
  std::ostringstream out;
  std::ostringstream err;
  int code = procflow::run_command(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture_path(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "procflow_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("validate: clean model exits 0, missing file exits 2") {
  RunResult ok = run({"validate", fixture_path("journal.asis")});
  CHECK(ok.code == 0);
  CHECK(ok.out.empty());

  RunResult missing = run({"validate", "nosuchfile.asis"});
  CHECK(missing.code == 2);
  CHECK(missing.out.empty());
  CHECK(missing.err.find("nosuchfile.asis") != std::string::npos);
}

TEST_CASE("validate: violations are reported on stdout with exit 1") {
  fs::path bad = temp_dir() / "bad.asis";
  std::ofstream(bad) << "process \"P\" { role r task t1 \"Do\" roles=r start t1 end t1 }";
  RunResult result = run({"validate", bad.string()});
  CHECK(result.code == 1);
  CHECK(result.out.find("task-outflow-count") != std::string::npos);
}

TEST_CASE("validate: a parse error exits 2") {
  fs::path bad = temp_dir() / "bad_syntax.asis";
  std::ofstream(bad) << "process \"P\" { banana }";
  RunResult result = run({"validate", bad.string()});
  CHECK(result.code == 2);
  CHECK(result.err.find("unknown-keyword") != std::string::npos);
}

TEST_CASE("decide prints 22 decisions with 4 overrides") {
  RunResult result = run({"decide", fixture_path("journal.asis"), fixture_path("journal.annot")});
  REQUIRE(result.code == 0);
  CHECK(count_lines(result.out) == 22);

  int overrides = 0;
  std::istringstream lines(result.out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find(" override ") != std::string::npos) ++overrides;
  }
  CHECK(overrides == 4);
  CHECK(result.out.find("t16 S override \"author supplies content\"") != std::string::npos);

  SUBCASE("the golden check passes on the bundled fixture") {
    RunResult golden = run({"decide", "--check-golden", fixture_path("journal.asis"),
                            fixture_path("journal.annot")});
    CHECK(golden.code == 0);
  }
  SUBCASE("identical invocations are byte-identical") {
    RunResult again =
        run({"decide", fixture_path("journal.asis"), fixture_path("journal.annot")});
    CHECK(again.out == result.out);
  }
}

TEST_CASE("the golden check fails on tampered annotations") {
  std::string annot = testutil::read_fixture("journal.annot");
  size_t pos = annot.find("annotate t1 benefit=high cost=low");
  REQUIRE(pos != std::string::npos);
  annot.replace(pos, 33, "annotate t1 benefit=low  cost=low");
  fs::path tampered = temp_dir() / "tampered.annot";
  std::ofstream(tampered) << annot;

  RunResult result =
      run({"decide", "--check-golden", fixture_path("journal.asis"), tampered.string()});
  CHECK(result.code == 1);
  CHECK(result.err.find("t1") != std::string::npos);
}

TEST_CASE("tobe output feeds every downstream command") {
  fs::path tobe_file = temp_dir() / "journal.tobe";
  RunResult tobe = run({"tobe", fixture_path("journal.asis"), fixture_path("journal.annot"),
                        "-o", tobe_file.string()});
  REQUIRE(tobe.code == 0);
  REQUIRE(fs::exists(tobe_file));

  SUBCASE("diff reports the 22 label assignments") {
    RunResult diff = run({"diff", fixture_path("journal.asis"), tobe_file.string()});
    REQUIRE(diff.code == 0);
    CHECK(count_lines(diff.out) == 22);
    std::istringstream lines(diff.out);
    std::string line;
    while (std::getline(lines, line))
      CHECK(line.rfind("SYSTEMINFORMATION LABELASSIGNED ", 0) == 0);
  }
  SUBCASE("diff of a model with itself is empty") {
    RunResult diff = run({"diff", tobe_file.string(), tobe_file.string()});
    CHECK(diff.code == 0);
    CHECK(diff.out.empty());
  }
  SUBCASE("the written file validates and re-serializes unchanged") {
    RunResult validate = run({"validate", tobe_file.string()});
    CHECK(validate.code == 0);
    std::ifstream in(tobe_file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    procflow::ProcessModel reparsed = procflow::parse_model(buf.str());
    CHECK(procflow::serialize_model(reparsed) == buf.str());
  }
  SUBCASE("simulate runs the bundled scripts to their ends") {
    RunResult accept = run({"simulate", tobe_file.string(), "--script",
                            fixture_path("scripts/accept.events")});
    REQUIRE(accept.code == 0);
    CHECK(accept.out.find("final end_published\n") != std::string::npos);

    RunResult reject = run({"simulate", tobe_file.string(), "--script",
                            fixture_path("scripts/reject.events")});
    CHECK(reject.out.find("final end_rejected\n") != std::string::npos);

    RunResult revise = run({"simulate", tobe_file.string(), "--script",
                            fixture_path("scripts/revise_accept.events")});
    CHECK(revise.out.find("final end_published\n") != std::string::npos);
  }
  SUBCASE("a mismatched script is a semantic failure") {
    RunResult result = run({"simulate", tobe_file.string(), "--script",
                            fixture_path("scripts/reject.events"), "--max-revisions", "0"});
    CHECK(result.code == 0);  // reject path takes no loop branch
    fs::path bad_script = temp_dir() / "bad.events";
    std::ofstream(bad_script) << "external t2\n";
    RunResult mismatch = run({"simulate", tobe_file.string(), "--script", bad_script.string()});
    CHECK(mismatch.code == 1);
    CHECK(mismatch.err.find("event-mismatch") != std::string::npos);
  }
  SUBCASE("enumerate lists both ends with path counts") {
    RunResult result = run({"enumerate", tobe_file.string(), "--max-revisions", "1"});
    REQUIRE(result.code == 0);
    CHECK(result.out ==
          "end_published paths=80\n"
          "end_rejected paths=40\n"
          "terminates=true max_steps=41\n");
  }
  SUBCASE("usecases prints the three packages and all actors") {
    RunResult result = run({"usecases", tobe_file.string(), "--packages",
                            fixture_path("journal.packages"), "--actors",
                            "author,secretary,eic,ebm,reviewer,typesetter"});
    REQUIRE(result.code == 0);
    CHECK(result.out.find("package \"paper submission\"") != std::string::npos);
    CHECK(result.out.find("package \"evaluation\"") != std::string::npos);
    CHECK(result.out.find("package \"typesetting and publishing\"") != std::string::npos);
    CHECK(count_lines(result.out) == 6 + 3 + 23);  // actors + packages + associations
  }
  SUBCASE("usecases emits DOT on request") {
    RunResult result = run({"usecases", tobe_file.string(), "--packages",
                            fixture_path("journal.packages"), "--actors", "eic", "--dot"});
    REQUIRE(result.code == 0);
    CHECK(result.out.rfind("digraph usecases {", 0) == 0);
  }
  SUBCASE("render colors the to-be tasks") {
    RunResult result = run({"render", tobe_file.string()});
    REQUIRE(result.code == 0);
    CHECK(result.out.rfind("digraph", 0) == 0);

    fs::path dot_file = temp_dir() / "journal.dot";
    RunResult to_file = run({"render", tobe_file.string(), "-o", dot_file.string()});
    REQUIRE(to_file.code == 0);
    CHECK(to_file.out.empty());
    std::ifstream in(dot_file, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == result.out);
  }
}

TEST_CASE("metrics prints the stable key=value listing") {
  RunResult result = run({"metrics", fixture_path("journal.asis"), fixture_path("journal.annot")});
  REQUIRE(result.code == 0);
  CHECK(result.out == "A=6\nS=7\nM=9\nautomation_degree=19/44\n");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"decide", "only-one-arg"}).code == 2);
  CHECK(run({"render", fixture_path("journal.asis"), "--wat"}).code == 2);
  CHECK(run({"enumerate", fixture_path("journal.asis"), "--max-revisions", "-1"}).code == 2);
}

TEST_CASE("help exits 0") {
  RunResult result = run({"--help"});
  CHECK(result.code == 0);
  CHECK(result.out.find("procflow") != std::string::npos);
}
