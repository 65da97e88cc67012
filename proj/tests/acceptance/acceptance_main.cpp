// Acceptance checks, one line per criterion. Exit status is the number of
// failing criteria.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "support/properties.hpp"
#include "vizfilter/vizfilter.hpp"

using namespace vizfilter;
namespace fs = std::filesystem;

namespace {

const std::string kScenes = std::string(VZ_FIXTURES) + "/scenes/";

struct Criterion {
  int number;
  std::string title;
  double budget_seconds;
  std::function<std::string()> check;  // empty string = pass
};

std::string expect_eq(const std::string& what, const std::string& got, const std::string& want) {
  if (got == want) return {};
  return what + ": got \"" + got + "\", want \"" + want + "\"";
}

std::string rendered(std::string_view program, const std::string& scene, bool brief = false) {
  const auto& r = Registry::builtin();
  const auto frame = load_scene(kScenes + scene).front();
  return run_program(parse_program(program, r), frame, FixtureBackend(r), r, RenderOptions{brief}).rendered;
}

std::string message_goldens() {
  std::string e;
  if (!(e = expect_eq("two buses", rendered("find NUMBER on BUS", "two_bus.json"),
                      "Found number 73 on bus, left of frame, found number 21 on bus, right of frame."))
           .empty())
    return e;
  if (!(e = expect_eq("no bus", rendered("find NUMBER on BUS", "empty.json"), "No bus found.")).empty()) return e;
  const auto inner = rendered("find NUMBER on BUS", "night_owl.json");
  if (inner.rfind("Found bus, no number", 0) != 0) return "inner miss: got \"" + inner + "\"";
  if (!(e = expect_eq("adjective miss", rendered("find NUMBER on red BUS", "white_bus.json"),
                      "Found white bus, no red bus visible."))
           .empty())
    return e;
  const auto brief = rendered("find DATE on GROCERY PRODUCT", "expiration.json", true);
  if (brief.rfind("Found date, JAN 10 2024", 0) != 0) return "brief: got \"" + brief + "\"";
  return {};
}

std::string explore_golden() {
  const auto& r = Registry::builtin();
  const auto graph = build_scene_graph(load_scene(kScenes + "bus_with_sign.json").front(), r);
  return expect_eq("selection \"30\"", print_program(generate_from_selection(graph, "30-node")),
                   "find NUMBER on BUS");
}

// -- end-to-end through the built binary ------------------------------------

struct Proc {
  int code;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Proc sh(const std::vector<std::string>& args, const fs::path& lib, const std::string& stdin_text = "") {
  std::string cmd = "VIZFILTER_LIB=" + quote(lib.string()) + " ";
  if (!stdin_text.empty()) cmd = "printf '%s' " + quote(stdin_text) + " | " + cmd;
  cmd += quote(VZ_CLI_PATH);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  Proc p{-1, {}};
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return p;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) p.out.append(buf, n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

std::string end_to_end() {
  const fs::path lib = fs::temp_directory_path() / "vizfilter-acceptance-lib";
  fs::remove_all(lib);
  auto step = [](const char* what, const Proc& p, int code, const std::string& needle) -> std::string {
    if (p.code != code) return std::string(what) + ": exit " + std::to_string(p.code) + ", want " + std::to_string(code);
    if (p.out.find(needle) == std::string::npos) return std::string(what) + ": output lacks \"" + needle + "\"";
    return {};
  };
  std::string e;
  // explore interactively: one bad pick, then the "30" item by id; save it
  if (!(e = step("explore", sh({"explore", "--scene", kScenes + "bus_with_sign.json", "--save", "bus-number"}, lib, "x\n30-node\n"),
                 0, "\nfind NUMBER on BUS\n"))
           .empty())
    return e;
  if (!(e = step("lib show", sh({"lib", "show", "bus-number"}, lib), 0, "find NUMBER on BUS\n")).empty()) return e;
  if (!(e = step("run", sh({"run", "bus-number", "--scene", kScenes + "two_bus.json"}, lib), 0,
                 "f1\tFound number 73 on bus, left of frame, found number 21 on bus, right of frame.\n"))
           .empty())
    return e;
  if (!(e = step("ask follow-up",
                 sh({"ask", "--offline", "--modify", "bus-number", "Read the route name instead"}, lib), 0,
                 "find ANY TEXT on BUS\n"))
           .empty())
    return e;
  if (!(e = step("run empty scene", sh({"run", "bus-number", "--scene", kScenes + "empty.json"}, lib), 0,
                 "f1\tNo bus found.\n"))
           .empty())
    return e;
  if (!(e = step("bad scene", sh({"run", "bus-number", "--scene", kScenes + "bad_bbox.json"}, lib), 4, "")).empty())
    return e;
  fs::remove_all(lib);
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "message goldens on authored fixtures", 1.0, message_goldens},
      {2, "run_chain equals brute-force oracle on 20000 chains over 2000 random frames", 30.0,
       [] { return vztest::check_oracle(20240601, 2000, 10); }},
      {3, "explore synthesis re-finds every node of 250 random scenes", 30.0,
       [] { return vztest::check_synthesis(20240602, 250); }},
      {4, "explore golden: selecting \"30\" gives find NUMBER on BUS", 1.0, explore_golden},
      {5, "offline synthesis reproduces every worked NL example", 1.0, [] { return vztest::check_nl_golden(); }},
      {6, "1000 valid IBAN/ISBN-13/Luhn numbers validate, all single-digit mutations fail", 10.0,
       [] { return vztest::check_checksums(20240606, 1000); }},
      {7, "parse/print and decode/encode identity on 1500 random programs", 30.0,
       [] { return vztest::check_round_trips(20240607, 1500); }},
      {8, "match sets and messages unchanged under x2 and x10 scaling (600 frames)", 30.0,
       [] { return vztest::check_scaling(20240608, 600); }},
      {9, "scripted CLI session: explore+save, run, offline follow-up", 5.0, end_to_end},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string problem;
    try {
      problem = c.check();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (problem.empty() && secs > c.budget_seconds)
      problem = "took " + std::to_string(secs) + " s, budget " + std::to_string(c.budget_seconds) + " s";
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::cout << (problem.empty() ? "PASS" : "FAIL") << " criterion " << c.number << ": " << c.title << " ("
              << timing << ")";
    if (!problem.empty()) std::cout << " -- " << problem;
    std::cout << '\n';
    if (!problem.empty()) ++failed;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed\n";
  return failed;
}
