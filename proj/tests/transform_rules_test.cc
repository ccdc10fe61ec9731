// Copyright 2026 The MistForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "mistforge/code_model.h"
#include "mistforge/errors.h"
#include "mistforge/random.h"
#include "mistforge/transform_rules.h"
#include "test_support.h"

namespace mistforge {
namespace {

std::vector<TransformSite> SitesOf(const CodeSnippet& s, TransformRule rule,
                                   Direction direction) {
  std::vector<TransformSite> out;
  for (const TransformSite& site : EnumerateSites(s)) {
    if (site.rule == rule && site.direction == direction) out.push_back(site);
  }
  return out;
}

CodeSnippet Apply(const CodeSnippet& s, const TransformSite& site) {
  return ApplyTransform(s, PrepareEdit(s, site));
}

std::string StripSpaces(std::string text) {
  text.erase(std::remove_if(text.begin(), text.end(),
                            [](char c) { return c == ' '; }),
             text.end());
  return text;
}

std::set<std::string> Tokens(const std::string& text) {
  static const std::regex token(
      "[A-Za-z_$][A-Za-z0-9_$]*|[0-9]+|\"(?:[^\"\\\\]|\\\\.)*\"|'(?:[^'\\\\]|"
      "\\\\.)*'|[^\\sA-Za-z0-9_$]");
  std::set<std::string> out;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), token);
       it != std::sregex_iterator(); ++it) {
    out.insert(it->str());
  }
  return out;
}

// Tokens a rule template may introduce besides fresh names.
const std::set<std::string>& TemplateVocabulary(TransformRule rule) {
  static const std::map<TransformRule, std::set<std::string>> vocab = {
      {TransformRule::kLoopForWhile,
       {"while", "for", "int", "true", "True", "(", ")", "{", "}", ";", "=",
        "+", "-", "<", ">", "!", ":", "1", "0", "iter", "next", "try",
        "except", "StopIteration", "break", "len", "range", "if", "else",
        "not", "and", "or", "continue", ",", "[", "]", "."}},
      {TransformRule::kBranchIfElseIfIf,
       {"if", "else", "elif", "not", "!", "(", ")", "{", "}", ":", ";"}},
      {TransformRule::kIncDecExpand, {"=", "+", "-", "1", "(", ")"}},
      {TransformRule::kCompoundAssignExpand,
       {"=", "+", "-", "*", "/", "%", "&", "|", "^", "<", ">", "(", ")"}},
      {TransformRule::kConstToVar,
       {"=", ";", "final", "var", "String", "int", "long", "double", "char",
        "float", "boolean"}},
  };
  return vocab.at(rule);
}

TEST_SUITE("transform_rules") {

TEST_CASE("rule names round-trip") {
  for (TransformRule rule : kAllRules) {
    CHECK(ParseRule(RuleName(rule)) == rule);
  }
  CHECK_THROWS_AS(ParseRule("Bogus"), ConfigurationError);
  CHECK(CategoryOf(TransformRule::kLoopForWhile) == RuleCategory::kControlFlow);
  CHECK(CategoryOf(TransformRule::kIncDecExpand) == RuleCategory::kExpression);
  CHECK(CategoryOf(TransformRule::kConstToVar) == RuleCategory::kConstVar);
}

TEST_CASE("java for loop offers a for-to-while site") {
  CodeSnippet s = Parse(
      "class A { int m(int n) { int t = 0; for (int i=0;i<n;i++) { t = t + i; "
      "} return t; } }",
      Language::kJava);
  REQUIRE(s.parse_ok());
  auto sites = SitesOf(s, TransformRule::kLoopForWhile, Direction::kBtoA);
  REQUIRE(sites.size() == 1);
  CodeSnippet w = Apply(s, sites[0]);
  CHECK(w.parse_ok());
  CHECK(w.source().find("while (i<n)") != std::string::npos);
  CHECK(w.source().find("for") == std::string::npos);
}

TEST_CASE("compound assignment offers an expansion site") {
  CodeSnippet java = Parse("class A { void m(int x, int y) { x += y; } }",
                           Language::kJava);
  REQUIRE(java.parse_ok());
  auto sites =
      SitesOf(java, TransformRule::kCompoundAssignExpand, Direction::kBtoA);
  REQUIRE(sites.size() == 1);
  CHECK(StripSpaces(Apply(java, sites[0]).source()) ==
        "classA{voidm(intx,inty){x=x+y;}}");

  CodeSnippet py = Parse("x = 0\ny = 2\nx += y\n", Language::kPython);
  REQUIRE(py.parse_ok());
  sites = SitesOf(py, TransformRule::kCompoundAssignExpand, Direction::kBtoA);
  REQUIRE(sites.size() == 1);
  CHECK(Apply(py, sites[0]).source() == "x = 0\ny = 2\nx = x + y\n");
}

TEST_CASE("print of a literal offers only a constant site") {
  CodeSnippet s = Parse("print('hi')\n", Language::kPython);
  REQUIRE(s.parse_ok());
  auto sites = EnumerateSites(s);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].rule == TransformRule::kConstToVar);
  CHECK(sites[0].direction == Direction::kBtoA);
  CHECK(s.source().substr(sites[0].node_span.begin,
                          sites[0].node_span.size()) == "'hi'");
}

TEST_CASE("decrement expands") {
  CodeSnippet s = Parse("class A { void m() { int j = 3; j--; } }",
                        Language::kJava);
  REQUIRE(s.parse_ok());
  auto sites = SitesOf(s, TransformRule::kIncDecExpand, Direction::kBtoA);
  REQUIRE(sites.size() == 1);
  CodeSnippet r = Apply(s, sites[0]);
  CHECK(r.parse_ok());
  CHECK(StripSpaces(r.source()) == "classA{voidm(){intj=3;j=j-1;}}");
  auto back = SitesOf(r, TransformRule::kIncDecExpand, Direction::kAtoB);
  REQUIRE(back.size() == 1);
  CHECK(Apply(r, back[0]).source() == s.source());
}

TEST_CASE("string literal argument becomes a named constant") {
  CodeSnippet s = Parse("print(\"Hello, World!\")\n", Language::kPython);
  REQUIRE(s.parse_ok());
  auto sites = SitesOf(s, TransformRule::kConstToVar, Direction::kBtoA);
  REQUIRE(sites.size() == 1);
  StructureEdit edit = PrepareEdit(s, sites[0]);
  REQUIRE(edit.fresh_names.size() == 1);
  const std::string& name = edit.fresh_names[0];
  CHECK(name == "mist_tmp_0");
  CodeSnippet r = ApplyTransform(s, edit);
  CHECK(r.source() ==
        name + " = \"Hello, World!\"\nprint(" + name + ")\n");
}

TEST_CASE("fresh names skip names already in use") {
  CodeSnippet s =
      Parse("mist_tmp_0 = 1\nprint('a', mist_tmp_0)\n", Language::kPython);
  REQUIRE(s.parse_ok());
  CHECK(FreshName(s, {}) == "mist_tmp_1");
  CHECK(FreshName(s, {"mist_tmp_1"}) == "mist_tmp_2");
}

TEST_CASE("counting both forms") {
  CodeSnippet s = Parse(
      "def f(n):\n"
      "    t = 0\n"
      "    for i in range(n):\n"
      "        t += i\n"
      "    for j in range(n):\n"
      "        t -= j\n"
      "    while t > 10:\n"
      "        t = t - 10\n"
      "    return t\n",
      Language::kPython);
  REQUIRE(s.parse_ok());
  StructureCounts counts = CountStructures(s);
  CHECK(counts[RuleIndex(TransformRule::kLoopForWhile)] == RuleCounts{2, 1});

  CodeSnippet empty = Parse("def f():\n    pass\n", Language::kPython);
  for (const RuleCounts& c : CountStructures(empty)) {
    CHECK(c == RuleCounts{0, 0});
  }
  CodeSnippet jempty = Parse("class A { void m() {} }", Language::kJava);
  for (const RuleCounts& c : CountStructures(jempty)) {
    CHECK(c == RuleCounts{0, 0});
  }
}

TEST_CASE("fixture loop counts match a line-pattern counter") {
  std::regex java_for("\\bfor\\s*\\(");
  std::regex java_while("\\bwhile\\s*\\(");
  std::regex py_for("^\\s*for\\b", std::regex::multiline);
  std::regex py_while("^\\s*while\\b", std::regex::multiline);
  auto count = [](const std::string& text, const std::regex& re) {
    return static_cast<int>(std::distance(
        std::sregex_iterator(text.begin(), text.end(), re),
        std::sregex_iterator()));
  };
  for (Language lang : {Language::kJava, Language::kPython}) {
    int fors = 0, whiles = 0;
    RuleCounts total;
    for (const LabeledSample& sample : testing::Fixtures(lang)) {
      const std::string& text = sample.snippet.source();
      fors += count(text, lang == Language::kJava ? java_for : py_for);
      whiles += count(text, lang == Language::kJava ? java_while : py_while);
      RuleCounts c = CountStructures(
          sample.snippet)[RuleIndex(TransformRule::kLoopForWhile)];
      total.count_b += c.count_b;
      total.count_a += c.count_a;
    }
    CHECK(fors > 0);
    CHECK(whiles > 0);
    CHECK(total == RuleCounts{fors, whiles});
  }
}

TEST_CASE("python has no increment sites") {
  for (const LabeledSample& sample : testing::Fixtures(Language::kPython)) {
    CHECK(CountStructures(
              sample.snippet)[RuleIndex(TransformRule::kIncDecExpand)] ==
          RuleCounts{0, 0});
    CHECK(SitesOf(sample.snippet, TransformRule::kIncDecExpand,
                  Direction::kBtoA)
              .empty());
  }
}

TEST_CASE("every fixture site either reparses or reports failure") {
  int applied = 0;
  for (Language lang : {Language::kJava, Language::kPython}) {
    for (const LabeledSample& sample : testing::Fixtures(lang)) {
      const CodeSnippet& s = sample.snippet;
      std::set<std::string> before = Tokens(s.source());
      for (const TransformSite& site : EnumerateSites(s)) {
        CHECK(site.node_span.end <= s.source().size());
        StructureEdit edit = PrepareEdit(s, site);
        for (const std::string& fresh : edit.fresh_names) {
          CHECK(s.identifiers().Find(fresh) < 0);
          CHECK(before.count(fresh) == 0);
        }
        try {
          CodeSnippet r = ApplyTransform(s, edit);
          CHECK(r.parse_ok());
          ++applied;
          std::set<std::string> fresh(edit.fresh_names.begin(),
                                      edit.fresh_names.end());
          for (const std::string& tok : Tokens(r.source())) {
            if (before.count(tok) || fresh.count(tok)) continue;
            INFO(RuleName(site.rule), " introduced ", tok);
            CHECK(TemplateVocabulary(site.rule).count(tok) == 1);
          }
        } catch (const TransformFailed&) {
        }
      }
    }
  }
  CHECK(applied > 100);
}

TEST_CASE("stale site is an input error") {
  CodeSnippet s = Parse("class A { void m() { int j = 3; j--; } }",
                        Language::kJava);
  auto sites = SitesOf(s, TransformRule::kIncDecExpand, Direction::kBtoA);
  REQUIRE(sites.size() == 1);
  StructureEdit edit = PrepareEdit(s, sites[0]);
  CodeSnippet other = Parse("class A { void m() { int j = 3; } }",
                            Language::kJava);
  CHECK_THROWS_AS(ApplyTransform(other, edit), InputError);
}

TEST_CASE("replaying a structure log reproduces the text") {
  Rng rng(11);
  for (const LabeledSample& sample : testing::Fixtures(Language::kJava)) {
    CodeSnippet cur = sample.snippet;
    std::vector<StructureEdit> log;
    for (int step = 0; step < 4; ++step) {
      auto sites = EnumerateSites(cur);
      if (sites.empty()) break;
      std::set<std::string> reserved;
      StructureEdit edit = PrepareEdit(cur, sites[rng.Index(sites.size())]);
      try {
        cur = ApplyTransform(cur, edit);
        log.push_back(edit);
      } catch (const TransformFailed&) {
      }
    }
    CHECK(ReplayStructureLog(sample.snippet, log).source() == cur.source());
  }
}

TEST_CASE("python transforms keep behavior") {
  if (!testing::PythonAvailable()) {
    MESSAGE("python3 not available");
    return;
  }
  Rng rng(7);
  int compared = 0;
  for (const LabeledSample& sample : testing::Fixtures(Language::kPython)) {
    testing::ProcessResult expected = testing::RunPython(sample.snippet.source());
    CodeSnippet cur = sample.snippet;
    int steps = 1 + static_cast<int>(rng.Index(10));
    for (int step = 0; step < steps; ++step) {
      auto sites = EnumerateSites(cur);
      if (sites.empty()) break;
      try {
        cur = Apply(cur, sites[rng.Index(sites.size())]);
      } catch (const TransformFailed&) {
      }
    }
    testing::ProcessResult got = testing::RunPython(cur.source());
    INFO(sample.id, "\n", cur.source());
    CHECK(got.status == expected.status);
    CHECK(got.output == expected.output);
    ++compared;
  }
  CHECK(compared == 50);
}

TEST_CASE("forward then backward at the same site keeps behavior") {
  if (!testing::PythonAvailable()) {
    MESSAGE("python3 not available");
    return;
  }
  std::vector<CodeSnippet> programs =
      testing::Snippets(testing::Fixtures(Language::kPython));
  programs.push_back(Parse(
      "total = 0\nfor k in range(1, 20, 3):\n    total += k\n    "
      "print(k, total)\n",
      Language::kPython));
  std::map<TransformRule, int> round_trips;
  for (const CodeSnippet& original : programs) {
    testing::ProcessResult expected = testing::RunPython(original.source());
    for (const TransformSite& site : EnumerateSites(original)) {
      if (site.direction != Direction::kBtoA) continue;
      CodeSnippet forward = Apply(original, site);
      auto backward = SitesOf(forward, site.rule, Direction::kAtoB);
      auto it = std::find_if(backward.begin(), backward.end(),
                             [&](const TransformSite& s) {
                               return s.node_span.begin >= site.node_span.begin;
                             });
      if (it == backward.end()) continue;
      CodeSnippet back = Apply(forward, *it);
      testing::ProcessResult got = testing::RunPython(back.source());
      INFO(RuleName(site.rule), "\n", back.source());
      CHECK(got.output == expected.output);
      CHECK(got.status == expected.status);
      ++round_trips[site.rule];
    }
  }
  CHECK(round_trips[TransformRule::kLoopForWhile] > 0);
  CHECK(round_trips[TransformRule::kCompoundAssignExpand] > 0);
}

}  // TEST_SUITE

}  // namespace
}  // namespace mistforge
