#include "rpqdb/planner.hpp"

#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace rpqdb;
namespace ts = rpqdb::testing;

namespace {

const char* kMoeQuery =
    "MATCH TRAIL p = (x)-[(Knows|Likes.HasCreator)+]->(y) "
    "WHERE x.name = \"Moe\" RETURN y.name LIMIT 10";

PlanPtr plan_of(const std::string& text) {
  return translate(parse_query(text));
}

size_t count_kind(const PlanNode& n, PlanNode::Kind k) {
  size_t c = n.kind == k ? 1 : 0;
  for (const PlanPtr& ch : n.children) c += count_kind(*ch, k);
  return c;
}

void check_semantics(const PlanNode& n, PathSemantic tau) {
  if (n.kind == PlanNode::Kind::Join || n.kind == PlanNode::Kind::Recursive ||
      n.kind == PlanNode::Kind::RecursiveSeeded)
    EXPECT_EQ(n.semantic, tau);
  for (const PlanPtr& c : n.children) check_semantics(*c, tau);
}

}  // namespace

TEST(Translate, BasicPlanForClosureQuery) {
  // (Knows|Likes.HasCreator)+ keeps the union inside the recursion: the
  // closure of the combined base also covers paths that mix the branches.
  PlanPtr plan = plan_of(kMoeQuery);
  EXPECT_EQ(explain(*plan),
            "Projection(LAST().name; limit=10)\n"
            "  Selection(FIRST().name = \"Moe\")\n"
            "    Recursive[TRAIL]\n"
            "      Union\n"
            "        Paths1(Knows)\n"
            "        Join[TRAIL]\n"
            "          Paths1(Likes)\n"
            "          Paths1(HasCreator)\n");
  check_semantics(*plan, PathSemantic::Trail);
}

TEST(Translate, SingleLabelQuery) {
  PlanPtr plan = plan_of(
      "MATCH WALK p = (x)-[Knows]->(y) WHERE x.name = \"Bart\" RETURN y.name");
  EXPECT_EQ(explain(*plan),
            "Projection(LAST().name)\n"
            "  Selection(FIRST().name = \"Bart\")\n"
            "    Paths1(Knows)\n");
}

TEST(Translate, OptionalLowersToUnionWithPaths0) {
  PlanPtr plan = plan_of("MATCH p = (x)-[a?]->(y) RETURN p");
  const PlanNode& body = *plan->children[0];
  ASSERT_EQ(body.kind, PlanNode::Kind::Union);
  EXPECT_EQ(body.children[0]->kind, PlanNode::Kind::Scan0);
  EXPECT_EQ(body.children[1]->kind, PlanNode::Kind::Scan1);
}

TEST(Translate, StarLowersToUnionWithRecursive) {
  PlanPtr plan = plan_of("MATCH p = (x)-[a*]->(y) RETURN p");
  const PlanNode& body = *plan->children[0];
  ASSERT_EQ(body.kind, PlanNode::Kind::Union);
  EXPECT_EQ(body.children[0]->kind, PlanNode::Kind::Scan0);
  ASSERT_EQ(body.children[1]->kind, PlanNode::Kind::Recursive);
  EXPECT_EQ(body.children[1]->children[0]->kind, PlanNode::Kind::Scan1);
}

TEST(Translate, NegatedLabelBecomesNegScan) {
  PlanPtr plan = plan_of("MATCH p = (x)-[!Knows]->(y) RETURN p");
  EXPECT_EQ(plan->children[0]->kind, PlanNode::Kind::NegScan1);
  EXPECT_EQ(plan->children[0]->label, "Knows");
}

TEST(Translate, ProjectionExactlyOnceAtRoot) {
  ts::Rng rng(808);
  std::vector<std::string> labels = {"A", "B", "C"};
  for (int i = 0; i < 200; ++i) {
    ParsedQuery q = ts::random_query(rng, labels);
    PlanPtr plan = translate(q);
    EXPECT_EQ(plan->kind, PlanNode::Kind::Projection);
    EXPECT_EQ(count_kind(*plan, PlanNode::Kind::Projection), 1u);
    // Any Selection produced by translate sits directly under the root.
    EXPECT_LE(count_kind(*plan, PlanNode::Kind::Selection), 1u);
    if (q.condition)
      EXPECT_EQ(plan->children[0]->kind, PlanNode::Kind::Selection);
  }
}

TEST(Optimize, SourceSelectionSeedsRecursionThroughUnionAndJoin) {
  // The source filter seeds the recursion and then distributes through the
  // seed's union, ending up on the left scans of both branches; the
  // expansion base stays unfiltered.
  PlanPtr plan = optimize(plan_of(kMoeQuery));
  EXPECT_EQ(explain(*plan),
            "Projection(LAST().name; limit=10)\n"
            "  RecursiveSeeded[TRAIL]\n"
            "    Union\n"
            "      Selection(FIRST().name = \"Moe\")\n"
            "        Paths1(Knows)\n"
            "      Join[TRAIL]\n"
            "        Selection(FIRST().name = \"Moe\")\n"
            "          Paths1(Likes)\n"
            "        Paths1(HasCreator)\n"
            "    Union\n"
            "      Paths1(Knows)\n"
            "      Join[TRAIL]\n"
            "        Paths1(Likes)\n"
            "        Paths1(HasCreator)\n");
}

TEST(Optimize, NoSelectionMeansNoChange) {
  PlanPtr plan = plan_of("MATCH p = (x)-[(a|b)+]->(y) RETURN p LIMIT 5");
  PlanPtr optimized = optimize(plan->clone());
  EXPECT_TRUE(optimized->equals(*plan));
}

TEST(Optimize, SourceAndTargetConjunctsSplitOverJoin) {
  PlanPtr plan = plan_of(
      "MATCH p = (x)-[a.b]->(y) WHERE x.name = \"u\" AND y.name = \"v\" "
      "RETURN p");
  PlanPtr optimized = optimize(std::move(plan));
  EXPECT_EQ(explain(*optimized),
            "Projection(p)\n"
            "  Join[WALK]\n"
            "    Selection(FIRST().name = \"u\")\n"
            "      Paths1(a)\n"
            "    Selection(LAST().name = \"v\")\n"
            "      Paths1(b)\n");
}

TEST(Optimize, TargetConditionSeedsNothing) {
  // Target conditions stay above recursions and unions.
  PlanPtr plan = plan_of(
      "MATCH p = (x)-[a+]->(y) WHERE y.name = \"v\" RETURN p");
  PlanPtr optimized = optimize(std::move(plan));
  EXPECT_EQ(explain(*optimized),
            "Projection(p)\n"
            "  Selection(LAST().name = \"v\")\n"
            "    Recursive[WALK]\n"
            "      Paths1(a)\n");
}

TEST(Optimize, InteriorAndOrConditionsStayPut) {
  for (const char* where :
       {"NODE(1).name = \"u\"", "LENGTH() > 2", "ISTRAIL()",
        "x.name = \"u\" OR y.name = \"v\""}) {
    std::string text = std::string("MATCH p = (x)-[a|b]->(y) WHERE ") + where +
                       " RETURN p";
    PlanPtr plan = plan_of(text);
    PlanPtr optimized = optimize(plan->clone());
    EXPECT_TRUE(optimized->equals(*plan)) << where;
  }
}

TEST(Optimize, MixedConjunctsLeaveResidue) {
  PlanPtr plan = plan_of(
      "MATCH p = (x)-[a|b]->(y) WHERE x.name = \"u\" AND LENGTH() = 1 "
      "RETURN p");
  PlanPtr optimized = optimize(std::move(plan));
  EXPECT_EQ(explain(*optimized),
            "Projection(p)\n"
            "  Selection(LENGTH() = 1)\n"
            "    Union\n"
            "      Selection(FIRST().name = \"u\")\n"
            "        Paths1(a)\n"
            "      Selection(FIRST().name = \"u\")\n"
            "        Paths1(b)\n");
}

TEST(Optimize, Idempotent) {
  ts::Rng rng(909);
  std::vector<std::string> labels = {"A", "B", "C"};
  for (int i = 0; i < 300; ++i) {
    ParsedQuery q = ts::random_query(rng, labels);
    PlanPtr once = optimize(translate(q));
    PlanPtr twice = optimize(once->clone());
    EXPECT_TRUE(twice->equals(*once)) << to_text(q);
  }
}

TEST(Explain, SingleLeaf) {
  PlanPtr scan = PlanNode::scan1("Knows");
  EXPECT_EQ(explain(*scan), "Paths1(Knows)\n");
  EXPECT_EQ(explain(*PlanNode::scan0()), "Paths0\n");
  EXPECT_EQ(explain(*PlanNode::neg_scan1("Knows")), "Paths1(!Knows)\n");
}

TEST(Explain, InjectiveOnQueryCorpus) {
  ts::Rng rng(3141);
  std::vector<std::string> labels = {"A", "B", "C"};
  std::map<std::string, std::string> seen;  // explain -> query text
  for (int i = 0; i < 200; ++i) {
    ParsedQuery q = ts::random_query(rng, labels);
    PlanPtr plan = optimize(translate(q));
    std::string e = explain(*plan);
    std::string text = to_text(q);
    auto [it, fresh] = seen.emplace(e, text);
    if (!fresh) {
      // Identical plans must come from queries with identical plans, not
      // from a lossy rendering.
      PlanPtr other = optimize(translate(parse_query(it->second)));
      EXPECT_TRUE(plan->equals(*other)) << e;
    }
  }
}
