#include <gtest/gtest.h>

#include <algorithm>

#include "elenchus/analysis.hpp"
#include "elenchus/provo.hpp"

using namespace elenchus;

namespace {

AtomSet set(std::initializer_list<const char*> names) {
  AtomSet out;
  for (const char* n : names) out.insert(AtomId(n));
  return out;
}

MaterialBase chain(bool closed) {
  std::vector<AtomicImplication> imps = {{set({"a"}), set({"b"}), ""}, {set({"b"}), set({"c"}), ""}};
  if (closed) imps.push_back({set({"a"}), set({"c"}), ""});
  return MaterialBase(set({"a", "b", "c"}), imps);
}

}  // namespace

TEST(Containment, Provo) {
  const auto audit = containment_audit(provo::base());
  EXPECT_EQ(audit.size(), 19u);
  EXPECT_TRUE(std::all_of(audit.begin(), audit.end(), [](const auto& kv) { return kv.second; }));
}

TEST(Containment, TrivialBases) {
  EXPECT_TRUE(containment_audit(MaterialBase()).empty());
  const auto single = containment_audit(MaterialBase(set({"q"}), {}));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_TRUE(single.at(AtomId("q")));
}

TEST(Transitivity, ProvoEntityChain) {
  const auto gaps = transitivity_gaps(provo::base());
  ASSERT_EQ(gaps.size(), 1u);
  EXPECT_EQ(gaps[0], (TransitivityGap{AtomId("p2"), AtomId("p18"), AtomId("p23")}));
}

TEST(Transitivity, ClosedChainAndEmptyBase) {
  EXPECT_TRUE(transitivity_gaps(chain(true)).empty());
  EXPECT_EQ(transitivity_gaps(chain(false)).size(), 1u);
  EXPECT_TRUE(transitivity_gaps(MaterialBase()).empty());
}

TEST(Monotonicity, ProvoDefeats) {
  const auto defeats = monotonicity_defeats(provo::base());
  auto has = [&](const char* lhs, const char* rhs, const char* extra) {
    return std::any_of(defeats.begin(), defeats.end(), [&](const MonotonicityDefeat& d) {
      return d.implication.lhs == set({lhs}) && d.implication.rhs == set({rhs}) && d.extra == AtomId(extra);
    });
  };
  EXPECT_TRUE(has("p2", "p18", "p23"));
  EXPECT_TRUE(has("p9", "p25", "p26"));
  EXPECT_TRUE(has("p7", "p28", "p24"));
  // Every implication is defeated by every other atom outside it: 9 * 17.
  EXPECT_EQ(defeats.size(), 9u * 17u);
}

TEST(Monotonicity, EmptyI) { EXPECT_TRUE(monotonicity_defeats(MaterialBase(set({"a", "b"}), {})).empty()); }

TEST(Independence, ProvoGroups) {
  const auto report = independence_matrix(provo::base(), provo::groups());
  EXPECT_EQ(report.pair_count, 34u);
  EXPECT_EQ(report.derivable_pairs, 0u);
  EXPECT_EQ(report.total_derivable(), 0u);
  EXPECT_EQ(report.cells.size(), 7u * 6u);
  std::size_t tested = 0;
  for (const auto& c : report.cells) tested += c.tested;
  EXPECT_EQ(tested, 68u);  // both directions
}

TEST(Independence, SmallCases) {
  const MaterialBase b(set({"a", "b"}), {{set({"a"}), set({"b"}), ""}});
  EXPECT_EQ(independence_matrix(b, {{"only", set({"a", "b"})}}).pair_count, 0u);
  const auto r = independence_matrix(b, {{"A", set({"a"})}, {"B", set({"b"})}});
  EXPECT_EQ(r.pair_count, 1u);
  EXPECT_EQ(r.derivable_pairs, 1u);
  EXPECT_EQ(r.total_derivable(), 1u);
}

TEST(Independence, Errors) {
  const MaterialBase b(set({"a", "b"}), {});
  try {
    independence_matrix(b, {{"A", set({"a"})}, {"B", set({"a", "b"})}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "OverlappingGroups");
  }
  try {
    independence_matrix(b, {{"A", set({"z"})}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "UnknownAtom");
  }
}

TEST(Ddt, Examples) {
  const MaterialBase b = provo::base();
  const auto f = [](const char* s) { return parse_formula(s); };
  const DdtResult r1 = ddt_check(b, {}, f("p2"), f("p18"), {});
  EXPECT_TRUE(r1.left);
  EXPECT_TRUE(r1.right);
  EXPECT_TRUE(r1.agree());
  const DdtResult r2 = ddt_check(b, {}, f("p2"), f("p23"), {});
  EXPECT_FALSE(r2.left);
  EXPECT_FALSE(r2.right);
  EXPECT_TRUE(r2.agree());
  const DdtResult r3 = ddt_check(MaterialBase(set({"q"}), {}), {}, f("q"), f("q"), {});
  EXPECT_TRUE(r3.left && r3.right && r3.agree());
}
