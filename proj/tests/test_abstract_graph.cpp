// Copyright 2026 The nashspec Authors.
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


#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "nashspec/abstract_graph.hpp"
#include "nashspec/spec.hpp"
#include "test_util.hpp"

namespace nashspec {
namespace {

TEST(AbstractGraphTest, AchieveHasTwoVertices) {
  AbstractGraph g = spec_to_abstract_graph(achieve(p_atom(0)));
  EXPECT_EQ(g.num_vertices, 2);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0].from, g.initial);
  EXPECT_TRUE(g.is_final[g.edges[0].to]);
}

TEST(AbstractGraphTest, SequenceChainsSubgoals) {
  Spec phi = seq(achieve(p_atom(0)), seq(achieve(p_atom(1)), achieve(p_atom(2))));
  AbstractGraph g = spec_to_abstract_graph(phi);
  EXPECT_EQ(g.num_vertices, 4);
  EXPECT_EQ(g.edges.size(), 3u);
  int finals = 0;
  for (int v = 0; v < g.num_vertices; ++v) finals += g.is_final[v];
  EXPECT_EQ(finals, 1);
}

TEST(AbstractGraphTest, ChoiceSharesInitialVertex) {
  AbstractGraph g = spec_to_abstract_graph(choice(achieve(p_atom(0)), achieve(p_atom(1))));
  EXPECT_EQ(g.num_vertices, 3);
  EXPECT_EQ(g.out[g.initial].size(), 2u);
}

TEST(AbstractGraphTest, EnsuringConjoinsEverySafeSet) {
  Spec phi = ensuring(seq(achieve(p_atom(0)), achieve(p_atom(1))), p_atom(2));
  AbstractGraph g = spec_to_abstract_graph(phi);
  for (const auto& e : g.edges) {
    EXPECT_FALSE(eval(e.safe.a, 0b001));
    EXPECT_TRUE(eval(e.safe.a, 0b101));
  }
}

TEST(AbstractGraphTest, SatisfactionMatchesSpec) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 150; ++i) {
    Spec phi = testing::random_spec(rng, 3, 6);
    AbstractGraph g = spec_to_abstract_graph(phi);
    testing::for_each_word(8, 4, [&](std::span<const AtomMask> z) {
      ASSERT_EQ(satisfies_graph(z, g), testing::naive_satisfies(z, phi)) << to_string(phi);
    });
  }
}

TEST(SafeSetTest, ConcatNeedsTwoNonemptyParts) {
  SafeSet z = SafeSet::concat(p_atom(0), p_atom(1));
  std::vector<AtomMask> one{3};
  EXPECT_FALSE(z.contains(one));
  std::vector<AtomMask> two{1, 2};
  EXPECT_TRUE(z.contains(two));
  std::vector<AtomMask> bad{2, 1};
  EXPECT_FALSE(z.contains(bad));
}

std::vector<std::shared_ptr<const AbstractGraph>> graphs_of(const std::vector<Spec>& specs) {
  std::vector<std::shared_ptr<const AbstractGraph>> out;
  for (const auto& s : specs) out.push_back(std::make_shared<AbstractGraph>(spec_to_abstract_graph(s)));
  return out;
}

TEST(ProductGraphTest, VertexCountIsProduct) {
  auto gs = graphs_of({seq(achieve(p_atom(0)), achieve(p_atom(1))), achieve(p_atom(2))});
  ProductGraph pg = product(gs, {0, 1});
  EXPECT_EQ(pg.num_vertices, 3 * 2);
  EXPECT_EQ(pg.members, (std::vector<int>{0, 1}));
  // From the initial tuple: agent 0 moves, agent 1 moves, or both.
  EXPECT_EQ(pg.out[pg.initial].size(), 3u);
  for (int v = 0; v < pg.num_vertices; ++v) EXPECT_EQ(pg.vertex_of(pg.tuple(v)), v);
  EXPECT_NO_THROW(pg.topological_order());
}

TEST(ProductGraphTest, SingletonCoalitionMirrorsAgentGraph) {
  auto gs = graphs_of({achieve(p_atom(0)), seq(achieve(p_atom(1)), achieve(p_atom(2)))});
  ProductGraph pg = product(gs, {1});
  EXPECT_EQ(pg.num_vertices, gs[1]->num_vertices);
  EXPECT_EQ(pg.edges.size(), gs[1]->edges.size());
  auto paths = enumerate_paths(pg);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].size(), 2u);
}

TEST(ProductGraphTest, PathCapThrows) {
  std::vector<Spec> specs;
  for (int i = 0; i < 3; ++i) specs.push_back(seq(achieve(p_atom(0)), seq(achieve(p_atom(1)), achieve(p_atom(2)))));
  ProductGraph pg = product(graphs_of(specs), {0, 1, 2});
  EXPECT_THROW(enumerate_paths(pg, 10), PathBudgetError);
}

TEST(ProductGraphTest, TrackerFindsMinimalIndex) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Spec> specs{testing::random_spec(rng, 3, 3), testing::random_spec(rng, 3, 3)};
    ProductGraph pg = product(graphs_of(specs), {0, 1});
    for (int e = 0; e < static_cast<int>(pg.edges.size()); ++e) {
      EdgeTracker tr(pg, e);
      for (int rep = 0; rep < 30; ++rep) {
        std::vector<AtomMask> seg(6);
        for (auto& l : seg) l = rng() % 8;
        auto expect = min_achievement_index(seg, pg, e);
        tr.reset();
        std::optional<int> got;
        for (int k = 0; k < 6; ++k) {
          auto out = tr.step(seg[k]);
          if (out.achieved) {
            got = k;
            break;
          }
          if (out.dead) break;
        }
        ASSERT_EQ(got, expect) << "trial " << trial << " edge " << e;
      }
    }
  }
}

TEST(ProductGraphTest, AchievedPathSatisfiesMembers) {
  std::mt19937_64 rng(31);
  int hits = 0;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Spec> specs{testing::random_spec(rng, 3, 3), testing::random_spec(rng, 3, 3)};
    ProductGraph pg = product(graphs_of(specs), {0, 1});
    auto paths = enumerate_paths(pg);
    for (int rep = 0; rep < 200 && !paths.empty(); ++rep) {
      const auto& path = paths[rng() % paths.size()];
      std::vector<AtomMask> z(1 + rng() % 6);
      for (auto& l : z) l = rng() % 8;
      if (!achieves_path(z, pg, path)) continue;
      ++hits;
      for (const auto& s : specs) ASSERT_TRUE(testing::naive_satisfies(z, s));
    }
  }
  EXPECT_GT(hits, 50);
}

TEST(ProductGraphTest, EmptyCoalitionRejected) {
  auto gs = graphs_of({achieve(p_atom(0))});
  EXPECT_THROW(product(gs, {}), std::invalid_argument);
}

}  // namespace
}  // namespace nashspec
