#include "doctest.h"
#include "support.hpp"
#include "treeqm/error.hpp"
#include "treeqm/labelling.hpp"

using namespace treeqm;

namespace {
  Vertex fv(std::string const& w) {
    return Vertex{testing::f2()->parse_element(w).letters};
  }

  OrientedPath edge(std::string const& w) {
    return {Vertex{}, fv(w)};
  }

  std::vector<std::string> good_words(std::size_t max_len) {
    std::vector<std::string> out;
    for (std::size_t len = 1; len <= max_len; ++len) {
      for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
        std::string w;
        for (std::size_t i = 0; i < len; ++i) {
          w += (bits >> (len - 1 - i)) & 1 ? 'b' : 'a';
        }
        if (is_good_word(w)) {
          out.push_back(w);
        }
      }
    }
    return out;
  }

  std::shared_ptr<Instance const> z3z3() {
    static auto inst = testing::load("z3_z3");
    return inst;
  }
  std::shared_ptr<Instance const> z3z4() {
    static auto inst = testing::load("z3_z4");
    return inst;
  }
}  // namespace

TEST_CASE("good words") {
  CHECK(is_good_word("abb"));
  CHECK(is_good_word("abbabbb"));
  CHECK_FALSE(is_good_word(""));
  CHECK_FALSE(is_good_word("ab"));
  CHECK_FALSE(is_good_word("abbab"));
  CHECK_FALSE(is_good_word("babb"));
  CHECK_FALSE(is_good_word("abbc"));
  // a b^N blocks with N >= 2 and total length <= 8
  CHECK(good_words(8).size() == 12);
}

TEST_CASE("chainable") {
  TreeView fr(testing::f2(), ViewMode::raw);
  auto     c = chainable(fr, edge("x"), edge("x"));
  CHECK(c.chainable);
  CHECK(c.xi == testing::f2()->identity());
  CHECK(c.g == testing::f2()->parse_element("x"));
  CHECK_FALSE(chainable(fr, edge("x"), edge("x^-1")).chainable);

  TreeView sup(testing::s3z4(), ViewMode::suppressed);
  auto     e = sup.enumerate_orbits(1, WindowMode::orbit).begin()->second;
  auto     s = chainable(sup, e, e);
  REQUIRE(s.chainable);
  // xi e . g e is an o-geodesic of o-length 2
  auto joined = OrientedPath{e.from, sup.act(s.g, e).to};
  CHECK(sup.act(s.g, e).from == e.to);
  CHECK(sup.o_length(joined) == 2);
}

TEST_CASE("chainability against the free-group oracle") {
  // in F2, (e,s) chains with (e,t) iff t is not s^-1
  TreeView                 fr(testing::f2(), ViewMode::raw);
  std::vector<std::string> gens{"x", "x^-1", "y", "y^-1"};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      bool const inverse = (i ^ 1) == j;
      CHECK(chainable(fr, edge(gens[i]), edge(gens[j])).chainable == !inverse);
    }
  }
}

TEST_CASE("build_lambda and lambda_case") {
  TreeView fr(testing::f2(), ViewMode::raw);
  auto     lambda = build_lambda(fr, edge("x"), edge("y"), edge("y^-1"));
  // all edges except y -> y^-1 and y^-1 -> y
  LambdaGraph expect;
  for (auto& row : expect.edge) {
    row.fill(true);
  }
  expect.edge[1][2] = expect.edge[2][1] = false;
  CHECK(lambda == expect);
  CHECK(lambda_case(lambda).which == "1a");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(lambda.out_degree(i) >= 2);
  }

  CHECK_THROWS_AS((void) build_lambda(fr, edge("x"), edge("x"), edge("y")), Error);
  // o-edges of length 2 sharing the first edge, in distinct orbits
  TreeView z(z3z3(), ViewMode::suppressed);
  auto     paths = z.paths_from(z.base(), 1, WindowMode::orbit);
  REQUIRE(paths.size() == 6);
  REQUIRE(z.orbit_key(paths[0]) != z.orbit_key(paths[1]));
  try {
    (void) build_lambda(z, paths[0], paths[1], paths[2]);
    FAIL("expected PreconditionViolated");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::PreconditionViolated);
    CHECK(std::string(e.what()).find("e1 and e2") != std::string::npos);
  }

  LambdaGraph b;  // loops and a 3-cycle
  b.edge[0][0] = b.edge[1][1] = b.edge[2][2] = true;
  b.edge[0][1] = b.edge[1][2] = b.edge[2][0] = true;
  CHECK(lambda_case(b).which == "1b");
  LambdaGraph c;  // complete, loopless
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      c.edge[i][j] = i != j;
    }
  }
  CHECK(lambda_case(c).which == "1c");
  LambdaGraph a = c;
  a.edge[2][2]  = true;
  auto la       = lambda_case(a);
  CHECK(la.which == "1a");
  CHECK(la.i == 0);
  CHECK(la.j == 2);
  LambdaGraph none;
  CHECK(lambda_case(none).which.empty());
}

TEST_CASE("minimal_nontransitive_k") {
  CHECK(minimal_nontransitive_k(TreeView(testing::f2(), ViewMode::suppressed), 6).k == 1);
  auto s = minimal_nontransitive_k(suppress_valence2(testing::s3z4()), 6);
  CHECK(s.k == 3);
  CHECK(s.counts == std::vector<std::size_t>{1, 1, 2});
  auto z = minimal_nontransitive_k(suppress_valence2(testing::z5z2()), 6);
  CHECK(z.k == 2);
  CHECK(z.counts == std::vector<std::size_t>{1, 4});
  CHECK_THROWS_AS((void) minimal_nontransitive_k(suppress_valence2(testing::z5z2()), 0), Error);
}

TEST_CASE("classify") {
  auto f = classify(suppress_valence2(testing::f2()), 6);
  CHECK(f.verdict == Verdict::CaseIII);
  CHECK(f.provenance == "1a");
  CHECK(f.k == 1);
  TreeView fr(testing::f2(), ViewMode::raw);
  REQUIRE(f.labelling);
  CHECK(f.labelling->keys_with('a') == std::vector<OrbitKey>{fr.orbit_key(edge("x"))});
  CHECK(f.labelling->keys_with('b') == std::vector<OrbitKey>{fr.orbit_key(edge("y"))});
  CHECK(f.labelling->labels.size() == 4);

  auto s = classify(suppress_valence2(testing::s3z4()), 6);
  CHECK(s.verdict == Verdict::CaseIII);
  CHECK(s.provenance == "3a");
  CHECK(s.k == 3);
  REQUIRE(s.labelling);
  CHECK(s.labelling->labels.size() == 2);

  auto z = classify(suppress_valence2(testing::z5z2()), 6);
  CHECK(z.verdict == Verdict::CaseIII);
  CHECK(z.provenance == "3a");
  CHECK(z.k == 2);

  auto two = classify(suppress_valence2(z3z3()), 6);
  CHECK(two.verdict == Verdict::CaseIII);
  CHECK(two.provenance == "2a");
  CHECK(two.witnesses.size() == 3);
  auto one = classify(suppress_valence2(z3z4()), 6);
  CHECK(one.verdict == Verdict::CaseIII);
  CHECK(one.provenance == "1a");

  CHECK_THROWS_AS((void) classify(TreeView(testing::s3z4(), ViewMode::raw), 6), Error);
  // a tiny budget is reported, not guessed around
  ClassifyOptions opt;
  opt.budget = 5;
  CHECK_THROWS_AS((void) classify(suppress_valence2(testing::s3z4()), 6, opt), Error);
}

TEST_CASE("classify is unchanged by relabelling group elements") {
  // S3 with its elements listed in reverse order
  auto s3 = FiniteGroup::symmetric(3);
  std::vector<std::string>      names(s3.names().rbegin(), s3.names().rend());
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 6; ++y) {
      t[x][y] = 5 - s3.mul(5 - x, 5 - y);
    }
  }
  auto relabelled = std::make_shared<Instance const>(Instance::amalgam(
      FiniteGroup::from_table(names, t),
      FiniteGroup::cyclic(4),
      FiniteGroup::cyclic(2),
      Embedding{{5 - *s3.find("012"), 5 - *s3.find("102")}},
      Embedding{{0, 2}}));
  auto c = classify(suppress_valence2(relabelled), 6);
  CHECK(c.verdict == Verdict::CaseIII);
  CHECK(c.provenance == "3a");
  CHECK(c.k == 3);
  CHECK(c.orbit_counts == std::vector<std::size_t>{1, 1, 2});
}

TEST_CASE("orbit sets do not depend on the base point within its orbit") {
  std::mt19937_64 rng(5);
  auto            view = suppress_valence2(testing::s3z4());
  for (std::size_t n = 1; n <= 3; ++n) {
    std::set<OrbitKey> at_v;
    for (auto const& [key, p] : view.enumerate_orbits(n, WindowMode::orbit)) {
      at_v.insert(key);
    }
    auto g  = testing::random_element(view.instance(), rng, 8);
    auto gv = view.act(g, view.base());
    std::set<OrbitKey> at_gv;
    for (auto const& p : view.paths_from(gv, n, WindowMode::orbit)) {
      at_gv.insert(view.orbit_key(p));
    }
    CHECK(at_v == at_gv);
  }
}

TEST_CASE("label_of_path") {
  auto view = suppress_valence2(testing::f2());
  auto lab  = *classify(view, 6).labelling;
  CHECK(label_of_path(view, lab, {Vertex{}, fv("x y")}) == "ab");
  CHECK(label_of_path(view, lab, {Vertex{}, fv("x^-1 y^-1")}) == "cc");
  CHECK(label_of_path(view, lab, {fv("x"), fv("x")}).empty());

  auto s    = suppress_valence2(testing::s3z4());
  auto slab = *classify(s, 6).labelling;
  auto stub = s.sphere(s.base(), 2).front();
  CHECK(label_of_path(s, slab, {s.base(), stub}).empty());

  std::mt19937_64 rng(19);
  for (auto inst : {testing::s3z4(), testing::z5z2(), testing::f2()}) {
    auto v2  = suppress_valence2(inst);
    auto l2  = *classify(v2, 6).labelling;
    auto all = testing::bfs(v2, v2.base(), 7);
    std::vector<Vertex> pool;
    for (auto const& [x, d] : all) {
      pool.push_back(x);
    }
    for (int i = 0; i < 20; ++i) {
      auto x = pool[rng() % pool.size()], y = pool[rng() % pool.size()];
      OrientedPath p{x, y};
      auto         L    = *v2.o_length(p);
      auto         word = label_of_path(v2, l2, p);
      CHECK(word.size() == (L + 1 > l2.k ? L + 1 - l2.k : 0));
      // labels factor through orbits
      auto g = testing::random_element(*inst, rng, 8);
      CHECK(label_of_path(v2, l2, v2.act(g, p)) == word);
    }
    CHECK(reversal_compatible(v2, l2));
  }
}

TEST_CASE("realize_word") {
  auto view = suppress_valence2(testing::f2());
  auto lab  = *classify(view, 6).labelling;
  CHECK(realize_word(view, lab, "") == OrientedPath{Vertex{}, Vertex{}});
  auto p = realize_word(view, lab, "abb");
  CHECK(view.vertices(p)
        == std::vector<Vertex>{Vertex{}, fv("x"), fv("x y"), fv("x y^2")});

  auto s    = suppress_valence2(testing::s3z4());
  auto slab = *classify(s, 6).labelling;
  auto stub = realize_word(s, slab, "");
  CHECK(s.o_length(stub) == 2);

  for (auto inst : {testing::f2(), testing::s3z4(), testing::z5z2(), z3z3(), z3z4()}) {
    auto v2 = suppress_valence2(inst);
    auto l2 = *classify(v2, 6).labelling;
    for (auto const& w : good_words(8)) {
      auto path = realize_word(v2, l2, w);
      CHECK(path.from == v2.base());
      CHECK(label_of_path(v2, l2, path) == w);
    }
    // words using c, where some orbit is labelled c
    if (!l2.keys_with('c').empty()) {
      auto path = realize_word(v2, l2, "cabbc");
      CHECK(label_of_path(v2, l2, path) == "cabbc");
    } else {
      CHECK_THROWS_AS((void) realize_word(v2, l2, "cabbc"), Error);
    }
  }

  // an impossible word, and a starved budget
  Labelling only_a = lab;
  for (auto& [key, l] : only_a.labels) {
    l = 'a';
  }
  try {
    (void) realize_word(view, only_a, "ab");
    FAIL("expected RealizationFailed");
  } catch (Error const& e) {
    CHECK(e.kind() == ErrorKind::RealizationFailed);
  }
  CHECK_THROWS_AS((void) realize_word(s, slab, "abbbbbbbbb", 3), Error);
}

TEST_CASE("orient_edges on a piece of the 3-regular tree") {
  // centre 0 with neighbours 1 2 3; 1 has 4 5, 2 has 6 7, 3 has 8 9. The
  // flow runs from 4 through 1 and 0 outwards.
  std::vector<SignedOEdge> edges{{{1, 0}, 1},
                                 {{0, 2}, 1},
                                 {{0, 3}, 1},
                                 {{1, 5}, 1},
                                 {{2, 6}, 1},
                                 {{2, 7}, 1},
                                 {{3, 8}, 1},
                                 {{3, 9}, 1},
                                 {{1, 4}, -1},
                                 {{0, 1}, -1}};
  auto o = orient_edges(edges, {0, 1, 2, 3});
  CHECK(o.ok);
  CHECK(o.edges.size() == 9);
  CHECK(std::find(o.edges.begin(), o.edges.end(), std::pair{4, 1}) != o.edges.end());

  auto clash = edges;
  clash.push_back({{2, 0}, 1});
  auto c = orient_edges(clash, {0, 1, 2, 3});
  CHECK_FALSE(c.ok);
  CHECK(c.failure.find("both ways") != std::string::npos);

  auto two_in = edges;
  two_in[0]   = {{0, 1}, 1};
  two_in[9]   = {{0, 1}, 1};
  auto t      = orient_edges(two_in, {0, 1, 2, 3});
  CHECK_FALSE(t.ok);
  CHECK(t.failure.find("incoming") != std::string::npos);

  auto gap = edges;
  gap.push_back({{3, 10}, 0});
  CHECK_FALSE(orient_edges(gap, {0, 1, 2, 3}).ok);
  // unsigned o-edges away from the interior are fine
  auto outside = edges;
  outside.push_back({{9, 11}, 0});
  CHECK(orient_edges(outside, {0, 1, 2, 3}).ok);

  // length-2 o-edges through midpoints 10..12 around centre 0
  std::vector<SignedOEdge> mids{{{1, 10, 0}, 1}, {{0, 11, 2}, 1}, {{0, 12, 3}, 1}};
  CHECK(orient_edges(mids, {0}).ok);
}
