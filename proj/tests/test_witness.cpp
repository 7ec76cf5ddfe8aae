#include <doctest.h>

#include <chrono>

#include "support.hpp"
#include "treeqm/error.hpp"
#include "treeqm/labelling.hpp"
#include "treeqm/quasimorphism.hpp"
#include "treeqm/witness.hpp"

using namespace treeqm;

namespace {

  bool throws_kind(auto&& fn, ErrorKind kind) {
    try {
      fn();
    } catch (Error const& e) {
      return e.kind() == kind;
    }
    return false;
  }

  // counted independently of word_family
  std::size_t family_length(std::size_t n, std::size_t i, std::size_t v0, std::size_t blocks) {
    std::size_t total = 0;
    std::size_t V     = v0 * (3 * n + i);
    for (std::size_t j = 0; j <= blocks; ++j) total += 1 + V + j;
    return total;
  }

}  // namespace

TEST_CASE("word_family") {
  WordFamilyParams p{4, 2};
  CHECK(word_family(1, 1, p)
        == "a" + std::string(16, 'b') + "a" + std::string(17, 'b') + "a" + std::string(18, 'b'));
  WordFamilyParams big{100, 100};
  CHECK(word_family(1, 1, big).size() == 45551);
  CHECK(family_length(1, 1, 100, 100) == 45551);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t i = 1; i <= 3; ++i) {
      auto w = word_family(n, i, WordFamilyParams{6, 4});
      CHECK(w.size() == family_length(n, i, 6, 4));
      CHECK(is_good_word(w));
    }
  }
  CHECK(throws_kind([] { (void) word_family(1, 1, WordFamilyParams{0, 2}); },
                    ErrorKind::ParamsTooSmall));
}

TEST_CASE("exponent disjointness") {
  std::vector<std::pair<std::size_t, std::size_t>> req;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t i = 1; i <= 3; ++i) req.emplace_back(n, i);
  CHECK_NOTHROW(check_exponents(req, WordFamilyParams{6, 4}));
  CHECK_NOTHROW(check_exponents(req, WordFamilyParams{5, 4}));
  // blocks >= v0 makes neighbouring families meet
  CHECK(throws_kind([&] { check_exponents(req, WordFamilyParams{4, 4}); },
                    ErrorKind::ParamsTooSmall));
  CHECK(throws_kind([&] { check_exponents(req, WordFamilyParams{100, 100}); },
                    ErrorKind::ParamsTooSmall));
  CHECK_NOTHROW(check_exponents({{1, 1}}, WordFamilyParams{100, 100}));
  CHECK_NOTHROW(check_exponents(req, WordFamilyParams{100, 100, false}));
}

TEST_CASE("word reverse and inverse") {
  CHECK(word_reverse("abb") == "bba");
  CHECK(word_reverse("") == "");
  CHECK(longest_common_subword("xyx", "xyy") == 2);
  CHECK(longest_common_subword("abc", "") == 0);
  CHECK(longest_common_subword("abbba", "bbb") == 3);

  auto view = suppress_valence2(testing::f2());
  auto lab  = *classify(view, 6).labelling;
  // a = x and b = y, their reverses are unlabelled
  CHECK(word_inverse(view, lab, "ab") == "cc");
  CHECK(word_inverse(view, lab, "") == "");

  // hand-made labelling where a's reverse is a and b's reverse is c
  Labelling sym = lab;
  sym.labels.clear();
  OrientedPath const x = view.geodesic(view.base(), view.act(view.instance().parse_element("x"), view.base()));
  OrientedPath const y = view.geodesic(view.base(), view.act(view.instance().parse_element("y"), view.base()));
  sym.labels[view.orbit_key(x)]            = 'a';
  sym.labels[view.orbit_key(x.reversed())] = 'a';
  sym.labels[view.orbit_key(y)]            = 'b';
  sym.representatives[view.orbit_key(x)]            = x;
  sym.representatives[view.orbit_key(x.reversed())] = x.reversed();
  sym.representatives[view.orbit_key(y)]            = y;
  CHECK(word_inverse(view, sym, "aab") == "caa");
  // orbits labelled a now reverse to a and to b
  sym.labels[view.orbit_key(y.reversed())]            = 'a';
  sym.representatives[view.orbit_key(y.reversed())] = y.reversed();
  CHECK(throws_kind([&] { (void) word_inverse(view, sym, "a"); }, ErrorKind::UndefinedInverseLabel));
}

TEST_CASE("longest common o-subgeodesic") {
  auto view  = suppress_valence2(testing::f2());
  auto const& inst = view.instance();
  auto v     = view.base();
  auto path  = [&](char const* w) { return view.geodesic(v, view.act(inst.parse_element(w), v)); };
  CHECK(longest_common_o_subgeodesic(view, path("x y x"), path("x y y")) == 2);
  CHECK(longest_common_o_subgeodesic(view, path("x y x"), path("y")) == 0);
  CHECK(longest_common_o_subgeodesic(view, path("x"), path("y")) == 0);
  CHECK(longest_common_o_subgeodesic(view, path("x y x"), path("x y x").reversed()) == 3);

  auto s    = suppress_valence2(testing::s3z4());
  auto sv   = s.base();
  auto sp   = [&](char const* w) { return s.geodesic(sv, s.act(s.instance().parse_element(w), sv)); };
  auto p1   = sp("A:120 B:1 A:120 B:1");
  CHECK(longest_common_o_subgeodesic(s, p1, p1) == *s.o_length(p1));
}

TEST_CASE("max_translate_overlap") {
  auto view  = suppress_valence2(testing::f2());
  auto const& inst = view.instance();
  auto v     = view.base();
  auto path  = [&](char const* w) { return view.geodesic(v, view.act(inst.parse_element(w), v)); };
  CHECK(max_translate_overlap(view, path("x x y"), path("y x x")) == 2);
  CHECK(max_translate_overlap(view, path("x x"), path("y y")) == 0);
  // reversed: y^-1 x^-1 reverses x y
  CHECK(max_translate_overlap(view, path("x y"), path("y^-1 x^-1")) == 2);
  CHECK(max_translate_overlap(view, path("x y x"), path("x y y")) == 2);
  CHECK(throws_kind([&] { (void) max_translate_overlap(view, path("x y x y"), path("y x y x"), 2); },
                    ErrorKind::ResourceLimit));
}

TEST_CASE("build_witness") {
  WordFamilyParams p{6, 4};
  for (auto inst : {testing::f2(), testing::s3z4(), testing::z5z2()}) {
    auto view = suppress_valence2(inst);
    auto cert = classify(view, 6);
    auto lab  = *cert.labelling;
    for (std::size_t n = 1; n <= 2; ++n) {
      auto w = build_witness(view, lab, n, p);
      CAPTURE(inst->hash_hex());
      CAPTURE(n);
      for (std::size_t i = 0; i < 3; ++i) {
        CHECK(label_of_path(view, lab, w.paths[i]) == w.words[i]);
        CHECK(w.paths[i].from == view.base());
        CHECK(view.act(w.g[i], view.base()) == w.paths[i].to);
      }
      auto const& I = view.instance();
      CHECK(I.multiply(w.eta, w.h) == w.product);
      CHECK(translation_length(view, w.product) > 0);
      CHECK(view.act(w.product, w.s.from) == w.s.to);
      CHECK(w.junction_ok);
      CHECK(w.spec.mode == WindowMode::orbit);
      CHECK(w.spec.n == *view.o_length(w.s));
      // translates of different family words overlap at most in a common factor
      auto w2 = build_witness(view, lab, n, p);
      CHECK(w2.product == w.product);
    }
    auto w1 = build_witness(view, lab, 1, p);
    auto w2 = build_witness(view, lab, 2, p);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        std::size_t L   = max_translate_overlap(view, w1.paths[i], w2.paths[j]);
        std::size_t lcs = longest_common_subword(w1.words[i], w2.words[j]);
        std::size_t inv = longest_common_subword(w1.words[i], word_reverse(w2.words[j]));
        CHECK(L <= lab.k + std::max(lcs, inv));
      }
    }
  }
}

TEST_CASE("independence matrix") {
  WordFamilyParams p{6, 4};
  for (auto inst : {testing::f2(), testing::s3z4()}) {
    auto view = suppress_valence2(inst);
    auto lab  = *classify(view, 6).labelling;
    std::vector<WitnessSet> ws;
    for (std::size_t n = 1; n <= 2; ++n) ws.push_back(build_witness(view, lab, n, p));
    auto t0  = std::chrono::steady_clock::now();
    auto rep = independence_matrix(view, ws, 4, 4);
    auto dt  = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    MESSAGE(inst->hash_hex() << " matrix in " << dt << " s");
    CAPTURE(rep.failure);
    CHECK(rep.pass);
    CHECK(rep.entries.size() == 2 * 2 * 4);
    for (auto const& e : rep.entries) {
      CHECK(e.eta == 0);
      CHECK(e.h == 0);
      if (e.n == e.m) CHECK(e.product >= static_cast<std::int64_t>(e.z) - 1);
      else CHECK(e.product == 0);
    }
    REQUIRE(rep.diagonal.size() == 2);
    for (auto const& d : rep.diagonal) CHECK(d.limit.to_double() >= 1.0);
    // thread count does not change the numbers
    auto one = independence_matrix(view, ws, 4, 1);
    for (std::size_t i = 0; i < rep.entries.size(); ++i) {
      CHECK(one.entries[i].product == rep.entries[i].product);
    }
  }
}
