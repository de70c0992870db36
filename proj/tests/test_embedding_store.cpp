#include <doctest/doctest.h>

#include <cmath>
#include <random>

#include "fuzzyvis/alpha_embedding.hpp"
#include "fuzzyvis/embedding_store.hpp"
#include "fuzzyvis/error.hpp"
#include "oracles.hpp"

using namespace fuzzyvis;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected fuzzyvis::Error");
  return ErrorCode::InvalidParams;
}

EmbeddingMatrix small_matrix() {
  return EmbeddingMatrix::from_rows(
      2, {{"a", {1.0, 0.0}}, {"b", {0.0, 1.0}}, {"c", {0.5, 0.5}}, {"z", {0.0, 0.0}}},
      Provenance{EmbeddingSource::imported, Family::goedel, std::nullopt, std::nullopt});
}

std::vector<std::pair<std::string, std::vector<double>>> random_rows(std::mt19937_64& rng,
                                                                     std::size_t n, std::size_t dim) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::pair<std::string, std::vector<double>>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = (rng() % 7 == 0) ? 0.0 : u(rng);
    rows.emplace_back(oracle::node_name(i), std::move(v));
  }
  return rows;
}

}  // namespace

TEST_CASE("cosine") {
  const std::vector<double> v{0.2, 0.7, 0.1};
  CHECK(cosine(v, v) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  CHECK(cosine(std::vector<double>{1, 1, 0}, std::vector<double>{1, 0, 0}) ==
        doctest::Approx(0.70710678118654752).epsilon(1e-12));
  CHECK(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}) == 0.0);
  CHECK(code_of([] { cosine(std::vector<double>{1}, std::vector<double>{1, 0}); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("build_index") {
  auto g = parse_obo(oracle::fixture("tree5.obo"));
  VectorIndex idx(generate(g, AlphaParams{0.5, 1, 3}, FuzzyConfig{}));
  CHECK(idx.size() == 6);
  CHECK(idx.dim() == 1);

  VectorIndex zeros(small_matrix());
  CHECK(zeros.size() == 4);
  CHECK(zeros.norm(3) == 0.0);
  CHECK(zeros.norm(2) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  CHECK(code_of([] { VectorIndex(EmbeddingMatrix{}); }) == ErrorCode::EmptyMatrix);
  CHECK(code_of([] {
          EmbeddingMatrix::from_rows(1, {{"x", {0.1}}, {"x", {0.2}}}, Provenance{});
        }) == ErrorCode::DuplicateId);
}

TEST_CASE("top_k") {
  VectorIndex idx(small_matrix());
  auto self = idx.top_k(std::vector<double>{0.5, 0.5}, 1);
  REQUIRE(self.hits.size() == 1);
  CHECK(self.hits[0].concept_id == "c");
  CHECK(self.hits[0].score == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(self.zero_query);

  auto all = idx.top_k(std::vector<double>{1.0, 0.0}, 50);
  REQUIRE(all.hits.size() == 4);
  CHECK(all.hits[0].concept_id == "a");
  CHECK(all.hits[1].concept_id == "c");
  // b and z tie at 0 and fall back to id order
  CHECK(all.hits[2].concept_id == "b");
  CHECK(all.hits[3].concept_id == "z");

  auto zero = idx.top_k(std::vector<double>{0.0, 0.0}, 3);
  CHECK(zero.zero_query);
  REQUIRE(zero.hits.size() == 3);
  CHECK(zero.hits[0].concept_id == "a");
  CHECK(zero.hits[1].concept_id == "b");
  CHECK(zero.hits[2].concept_id == "c");
  for (const auto& h : zero.hits) CHECK(h.score == 0.0);

  CHECK(code_of([&] { idx.top_k(std::vector<double>{1.0}, 1); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { idx.top_k(std::vector<double>{1.0, 0.0}, 0); }) == ErrorCode::InvalidParams);
}

TEST_CASE("embedding file round trip") {
  auto g = parse_obo(oracle::fixture("tree5.obo"));
  auto m = generate(g, AlphaParams{0.3, 5, 42}, FuzzyConfig{Family::lukasiewicz});
  const std::string text = export_embedding(m);
  CHECK(text.rfind("#fuzzyvis-embedding v1 dim=5 source=generated alpha=0.29999999999999999 "
                   "seed=42 family=lukasiewicz\n",
                   0) == 0);
  auto back = import_embedding(text, &g);
  CHECK(back.warnings.empty());
  CHECK(back.matrix == m);
  CHECK(export_embedding(back.matrix) == text);
}

TEST_CASE("property: export then import is the identity on random matrices") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    auto rows = random_rows(rng, 40, 1 + trial);
    auto m = EmbeddingMatrix::from_rows(1 + trial, rows, Provenance{});
    CHECK(import_embedding(export_embedding(m)).matrix == m);
  }
}

TEST_CASE("embedding import tolerance and errors") {
  const std::string head = "#fuzzyvis-embedding v1 dim=2 source=imported family=product future=1\n";
  SUBCASE("small overshoot is clamped with a warning") {
    auto r = import_embedding(head + "x\t1.0000004,-0.0000003\n");
    CHECK(r.matrix.vector("x")[0] == 1.0);
    CHECK(r.matrix.vector("x")[1] == 0.0);
    CHECK(r.warnings.size() == 2);
  }
  SUBCASE("large overshoot is an error") {
    CHECK(code_of([&] { import_embedding(head + "x\t1.01,0\n"); }) == ErrorCode::ValueOutOfRange);
    CHECK(code_of([&] { import_embedding(head + "x\tnan,0\n"); }) == ErrorCode::ValueOutOfRange);
  }
  SUBCASE("short row names the line") {
    try {
      import_embedding(head + "x\t0.1,0.2\ny\t0.3\n");
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DimMismatchAcrossRows);
      CHECK(e.details().front() == "line 3");
    }
  }
  SUBCASE("missing header") {
    CHECK(code_of([] { import_embedding("x\t0.1,0.2\n"); }) == ErrorCode::HeaderMissing);
    CHECK(code_of([] { import_embedding("#fuzzyvis-embedding v1 family=product\n"); }) ==
          ErrorCode::HeaderMissing);
  }
  SUBCASE("unknown concepts are reported and dropped") {
    auto g = parse_obo(oracle::fixture("tree5.obo"));
    auto r = import_embedding(head + "L1\t0.1,0.2\nghost\t0.3,0.4\n", &g);
    CHECK(r.matrix.size() == 1);
    CHECK(r.unknown_concepts == std::vector<ConceptId>{"ghost"});
    CHECK(r.matrix.provenance().source == EmbeddingSource::imported);
  }
}

TEST_CASE("property: top_k equals an exhaustive scan oracle") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 500;
    auto rows = random_rows(rng, n, 64);
    VectorIndex idx(EmbeddingMatrix::from_rows(64, rows, Provenance{}));
    std::vector<double> q(64);
    for (auto& x : q) x = u(rng);
    const std::size_t k = 1 + rng() % 20;

    auto got = idx.top_k(q, k);
    auto want = oracle::brute_force_top_k(rows, q, k);
    REQUIRE(got.hits.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(got.hits[i].concept_id == want[i].id);
      CHECK(std::abs(got.hits[i].score - want[i].score) <= 1e-12);
      CHECK(got.hits[i].score >= 0.0);
      CHECK(got.hits[i].score <= 1.0 + 1e-12);
    }

    // positive scaling of the query leaves the ranking untouched
    std::vector<double> scaled(q);
    for (auto& x : scaled) x *= 0.37;
    auto again = idx.top_k(scaled, k);
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(again.hits[i].concept_id == got.hits[i].concept_id);
      CHECK(std::abs(again.hits[i].score - got.hits[i].score) <= 1e-12);
    }
  }
}
