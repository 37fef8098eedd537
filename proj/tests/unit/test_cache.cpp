#include <doctest.h>

#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "zerofolio/embedding_cache.hpp"
#include "zerofolio/error.hpp"
#include "zerofolio/text.hpp"

using namespace zerofolio;
using namespace zerofolio::testing;

TEST_CASE("sha256 known digest") {
  CHECK(to_hex(sha256("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("put then get is bit exact") {
  TempDir store;
  const auto key = CacheKey::for_text("some text", "model-a");
  const EmbeddingVector v{0.1, -0.0, 1e-300, std::numeric_limits<double>::denorm_min(), 3.0};
  cache_put(key, v, store.path());
  auto got = cache_get(key, store.path());
  REQUIRE(got);
  REQUIRE(got->size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::signbit((*got)[i]) == std::signbit(v[i]));
  CHECK(*got == v);
  CHECK_FALSE(cache_get(CacheKey::for_text("other", "model-a"), store.path()));
  CHECK_FALSE(cache_get(CacheKey::for_text("some text", "model-b"), store.path()));
}

TEST_CASE("record layout and path") {
  const auto rec = encode_record(EmbeddingVector{1.0, 2.0});
  CHECK(rec.size() == 4 + 16 + 4);
  CHECK(static_cast<unsigned char>(rec[0]) == 2);
  const auto key = CacheKey::for_text("abc", "openai/text-embedding-3-large");
  CHECK(cache_path(key, "/s") ==
        std::filesystem::path("/s/ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad/"
                              "openai%2Ftext-embedding-3-large.vec"));
}

TEST_CASE("truncated or altered records are corrupt") {
  TempDir store;
  const auto key = CacheKey::for_text("x", "m");
  cache_put(key, EmbeddingVector{1.0, 2.0, 3.0}, store.path());
  const auto path = cache_path(key, store.path());
  const auto bytes = text::read_file(path);

  write_text(path, bytes.substr(0, bytes.size() - 5));
  CHECK_THROWS_AS(cache_get(key, store.path()), Error);
  try {
    cache_get(key, store.path());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CacheCorrupt);
  }

  auto flipped = bytes;
  flipped[6] = static_cast<char>(flipped[6] ^ 0x01);
  write_text(path, flipped);
  CHECK_THROWS_AS(cache_get(key, store.path()), Error);
}
