#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <doctest.h>

#include "magcorner/cache.hpp"

using namespace magcorner::cache;
namespace fs = std::filesystem;

namespace {

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove(path); }
  ~TempFile() { fs::remove(path); }
};

CacheEntry entry(const std::string& model, double p, double value) {
  CacheEntry e;
  e.key = {model, {p}, {0.125, 16}};
  e.value = value;
  e.tolerance = 1e-4;
  e.aux = {1e-6};
  return e;
}

}  // namespace

TEST_CASE("store then lookup, across instances") {
  TempFile f("magcorner_cache_roundtrip.txt");
  {
    BandCache c(f.path.string());
    c.store(entry("sigma", 0.3, 0.787377));
    REQUIRE(c.lookup(entry("sigma", 0.3, 0).key));
    CHECK(c.lookup(entry("sigma", 0.3, 0).key)->value == 0.787377);
  }
  BandCache again(f.path.string());
  const auto hit = again.lookup(entry("sigma", 0.3, 0).key);
  REQUIRE(hit);
  CHECK(hit->value == 0.787377);
  CHECK(hit->aux == std::vector<double>{1e-6});
  CHECK_FALSE(again.lookup(entry("sigma", 0.31, 0).key));
}

TEST_CASE("keys round to 12 significant digits and match exactly") {
  CacheKey a{"sector", {M_PI / 2}, {1}};
  CacheKey b{"sector", {M_PI / 2 + 1e-15}, {1}};
  CacheKey c{"sector", {M_PI / 2 + 1e-9}, {1}};
  CHECK(a.text() == b.text());
  CHECK(a.text() != c.text());
}

TEST_CASE("solver version bump invalidates entries") {
  TempFile f("magcorner_cache_version.txt");
  {
    BandCache c(f.path.string(), "v1");
    c.store(entry("sigma", 0.5, 0.9));
  }
  BandCache bumped(f.path.string(), "v2");
  CHECK_FALSE(bumped.lookup(entry("sigma", 0.5, 0).key));
}

TEST_CASE("parallel stores of distinct keys are all kept") {
  TempFile f("magcorner_cache_parallel.txt");
  {
    BandCache c(f.path.string());
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t)
      threads.emplace_back([&c, t] {
        for (int k = 0; k < 10; ++k) c.store(entry("w", t * 100 + k, t + 0.01 * k));
      });
    for (auto& th : threads) th.join();
    CHECK(c.size() == 40);
  }
  BandCache reread(f.path.string());
  CHECK(reread.size() == 40);
  CHECK(reread.lookup(entry("w", 305, 0).key)->value == doctest::Approx(3.05));
}

TEST_CASE("corrupted file is rebuilt empty with a warning") {
  TempFile f("magcorner_cache_corrupt.txt");
  {
    BandCache c(f.path.string());
    c.store(entry("sigma", 0.1, 0.6));
  }
  {
    std::fstream io(f.path, std::ios::in | std::ios::out);
    io.seekp(-4, std::ios::end);
    io << "XXXX";
  }
  BandCache c(f.path.string());
  CHECK(c.size() == 0);
  CHECK_FALSE(c.warnings().empty());
  c.store(entry("sigma", 0.1, 0.6));
  CHECK(BandCache(f.path.string()).size() == 1);
}

TEST_CASE("memory-only cache and the cached helper") {
  BandCache mem("");
  int calls = 0;
  auto compute = [&] {
    ++calls;
    return entry("x", 1, 2.5);
  };
  const CacheKey key = entry("x", 1, 0).key;
  CHECK(cached(&mem, key, compute).value == 2.5);
  CHECK(cached(&mem, key, compute).value == 2.5);
  CHECK(calls == 1);
  cached(nullptr, key, compute);
  CHECK(calls == 2);
}
