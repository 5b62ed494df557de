#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace magcorner::cache {

/// Bumped whenever a solver change can alter cached values.
inline constexpr const char* kSolverVersion = "magcorner-solvers-3";

struct CacheKey {
  std::string model;
  std::vector<double> params;
  std::vector<double> discretization;

  /// Canonical text form; every number is rounded to 12 significant digits.
  std::string text() const;
};

struct CacheEntry {
  CacheKey key;
  double value = 0.0;
  double tolerance = 0.0;
  std::vector<double> aux;  ///< model-specific extras (error estimate, tau*, ...)
  std::string solver_version = kSolverVersion;
};

/// Persistent exact-key store of band evaluations. One text file with a
/// versioned header and a CRC-32 of the body. Writers are serialized by a
/// mutex inside the process and an advisory file lock across processes; the
/// file is rewritten atomically. An empty path keeps the store in memory.
class BandCache {
 public:
  explicit BandCache(std::string path, std::string solver_version = kSolverVersion);

  std::optional<CacheEntry> lookup(const CacheKey& key);
  void store(const CacheEntry& entry);

  const std::string& path() const { return path_; }
  std::size_t size();
  /// Warnings raised while loading (corrupted file rebuilt, ...).
  std::vector<std::string> warnings();

 private:
  void load_locked();
  void write_locked();

  std::string path_;
  std::string version_;
  std::mutex mutex_;
  std::map<std::string, CacheEntry> entries_;
  std::vector<std::string> warnings_;
};

/// Cache-aware evaluation: returns the stored value for `key` or computes,
/// stores and returns it. A null cache always computes.
template <typename F>
CacheEntry cached(BandCache* cache, const CacheKey& key, F&& compute) {
  if (cache) {
    if (auto hit = cache->lookup(key)) return *hit;
  }
  CacheEntry e = compute();
  e.key = key;
  if (cache) cache->store(e);
  return e;
}

}  // namespace magcorner::cache
