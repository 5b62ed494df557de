#include "magcorner/cache.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>
#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "magcorner/errors.hpp"

namespace magcorner::cache {

namespace {

constexpr const char* kHeader = "# magcorner band cache v1";

std::string num12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

std::string num17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string join(const std::vector<double>& v, std::string (*f)(double)) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += f(v[i]);
  }
  return out;
}

std::vector<double> split_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("trailing characters");
  }
  return out;
}

unsigned long crc_of(const std::string& body) {
  return crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size()));
}

class FileLock {
 public:
  explicit FileLock(const std::string& path) {
    fd_ = ::open((path + ".lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw IoError("cannot open lock file for " + path);
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw IoError("cannot lock " + path);
    }
  }
  ~FileLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

std::string entry_line(const CacheEntry& e) {
  return e.solver_version + '\t' + e.key.text() + '\t' + num17(e.value) + '\t' + num17(e.tolerance) + '\t' +
         join(e.aux, num17);
}

}  // namespace

std::string CacheKey::text() const {
  return model + '|' + join(params, num12) + '|' + join(discretization, num12);
}

BandCache::BandCache(std::string path, std::string solver_version)
    : path_(std::move(path)), version_(std::move(solver_version)) {
  if (path_.empty()) return;
  std::lock_guard<std::mutex> guard(mutex_);
  FileLock lock(path_);
  load_locked();
}

void BandCache::load_locked() {
  entries_.clear();
  std::ifstream in(path_);
  if (!in || in.peek() == std::ifstream::traits_type::eof()) return;
  std::string header, crc_line, line, body;
  std::getline(in, header);
  std::getline(in, crc_line);
  while (std::getline(in, line)) body += line + '\n';
  bool ok = header == kHeader && crc_line.rfind("# crc32 ", 0) == 0;
  if (ok) {
    try {
      ok = std::stoul(crc_line.substr(8), nullptr, 16) == crc_of(body);
    } catch (const std::exception&) {
      ok = false;
    }
  }
  std::map<std::string, CacheEntry> parsed;
  if (ok) {
    std::stringstream ss(body);
    while (ok && std::getline(ss, line)) {
      std::vector<std::string> cols;
      std::stringstream ls(line);
      std::string col;
      while (std::getline(ls, col, '\t')) cols.push_back(col);
      if (cols.size() == 4) cols.emplace_back();
      if (cols.size() != 5) {
        ok = false;
        break;
      }
      try {
        CacheEntry e;
        e.solver_version = cols[0];
        const auto p1 = cols[1].find('|'), p2 = cols[1].find('|', p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos) throw std::invalid_argument("key");
        e.key.model = cols[1].substr(0, p1);
        e.key.params = split_numbers(cols[1].substr(p1 + 1, p2 - p1 - 1));
        e.key.discretization = split_numbers(cols[1].substr(p2 + 1));
        e.value = std::stod(cols[2]);
        e.tolerance = std::stod(cols[3]);
        e.aux = split_numbers(cols[4]);
        if (e.solver_version == version_) parsed[cols[1]] = e;
      } catch (const std::exception&) {
        ok = false;
      }
    }
  }
  if (!ok) {
    warnings_.push_back("cache file " + path_ + " is corrupted; rebuilt empty");
    write_locked();
    return;
  }
  entries_ = std::move(parsed);
}

void BandCache::write_locked() {
  std::string body;
  for (const auto& [k, e] : entries_) body += entry_line(e) + '\n';
  std::ostringstream crc;
  crc << std::hex << std::setw(8) << std::setfill('0') << crc_of(body);
  const std::string tmp = path_ + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw IoError("cannot write cache file " + tmp);
    out << kHeader << '\n' << "# crc32 " << crc.str() << '\n' << body;
    if (!out) throw IoError("cannot write cache file " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  if (ec) throw IoError("cannot replace cache file " + path_ + ": " + ec.message());
}

std::optional<CacheEntry> BandCache::lookup(const CacheKey& key) {
  std::lock_guard<std::mutex> guard(mutex_);
  const auto it = entries_.find(key.text());
  if (it == entries_.end() || it->second.solver_version != version_) return std::nullopt;
  return it->second;
}

void BandCache::store(const CacheEntry& entry) {
  std::lock_guard<std::mutex> guard(mutex_);
  if (path_.empty()) {
    CacheEntry e = entry;
    e.solver_version = version_;
    entries_[e.key.text()] = e;
    return;
  }
  FileLock lock(path_);
  // Merge what other processes wrote since our last load.
  auto mine = std::move(entries_);
  load_locked();
  for (auto& [k, e] : mine) entries_.emplace(k, std::move(e));
  CacheEntry e = entry;
  e.solver_version = version_;
  entries_[e.key.text()] = e;
  write_locked();
}

std::size_t BandCache::size() {
  std::lock_guard<std::mutex> guard(mutex_);
  return entries_.size();
}

std::vector<std::string> BandCache::warnings() {
  std::lock_guard<std::mutex> guard(mutex_);
  return warnings_;
}

}  // namespace magcorner::cache
