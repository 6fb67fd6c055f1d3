#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "spectral/curve.hpp"
#include "spectral/poly_io.hpp"
#include "spectral/residues.hpp"

namespace spectral {

inline constexpr const char* kEngineVersion = "1";

inline bool is_stable(int g, int n) { return g >= 0 && n >= 1 && 2 * g - 2 + n > 0; }

inline void require_stable(int g, int n) {
  if (!is_stable(g, n))
    throw StabilityError("(g,n) = (" + std::to_string(g) + "," + std::to_string(n) + ") is not in the stable range");
}

/// Every stable (g, n) with 2g - 2 + n == level, by increasing g.
inline std::vector<std::pair<int, int>> level_pairs(int level) {
  std::vector<std::pair<int, int>> out;
  for (int g = 0; 2 * g - 1 <= level; ++g) {
    const int n = level + 2 - 2 * g;
    if (n >= 1) out.emplace_back(g, n);
  }
  return out;
}

/// Checks symmetry under every transposition (0, i).
inline bool is_symmetric(const LaurentPolynomial& p) {
  const std::size_t n = p.arity();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) perm[k] = k;
    std::swap(perm[0], perm[i]);
    if (!(lp_remap(p, n, perm) == p)) return false;
  }
  return true;
}

/// Coefficient of dz_1 ... dz_n of w_{g,n}.
struct MultiDifferential {
  int g = 0;
  int n = 0;
  CurveSpec curve;
  LaurentPolynomial poly;

  /// Throws InvariantViolation naming the first failing invariant.
  void validate() const {
    const std::string tag = "w(" + std::to_string(g) + "," + std::to_string(n) + ") on " + curve.name() + ": ";
    if (poly.arity() != static_cast<std::size_t>(n)) throw InvariantViolation(tag + "arity differs from n");
    if (!is_symmetric(poly)) throw InvariantViolation(tag + "permutation symmetry");
    for (const auto& [e, c] : poly.terms())
      for (int k : e)
        if (k % 2 != 0) throw InvariantViolation(tag + "odd exponent present");
    if (curve.is_airy()) {
      const int degree = -2 * (3 * g - 3 + n) - 2 * n;
      for (const auto& [e, c] : poly.terms()) {
        if (total_degree(e) != degree) throw InvariantViolation(tag + "term outside the leading pole set");
        for (int k : e)
          if (k > -2) throw InvariantViolation(tag + "term outside the leading pole set");
      }
    } else {
      const Rational sign(n % 2 == 0 ? 1 : -1);
      Exponents partner(poly.arity());
      for (const auto& [e, c] : poly.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i) partner[i] = -e[i] - 2;
        if (poly.coefficient(partner) != sign * c) throw InvariantViolation(tag + "pairing identity");
      }
    }
  }
};

struct MemoKey {
  CurveKind kind;
  Rational c_squared;
  int epsilon;
  int g;
  int n;

  static MemoKey of(const CurveSpec& curve, int g, int n) {
    if (curve.is_airy()) return {curve.kind, Rational(0), 1, g, n};
    return {curve.kind, curve.c_squared, curve.epsilon, g, n};
  }

  friend bool operator<(const MemoKey& a, const MemoKey& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.c_squared != b.c_squared) return a.c_squared < b.c_squared;
    return std::tie(a.epsilon, a.g, a.n) < std::tie(b.epsilon, b.g, b.n);
  }
};

/// Concurrent memo of computed differentials with optional JSON files on
/// disk. Reads take a shared lock, inserts an exclusive one.
class MemoStore {
 public:
  using Entry = std::shared_ptr<const MultiDifferential>;

  MemoStore() = default;
  explicit MemoStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// Store rooted at $SPECTRAL_CACHE, or `.cache` when unset.
  static std::shared_ptr<MemoStore> from_environment() {
    const char* env = std::getenv("SPECTRAL_CACHE");
    return std::make_shared<MemoStore>(std::filesystem::path(env && *env ? env : ".cache"));
  }

  [[nodiscard]] bool persistent() const { return dir_.has_value(); }
  [[nodiscard]] const std::optional<std::filesystem::path>& directory() const { return dir_; }

  /// Memory lookup only.
  Entry find(const MemoKey& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : it->second;
  }

  /// Reads a cached file into memory. Returns nullptr when absent.
  Entry load(const CurveSpec& curve, int g, int n) {
    if (!dir_) return nullptr;
    const auto path = file_for(curve, g, n);
    std::ifstream in(path, std::ios::binary);
    if (!in) return nullptr;
    std::stringstream buf;
    buf << in.rdbuf();
    ordered_json j;
    try {
      j = ordered_json::parse(buf.str());
    } catch (const nlohmann::json::exception& ex) {
      throw ParseError("cache file " + path.string() + ": " + ex.what());
    }
    const auto& meta = j.at("meta");
    if (meta.at("engine_version").get<std::string>() != kEngineVersion) return nullptr;
    if (meta.at("curve").get<std::string>() != curve.name() || meta.at("g").get<int>() != g ||
        meta.at("n").get<int>() != n)
      throw InvariantViolation("cache file " + path.string() + " has a mismatched header");
    if (!curve.is_airy() && (Rational::parse(meta.at("c2").get<std::string>()) != curve.c_squared ||
                             meta.at("eps").get<int>() != curve.epsilon))
      throw InvariantViolation("cache file " + path.string() + " has a mismatched header");
    auto w = std::make_shared<MultiDifferential>(MultiDifferential{g, n, curve, polynomial_from_json(j)});
    w->validate();
    return w;
  }

  /// Inserts (first writer wins) and persists. Returns the stored entry.
  Entry insert(Entry w, bool persist = true) {
    const MemoKey key = MemoKey::of(w->curve, w->g, w->n);
    Entry stored;
    {
      std::unique_lock lock(mutex_);
      stored = entries_.try_emplace(key, std::move(w)).first->second;
    }
    if (persist && dir_) write_file(*stored);
    return stored;
  }

  [[nodiscard]] std::size_t size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
  }

  std::filesystem::path file_for(const CurveSpec& curve, int g, int n) const {
    std::string name = curve.name();
    if (!curve.is_airy()) {
      std::string c2 = curve.c_squared.str();
      for (auto& ch : c2)
        if (ch == '/') ch = '_';
      name += "_c2=" + c2 + "_eps=" + (curve.epsilon > 0 ? "+1" : "-1");
    }
    name += "_g" + std::to_string(g) + "_n" + std::to_string(n) + ".json";
    return *dir_ / name;
  }

  /// Removes every cache file this store would read. Returns the count.
  std::size_t clear_disk() const {
    if (!dir_ || !std::filesystem::exists(*dir_)) return 0;
    std::size_t removed = 0;
    for (const auto& entry : std::filesystem::directory_iterator(*dir_)) {
      if (entry.path().extension() == ".json" && std::filesystem::remove(entry.path())) ++removed;
    }
    return removed;
  }

 private:
  void write_file(const MultiDifferential& w) const {
    std::filesystem::create_directories(*dir_);
    const auto path = file_for(w.curve, w.g, w.n);
    if (std::filesystem::exists(path)) return;
    ordered_json j;
    ordered_json meta;
    meta["curve"] = w.curve.name();
    meta["c2"] = w.curve.is_airy() ? "0" : w.curve.c_squared.str();
    meta["eps"] = w.curve.is_airy() ? 1 : w.curve.epsilon;
    meta["g"] = w.g;
    meta["n"] = w.n;
    meta["engine_version"] = kEngineVersion;
    j["meta"] = std::move(meta);
    const ordered_json body = to_json(w.poly);
    j["arity"] = body["arity"];
    j["terms"] = body["terms"];
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    auto tmp = path;
    tmp += ".tmp" + tid.str();
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << j.dump() << '\n';
      if (!out) throw Error("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
  }

  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mutex_;
  std::map<MemoKey, Entry> entries_;
};

/// Runs the residue recursion on one curve. Lower (g, n) are pulled from the
/// store or computed on demand.
class RecursionEngine {
 public:
  explicit RecursionEngine(CurveSpec curve, std::shared_ptr<MemoStore> store = nullptr,
                           Backend backend = Backend::closed_form)
      : curve_(std::move(curve)),
        store_(store ? std::move(store) : std::make_shared<MemoStore>()),
        backend_(backend) {
    curve_.validate();
    if (backend_ != Backend::series) closed_ = std::make_unique<ResidueTable>(curve_, Backend::closed_form);
    if (backend_ != Backend::closed_form) series_ = std::make_unique<ResidueTable>(curve_, Backend::series);
  }

  [[nodiscard]] const CurveSpec& curve() const { return curve_; }
  [[nodiscard]] Backend backend() const { return backend_; }
  [[nodiscard]] MemoStore& store() { return *store_; }
  [[nodiscard]] std::shared_ptr<MemoStore> store_handle() const { return store_; }

  MemoStore::Entry compute(int g, int n) {
    require_stable(g, n);
    const MemoKey key = MemoKey::of(curve_, g, n);
    if (auto hit = store_->find(key)) return hit;
    if (auto disk = store_->load(curve_, g, n)) {
      validate_disk_hit(*disk);
      return store_->insert(std::move(disk), false);
    }
    // Pull dependencies first so the recursion step only reads.
    for (int l = 1; l < 2 * g - 2 + n; ++l)
      for (auto [gg, nn] : level_pairs(l))
        if (gg <= g && nn <= n + 1) compute(gg, nn);

    auto w = std::make_shared<MultiDifferential>(MultiDifferential{g, n, curve_, LaurentPolynomial(n)});
    if (backend_ == Backend::both) {
      w->poly = step(g, n, *closed_);
      const LaurentPolynomial reference = step(g, n, *series_);
      if (!(reference == w->poly))
        throw MismatchError("series and closed-form backends disagree at (" + std::to_string(g) + "," +
                            std::to_string(n) + ")");
    } else {
      w->poly = step(g, n, backend_ == Backend::series ? *series_ : *closed_);
    }
    w->validate();
    return store_->insert(std::move(w));
  }

  /// Fills every stable (g, n) with 2g - 2 + n <= level. Pairs on one level
  /// are independent and run concurrently.
  void compute_through_level(int level, unsigned threads = 0) {
    if (level < 1) throw StabilityError("level bound must be at least 1");
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    for (int l = 1; l <= level; ++l) {
      const auto pairs = level_pairs(l);
      if (threads == 1 || pairs.size() == 1) {
        for (auto [g, n] : pairs) compute(g, n);
        continue;
      }
      std::vector<std::future<MemoStore::Entry>> jobs;
      jobs.reserve(pairs.size());
      for (auto [g, n] : pairs)
        jobs.push_back(std::async(std::launch::async, [this, g = g, n = n] { return compute(g, n); }));
      for (auto& j : jobs) j.get();
    }
  }

 private:
  LaurentPolynomial poly_of(int g, int n) { return compute(g, n)->poly; }

  /// One application of the recursion: the (g-1, n+1) self-pairing term and
  /// the stable splittings are collected into one brace with the integration
  /// variable in slot 0; the w02 correction is applied directly.
  LaurentPolynomial step(int g, int n, ResidueTable& table) {
    if (g == 0 && n == 3) return first_pants(table);
    const auto arity = static_cast<std::size_t>(n);
    LaurentPolynomial brace(arity);

    if (g == 1 && n == 1) {
      // w02(z, -z) as a coefficient of dz dz.
      brace.add_term({-2}, Rational(-1, 4));
    } else {
      if (g >= 1 && is_stable(g - 1, n + 1)) {
        std::vector<std::size_t> target(arity + 1);
        target[0] = 0;
        for (std::size_t i = 1; i <= arity; ++i) target[i] = i - 1;
        brace -= lp_remap(poly_of(g - 1, n + 1), arity, target);
      }
      // Stable splittings over ordered (g1, I), I a subset of {z2..zn}.
      const unsigned others = static_cast<unsigned>(n - 1);
      for (int g1 = 0; g1 <= g; ++g1) {
        const int g2 = g - g1;
        for (unsigned mask = 0; mask < (1u << others); ++mask) {
          std::vector<std::size_t> ti{0}, tj{0};
          for (unsigned b = 0; b < others; ++b) (mask >> b & 1u ? ti : tj).push_back(b + 1);
          const int n1 = static_cast<int>(ti.size());
          const int n2 = static_cast<int>(tj.size());
          if (2 * g1 + n1 - 1 < 2 || 2 * g2 + n2 - 1 < 2) continue;
          const auto a = lp_remap(poly_of(g1, n1), arity, ti);
          const auto b = lp_remap(poly_of(g2, n2), arity, tj);
          brace -= a * b;
        }
      }
    }

    LaurentPolynomial out(arity);
    for (const auto& [e0, rest] : brace.split_by(0)) {
      if (e0 % 2 != 0) throw InvariantViolation("odd exponent in the recursion integrand");
      const auto res = lp_remap(table.basic(-e0 / 2), arity, {0});
      out += rest * res;
    }

    if (n >= 2 && is_stable(g, n - 1)) {
      const LaurentPolynomial lower = poly_of(g, n - 1);
      const auto parts = lower.split_by(0);
      for (std::size_t j = 1; j < arity; ++j) {
        // Slots of w_{g,n-1}: s, then z2..zn without zj.
        std::vector<std::size_t> target{0};
        for (std::size_t i = 1; i < arity; ++i)
          if (i != j) target.push_back(i);
        for (const auto& [e0, rest] : parts) {
          if (e0 % 2 != 0) throw InvariantViolation("odd exponent in the recursion integrand");
          const auto res = lp_remap(table.unstable(-e0 / 2), arity, {0, j});
          out += lp_remap(rest, arity, target) * res;
        }
      }
    }
    return out;
  }

  /// (0,3): the only step whose integrand is built from w02 alone.
  LaurentPolynomial first_pants(ResidueTable& table) {
    const auto& cv = table.curve();
    // Slots (z, z1, z2, z3).
    const auto z = LaurentPolynomial::variable(4, 0);
    auto sq = [](const LaurentPolynomial& p) { return p * p; };
    const auto a = sq(z - LaurentPolynomial::variable(4, 2)) * sq(z + LaurentPolynomial::variable(4, 3));
    const auto b = sq(z - LaurentPolynomial::variable(4, 3)) * sq(z + LaurentPolynomial::variable(4, 2));
    const RationalExpression pairs(-(a + b), a * b);
    const RationalExpression integrand = lifted_kernel(cv, 4) * pairs;
    return lp_remap(ramification_residue(cv, integrand, 0), 3, {0, 0, 1, 2});
  }

  void validate_disk_hit(const MultiDifferential& cached) {
    if (disk_validated_.exchange(true)) return;
    RecursionEngine fresh(curve_, std::make_shared<MemoStore>(), backend_);
    const auto recomputed = fresh.compute(cached.g, cached.n);
    if (!(recomputed->poly == cached.poly))
      throw InvariantViolation("cached w(" + std::to_string(cached.g) + "," + std::to_string(cached.n) +
                               ") differs from a fresh recomputation");
  }

  CurveSpec curve_;
  std::shared_ptr<MemoStore> store_;
  Backend backend_;
  std::unique_ptr<ResidueTable> closed_;
  std::unique_ptr<ResidueTable> series_;
  std::atomic<bool> disk_validated_{false};
};

/// Convenience wrapper over RecursionEngine for one-off calls.
inline MultiDifferential compute_w(const CurveSpec& curve, int g, int n, std::shared_ptr<MemoStore> store = nullptr,
                                   Backend backend = Backend::closed_form) {
  RecursionEngine engine(curve, std::move(store), backend);
  return *engine.compute(g, n);
}

}  // namespace spectral
