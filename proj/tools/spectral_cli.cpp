#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>

#include "spectral/spectral.hpp"

namespace {

using namespace spectral;

constexpr int kExitUsage = 2;
constexpr int kExitViolation = 1;

// Bad flag values found after CLI11 is done parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string curve = "ho";
  std::string c2 = "2";
  std::string eps = "-1";
  int g = -1;
  int n = -1;
  int m = -1;
  int level = 4;
  std::string backend = "closed";
  std::string format = "json";
  std::string cache_dir;
  bool no_cache = false;
  unsigned threads = 0;

  [[nodiscard]] CurveSpec curve_spec() const {
    if (curve == "airy") return CurveSpec::airy();
    if (curve != "ho") throw UsageError("--curve must be airy or ho");
    return CurveSpec::harmonic_oscillator(parse_rational(c2, "--c2"), parse_eps());
  }

  [[nodiscard]] CurveSpec ho_spec() const {
    if (curve == "airy") throw UsageError("this command needs --curve ho");
    return curve_spec();
  }

  [[nodiscard]] int parse_eps() const {
    if (eps == "1" || eps == "+1") return 1;
    if (eps == "-1") return -1;
    throw UsageError("--eps must be +1 or -1");
  }

  [[nodiscard]] Backend backend_kind() const {
    if (backend == "closed") return Backend::closed_form;
    if (backend == "series") return Backend::series;
    if (backend == "both") return Backend::both;
    throw UsageError("--backend must be series, closed or both");
  }

  [[nodiscard]] std::shared_ptr<MemoStore> store() const {
    if (no_cache) return std::make_shared<MemoStore>();
    if (!cache_dir.empty()) return std::make_shared<MemoStore>(cache_dir);
    return MemoStore::from_environment();
  }

  void require_pair() const {
    if (g < 0 || n < 1) throw UsageError("--g >= 0 and --n >= 1 are required");
    if (!is_stable(g, n)) throw UsageError("(g,n) = (" + std::to_string(g) + "," + std::to_string(n) +
                                           ") is unstable: need 2g-2+n > 0");
  }

  static Rational parse_rational(const std::string& text, const char* flag) {
    try {
      return Rational::parse(text);
    } catch (const ParseError&) {
      throw UsageError(std::string(flag) + " expects a rational p/q, got '" + text + "'");
    }
  }
};

void emit(const RunConfig& cfg, const LaurentPolynomial& p, const char* var, bool differential) {
  if (cfg.format == "json")
    std::cout << to_json(p).dump() << '\n';
  else if (cfg.format == "latex")
    std::cout << to_latex(p, var, differential) << '\n';
  else
    std::cout << to_plain(p, var) << '\n';
}

void add_curve_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--curve", cfg.curve, "Spectral curve: airy or ho")->capture_default_str();
  cmd->add_option("--c2", cfg.c2, "c^2 for the ho curve, as p/q")->capture_default_str();
  cmd->add_option("--eps", cfg.eps, "Sign epsilon for the ho curve: +1 or -1")->capture_default_str();
}

void add_output_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "latex", "plain"}))
      ->capture_default_str();
}

void add_engine_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--backend", cfg.backend, "Residue backend: series, closed or both")->capture_default_str();
  cmd->add_option("--cache-dir", cfg.cache_dir, "Cache directory (default $SPECTRAL_CACHE or .cache)");
  cmd->add_flag("--no-cache", cfg.no_cache, "Keep results in memory only");
  cmd->add_option("--threads", cfg.threads, "Worker threads, 0 for all cores");
}

int cmd_w(const RunConfig& cfg) {
  cfg.require_pair();
  const CurveSpec cv = cfg.curve_spec();
  RecursionEngine engine(cv, cfg.store(), cfg.backend_kind());
  emit(cfg, engine.compute(cfg.g, cfg.n)->poly, cv.variable_name(), true);
  return 0;
}

int cmd_f(const RunConfig& cfg) {
  cfg.require_pair();
  const CurveSpec cv = cfg.curve_spec();
  RecursionEngine engine(cv, cfg.store(), cfg.backend_kind());
  emit(cfg, integrate_symmetric(*engine.compute(cfg.g, cfg.n)).poly, cv.variable_name(), false);
  return 0;
}

int cmd_s(const RunConfig& cfg, bool from_wkb) {
  if (cfg.m < 2) throw UsageError("--m >= 2 is required");
  const CurveSpec cv = cfg.curve_spec();
  if (from_wkb) {
    const WkbSeries w = cfg.m > 2 ? wkb_extend(wkb_initial(cv), cfg.m) : wkb_initial(cv);
    emit(cfg, w.s(cfg.m), cv.variable_name(), false);
    return 0;
  }
  RecursionEngine engine(cv, cfg.store(), cfg.backend_kind());
  emit(cfg, s_coefficient(engine, cfg.m), cv.variable_name(), false);
  return 0;
}

int cmd_tau(const RunConfig& cfg) {
  cfg.require_pair();
  const CurveSpec cv = cfg.curve_spec();
  auto store = cfg.store();
  RecursionEngine airy(CurveSpec::airy(), store, cfg.backend_kind());
  TauTable t;
  if (cv.is_airy()) {
    t = tau_from_airy(airy, cfg.g, cfg.n);
  } else {
    RecursionEngine ho(cv, store, cfg.backend_kind());
    t = tau_from_ho(ho, airy, cfg.g, cfg.n);
  }
  ordered_json j;
  j["g"] = t.g;
  j["n"] = t.n;
  ordered_json entries = ordered_json::array();
  for (const auto& [a, v] : t.entries) {
    ordered_json e;
    e["a"] = a;
    e["value"] = v.str();
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  std::cout << j.dump() << '\n';
  return 0;
}

int cmd_poincare(const RunConfig& cfg, const std::string& method) {
  cfg.require_pair();
  if (method == "recursion") {
    emit(cfg, poincare_by_recursion(cfg.g, cfg.n).poly, "z", false);
    return 0;
  }
  if (method != "integrate") throw UsageError("--method must be integrate or recursion");
  RecursionEngine engine(cfg.ho_spec(), cfg.store(), cfg.backend_kind());
  emit(cfg, poincare_from_ho(engine, cfg.g, cfg.n).poly, "z", false);
  return 0;
}

int cmd_energy(const RunConfig& cfg, const std::string& hbar_text, const std::string& omega_text) {
  const CurveSpec cv = cfg.ho_spec();
  const Rational hbar = RunConfig::parse_rational(hbar_text, "--hbar");
  const Rational omega = RunConfig::parse_rational(omega_text, "--omega");
  if (hbar.sign() <= 0) throw UsageError("--hbar must be positive");
  const auto [res_ydx, res_xdx] = energy_residues(cv);
  const Rational level = quantized_level(cv.c_squared, hbar);
  const Rational energy = energy_level(level, hbar, omega);
  if (cfg.format == "json") {
    ordered_json j;
    j["c2"] = cv.c_squared.str();
    j["hbar"] = hbar.str();
    j["res_y_dx"] = res_ydx.str();
    j["res_x_dx_over_y2"] = res_xdx.str();
    j["s1_contour"] = s1_contour_contribution(cv).str();
    j["n"] = level.str();
    j["energy"] = energy.str();
    std::cout << j.dump() << '\n';
  } else {
    std::cout << "n=" << level << '\n' << "E=" << energy << '\n';
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
  if (cfg.level < 1) throw UsageError("--level must be at least 1");
  const VerifyReport report = run_verify(suite, cfg.level, cfg.ho_spec(), cfg.store(), cfg.threads);
  std::cout << report.to_json().dump(2) << '\n';
  return report.passed() ? 0 : kExitViolation;
}

int cmd_cache(const RunConfig& cfg, bool clear) {
  const auto store = cfg.store();
  if (!store->persistent()) throw UsageError("cache command needs a cache directory");
  const auto& dir = *store->directory();
  if (clear) {
    std::cout << "removed " << store->clear_disk() << " files from " << dir.string() << '\n';
    return 0;
  }
  std::size_t files = 0;
  if (std::filesystem::exists(dir))
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".json") ++files;
  std::cout << dir.string() << ": " << files << " entries\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological recursion on the Airy and harmonic oscillator curves"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* w = app.add_subcommand("w", "Multidifferential w_{g,n} (coefficient of dz_1...dz_n)");
  auto* f = app.add_subcommand("f", "Free energy F_{g,n}");
  auto* s = app.add_subcommand("s", "WKB coefficient S_m assembled from free energies");
  auto* tau = app.add_subcommand("tau", "psi-class intersection numbers");
  auto* poincare = app.add_subcommand("poincare", "Poincare polynomial P_{g,n}");
  auto* energy = app.add_subcommand("energy", "Energy quantization on the ho curve");
  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  auto* cache = app.add_subcommand("cache", "Inspect or clear the cache");

  for (auto* cmd : {w, f, s, tau, poincare, verify}) {
    add_curve_flags(cmd, cfg);
    add_engine_flags(cmd, cfg);
  }
  for (auto* cmd : {w, f, s, poincare, energy}) add_output_flags(cmd, cfg);
  for (auto* cmd : {w, f, tau, poincare}) {
    cmd->add_option("--g", cfg.g, "Genus")->required();
    cmd->add_option("--n", cfg.n, "Number of points")->required();
  }
  s->add_option("--m", cfg.m, "Index m >= 2")->required();
  bool from_wkb = false;
  s->add_flag("--wkb", from_wkb, "Use the differential WKB recursion instead");

  std::string method = "integrate";
  poincare->add_option("--method", method, "integrate (from w on the ho curve) or recursion")->capture_default_str();

  std::string hbar = "1";
  std::string omega = "1";
  add_curve_flags(energy, cfg);
  energy->add_option("--hbar", hbar, "Planck constant, p/q")->capture_default_str();
  energy->add_option("--omega", omega, "Frequency factor for E_n, p/q")->capture_default_str();

  std::string suite = "all";
  verify->add_option("--suite", suite, "lemma51, structure, theorem41, theorem61, tau or all")
      ->check(CLI::IsMember(verify_suites()))
      ->capture_default_str();
  verify->add_option("--level", cfg.level, "Level bound L = max(2g-2+n)")->capture_default_str();

  bool clear = false;
  cache->add_option("--cache-dir", cfg.cache_dir, "Cache directory (default $SPECTRAL_CACHE or .cache)");
  cache->add_flag("--clear", clear, "Delete cached entries");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*w) return cmd_w(cfg);
    if (*f) return cmd_f(cfg);
    if (*s) return cmd_s(cfg, from_wkb);
    if (*tau) return cmd_tau(cfg);
    if (*poincare) return cmd_poincare(cfg, method);
    if (*energy) return cmd_energy(cfg, hbar, omega);
    if (*verify) return cmd_verify(cfg, suite);
    if (*cache) return cmd_cache(cfg, clear);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StabilityError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return kExitViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return kExitUsage;
}
