#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <utility>

#include "rtdiff/autocorrelation.hpp"
#include "rtdiff/cli/app.hpp"
#include "rtdiff/combs.hpp"
#include "rtdiff/convergence.hpp"
#include "rtdiff/diffraction.hpp"
#include "rtdiff/errors.hpp"
#include "rtdiff/io.hpp"
#include "rtdiff/transfer.hpp"

namespace rtdiff::cli {

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 6> kCommands{{
    {Command::xi, "xi"},
    {Command::diffract, "diffract"},
    {Command::periodogram, "periodogram"},
    {Command::converge, "converge"},
    {Command::fig1, "fig1"},
    {Command::fig2, "fig2"},
}};

constexpr std::array<std::string_view, 11> kTopLevelKeys{
    "map", "observable", "y", "seed", "exact_orbit", "xi", "diffract", "periodogram",
    "converge", "fig1", "fig2"};

constexpr std::int64_t kMaxHorizon = 1'000'000'000;
constexpr std::int64_t kMaxGrid = std::int64_t{1} << 24;

using Files = std::vector<std::pair<std::string, std::string>>;

struct Context {
  Section root;
  std::uint64_t seed = 0;
  std::string header;
};

// Map, observable and reference point shared by the dynamical commands.
struct Problem {
  MapChoice map;
  Observable f;
  double y = 0.0;
  OrbitOptions orbit;

  [[nodiscard]] bool rational() const {
    const auto* r = map.map.as_rotation();
    return r != nullptr && r->alpha.is_rational();
  }
  [[nodiscard]] const RotationNumber* rotation() const {
    const auto* r = map.map.as_rotation();
    return r == nullptr ? nullptr : &r->alpha;
  }
  [[nodiscard]] bool polynomial_f() const {
    return std::holds_alternative<Polynomial>(f.variant());
  }
};

Problem parse_problem(const Context& ctx) {
  Problem p{parse_map(ctx.root), parse_observable(ctx.root), 0.0, {}};
  if (ctx.root.has("y")) {
    p.y = ctx.root.number("y", 0.0, std::nextafter(1.0, 0.0));
  } else if (!p.rational()) {
    std::mt19937_64 rng(ctx.seed);
    p.y = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
  if (p.map.map.as_linear_mod() != nullptr && !ctx.root.boolean("exact_orbit", false)) {
    p.orbit.tail_seed = ctx.seed;
  }
  return p;
}

MeasureSpec measure_for(const Problem& p, std::size_t n_bins) {
  if (const RotationNumber* r = p.rotation(); r != nullptr && r->is_rational()) {
    return MeasureSpec::atomic_orbit(r->q(), p.y);
  }
  if (p.map.map.as_piecewise() != nullptr) {
    return MeasureSpec::stationary(stationary_density(build_ulam(p.map.map, n_bins)));
  }
  return MeasureSpec::lebesgue();
}

std::string render_xi(const XiSequence& xi, const std::string& header) {
  std::ostringstream out;
  write_xi_csv(out, xi, header);
  return out.str();
}

// ---- xi -------------------------------------------------------------------

std::vector<XiEngine> default_xi_engines(const Problem& p) {
  if (p.map.map.as_linear_mod() != nullptr) {
    return p.polynomial_f() ? std::vector{XiEngine::analytic, XiEngine::empirical}
                            : std::vector{XiEngine::mixing, XiEngine::empirical};
  }
  if (p.map.map.as_piecewise() != nullptr) return {XiEngine::mixing, XiEngine::empirical};
  return {p.rational() ? XiEngine::rational : XiEngine::irrational};
}

void check_xi_engine(const Problem& p, XiEngine e, const std::string& field) {
  const bool ok = [&] {
    switch (e) {
      case XiEngine::empirical:
        return true;
      case XiEngine::rational:
        return p.rational();
      case XiEngine::irrational:
        return p.rotation() != nullptr && !p.rational();
      case XiEngine::mixing:
        return !p.map.map.invertible();
      case XiEngine::analytic:
        return p.map.map.as_linear_mod() != nullptr && p.polynomial_f();
    }
    return false;
  }();
  if (!ok) {
    throw ConfigError(field, "engine '" + std::string(to_string(e)) + "' does not apply to map '" +
                                 p.map.kind + "' with this observable");
  }
}

Files cmd_xi(const Context& ctx) {
  const Problem p = parse_problem(ctx);
  const Section s = ctx.root.child("xi");
  std::vector<XiEngine> engines;
  if (s.has("engines")) {
    const auto names = s.texts("engines");
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string field = s.field("engines") + "[" + std::to_string(i) + "]";
      const auto e = parse_xi_engine(names[i]);
      if (!e) throw ConfigError(field, "unknown engine '" + names[i] + "'");
      if (std::find(engines.begin(), engines.end(), *e) != engines.end()) {
        throw ConfigError(field, "engine listed twice");
      }
      check_xi_engine(p, *e, field);
      engines.push_back(*e);
    }
    if (engines.empty()) throw ConfigError(s.field("engines"), "list at least one engine");
  } else {
    engines = default_xi_engines(p);
  }
  const auto z = static_cast<std::size_t>(s.integer("Z", 16, 0, 100'000));
  const std::int64_t horizon = s.integer(
      "N", std::max<std::int64_t>(100'000, kEmpiricalHorizonFactor * static_cast<std::int64_t>(z)),
      1, kMaxHorizon);
  const auto n_bins = static_cast<std::size_t>(s.integer("n_bins", 4096, 2, 1 << 22));
  if (std::find(engines.begin(), engines.end(), XiEngine::empirical) != engines.end() &&
      horizon < kEmpiricalHorizonFactor * static_cast<std::int64_t>(z)) {
    throw ConfigError(s.field("N"), "empirical engine needs N >= 100 Z");
  }

  std::vector<XiSequence> results;
  for (XiEngine e : engines) {
    switch (e) {
      case XiEngine::empirical:
        results.push_back(
            xi_empirical(p.map.map, measure_for(p, n_bins), p.f, p.y, z, horizon, p.orbit));
        break;
      case XiEngine::rational:
        results.push_back(xi_rotation_rational(p.rotation()->p(), p.rotation()->q(), p.y, p.f, z));
        break;
      case XiEngine::irrational:
        results.push_back(xi_rotation_irrational(p.rotation()->value(), p.f, z));
        break;
      case XiEngine::mixing:
        results.push_back(xi_mixing(p.map.map, p.f, z, n_bins));
        break;
      case XiEngine::analytic:
        results.push_back(xi_linear_mod_analytic(p.map.map.as_linear_mod()->k, p.f, z));
        break;
    }
  }

  Files files;
  for (const XiSequence& xi : results) {
    files.emplace_back("xi_" + std::string(to_string(xi.engine)) + ".csv",
                       render_xi(xi, ctx.header));
  }
  std::ostringstream cmp;
  cmp << ctx.header << "\nengine_a,engine_b,sup_distance\n";
  for (std::size_t a = 0; a < results.size(); ++a) {
    for (std::size_t b = a + 1; b < results.size(); ++b) {
      cmp << to_string(results[a].engine) << ',' << to_string(results[b].engine) << ','
          << format_double(xi_distance(results[a], results[b], z)) << '\n';
    }
  }
  files.emplace_back("xi_comparison.csv", cmp.str());
  return files;
}

// ---- diffract -------------------------------------------------------------

Files spectrum_files(const DiffractionSpectrum& spec, const std::string& engine, Json cutoffs,
                     const Context& ctx) {
  Files files;
  std::ostringstream atoms;
  write_atoms_csv(atoms, spec.atoms, ctx.header);
  files.emplace_back("atoms.csv", atoms.str());
  if (spec.density) {
    std::ostringstream density;
    write_density_csv(density, *spec.density, ctx.header);
    files.emplace_back("density.csv", density.str());
  }
  Json envelope = {
      {"format", "rtdiff v1"},
      {"engine", engine},
      {"kind", std::string(to_string(spec.kind))},
      {"cutoffs", std::move(cutoffs)},
      {"atom_count", spec.atoms.size()},
      {"atom_mass", spec.atom_mass()},
      {"parseval_deficit", spec.parseval_deficit},
      {"header", ctx.header},
  };
  files.emplace_back("spectrum.json", envelope.dump(2) + "\n");
  return files;
}

Files cmd_diffract(const Context& ctx) {
  const Problem p = parse_problem(ctx);
  const Section s = ctx.root.child("diffract");
  std::string fallback = "rotation";
  if (p.map.map.as_linear_mod() != nullptr) fallback = p.polynomial_f() ? "analytic" : "ulam";
  if (p.map.map.as_piecewise() != nullptr) fallback = "ulam";
  const std::string engine = s.text("engine", fallback);
  const auto z = static_cast<std::size_t>(s.integer("Z", 64, 0, 100'000));
  const auto n_bins = static_cast<std::size_t>(s.integer("n_bins", 4096, 2, 1 << 22));
  const auto grid = static_cast<std::size_t>(s.integer("grid", 1024, 1, kMaxGrid));
  const std::int64_t modes = s.integer("M", 50, 0, 10'000'000);
  const std::int64_t horizon = s.integer("N", 65536, 4096, std::int64_t{1} << 26);
  const auto segments = static_cast<std::size_t>(s.integer("segments", 256, 1, horizon));

  if (engine == "analytic") {
    if (p.map.map.as_linear_mod() == nullptr || !p.polynomial_f()) {
      throw ConfigError(s.field("engine"), "analytic needs linear_mod with a poly observable");
    }
    const auto data = linear_mod_exact_spectral_data(p.map.map.as_linear_mod()->k, p.f, z);
    return spectrum_files(mixing_diffraction(data, z, grid), engine, {{"Z", z}, {"grid", grid}},
                          ctx);
  }
  if (engine == "ulam") {
    if (p.map.map.invertible()) throw ConfigError(s.field("engine"), "ulam needs a mixing map");
    return spectrum_files(mixing_diffraction(p.map.map, p.f, n_bins, z, grid), engine,
                          {{"Z", z}, {"n_bins", n_bins}, {"grid", grid}}, ctx);
  }
  if (engine == "rotation") {
    const RotationNumber* r = p.rotation();
    if (r == nullptr) throw ConfigError(s.field("engine"), "rotation needs a rotation map");
    if (r->is_rational()) {
      return spectrum_files(rotation_diffraction_rational(r->p(), r->q(), p.y, p.f), engine,
                            {{"q", r->q()}}, ctx);
    }
    return spectrum_files(rotation_diffraction_irrational(r->value(), p.f, modes), engine,
                          {{"M", modes}}, ctx);
  }
  if (engine == "estimate") {
    if (horizon % static_cast<std::int64_t>(segments) != 0) {
      throw ConfigError(s.field("segments"), "must divide N");
    }
    EstimateOptions options;
    options.segments = segments;
    options.orbit = p.orbit;
    return spectrum_files(estimate_spectrum(p.map.map, p.f, p.y, horizon, options), engine,
                          {{"N", horizon}, {"segments", segments}}, ctx);
  }
  throw ConfigError(s.field("engine"), "unknown engine '" + engine + "'");
}

// ---- periodogram ----------------------------------------------------------

Files cmd_periodogram(const Context& ctx) {
  const Problem p = parse_problem(ctx);
  const Section s = ctx.root.child("periodogram");
  const std::int64_t n = s.integer("n", 4096, 1, std::int64_t{1} << 24);
  std::int64_t pow2 = 1;
  while (pow2 < 2 * n + 1) pow2 *= 2;
  const auto grid = static_cast<std::size_t>(s.integer("grid", pow2, 1, kMaxGrid));
  const std::string method = s.text("method", "fft");
  if (method != "fft" && method != "direct") {
    throw ConfigError(s.field("method"), "expected 'fft' or 'direct'");
  }
  if (method == "direct" && static_cast<double>(grid) * static_cast<double>(2 * n + 1) > 1e10) {
    throw ConfigError(s.field("grid"), "direct evaluation would exceed 1e10 terms; use fft");
  }
  const bool write_comb = s.boolean("write_comb", true);
  std::optional<std::size_t> segments;
  if (s.has("estimate")) {
    const Section e = s.child("estimate");
    segments = static_cast<std::size_t>(e.integer("segments", 16, 1, n));
    if (n < 4096 || n % static_cast<std::int64_t>(*segments) != 0) {
      throw ConfigError(e.field("segments"), "estimation needs n >= 4096 and segments dividing n");
    }
  }

  const WeightedComb comb = build_comb(p.map.map, p.f, p.y, n, p.orbit);
  const std::vector<double> power = method == "fft"
                                        ? periodogram_fourier(comb, n, grid)
                                        : periodogram(comb, n, fourier_grid(grid));

  Files files;
  std::ostringstream pg;
  pg << ctx.header << "\ntheta,power\n";
  for (std::size_t j = 0; j < grid; ++j) {
    pg << format_double(static_cast<double>(j) / static_cast<double>(grid)) << ','
       << format_double(power[j]) << '\n';
  }
  files.emplace_back("periodogram.csv", pg.str());
  if (write_comb) {
    std::ostringstream c;
    write_comb_csv(c, comb, ctx.header);
    files.emplace_back("comb.csv", c.str());
  }
  if (segments) {
    EstimateOptions options;
    options.segments = *segments;
    options.orbit = p.orbit;
    const DiffractionSpectrum est = estimate_spectrum(p.map.map, p.f, p.y, n, options);
    std::ostringstream atoms;
    write_atoms_csv(atoms, est.atoms, ctx.header);
    files.emplace_back("estimate_atoms.csv", atoms.str());
    std::ostringstream density;
    write_density_csv(density, *est.density, ctx.header);
    files.emplace_back("estimate_density.csv", density.str());
  }
  return files;
}

// ---- converge -------------------------------------------------------------

Files cmd_converge(const Context& ctx) {
  const Section s = ctx.root.child("converge");
  const double alpha = s.number("alpha", std::numbers::sqrt2 - 1.0, 1e-9, 1.0 - 1e-9);
  const auto count = static_cast<std::size_t>(s.integer("convergents", 8, 1, 40));
  const auto z = static_cast<std::size_t>(s.integer("Z", 32, 1, 100'000));
  const std::int64_t max_q46 = s.integer("example46_max_q", 12, 0, 200);
  const std::int64_t max_q47 = s.integer("example47_max_q", 12, 0, 2000);
  const Observable f = parse_observable(ctx.root);

  RotationSequenceSpec spec = [&] {
    try {
      return convergent_sequence(alpha, f, count);
    } catch (const ArgumentError& e) {
      throw ConfigError(s.field("convergents"), e.what());
    }
  }();
  const auto rows = xi_convergence_run(spec, z);

  Files files;
  std::ostringstream csv;
  csv << ctx.header << "\ni,alpha_i,q_i_or_0,sup_dist,f_dist\n";
  Json summary = {{"format", "rtdiff v1"}, {"alpha", alpha}, {"Z", z}, {"header", ctx.header}};
  Json items = Json::array();
  bool decreasing = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const ConvergenceRow& r = rows[i];
    csv << r.index << ',' << format_double(r.alpha) << ',' << r.q << ','
        << format_double(r.sup_distance) << ',' << format_double(r.f_distance) << '\n';
    Json item = {{"i", r.index}, {"alpha_i", r.alpha}, {"q_i", r.q}, {"sup_dist", r.sup_distance},
                 {"f_dist", r.f_distance}};
    if (r.darboux_bound) {
      item["discretization_gap"] = *r.discretization_gap;
      item["darboux_bound"] = *r.darboux_bound;
    }
    items.push_back(std::move(item));
    if (i > 0 && !(r.sup_distance < rows[i - 1].sup_distance)) decreasing = false;
  }
  summary["rows"] = std::move(items);
  summary["strictly_decreasing"] = decreasing;
  summary["final_sup_dist"] = rows.back().sup_distance;
  files.emplace_back("converge.csv", csv.str());

  if (max_q46 > 0) {
    std::ostringstream ex;
    ex << ctx.header << "\nr,q,p,m,continuous,discrete,equal\n";
    bool all_equal = true;
    for (std::int64_t q = 1; q <= max_q46; ++q) {
      for (std::int64_t pp = 1; pp <= q; ++pp) {
        if (std::gcd(pp, q) != 1) continue;
        for (std::int64_t r = 1; r <= q; ++r) {
          const Example46Report rep = example_46_check(r, q, pp);
          all_equal = all_equal && rep.equal;
          for (const Example46Row& row : rep.rows) {
            ex << r << ',' << q << ',' << pp << ',' << row.m << ',' << row.continuous.num() << '/'
               << row.continuous.den() << ',' << row.discrete.num() << '/' << row.discrete.den()
               << ',' << (row.continuous == row.discrete ? 1 : 0) << '\n';
          }
        }
      }
    }
    summary["example46_all_equal"] = all_equal;
    files.emplace_back("example46.csv", ex.str());
  }
  if (max_q47 > 0) {
    std::ostringstream ex;
    ex << ctx.header << "\np,q,continuous,discrete,differ,tent_max_error\n";
    bool all_differ = true;
    for (std::int64_t q = 3; q <= max_q47; ++q) {
      for (std::int64_t pp = 1; 2 * pp < q; ++pp) {
        if (std::gcd(pp, q) != 1) continue;
        const Example47Report rep = example_47_check(pp, q);
        all_differ = all_differ && rep.differ;
        ex << pp << ',' << q << ',' << rep.continuous_exact.num() << '/'
           << rep.continuous_exact.den() << ',' << rep.discrete_exact.num() << '/'
           << rep.discrete_exact.den() << ',' << (rep.differ ? 1 : 0) << ','
           << format_double(rep.tent_max_error) << '\n';
      }
    }
    summary["example47_all_differ"] = all_differ;
    files.emplace_back("example47.csv", ex.str());
  }
  files.emplace_back("converge.json", summary.dump(2) + "\n");
  return files;
}

// ---- figures --------------------------------------------------------------

Files cmd_fig1(const Context& ctx) {
  const Section s = ctx.root.child("fig1");
  const std::vector<std::int64_t> ks =
      s.has("k") ? s.integers("k", 2, 1000) : std::vector<std::int64_t>{3, 5, 10, 30};
  if (ks.empty()) throw ConfigError(s.field("k"), "list at least one k");
  const auto grid = static_cast<std::size_t>(s.integer("grid", 1024, 1, kMaxGrid));
  const auto z = static_cast<std::size_t>(s.integer("Z", 64, 1, 100'000));

  const Observable f = Observable::identity();
  std::vector<DensityGrid> columns;
  for (std::int64_t k : ks) {
    const auto data = linear_mod_exact_spectral_data(static_cast<int>(k), f, z);
    columns.push_back(*mixing_diffraction(data, z, grid).density);
  }
  std::ostringstream out;
  out << ctx.header << "\ntheta";
  for (std::int64_t k : ks) out << ",g_" << k;
  out << '\n';
  for (std::size_t j = 0; j < grid; ++j) {
    out << format_double(columns.front().theta[j]);
    for (const DensityGrid& c : columns) out << ',' << format_double(c.g[j]);
    out << '\n';
  }
  return {{"fig1.csv", out.str()}};
}

Files cmd_fig2(const Context& ctx) {
  const Section s = ctx.root.child("fig2");
  const double alpha1 = s.number("alpha1", std::numbers::pi / 20.0, 1e-12, 1.0);
  const double alpha2 = s.number("alpha2", 103.0 * std::numbers::pi / 2000.0, 1e-12, 1.0);
  const auto count = static_cast<std::size_t>(s.integer("K", 50, 1, 1'000'000));
  const Observable f = parse_observable(ctx.root);

  std::ostringstream out;
  out << ctx.header << "\nmode,position_alpha1,position_alpha2,mass\n";
  for (const DriftRow& row : diffraction_drift(alpha1, alpha2, f, count)) {
    out << row.mode << ',' << format_double(row.position1) << ',' << format_double(row.position2)
        << ',' << format_double(row.mass1) << '\n';
  }
  return {{"fig2.csv", out.str()}};
}

void check_top_level(const Json& config) {
  for (const auto& [key, value] : config.items()) {
    (void)value;
    if (std::find(kTopLevelKeys.begin(), kTopLevelKeys.end(), key) == kTopLevelKeys.end()) {
      throw ConfigError(key, "unknown top-level field");
    }
  }
}

}  // namespace

std::string_view to_string(Command command) noexcept {
  for (const auto& [c, name] : kCommands) {
    if (c == command) return name;
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) noexcept {
  for (const auto& [c, n] : kCommands) {
    if (n == name) return c;
  }
  return std::nullopt;
}

std::vector<std::filesystem::path> run_command(const RunRequest& request) {
  if (!request.config.is_object()) throw ConfigError("", "config root must be a JSON object");
  check_top_level(request.config);
  Context ctx{Section(request.config, ""), 0, {}};
  if (request.seed) {
    ctx.seed = *request.seed;
  } else if (request.config.contains("seed")) {
    const Json& seed = request.config["seed"];
    const bool non_negative =
        seed.is_number_unsigned() || (seed.is_number_integer() && seed.get<std::int64_t>() >= 0);
    if (!non_negative) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    ctx.seed = seed.get<std::uint64_t>();
  }
  const std::string canonical = std::string(to_string(request.command)) + "\n" +
                                request.config.dump() + "\nseed=" + std::to_string(ctx.seed);
  ctx.header = csv_header(to_string(request.command), fnv1a64(canonical));

  Files files;
  switch (request.command) {
    case Command::xi:
      files = cmd_xi(ctx);
      break;
    case Command::diffract:
      files = cmd_diffract(ctx);
      break;
    case Command::periodogram:
      files = cmd_periodogram(ctx);
      break;
    case Command::converge:
      files = cmd_converge(ctx);
      break;
    case Command::fig1:
      files = cmd_fig1(ctx);
      break;
    case Command::fig2:
      files = cmd_fig2(ctx);
      break;
  }

  std::filesystem::create_directories(request.out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const std::filesystem::path path = request.out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error("failed to write " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace rtdiff::cli
