#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "robin_nls/robin_nls.hpp"

namespace rn = robin_nls;

namespace {

enum Exit { Pass = 0, ValidationFailure = 1, NumericalFailure = 2, AssumptionFailure = 3 };

int exit_code(rn::ErrorKind kind) {
  using K = rn::ErrorKind;
  switch (kind) {
    case K::Validation:
    case K::NonDecayingTail:
    case K::MissingReflection:
    case K::DomainError:
      return ValidationFailure;
    case K::RegimeMismatch:
    case K::NotSimple:
    case K::AZero:
      return AssumptionFailure;
    default:
      return NumericalFailure;
  }
}

struct Globals {
  std::string tolerance_file;
  unsigned threads = 0;
  std::string out_dir = ".";

  rn::Tolerances tolerances() const {
    if (tolerance_file.empty()) return {};
    return rn::tolerances_from_json(rn::parse_json(rn::read_file(tolerance_file), tolerance_file));
  }
  std::string path(const std::string& name) const {
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / name).string();
  }
};

struct ProfileSource {
  std::string file;
  std::string generator;
  double omega = 1, alpha = 1, phi = 0.5, amplitude = 0.3, lambda = 1, q = -1, h = 1.0 / 128, length = 0, scale = 1;

  void attach(CLI::App* app) {
    auto* f = app->add_option("--profile", file, "Profile JSON file");
    auto* g = app->add_option("--generator", generator, "defocusing_soliton | focusing_soliton | gaussian")
                  ->check(CLI::IsMember({"defocusing_soliton", "focusing_soliton", "gaussian"}));
    f->excludes(g);
    app->add_option("--omega", omega, "Soliton frequency");
    app->add_option("--alpha", alpha, "Defocusing soliton amplitude parameter");
    app->add_option("--phi", phi, "Focusing soliton shift");
    app->add_option("--amplitude", amplitude, "Gaussian amplitude");
    app->add_option("--lambda", lambda, "Sign of the nonlinearity for gaussian data");
    app->add_option("--q", q, "Robin parameter for gaussian data");
    app->add_option("--spacing", h, "Sample spacing of generated data");
    app->add_option("--L", length, "Length of generated data (0: generator default)");
    app->add_option("--scale", scale, "Multiply the profile by this factor");
  }

  rn::InitialProfile load(const rn::Tolerances& tol) const {
    if (file.empty() == generator.empty())
      throw rn::Error(rn::ErrorKind::Validation, "give exactly one of --profile and --generator");
    if (!file.empty()) {
      auto j = rn::parse_json(rn::read_file(file), file);
      if (scale != 1.0) j["scale"] = scale * j.value("scale", 1.0);
      return rn::profile_from_json(j, tol);
    }
    rn::Json j = {{"generator", generator}, {"h", h}, {"scale", scale}};
    if (length > 0) j["L"] = length;
    if (generator == "gaussian") {
      j["amplitude"] = amplitude;
      j["lambda"] = lambda;
      j["q"] = q;
    } else {
      j["omega"] = omega;
      j[generator == "defocusing_soliton" ? "alpha" : "phi"] = generator == "defocusing_soliton" ? alpha : phi;
    }
    return rn::profile_from_json(j, tol);
  }
};

struct SpectralGrid {
  double k_max = 8;
  std::size_t nodes = 257;

  void attach(CLI::App* app) {
    app->add_option("--k-max", k_max, "Half-width of the real k grid");
    app->add_option("--nodes", nodes, "Number of k nodes");
  }
};

void write_csv_file(const std::string& path, const rn::CsvTable& t) {
  std::ostringstream out;
  rn::write_csv(out, t);
  rn::write_text_file(path, out.str());
}

void write_json_file(const std::string& path, const rn::Json& j) {
  std::ostringstream out;
  rn::write_json(out, j);
  rn::write_text_file(path, out.str());
}

rn::CsvTable field_csv(const rn::SimState& s) {
  rn::CsvTable t;
  t.header = {"x", "Re u", "Im u"};
  for (std::size_t j = 0; j < s.u.size(); ++j) t.rows.push_back({s.x(j), s.u[j].real(), s.u[j].imag()});
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral analysis and long-time asymptotics of the Robin half-line NLS"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tolerance-file", g.tolerance_file, "JSON file overriding numerical tolerances");
  app.add_option("--threads", g.threads, "Worker threads (0: hardware concurrency)");
  app.add_option("--out-dir", g.out_dir, "Directory for output files");

  // scatter
  auto* scatter = app.add_subcommand("scatter", "Tabulate a, b, Delta and r on a real k grid");
  ProfileSource scatter_src;
  SpectralGrid scatter_grid;
  scatter_src.attach(scatter);
  scatter_grid.attach(scatter);

  // zeros
  auto* zeros = app.add_subcommand("zeros", "Count and locate the zeros of Delta and their residue constants");
  ProfileSource zeros_src;
  SpectralGrid zeros_grid;
  zeros_src.attach(zeros);
  zeros_grid.attach(zeros);

  // soliton
  auto* soliton = app.add_subcommand("soliton", "Stationary soliton samples and closed-form spectral data");
  double sol_lambda = 1, sol_omega = 1, sol_phi = 0, sol_alpha = 0, sol_length = 20, sol_t = 0;
  std::size_t sol_grid = 401;
  SpectralGrid sol_k;
  soliton->add_option("--lambda", sol_lambda, "+1 defocusing, -1 focusing")->required();
  soliton->add_option("--omega", sol_omega, "Frequency")->required();
  auto* phi_opt = soliton->add_option("--phi", sol_phi, "Focusing shift");
  auto* alpha_opt = soliton->add_option("--alpha", sol_alpha, "Defocusing amplitude parameter");
  phi_opt->excludes(alpha_opt);
  soliton->add_option("--grid", sol_grid, "Number of x samples on [0, L]");
  soliton->add_option("--L", sol_length, "Sample interval length");
  soliton->add_option("--t", sol_t, "Time of the samples");
  sol_k.attach(soliton);

  // asymptotics
  auto* asym = app.add_subcommand("asymptotics", "Evaluate the long-time formula on (x, t) lists");
  ProfileSource asym_src;
  SpectralGrid asym_grid{16, 1025};
  std::string asym_regime;
  std::vector<double> t_list, x_list;
  double asym_K = 4;
  asym_src.attach(asym);
  asym_grid.attach(asym);
  asym->add_option("--regime", asym_regime, "defocusing_qneg | defocusing_qpos | focusing")->required();
  asym->add_option("--t-list", t_list, "Times")->delimiter(',')->required();
  asym->add_option("--x-list", x_list, "Positions")->delimiter(',')->required();
  asym->add_option("--K", asym_K, "Focusing window: zeta in [0, K]");

  // evolve
  auto* evolve = app.add_subcommand("evolve", "Crank-Nicolson evolution with conserved-quantity log");
  ProfileSource evo_src;
  double tfinal = 1, evo_dx = 0.01, evo_dt = 1e-3, evo_length = 0;
  std::vector<double> snaps;
  bool no_boundary_check = false;
  int log_every = 10;
  evo_src.attach(evolve);
  evolve->add_option("--tfinal", tfinal, "Final time")->required();
  evolve->add_option("--snap", snaps, "Snapshot times")->delimiter(',');
  evolve->add_option("--dx", evo_dx, "Grid spacing");
  evolve->add_option("--dt", evo_dt, "Time step");
  evolve->add_option("--length", evo_length, "Wall position (0: max(40, 8 sqrt(tfinal)))");
  evolve->add_option("--log-every", log_every, "Steps between conserved-quantity records");
  evolve->add_flag("--no-boundary-check", no_boundary_check, "Do not stop when the field reaches the wall");

  // compare
  auto* compare = app.add_subcommand("compare", "PDE against the long-time formula on {t0, 2 t0, 4 t0}");
  ProfileSource cmp_src;
  rn::CompareConfig cfg;
  std::string cmp_regime, cmp_metric = "complex";
  cmp_src.attach(compare);
  compare->add_option("--regime", cmp_regime, "defocusing_qneg | defocusing_qpos | focusing")->required();
  compare->add_option("--t0", cfg.t0, "First ladder time");
  compare->add_option("--dx", cfg.dx, "PDE grid spacing");
  compare->add_option("--dt", cfg.dt, "PDE time step");
  compare->add_option("--length", cfg.length, "Wall position (0: 12 * 4 t0)");
  compare->add_flag("--boundary-check", cfg.check_boundary, "Stop when the field reaches the wall");
  compare->add_option("--zeta-max", cfg.zeta_max, "x-grid covers [0, zeta_max t]");
  compare->add_option("--points", cfg.points, "x-grid points");
  compare->add_option("--k-max", cfg.k_max, "Half-width of the k grid for r");
  compare->add_option("--nodes", cfg.k_nodes, "Number of k nodes");
  compare->add_option("--K", cfg.K, "Focusing window: zeta in [0, K]");
  compare->add_option("--metric", cmp_metric, "complex | modulus");
  compare->add_option("--min-exponent", cfg.min_exponent, "Pass threshold on p for defocusing q < 0");
  compare->add_option("--max-error", cfg.max_error, "Pass threshold on E for the soliton regimes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Pass : ValidationFailure;
  }

  try {
    const auto tol = g.tolerances();

    if (*scatter) {
      const auto profile = scatter_src.load(tol);
      const auto table =
          rn::build_table(profile, rn::uniform_grid(scatter_grid.k_max, scatter_grid.nodes), tol, g.threads);
      write_csv_file(g.path("spectral_table.csv"), rn::table_to_csv(table));
      std::cout << rn::Json{{"nodes", table.k_grid.size()},
                            {"max_unit_deviation", table.max_unit_deviation},
                            {"max_symmetry_deviation", table.max_symmetry_deviation},
                            {"max_abs_r", table.max_abs_r()},
                            {"delta_vanishes", table.has_vanishing_delta}}
                       .dump(2)
                << '\n';
      return table.max_unit_deviation <= tol.unit_tol ? Pass : NumericalFailure;
    }

    if (*zeros) {
      const auto profile = zeros_src.load(tol);
      const auto table = rn::build_table(profile, rn::uniform_grid(zeros_grid.k_max, zeros_grid.nodes), tol, g.threads);
      const auto spectrum = rn::discrete_spectrum(profile, table, tol);
      const auto j = rn::spectrum_to_json(spectrum);
      write_json_file(g.path("spectrum.json"), j);
      std::cout << j.dump(2) << '\n';
      return Pass;
    }

    if (*soliton) {
      if (sol_lambda != 1.0 && sol_lambda != -1.0)
        throw rn::Error(rn::ErrorKind::Validation, "--lambda must be +1 or -1");
      const bool focusing = sol_lambda < 0;
      if (focusing ? phi_opt->count() == 0 : alpha_opt->count() == 0)
        throw rn::Error(rn::ErrorKind::Validation, focusing ? "focusing solitons need --phi" : "defocusing solitons need --alpha");
      const auto p = focusing ? rn::SolitonParams::focusing(sol_omega, sol_phi)
                              : rn::SolitonParams::defocusing(sol_omega, sol_alpha);
      if (sol_grid < 2) throw rn::Error(rn::ErrorKind::Validation, "--grid needs at least 2 points");
      rn::CsvTable samples;
      samples.header = {"x", "Re u", "Im u"};
      for (std::size_t j = 0; j < sol_grid; ++j) {
        const double x = sol_length * static_cast<double>(j) / static_cast<double>(sol_grid - 1);
        const auto u = rn::stationary_soliton(p, x, sol_t);
        samples.rows.push_back({x, u.real(), u.imag()});
      }
      rn::CsvTable spectral;
      spectral.header = {"k", "Re a", "Im a", "Re b", "Im b", "Re Δ", "Im Δ"};
      for (double k : rn::uniform_grid(sol_k.k_max, sol_k.nodes)) {
        const auto a = p.a(k), b = p.b(k), d = p.delta(k);
        spectral.rows.push_back({k, a.real(), a.imag(), b.real(), b.imag(), d.real(), d.imag()});
      }
      write_csv_file(g.path("soliton_samples.csv"), samples);
      write_csv_file(g.path("soliton_spectral.csv"), spectral);
      return Pass;
    }

    if (*asym) {
      const auto regime = rn::regime_from_string(asym_regime);
      const auto profile = asym_src.load(tol);
      if (regime != rn::regime_for(profile.lambda(), profile.q()))
        throw rn::Error(rn::ErrorKind::RegimeMismatch, "regime " + asym_regime + " is inconsistent with lambda and q");
      const auto data = rn::scattering_data(profile, asym_grid.k_max, asym_grid.nodes, tol, g.threads);
      rn::CsvTable out;
      out.header = {"x", "t", "Re u_pred", "Im u_pred", "|u_pred|", "Re u_sol", "Im u_sol", "Re u_rad", "Im u_rad"};
      for (double t : t_list)
        for (double x : x_list) {
          const auto p = rn::asymptotic_profile(regime, data, x, t, asym_K);
          out.rows.push_back({x, t, p.total.real(), p.total.imag(), std::abs(p.total), p.u_sol.real(), p.u_sol.imag(),
                              p.u_rad.real(), p.u_rad.imag()});
        }
      write_csv_file(g.path("asymptotics.csv"), out);
      return Pass;
    }

    if (*evolve) {
      const auto profile = evo_src.load(tol);
      const double length = evo_length > 0 ? evo_length : rn::default_sim_length(tfinal);
      rn::SimOptions opt;
      opt.check_boundary = !no_boundary_check;
      opt.reflect_tol = tol.reflect_tol;
      const auto tr = rn::evolve(rn::make_state(profile, evo_dx, evo_dt, length), tfinal, snaps, opt, log_every);
      for (const auto& s : tr.snapshots) write_csv_file(g.path("snapshot_t" + rn::format_real(s.t) + ".csv"), field_csv(s));
      rn::CsvTable log;
      log.header = {"t", "mass", "energy"};
      for (const auto& r : tr.log) log.rows.push_back({r.t, r.mass, r.energy});
      write_csv_file(g.path("conserved.csv"), log);
      const double span = std::max(tfinal, 1.0);
      const bool ok = tr.max_mass_drift() <= tol.mass_tol * span && tr.max_energy_drift() <= tol.energy_tol * span;
      std::cout << rn::Json{{"max_mass_drift", tr.max_mass_drift()}, {"max_energy_drift", tr.max_energy_drift()}}.dump(2)
                << '\n';
      return ok ? Pass : NumericalFailure;
    }

    if (*compare) {
      cfg.regime = rn::regime_from_string(cmp_regime);
      cfg.metric = rn::metric_from_string(cmp_metric);
      cfg.threads = g.threads;
      cfg.tol = tol;
      const auto profile = cmp_src.load(tol);
      const auto report = rn::run_compare(profile, cfg);
      const auto j = rn::report_to_json(report);
      write_json_file(g.path("report.json"), j);
      std::cout << j.dump(2) << '\n';
      return report.pass ? Pass : NumericalFailure;
    }
  } catch (const rn::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return NumericalFailure;
  }
  return Pass;
}
