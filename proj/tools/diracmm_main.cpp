// Command-line surface: solves, scans, and matrix demonstrations with
// regression-friendly CSV/JSON output.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "diracmm/diracmm.hpp"

using json = nlohmann::ordered_json;
using namespace diracmm;

namespace {

struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;
};

GridSpec parse_grid(const std::string &s) {
  GridSpec g;
  char colon1 = 0, colon2 = 0;
  std::istringstream in(s);
  if (!(in >> g.lo >> colon1 >> g.hi >> colon2 >> g.n) || colon1 != ':' ||
      colon2 != ':' || g.n < 1)
    throw CLI::ValidationError("grid", "expected lo:hi:n, got '" + s + "'");
  return g;
}

std::vector<double> grid_points(const GridSpec &g) {
  std::vector<double> out;
  out.reserve(g.n);
  if (g.n == 1) {
    out.push_back(g.lo);
    return out;
  }
  for (int i = 0; i < g.n; ++i)
    out.push_back(g.lo + (g.hi - g.lo) * double(i) / (g.n - 1));
  return out;
}

std::vector<int> parse_int_list(const std::string &s) {
  std::vector<int> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ','))
    out.push_back(std::stoi(tok));
  if (out.empty())
    throw CLI::ValidationError("list", "expected comma-separated integers");
  return out;
}

std::string fmt15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  return buf;
}

std::string iso8601_now() {
  const auto t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

json make_manifest(const std::string &command,
                   const std::map<std::string, std::string> &params,
                   const Constants &k) {
  json m;
  m["command"] = command;
  m["parameters"] = params;
  m["constants_used"] = {{"c", k.c}, {"alpha", k.alpha()}, {"m", 1.0}};
  m["tool_version"] = diracmm::version;
  m["timestamp"] = iso8601_now();
  return m;
}

// Write-then-rename so a failed run never leaves a partial file behind.
void write_file_atomic(const std::string &path, const std::string &content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open output file " + path);
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

void emit(const std::string &out_path, const std::string &data,
          const json &manifest) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  write_file_atomic(out_path, data);
  write_file_atomic(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

struct EvenTempered {
  double zeta0 = 0.5;
  double ratio = 2.0;
  int count = 4;
};

EvenTempered parse_uppers(const std::string &s) {
  EvenTempered e;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> e.zeta0 >> c1 >> e.ratio >> c2 >> e.count) || c1 != ',' ||
      c2 != ',' || e.zeta0 <= 0 || e.ratio <= 0 || e.count < 1 ||
      e.count > 64)
    throw CLI::ValidationError("uppers", "expected zeta0,ratio,count");
  return e;
}

std::vector<Orbital> even_tempered_uppers(const EvenTempered &e) {
  std::vector<Orbital> out;
  double zeta = e.zeta0;
  for (int i = 0; i < e.count; ++i, zeta *= e.ratio) {
    RadialFunction f = RadialFunction::slater(1.0, 0.0, zeta);
    const double n = std::sqrt(overlap(f, f));
    out.push_back(Orbital{f.scaled(1.0 / n), SpinorChannel(-1)});
  }
  return out;
}

CouplingSpec coupling_from_name(const std::string &name) {
  if (name == "kb")
    return KineticBalance{};
  if (name == "same-radial")
    return SameRadial{};
  if (name == "paper-kappa")
    return PaperKappa{};
  throw CLI::ValidationError("coupling", "unknown coupling '" + name + "'");
}

void require_valid_Z(double Z, const Constants &k) {
  if (Z < 0)
    throw CLI::ValidationError("Z", "Z must be non-negative");
  if (k.alpha() * Z >= 1.0)
    throw CLI::ValidationError("Z", "alpha*Z >= 1");
}

int run_solve(double Z, const std::string &trial_name, double zeta_seed,
              const std::string &coupling_name, const Constants &k,
              const std::string &out_path) {
  require_valid_Z(Z, k);
  const PotentialSpec V(Z);
  const TrialFactory trial = trial_name == "exact-power"
                                 ? exact_power_trial(V, k)
                                 : sto_trial();
  const std::string coupling = coupling_name.empty()
                                   ? (trial_name == "exact-power"
                                          ? std::string("same-radial")
                                          : std::string("kb"))
                                   : coupling_name;
  const CouplingSpec family = coupling_from_name(coupling);
  const double seed = zeta_seed > 0 ? zeta_seed : std::max(Z, 0.5);
  const Scan1DConfig cfg{0.3 * seed, 3.0 * seed, 25, 1e-10};
  const MinMaxResult mm = outer_minimize(trial, family, V, cfg, k);
  const double exact_shift = exact_ground_energy_shifted(V, k);
  const double virial = virial_check(mm, trial, family, V, k);

  std::map<std::string, std::string> params{
      {"Z", fmt15(Z)},          {"trial", trial_name},
      {"zeta", fmt15(seed)},    {"coupling", coupling},
      {"c", fmt15(k.c)}};
  json doc;
  doc["eps_minmax"] = mm.eps_minmax;
  doc["eps_minus_mc2"] = mm.eps_minmax_minus_mc2;
  doc["zeta_star"] = mm.zeta_star;
  doc["lambda_star"] = mm.lambda_star;
  doc["exact_formula_value"] = exact_ground_energy(V, k);
  doc["gap_to_exact"] = mm.eps_minmax_minus_mc2 - exact_shift;
  doc["virial_residual"] = virial;
  doc["interior"] = mm.interior;
  const json manifest = make_manifest("solve", params, k);
  if (out_path.empty()) {
    doc["manifest"] = manifest;
    std::cout << doc.dump(2) << "\n";
  } else {
    emit(out_path, doc.dump(2) + "\n", manifest);
  }
  return 0;
}

int run_scan_shower(double Z, const GridSpec &zg, const GridSpec &lg,
                    const std::string &coupling_name, const Constants &k,
                    const std::string &out_path) {
  require_valid_Z(Z, k);
  const PotentialSpec V(Z);
  const CouplingSpec family = coupling_from_name(
      coupling_name.empty() ? std::string("kb") : coupling_name);
  const ShowerResult res = shower_scan(grid_points(zg), grid_points(lg),
                                       sto_trial(), family, V, k);
  std::string csv = "zeta,lambda,eps_minus_mc2\n";
  for (const auto &r : res.rows)
    csv += fmt15(r.zeta) + "," + fmt15(r.lambda) + "," +
           fmt15(r.eps_minus_mc2) + "\n";
  std::map<std::string, std::string> params{
      {"Z", fmt15(Z)},
      {"zeta", fmt15(zg.lo) + ":" + fmt15(zg.hi) + ":" + std::to_string(zg.n)},
      {"lambda",
       fmt15(lg.lo) + ":" + fmt15(lg.hi) + ":" + std::to_string(lg.n)},
      {"c", fmt15(k.c)}};
  emit(out_path, csv, make_manifest("scan shower", params, k));
  return 0;
}

int run_scan_fig5(double Z, const GridSpec &zg, const Constants &k,
                  const std::string &out_path) {
  require_valid_Z(Z, k);
  const PotentialSpec V(Z);
  const Scan1DConfig cfg{zg.lo, zg.hi, zg.n, 1e-10};
  const auto rows = fig5_scan(cfg, V, {}, k);
  std::string csv =
      "zeta,eps_plus_minus_mc2,eps_minus_plus_mc2,pot_plus,pot_minus\n";
  for (const auto &r : rows)
    csv += fmt15(r.zeta) + "," + fmt15(r.eps_plus_minus_mc2) + "," +
           fmt15(r.eps_minus_plus_mc2) + "," + fmt15(r.pot_plus) + "," +
           fmt15(r.pot_minus) + "\n";
  std::map<std::string, std::string> params{
      {"Z", fmt15(Z)},
      {"zeta", fmt15(zg.lo) + ":" + fmt15(zg.hi) + ":" + std::to_string(zg.n)},
      {"c", fmt15(k.c)}};
  emit(out_path, csv, make_manifest("scan fig5", params, k));
  return 0;
}

int run_scan_maxmin(double Z, const GridSpec &zg, const Constants &k,
                    const std::string &out_path) {
  require_valid_Z(Z, k);
  const PotentialSpec V(Z);
  const Scan1DConfig cfg{zg.lo, zg.hi, zg.n, 1e-10};
  const MaxMinResult res = maxmin_spurious(sto_trial(), V, cfg, k);
  std::string csv = "zeta,eps_minus_plus_mc2\n";
  for (const auto &r : res.trace)
    csv += fmt15(r.zeta) + "," + fmt15(r.eps_minus_plus_mc2) + "\n";
  std::map<std::string, std::string> params{
      {"Z", fmt15(Z)},
      {"zeta", fmt15(zg.lo) + ":" + fmt15(zg.hi) + ":" + std::to_string(zg.n)},
      {"c", fmt15(k.c)}};
  emit(out_path, csv, make_manifest("scan maxmin", params, k));
  return 0;
}

int run_scan_dft(double Z, const std::vector<int> &n_list, const Constants &k,
                 const std::string &out_path) {
  require_valid_Z(Z, k);
  const PotentialSpec V(Z);
  std::vector<double> r_grid;
  for (int i = 1; i <= 400; ++i)
    r_grid.push_back(0.05 * i); // shared density grid, r in (0, 20]
  const auto rows = dft_fallacy_scan(n_list, V, r_grid, k);
  std::string csv =
      "n,zeta_star,lambda_star,eps_minus_mc2,deviation_from_exact\n";
  for (const auto &r : rows)
    csv += std::to_string(r.n) + "," + fmt15(r.zeta_star) + "," +
           fmt15(r.lambda_star) + "," + fmt15(r.eps_minus_mc2) + "," +
           fmt15(r.deviation_from_exact) + "\n";
  std::string dens = "r";
  for (const auto &r : rows)
    dens += ",density_n" + std::to_string(r.n);
  dens += "\n";
  for (size_t i = 0; i < r_grid.size(); ++i) {
    dens += fmt15(r_grid[i]);
    for (const auto &r : rows)
      dens += "," + fmt15(r.density[i]);
    dens += "\n";
  }
  std::string nspec;
  for (size_t i = 0; i < n_list.size(); ++i)
    nspec += (i ? "," : "") + std::to_string(n_list[i]);
  std::map<std::string, std::string> params{
      {"Z", fmt15(Z)}, {"n", nspec}, {"c", fmt15(k.c)}};
  const json manifest = make_manifest("scan dft-fallacy", params, k);
  emit(out_path, csv, manifest);
  if (!out_path.empty()) {
    const std::string stem =
        out_path.size() > 4 && out_path.substr(out_path.size() - 4) == ".csv"
            ? out_path.substr(0, out_path.size() - 4)
            : out_path;
    write_file_atomic(stem + ".density.csv", dens);
  } else {
    std::cout << dens;
  }
  return 0;
}

json spectrum_json(const std::vector<double> &ev) {
  json a = json::array();
  for (double e : ev)
    a.push_back(e);
  return a;
}

int run_matrix(const std::string &mode, double Z, const EvenTempered &et,
               double detune, const std::string &eg_spec, const Constants &k,
               const std::string &out_path) {
  require_valid_Z(Z, k);
  const PotentialSpec V(Z);
  const std::vector<Orbital> uppers = even_tempered_uppers(et);
  std::map<std::string, std::string> params{
      {"Z", fmt15(Z)},
      {"uppers", fmt15(et.zeta0) + "," + fmt15(et.ratio) + "," +
                     std::to_string(et.count)},
      {"c", fmt15(k.c)}};
  json doc;
  if (mode == "collapse") {
    params["detune"] = fmt15(detune);
    const CollapseReport r = collapse_demo(uppers, V, detune, k);
    doc["balanced_gap_eigenvalue"] = r.balanced_gap;
    doc["detuned_gap_eigenvalue"] = r.detuned_gap;
    doc["exact"] = r.exact_e1s;
    doc["balanced_margin"] = r.balanced_margin;
    doc["detuned_margin"] = r.detuned_margin;
    doc["violations"] = {{"balanced_below_exact", r.balanced_margin < -1e-10},
                         {"detuned_below_exact", r.collapsed}};
  } else if (mode == "nepp") {
    params["Eg"] = eg_spec;
    const BasisSet basis = kinetic_balance_basis(uppers);
    const MatrixBlocks blocks = build_blocks(basis, V, k);
    const DiagonalizationResult before = diagonalize(blocks, k);
    const double Eg = eg_spec == "exact" ? exact_ground_energy(V, k)
                                         : std::stod(eg_spec);
    const std::vector<double> after = nepp_spectrum(blocks, Eg, k);
    double lowest_gap = 0.0;
    bool has_gap = false;
    for (double e : before.eigenvalues)
      if (e >= 0.0 && e < k.mc2() && !has_gap) {
        lowest_gap = e;
        has_gap = true;
      }
    const double bound = has_gap ? std::min(Eg, lowest_gap) : Eg;
    doc["E_g"] = Eg;
    doc["spectrum_before"] = spectrum_json(before.eigenvalues);
    doc["spectrum_after"] = spectrum_json(after);
    doc["min_eigenvalue_after"] = after.front();
    doc["lower_bound"] = bound;
    doc["bound_satisfied"] = after.front() >= bound - 1e-10;
  } else { // conjugation
    BasisSet basis;
    basis.uppers = uppers;
    for (const auto &u : uppers)
      basis.lowers.push_back(Orbital{u.radial, SpinorChannel(1)});
    const MatrixBlocks blocks = build_blocks(basis, V, k);
    const DiagonalizationResult plus = diagonalize(blocks, k);
    const DiagonalizationResult minus =
        diagonalize(flip_potential_sign(blocks, k), k);
    double asym = 0.0;
    const size_t n = plus.eigenvalues.size();
    for (size_t i = 0; i < n; ++i)
      asym = std::max(asym, std::abs(plus.eigenvalues[i] +
                                     minus.eigenvalues[n - 1 - i]));
    doc["max_spectral_asymmetry"] = asym;
    doc["spectrum"] = spectrum_json(plus.eigenvalues);
  }
  const json manifest = make_manifest("matrix " + mode, params, k);
  if (out_path.empty()) {
    doc["manifest"] = manifest;
    std::cout << doc.dump(2) << "\n";
  } else {
    emit(out_path, doc.dump(2) + "\n", manifest);
  }
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Constrained-component min-max solver for the one-electron "
               "Dirac equation"};
  app.set_config("--config")->configurable(false);

  double Z = 1.0, zeta = 0.0, c_override = 0.0, detune = 4.0;
  std::string trial = "sto", coupling, out_path, zeta_grid, lambda_grid,
              n_list_s = "1,2,3", uppers_s = "0.5,2,4", eg_spec = "exact";

  auto *solve = app.add_subcommand("solve", "nested min-max solve");
  solve->add_option("--Z", Z)->required();
  solve->add_option("--trial", trial)
      ->check(CLI::IsMember({"sto", "exact-power"}));
  solve->add_option("--zeta", zeta);
  solve->add_option("--coupling", coupling)
      ->check(CLI::IsMember({"kb", "same-radial", "paper-kappa"}));
  solve->add_option("--c", c_override);
  solve->add_option("--out", out_path);

  auto *scan = app.add_subcommand("scan", "parameter scans (CSV)");
  scan->require_subcommand(1);
  auto *shower = scan->add_subcommand("shower");
  auto *fig5 = scan->add_subcommand("fig5");
  auto *dft = scan->add_subcommand("dft-fallacy");
  auto *maxmin = scan->add_subcommand("maxmin");
  for (CLI::App *s : {shower, fig5, dft, maxmin}) {
    s->add_option("--Z", Z)->required();
    s->add_option("--c", c_override);
    s->add_option("--out", out_path);
  }
  shower->add_option("--zeta", zeta_grid)->required();
  shower->add_option("--lambda", lambda_grid)->required();
  shower->add_option("--coupling", coupling)
      ->check(CLI::IsMember({"kb", "same-radial", "paper-kappa"}));
  fig5->add_option("--zeta", zeta_grid)->required();
  maxmin->add_option("--zeta", zeta_grid)->required();
  dft->add_option("--n", n_list_s);

  auto *matrix = app.add_subcommand("matrix", "finite-basis demonstrations");
  matrix->require_subcommand(1);
  auto *collapse = matrix->add_subcommand("collapse");
  auto *nepp = matrix->add_subcommand("nepp");
  auto *conj = matrix->add_subcommand("conjugation");
  for (CLI::App *s : {collapse, nepp, conj}) {
    s->add_option("--Z", Z)->required();
    s->add_option("--uppers", uppers_s);
    s->add_option("--c", c_override);
    s->add_option("--out", out_path);
  }
  collapse->add_option("--detune", detune);
  nepp->add_option("--Eg", eg_spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const Constants k = c_override > 0.0 ? make_constants(c_override)
                                         : Constants{};
    if (*solve)
      return run_solve(Z, trial, zeta, coupling, k, out_path);
    if (*shower)
      return run_scan_shower(Z, parse_grid(zeta_grid),
                             parse_grid(lambda_grid), coupling, k, out_path);
    if (*fig5)
      return run_scan_fig5(Z, parse_grid(zeta_grid), k, out_path);
    if (*maxmin)
      return run_scan_maxmin(Z, parse_grid(zeta_grid), k, out_path);
    if (*dft)
      return run_scan_dft(Z, parse_int_list(n_list_s), k, out_path);
    if (*collapse)
      return run_matrix("collapse", Z, parse_uppers(uppers_s), detune,
                        eg_spec, k, out_path);
    if (*nepp)
      return run_matrix("nepp", Z, parse_uppers(uppers_s), detune, eg_spec,
                        k, out_path);
    if (*conj)
      return run_matrix("conjugation", Z, parse_uppers(uppers_s), detune,
                        eg_spec, k, out_path);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const CLI::ValidationError &e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error &e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
