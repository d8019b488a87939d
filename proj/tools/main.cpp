// Command-line driver: construct solution specs, verify them against the
// steady system, scan the periodic-profile existence region, run the energy
// balance, and export field samples for plotting.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/validation,
// 3 solver failure, 4 precondition failure.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>

#include "ssel/energy.hpp"
#include "ssel/families.hpp"
#include "ssel/periodic_ode.hpp"
#include "ssel/residual.hpp"

namespace {

using nlohmann::json;

int exit_code_for(const ssel::Error& e) {
  switch (e.code()) {
    case ssel::errc::validation: return 2;
    case ssel::errc::solver: return 3;
    case ssel::errc::precondition: return 4;
  }
  return 2;
}

// atomic write: temp file in the target directory, then rename
void write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ssel::Error(ssel::errc::validation, "cannot open output path: " + path);
    out << content;
  }
  fs::rename(tmp, target);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ssel::SolutionSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ssel::Error(ssel::errc::validation, "cannot read spec file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ssel::Error(ssel::errc::validation, std::string("malformed spec JSON: ") + e.what());
  }
  return ssel::spec_from_json(j);
}

ssel::GridSpec grid_from_flags(int dim, double rmin, double rmax, int nr, int na) {
  ssel::GridSpec g = ssel::GridSpec::defaults(dim);
  g.r_min = rmin;
  g.r_max = rmax;
  g.n_radial = nr;
  if (na > 0) {
    switch (dim) {
      case 2: g.angular = {na}; break;
      case 3: g.angular = {std::max(2, na / 2), na}; break;
      case 4: g.angular = {std::max(2, na / 4), std::max(2, na / 4), na / 2 < 2 ? 2 : na / 2}; break;
    }
  }
  return g;
}

std::vector<double> parse_radii(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    out.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-similar solution families of the steady Ericksen-Leslie system"};
  app.require_subcommand(1);

  std::string output = "-";
  int threads = 1;
  std::string format = "json";
  app.add_option("--output,-o", output, "output path ('-' for stdout)")->capture_default_str();
  app.add_option("--threads", threads, "worker threads for grid evaluation");
  app.add_option("--format", format, "output format where applicable (json|csv)");

  // construct ------------------------------------------------------------
  auto* c = app.add_subcommand("construct", "build a solution spec and write it as JSON");
  std::string family;
  double cc = 0, theta0 = 0, Phi = 0, theta1 = 0, theta2 = 0, Psi = 0, mu = 1, theta3 = 0;
  int m = 0, k = 1, dim = 3;
  std::string a_str = "2";
  std::string d0_str;
  c->add_option("--family", family, "case_i|case_ii|case_iii|landau|hedgehog|constant_director")
      ->required();
  c->add_option("--c", cc, "case_i radial strength");
  c->add_option("--m", m, "director winding parameter");
  c->add_option("--theta0", theta0, "case_i director phase (radians)");
  c->add_option("--phi", Phi, "case_ii circle mean of f times 2pi");
  c->add_option("--k", k, "case_ii minimal-period index");
  c->add_option("--theta1", theta1, "case_ii velocity phase");
  c->add_option("--theta2", theta2, "case_ii director phase");
  c->add_option("--psi", Psi, "case_iii radial flux");
  c->add_option("--mu", mu, "case_iii rotation strength (nonzero)");
  c->add_option("--theta3", theta3, "case_iii director angle");
  c->add_option("--a", a_str, "landau parameter in (1,inf]; 'inf' allowed");
  c->add_option("--dim", dim, "dimension for hedgehog/constant_director");
  c->add_option("--d0", d0_str, "constant director components, comma separated");

  // verify ---------------------------------------------------------------
  auto* v = app.add_subcommand("verify", "residual-verify a spec file");
  std::string spec_path, mode = "analytic";
  double rmin = 0.5, rmax = 2.0, threshold = -1;
  int nr = 8, na = 0;
  v->add_option("spec", spec_path, "spec JSON file")->required();
  v->add_option("--rmin", rmin, "annulus inner radius");
  v->add_option("--rmax", rmax, "annulus outer radius");
  v->add_option("--nr", nr, "radial resolution");
  v->add_option("--na", na, "angular resolution");
  v->add_option("--mode", mode, "analytic|fd");
  v->add_option("--threshold", threshold, "sup-residual pass threshold (default per mode)");

  // scan -----------------------------------------------------------------
  auto* s = app.add_subcommand("scan", "scan the case_ii existence region, CSV output");
  double phi_min = 0, phi_max = 0, phi_step = 0;
  int k_max = 4;
  s->add_option("--phi-min", phi_min, "lower end of the Phi range")->required();
  s->add_option("--phi-max", phi_max, "upper end of the Phi range")->required();
  s->add_option("--phi-step", phi_step, "Phi step")->required();
  s->add_option("--k-max", k_max, "maximum k");

  // energy ---------------------------------------------------------------
  auto* e = app.add_subcommand("energy", "energy balance report for a verified spec");
  std::string espec_path, radii_str = "0.5,1,2,4";
  double gap_threshold = 1e-4;
  int equad = 48;
  e->add_option("spec", espec_path, "spec JSON file")->required();
  e->add_option("--radii", radii_str, "comma-separated radius ladder");
  e->add_option("--quad", equad, "sphere quadrature resolution");
  e->add_option("--gap-threshold", gap_threshold, "relative identity-gap pass threshold");

  // export-field ----------------------------------------------------------
  auto* x = app.add_subcommand("export-field", "sample a quantity over the annulus grid, CSV");
  std::string xspec_path, quantity;
  double xrmin = 0.5, xrmax = 2.0;
  int xnr = 8, xna = 0;
  x->add_option("spec", xspec_path, "spec JSON file")->required();
  x->add_option("--quantity", quantity, "u|p|d|grad_d_norm|head_pressure")->required();
  x->add_option("--rmin", xrmin, "annulus inner radius");
  x->add_option("--rmax", xrmax, "annulus outer radius");
  x->add_option("--nr", xnr, "radial resolution");
  x->add_option("--na", xna, "angular resolution");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  ssel::set_thread_count(threads);

  try {
    auto emit = [&](const std::string& content) {
      if (output == "-")
        std::cout << content;
      else
        write_file(output, content);
    };

    if (*c) {
      ssel::SolutionSpec spec;
      const ssel::Family fam = ssel::family_from_name(family);
      switch (fam) {
        case ssel::Family::case_i: spec = ssel::make_case_i(cc, m, theta0); break;
        case ssel::Family::case_ii: spec = ssel::make_case_ii(Phi, k, m, theta1, theta2); break;
        case ssel::Family::case_iii: spec = ssel::make_case_iii(Psi, mu, theta3); break;
        case ssel::Family::landau: {
          const double a = (a_str == "inf") ? std::numeric_limits<double>::infinity()
                                            : std::stod(a_str);
          spec = ssel::make_landau(a);
          break;
        }
        case ssel::Family::hedgehog: spec = ssel::make_hedgehog(dim); break;
        case ssel::Family::constant_director: {
          if (d0_str.empty()) {
            ssel::Vec d0 = ssel::Vec::unit(dim, dim - 1);
            spec = ssel::make_constant_director(dim, d0);
          } else {
            const std::vector<double> comps = parse_radii(d0_str);
            ssel::Vec d0((int)comps.size());
            for (std::size_t i = 0; i < comps.size(); ++i) d0[(int)i] = comps[i];
            spec = ssel::make_constant_director((int)comps.size(), d0);
          }
          break;
        }
        default:
          throw ssel::Error(ssel::errc::validation, "construct: unsupported family " + family);
      }
      emit(ssel::spec_to_json(spec).dump(2) + "\n");
      return 0;
    }

    if (*v) {
      const ssel::SolutionSpec spec = load_spec(spec_path);
      ssel::StencilConfig cfg;
      if (mode == "fd")
        cfg.mode = ssel::DerivMode::forced_fd;
      else if (mode != "analytic")
        throw ssel::Error(ssel::errc::validation, "verify: --mode must be analytic or fd");
      const bool analytic_available = spec.eval.has_analytic() && mode == "analytic";
      const double thr = threshold > 0 ? threshold : (analytic_available ? 1e-8 : 1e-6);
      const ssel::GridSpec grid = grid_from_flags(spec.dim, rmin, rmax, nr, na);
      const ssel::VerifyReport rep = ssel::verify_solution(spec, grid, cfg, thr);
      emit(ssel::verify_to_json(rep, spec).dump(2) + "\n");
      return rep.pass ? 0 : 1;
    }

    if (*s) {
      const auto rows = ssel::scan_existence(phi_min, phi_max, phi_step, k_max);
      emit(ssel::scan_to_csv(rows));
      return 0;
    }

    if (*e) {
      const ssel::SolutionSpec spec = load_spec(espec_path);
      const std::vector<double> radii = parse_radii(radii_str);
      const ssel::EnergyReport rep = ssel::energy_balance(spec, radii, equad);
      emit(ssel::energy_to_json(rep).dump(2) + "\n");
      const double rel =
          std::abs(rep.identity_gap) / std::max(std::abs(rep.dissipation), 1e-8);
      return rel <= gap_threshold ? 0 : 1;
    }

    if (*x) {
      const ssel::SolutionSpec spec = load_spec(xspec_path);
      const ssel::GridSpec grid = grid_from_flags(spec.dim, xrmin, xrmax, xnr, xna);
      const ssel::StencilConfig cfg;
      const ssel::DerivKit kit(spec, cfg);
      std::string csv;
      const int n = spec.dim;
      for (int i = 0; i < n; ++i) csv += "x" + std::to_string(i + 1) + ",";
      if (quantity == "u" || quantity == "d") {
        for (int i = 0; i < n; ++i)
          csv += quantity + std::to_string(i + 1) + (i + 1 < n ? "," : "\n");
      } else if (quantity == "p" || quantity == "grad_d_norm" || quantity == "head_pressure") {
        csv += quantity + "\n";
      } else {
        throw ssel::Error(ssel::errc::validation, "export-field: unknown quantity " + quantity);
      }
      for (const ssel::Vec& pt : ssel::annulus_grid(grid, n)) {
        for (int i = 0; i < n; ++i) csv += fmt17(pt[i]) + ",";
        if (quantity == "u" || quantity == "d") {
          const ssel::Vec val = (quantity == "u") ? spec.eval.u(pt) : spec.eval.d(pt);
          for (int i = 0; i < n; ++i) csv += fmt17(val[i]) + (i + 1 < n ? "," : "\n");
        } else if (quantity == "p") {
          csv += fmt17(spec.eval.p(pt)) + "\n";
        } else if (quantity == "grad_d_norm") {
          csv += fmt17(kit.grad_d(pt).frobenius()) + "\n";
        } else {
          csv += fmt17(ssel::head_pressure(spec, pt)) + "\n";
        }
      }
      emit(csv);
      return 0;
    }
  } catch (const ssel::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 2;
}
