// phasetomo: command-line front end for phase-space tomography.
//
// Subcommands: tomogram, radon, invert, evolve, kg, sample, verify.
// All outputs are deterministic data files (CSV bodies with a one-line JSON
// header); timestamps live in sidecar .meta.json files. Exit codes: 0 ok,
// 1 usage/config error, 2 numerical or verification failure.

#include <CLI11.hpp>
#include <json.hpp>

#include "tomo/analytic.hpp"
#include "tomo/evolution.hpp"
#include "tomo/grid_io.hpp"
#include "tomo/kg_cavity.hpp"
#include "tomo/quadrature.hpp"
#include "tomo/radon.hpp"
#include "tomo/states.hpp"
#include "tomo/verify.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace tomo;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct StateOptions {
  std::string kind = "gibbs";
  std::vector<double> omegas = {1.0};
  double beta = 1.0;
  std::vector<double> z_re, z_im;
  std::vector<int> m;
};

void add_state_options(CLI::App* cmd, StateOptions& opt) {
  cmd->add_option("--state", opt.kind, "state kind: gibbs | coherent | gl")
      ->check(CLI::IsMember({"gibbs", "coherent", "gl"}));
  cmd->add_option("--omega", opt.omegas, "mode frequencies (one per mode)");
  cmd->add_option("--beta", opt.beta, "inverse temperature (gibbs)");
  cmd->add_option("--z-re", opt.z_re, "coherent displacement, real parts");
  cmd->add_option("--z-im", opt.z_im, "coherent displacement, imaginary parts");
  cmd->add_option("--m", opt.m, "Gauss-Laguerre indices (one per mode)");
}

DensityState build_state(const StateOptions& opt) {
  ModeSpec spec{opt.omegas, std::nullopt};
  if (opt.kind == "gibbs") {
    spec.beta = opt.beta;
    return DensityState::gibbs(spec);
  }
  if (opt.kind == "coherent") {
    std::vector<Complex> z(opt.omegas.size(), Complex(0, 0));
    for (size_t k = 0; k < z.size(); ++k) {
      if (k < opt.z_re.size()) z[k].real(opt.z_re[k]);
      if (k < opt.z_im.size()) z[k].imag(opt.z_im[k]);
    }
    return DensityState::coherent(spec, std::move(z));
  }
  std::vector<int> m = opt.m.empty() ? std::vector<int>(opt.omegas.size(), 0) : opt.m;
  return DensityState::gauss_laguerre(spec, m);
}

json state_config(const StateOptions& opt) {
  json j{{"state", opt.kind}, {"omega", opt.omegas}};
  if (opt.kind == "gibbs") j["beta"] = opt.beta;
  if (opt.kind == "coherent") {
    j["z_re"] = opt.z_re;
    j["z_im"] = opt.z_im;
  }
  if (opt.kind == "gl") j["m"] = opt.m;
  return j;
}

std::string describe_state(const StateOptions& opt) {
  return state_config(opt).dump();
}

QuadSpec quad_from_name(const std::string& name) {
  return name == "fine" ? QuadSpec::fine() : QuadSpec::standard();
}

// "mu:nu,mu:nu,..." -> explicit (mu, nu) node list
std::vector<std::pair<double, double>> parse_nodes(const std::string& text) {
  std::vector<std::pair<double, double>> nodes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("node list: expected mu:nu pairs");
    nodes.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
  }
  return nodes;
}

void check_nodes(const std::vector<std::pair<double, double>>& nodes) {
  for (size_t j = 0; j < nodes.size(); ++j)
    if (nodes[j].first == 0.0 && nodes[j].second == 0.0)
      throw std::invalid_argument("degenerate node " + std::to_string(j) +
                                  ": (mu, nu) = (0, 0)");
}

int cmd_tomogram(const StateOptions& sopt, int rays, int x_points,
                 const std::string& nodes_text, const std::string& quad_name,
                 const std::string& out) {
  DensityState state = build_state(sopt);
  QuadSpec quad = quad_from_name(quad_name);
  TomogramGrid grid;
  if (!nodes_text.empty()) {
    std::vector<std::pair<double, double>> nodes = parse_nodes(nodes_text);
    check_nodes(nodes);
    grid = make_tomogram_grid_at_nodes(state, nodes, x_points, quad);
  } else {
    grid = make_tomogram_grid(state, TomogramGridSpec{rays, x_points}, quad);
  }
  grid.state_descriptor = describe_state(sopt);
  grid.quad_level = quad_name;
  json config = state_config(sopt);
  config["rays"] = rays;
  config["x_points"] = x_points;
  config["quad"] = quad_name;
  if (!nodes_text.empty()) config["nodes"] = nodes_text;
  write_tomogram_grid(out, grid, config);
  write_sidecar_meta(out, {{"command", "tomogram"}});
  std::cout << "wrote " << out << " (max normalization error "
            << format_double(grid.max_normalization_error) << ")\n";
  if (grid.max_normalization_error > 1e-6)
    throw numerics_error("normalization audit breach: " +
                         format_double(grid.max_normalization_error));
  return 0;
}

int cmd_radon(const std::string& in, int rays, int x_points, const std::string& quad_name,
              const std::string& out, const std::string& probe) {
  GridDensity density = read_grid_density(in);
  DensityState state = DensityState::grid(std::move(density));
  QuadSpec quad = quad_from_name(quad_name);
  if (!probe.empty()) {
    // "X:mu:nu" -> print one tomogram value
    auto c1 = probe.find(':');
    auto c2 = probe.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      throw std::invalid_argument("--probe expects X:mu:nu");
    double X = std::stod(probe.substr(0, c1));
    double mu = std::stod(probe.substr(c1 + 1, c2 - c1 - 1));
    double nu = std::stod(probe.substr(c2 + 1));
    double w = symplectic_radon(state, LineCoords::single(X, mu, nu), quad);
    std::cout << format_double(w) << "\n";
    return 0;
  }
  TomogramGrid grid = make_tomogram_grid(state, TomogramGridSpec{rays, x_points}, quad);
  grid.state_descriptor = json{{"state", "grid"}, {"source", in}}.dump();
  grid.quad_level = quad_name;
  json config{{"in", in}, {"rays", rays}, {"x_points", x_points}, {"quad", quad_name}};
  write_tomogram_grid(out, grid, config);
  write_sidecar_meta(out, {{"command", "radon"}});
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_invert(const std::string& in, const std::string& out, int cart, int radii, int fft,
               double extent) {
  TomogramGrid grid = read_tomogram_grid(in);
  // re-audit normalization from the data before inverting
  double worst = 0.0;
  for (const ModeTomogramBlock& b : grid.modes) {
    ArrayXd w = trapezoid_weights(b.x_axis.count, b.x_axis.step());
    for (int j = 0; j < static_cast<int>(b.nodes.size()); ++j) {
      double mass = 0.0;
      for (int i = 0; i < b.x_axis.count; ++i) mass += w[i] * b.values(j, i);
      worst = std::max(worst, std::abs(mass - 1.0));
    }
  }
  if (worst > 1e-4)
    throw numerics_error("input tomogram fails the normalization audit: " +
                         format_double(worst));
  InversionSpec spec;
  spec.cart_points = cart;
  spec.radial_points = radii;
  spec.fft_points = fft;
  spec.out_extent = extent;
  InversionResult res = inverse_radon(grid, spec);
  json config{{"in", in},    {"cart", cart},     {"radii", radii},
              {"fft", fft},  {"extent", extent}};
  config["diagnostics"] = {{"min_pre_clamp", res.min_pre_clamp},
                           {"mass_pre_clamp", res.mass_pre_clamp},
                           {"chi_radius", res.chi_radius},
                           {"normalization_audit", worst}};
  write_grid_density(out, res.density, config);
  write_sidecar_meta(out, {{"command", "invert"}});
  std::cout << "wrote " << out << " (pre-clamp min " << format_double(res.min_pre_clamp)
            << ", pre-clamp mass " << format_double(res.mass_pre_clamp) << ")\n";
  return 0;
}

int cmd_evolve(const std::string& in, double t, int snapshots, const std::string& scheme,
               std::vector<double> omegas, const std::string& out_prefix, int fd_points,
               double fd_extent, int fd_x_points, double dt) {
  TomogramGrid grid = read_tomogram_grid(in);
  if (omegas.empty()) {
    json header = read_header(in);
    if (header.contains("config") && header["config"].contains("omega"))
      omegas = header["config"]["omega"].get<std::vector<double>>();
  }
  if (omegas.size() != grid.modes.size())
    throw std::invalid_argument("evolve: provide --omega for every mode (file carries none)");
  ModeSpec spec{omegas, std::nullopt};

  json report{{"command", "evolve"}, {"scheme", scheme},     {"t", t},
              {"snapshots", snapshots}, {"omega", omegas},   {"in", in}};
  std::vector<std::string> written;

  if (scheme == "exact") {
    double mass_drift = 0.0;
    for (int s = 1; s <= snapshots; ++s) {
      double ts = t * s / snapshots;
      TomogramGrid gt = evolve_tomogram_grid(grid, ts, spec);
      // conservation audit: every ray of every snapshot stays normalized
      for (const ModeTomogramBlock& b : gt.modes) {
        ArrayXd w = trapezoid_weights(b.x_axis.count, b.x_axis.step());
        for (int j = 0; j < static_cast<int>(b.nodes.size()); ++j) {
          double mass = 0.0;
          for (int i = 0; i < b.x_axis.count; ++i) mass += w[i] * b.values(j, i);
          mass_drift = std::max(mass_drift, std::abs(mass - 1.0));
        }
      }
      char name[32];
      std::snprintf(name, sizeof(name), "_%03d.csv", s);
      std::string path = out_prefix + name;
      json config{{"in", in}, {"t", ts}, {"scheme", scheme}, {"omega", omegas}};
      write_tomogram_grid(path, gt, config);
      written.push_back(path);
    }
    report["mass_drift_max"] = mass_drift;
  } else if (scheme == "fd") {
    if (grid.modes.size() != 1)
      throw std::invalid_argument("evolve --scheme fd: single-mode tomograms only");
    double omega = omegas[0];
    // resample the ray grid onto the square: W(X, mu, nu) by homogeneity and
    // angular interpolation of the unit slices
    const ModeTomogramBlock& blk = grid.modes[0];
    int nrays = static_cast<int>(blk.nodes.size());
    double dth = M_PI / nrays;
    ArrayXd xs = blk.x_axis.nodes();
    auto slice_value = [&](int ray, double X) {
      int j = ray % (2 * nrays);
      if (j < 0) j += 2 * nrays;
      bool fold = j >= nrays;
      if (fold) {
        j -= nrays;
        X = -X;
      }
      double f = (X - blk.x_axis.min) / blk.x_axis.step();
      if (f <= 0.0 || f >= blk.x_axis.count - 1.0) return 0.0;
      int i = static_cast<int>(f);
      double u = f - i;
      return blk.values(j, i) * (1 - u) + blk.values(j, i + 1) * u;
    };
    auto W = [&](double X, double mu, double nu) {
      double r = std::hypot(mu, nu);
      double th = std::atan2(nu, mu);
      bool flip = th < 0.0;
      if (flip) th += M_PI;
      double fj = th / dth;
      int j0 = static_cast<int>(std::floor(fj));
      double u = fj - j0;
      double Y = (flip ? -X : X) / r;
      double p0 = slice_value(j0 - 1, Y), p1 = slice_value(j0, Y), p2 = slice_value(j0 + 1, Y),
             p3 = slice_value(j0 + 2, Y);
      double v = 0.5 * ((2.0 * p1) + (-p0 + p2) * u +
                        (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * u * u +
                        (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * u * u * u);
      return v / r;
    };
    ArrayXd x_nodes = uniform_axis(blk.x_axis.min, blk.x_axis.max, fd_x_points);
    FdTomogram field = sample_fd_tomogram(W, x_nodes, fd_extent, fd_points);

    EvolutionConfig cfg;
    cfg.extent = fd_extent;
    cfg.points = fd_points;
    cfg.dt = (dt > 0.0) ? dt : 0.8 * cfg.grid_step() / (omega * fd_extent);
    report["dt"] = cfg.dt;
    report["cfl"] = omega * fd_extent * cfg.dt / cfg.grid_step();

    ArrayXd wx = trapezoid_weights(fd_x_points, x_nodes[1] - x_nodes[0]);
    auto mass_field = [&](const FdTomogram& f2) {
      ArrayXXd m = ArrayXXd::Zero(fd_points, fd_points);
      for (int ix = 0; ix < fd_x_points; ++ix) m += wx[ix] * f2.slices[ix];
      return m;
    };
    ArrayXXd m0 = mass_field(field);
    // conservation audited on the annulus [0.3, 0.8] extent: circles through
    // the corners leave the square, and slices near the origin (sigma_X ~ r)
    // cannot be resolved on a common X grid
    ArrayXd ax_fd = uniform_axis(-fd_extent, fd_extent, fd_points);
    auto disk_max = [&](const ArrayXXd& d) {
      double worst = 0.0;
      for (int i = 0; i < fd_points; ++i)
        for (int j = 0; j < fd_points; ++j) {
          double r = std::hypot(ax_fd[i], ax_fd[j]);
          if (r >= 0.3 * fd_extent && r <= 0.8 * fd_extent)
            worst = std::max(worst, std::abs(d(i, j)));
        }
      return worst;
    };

    FdTomogram current = field;
    double mass_drift = 0.0;
    for (int s = 1; s <= snapshots; ++s) {
      double ts = t * s / snapshots;
      double step_t = t / snapshots;
      EvolutionConfig step_cfg = cfg;
      int nsteps = std::max(1, static_cast<int>(std::ceil(step_t / cfg.dt)));
      step_cfg.dt = step_t / nsteps;
      step_cfg.t = step_t;
      current = evolve_tomogram_fd(current, step_cfg, omega);
      mass_drift = std::max(mass_drift, disk_max(mass_field(current) - m0));
      // write the square field as a tomogram grid with explicit nodes; the
      // origin node is outside the line family and is dropped from the file
      TomogramGrid out;
      ModeTomogramBlock b;
      b.x_axis = TomogramAxis{x_nodes[0], x_nodes[fd_x_points - 1], fd_x_points};
      ArrayXd axis = uniform_axis(-fd_extent, fd_extent, fd_points);
      std::vector<ArrayXd> rows;
      for (int i = 0; i < fd_points; ++i)
        for (int j = 0; j < fd_points; ++j) {
          if (axis[i] == 0.0 && axis[j] == 0.0) continue;
          b.nodes.emplace_back(axis[i], axis[j]);
          ArrayXd row(fd_x_points);
          for (int ix = 0; ix < fd_x_points; ++ix) row[ix] = current.slices[ix](i, j);
          rows.push_back(std::move(row));
        }
      b.values.resize(static_cast<int>(rows.size()), fd_x_points);
      for (size_t rix = 0; rix < rows.size(); ++rix)
        b.values.row(static_cast<int>(rix)) = rows[rix];
      out.modes.push_back(std::move(b));
      out.state_descriptor = json{{"state", "fd_field"}, {"source", in}}.dump();
      char name[32];
      std::snprintf(name, sizeof(name), "_%03d.csv", s);
      std::string path = out_prefix + name;
      json config{{"in", in}, {"t", ts}, {"scheme", scheme}, {"omega", omegas},
                  {"fd_points", fd_points}, {"fd_extent", fd_extent}};
      write_tomogram_grid(path, out, config);
      written.push_back(path);
    }
    report["mass_drift_max"] = mass_drift;
    report["mass_audit_annulus"] = {0.3 * fd_extent, 0.8 * fd_extent};
  } else {
    throw std::invalid_argument("evolve: scheme must be exact or fd");
  }
  report["files"] = written;
  atomic_write(out_prefix + "_report.json", report.dump(2) + "\n");
  write_sidecar_meta(out_prefix + "_report.json", {{"command", "evolve"}});
  std::cout << "wrote " << written.size() << " snapshots and " << out_prefix
            << "_report.json\n";
  return 0;
}

int cmd_kg(double length, double mass, int modes, double beta, int rays, int x_points,
           const std::string& field_in, const std::string& out_prefix) {
  CavitySpec cavity{length, mass, modes};
  std::vector<double> omegas = spectrum(cavity);

  // spectrum table
  {
    std::ostringstream body;
    json header{{"type", "kg_spectrum"},
                {"columns", "k,omega"},
                {"config", {{"length", length}, {"mass", mass}, {"modes", modes}}}};
    body << header.dump() << "\n" << "k,omega\n";
    for (int k = 1; k <= modes; ++k)
      body << k << "," << format_double(omegas[k - 1]) << "\n";
    atomic_write(out_prefix + "_spectrum.csv", body.str());
    write_sidecar_meta(out_prefix + "_spectrum.csv", {{"command", "kg"}});
  }

  // canonical field tomogram in the TomogramGrid schema, with a modes block
  {
    DensityState canonical = DensityState::gibbs(cavity_mode_spec(cavity, beta));
    TomogramGrid grid = make_tomogram_grid(canonical, TomogramGridSpec{rays, x_points});
    grid.state_descriptor =
        json{{"state", "kg_canonical"}, {"beta", beta}, {"K", modes}}.dump();
    json config{{"length", length}, {"mass", mass},   {"modes", modes},
                {"beta", beta},     {"rays", rays},   {"x_points", x_points},
                {"omega", omegas},
                {"log_mode_normalization", log_mode_normalization(beta, cavity)}};
    write_tomogram_grid(out_prefix + "_tomogram.csv", grid, config);
    write_sidecar_meta(out_prefix + "_tomogram.csv", {{"command", "kg"}});
  }

  // optional projection report for a sampled field
  if (!field_in.empty()) {
    std::ifstream in(field_in);
    if (!in) throw std::runtime_error("cannot open " + field_in);
    std::string line;
    std::getline(in, line);  // header (x,phi,phi_t)
    std::vector<double> xs, phis, phits;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::stringstream ss(line);
      std::string a, b, c;
      std::getline(ss, a, ',');
      std::getline(ss, b, ',');
      std::getline(ss, c, ',');
      xs.push_back(std::stod(a));
      phis.push_back(std::stod(b));
      phits.push_back(std::stod(c));
    }
    ArrayXd x = Eigen::Map<ArrayXd>(xs.data(), xs.size());
    ArrayXd phi = Eigen::Map<ArrayXd>(phis.data(), phis.size());
    ArrayXd phit = Eigen::Map<ArrayXd>(phits.data(), phits.size());
    FieldConfig cfg = field_to_modes(x, phi, phit, cavity);
    auto [H, U] = field_hamiltonian(cfg, cavity);
    double Ug = field_potential_on_grid(x, phi, cavity);
    json rep{{"command", "kg"},
             {"field_in", field_in},
             {"xi", std::vector<double>(cfg.xi.data(), cfg.xi.data() + cfg.xi.size())},
             {"eta", std::vector<double>(cfg.eta.data(), cfg.eta.data() + cfg.eta.size())},
             {"H", H},
             {"U_spectral", U},
             {"U_grid", Ug}};
    atomic_write(out_prefix + "_projection.json", rep.dump(2) + "\n");
  }
  std::cout << "wrote " << out_prefix << "_spectrum.csv and " << out_prefix
            << "_tomogram.csv\n";
  return 0;
}

int cmd_sample(const StateOptions& sopt, int count, std::uint64_t seed, double line_mu,
               double line_nu, const std::string& out) {
  DensityState state = build_state(sopt);
  std::vector<PhasePoint> pts = sample(state, count, seed);
  int n = state.mode_count();

  std::ostringstream body;
  json config = state_config(sopt);
  config["count"] = count;
  config["seed"] = seed;
  config["line_mu"] = line_mu;
  config["line_nu"] = line_nu;
  std::string cols;
  for (int k = 0; k < n; ++k) {
    if (k) cols += ",";
    cols += "xi" + std::to_string(k) + ",eta" + std::to_string(k);
  }
  json header{{"type", "samples"}, {"columns", cols}, {"config", config}};
  body << header.dump() << "\n" << cols << "\n";
  for (const PhasePoint& p : pts) {
    for (int k = 0; k < n; ++k) {
      if (k) body << ",";
      body << format_double(p.xi[k]) << "," << format_double(p.eta[k]);
    }
    body << "\n";
  }
  atomic_write(out, body.str());
  write_sidecar_meta(out, {{"command", "sample"}});

  // KS distance between the projected samples and the closed-form tomogram
  // CDF on mode 0
  if (line_mu == 0.0 && line_nu == 0.0)
    throw std::invalid_argument("sample: (line-mu, line-nu) = (0, 0)");
  std::vector<double> xsv;
  xsv.reserve(pts.size());
  for (const PhasePoint& p : pts) xsv.push_back(line_mu * p.xi[0] + line_nu * p.eta[0]);
  std::sort(xsv.begin(), xsv.end());
  double r = std::hypot(line_mu, line_nu);
  std::function<double(double)> cdf;
  if (sopt.kind == "gibbs") {
    double s = r / std::sqrt(sopt.beta * sopt.omegas[0]);
    cdf = [s](double X) { return 0.5 * (1.0 + std::erf(X / (s * std::sqrt(2.0)))); };
  } else if (sopt.kind == "coherent") {
    Complex z(sopt.z_re.empty() ? 0.0 : sopt.z_re[0], sopt.z_im.empty() ? 0.0 : sopt.z_im[0]);
    double mean = std::sqrt(2.0) * (line_mu * z.real() + line_nu * z.imag());
    double s = r / std::sqrt(sopt.omegas[0]);
    cdf = [mean, s](double X) {
      return 0.5 * (1.0 + std::erf((X - mean) / (s * std::sqrt(2.0))));
    };
  } else {
    GLDescriptor d{sopt.omegas[0], sopt.m.empty() ? 0 : sopt.m[0]};
    int M = 8193;
    double xmax = d.sigma(line_mu, line_nu) * (6.0 + 2.0 * std::sqrt(d.m + 1.0));
    auto cum = std::make_shared<std::vector<double>>(M, 0.0);
    double h = 2.0 * xmax / (M - 1);
    for (int i = 1; i < M; ++i) {
      double a = gl_tomogram(-xmax + (i - 1) * h, line_mu, line_nu, d);
      double b = gl_tomogram(-xmax + i * h, line_mu, line_nu, d);
      (*cum)[i] = (*cum)[i - 1] + 0.5 * h * (a + b);
    }
    cdf = [cum, xmax, h, M](double X) {
      if (X <= -xmax) return 0.0;
      if (X >= xmax) return (*cum)[M - 1];
      double f = (X + xmax) / h;
      int i = static_cast<int>(f);
      double t = f - i;
      return (*cum)[i] * (1 - t) + (*cum)[i + 1] * t;
    };
  }
  double nn = static_cast<double>(xsv.size());
  double ks = 0.0;
  for (size_t i = 0; i < xsv.size(); ++i) {
    double F = cdf(xsv[i]);
    ks = std::max(ks, std::abs((i + 1) / nn - F));
    ks = std::max(ks, std::abs(F - i / nn));
  }
  double threshold = 0.01;
  json rep{{"command", "sample"},   {"config", config}, {"ks_distance", ks},
           {"threshold", threshold}, {"passed", ks < threshold}};
  atomic_write(out + ".ks.json", rep.dump(2) + "\n");
  std::cout << "wrote " << out << " (KS distance " << format_double(ks) << ")\n";
  if (!(ks < threshold))
    throw numerics_error("KS distance " + format_double(ks) + " above threshold");
  return 0;
}

int cmd_verify(const std::string& filter, const std::string& inject,
               const std::string& report_path) {
  verify::Options opts;
  opts.filter = filter;
  if (!inject.empty()) {
    if (inject == "gl_sigma_x2")
      opts.faults.gl_sigma_scale = 2.0;
    else if (inject == "gibbs_variance_x2")
      opts.faults.gibbs_variance_scale = 2.0;
    else if (inject == "coherent_variance_x2")
      opts.faults.coherent_variance_scale = 2.0;
    else
      throw std::invalid_argument("unknown fault id: " + inject);
  }
  std::vector<verify::CheckResult> results = verify::run_suite(opts);
  if (results.empty()) throw std::invalid_argument("verify: filter matched no checks");
  for (const verify::CheckResult& r : results)
    std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.id << "  observed "
              << format_double(r.observed) << "  threshold " << format_double(r.threshold)
              << "  (" << r.detail << ")\n";
  if (!report_path.empty()) {
    json rep = verify::report_to_json(results);
    rep["filter"] = filter;
    rep["inject"] = inject;
    atomic_write(report_path, rep.dump(2) + "\n");
  }
  if (!verify::all_passed(results)) {
    std::cout << "verification FAILED\n";
    return kExitNumerical;
  }
  std::cout << "verification passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-space tomography toolkit"};
  app.set_config("--config", "", "flat key=value config file (flags mirror keys)");
  app.allow_config_extras(CLI::config_extras_mode::error);  // unknown keys are fatal
  app.require_subcommand(1);

  // tomogram
  StateOptions t_state;
  int t_rays = 64, t_xpoints = 1024;
  std::string t_nodes, t_quad = "standard", t_out = "tomogram.csv";
  CLI::App* tomogram = app.add_subcommand("tomogram", "tomogram of an analytic state");
  add_state_options(tomogram, t_state);
  tomogram->add_option("--rays", t_rays, "unit-radius rays over [0, pi)");
  tomogram->add_option("--x-points", t_xpoints, "X samples per ray");
  tomogram->add_option("--nodes", t_nodes, "explicit mu:nu[,mu:nu...] node list");
  tomogram->add_option("--quad", t_quad)->check(CLI::IsMember({"standard", "fine"}));
  tomogram->add_option("--out", t_out, "output tomogram file");

  // radon
  std::string r_in, r_out = "tomogram.csv", r_quad = "standard", r_probe;
  int r_rays = 64, r_xpoints = 1024;
  CLI::App* radon = app.add_subcommand("radon", "tomogram of a gridded density file");
  radon->add_option("--in", r_in, "grid_density input file")->required();
  radon->add_option("--rays", r_rays);
  radon->add_option("--x-points", r_xpoints);
  radon->add_option("--quad", r_quad)->check(CLI::IsMember({"standard", "fine"}));
  radon->add_option("--out", r_out);
  radon->add_option("--probe", r_probe, "print W at X:mu:nu instead of writing a grid");

  // invert
  std::string i_in, i_out = "density.csv";
  int i_cart = 256, i_radii = 129, i_fft = 1024;
  double i_extent = 6.0;
  CLI::App* invert = app.add_subcommand("invert", "reconstruct a density from a tomogram");
  invert->add_option("--in", i_in, "tomogram_grid input file")->required();
  invert->add_option("--out", i_out);
  invert->add_option("--cart", i_cart, "Cartesian (mu, nu) grid side");
  invert->add_option("--radii", i_radii, "radial chi table size");
  invert->add_option("--fft", i_fft, "zero-padded FFT size");
  invert->add_option("--extent", i_extent, "output density extent");

  // evolve
  std::string e_in, e_scheme = "exact", e_prefix = "evolved";
  double e_t = 1.0, e_dt = 0.0, e_fd_extent = 3.0;
  int e_snapshots = 4, e_fd_points = 65, e_fd_xpoints = 129;
  std::vector<double> e_omegas;
  CLI::App* evolve = app.add_subcommand("evolve", "tomographic Liouville evolution");
  evolve->add_option("--in", e_in, "tomogram_grid input file")->required();
  evolve->add_option("--t", e_t, "total time");
  evolve->add_option("--snapshots", e_snapshots, "number of output snapshots");
  evolve->add_option("--scheme", e_scheme)->check(CLI::IsMember({"exact", "fd"}));
  evolve->add_option("--omega", e_omegas, "mode frequencies (default: from file config)");
  evolve->add_option("--out-prefix", e_prefix);
  evolve->add_option("--fd-points", e_fd_points, "fd: (mu, nu) nodes per side");
  evolve->add_option("--fd-extent", e_fd_extent, "fd: (mu, nu) half-extent");
  evolve->add_option("--fd-x-points", e_fd_xpoints, "fd: X slices");
  evolve->add_option("--dt", e_dt, "fd: time step (default 0.8 of the CFL bound)");

  // kg
  double k_length = M_PI, k_mass = 0.0, k_beta = 1.0;
  int k_modes = 16, k_rays = 64, k_xpoints = 1024;
  std::string k_field_in, k_prefix = "kg";
  CLI::App* kg = app.add_subcommand("kg", "Klein-Gordon cavity engine");
  kg->add_option("--length", k_length, "cavity length");
  kg->add_option("--mass", k_mass, "field mass");
  kg->add_option("--modes", k_modes, "truncation K");
  kg->add_option("--beta", k_beta, "inverse temperature");
  kg->add_option("--rays", k_rays);
  kg->add_option("--x-points", k_xpoints);
  kg->add_option("--field-in", k_field_in, "optional x,phi,phi_t CSV to project");
  kg->add_option("--out-prefix", k_prefix);

  // sample
  StateOptions s_state;
  int s_count = 100000;
  std::uint64_t s_seed = 42;
  double s_mu = 1.0, s_nu = 0.0;
  std::string s_out = "samples.csv";
  CLI::App* smp = app.add_subcommand("sample", "Monte Carlo draws plus a KS report");
  add_state_options(smp, s_state);
  smp->add_option("--count", s_count);
  smp->add_option("--seed", s_seed);
  smp->add_option("--line-mu", s_mu, "projection line mu (mode 0)");
  smp->add_option("--line-nu", s_nu, "projection line nu (mode 0)");
  smp->add_option("--out", s_out);

  // verify
  std::string v_filter, v_inject, v_report;
  CLI::App* ver = app.add_subcommand("verify", "run the oracle/property suite");
  ver->add_option("--filter", v_filter, "substring filter on check ids");
  ver->add_option("--inject", v_inject,
                  "fault id: gl_sigma_x2 | gibbs_variance_x2 | coherent_variance_x2");
  ver->add_option("--report", v_report, "write a JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (tomogram->parsed())
      return cmd_tomogram(t_state, t_rays, t_xpoints, t_nodes, t_quad, t_out);
    if (radon->parsed()) return cmd_radon(r_in, r_rays, r_xpoints, r_quad, r_out, r_probe);
    if (invert->parsed()) return cmd_invert(i_in, i_out, i_cart, i_radii, i_fft, i_extent);
    if (evolve->parsed())
      return cmd_evolve(e_in, e_t, e_snapshots, e_scheme, e_omegas, e_prefix, e_fd_points,
                        e_fd_extent, e_fd_xpoints, e_dt);
    if (kg->parsed())
      return cmd_kg(k_length, k_mass, k_modes, k_beta, k_rays, k_xpoints, k_field_in,
                    k_prefix);
    if (smp->parsed()) return cmd_sample(s_state, s_count, s_seed, s_mu, s_nu, s_out);
    if (ver->parsed()) return cmd_verify(v_filter, v_inject, v_report);
  } catch (const numerics_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
