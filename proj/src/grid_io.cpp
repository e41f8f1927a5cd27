#include "tomo/grid_io.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tomo {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void write_sidecar_meta(const std::string& path, const json& extra) {
  json meta = extra;
  meta["written_at"] = static_cast<long long>(::time(nullptr));
  atomic_write(path + ".meta.json", meta.dump(2) + "\n");
}

namespace {

json axis_to_json(const TomogramAxis& a) {
  return json{{"min", a.min}, {"max", a.max}, {"count", a.count}};
}

TomogramAxis axis_from_json(const json& j) {
  return TomogramAxis{j.at("min").get<double>(), j.at("max").get<double>(),
                      j.at("count").get<int>()};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_tomogram_grid(const std::string& path, const TomogramGrid& grid,
                         const json& config) {
  bool multimode = grid.modes.size() > 1;
  json header;
  header["type"] = "tomogram_grid";
  header["columns"] = multimode ? "mode,X,mu,nu,W" : "X,mu,nu,W";
  header["state"] = grid.state_descriptor;
  header["quad_level"] = grid.quad_level;
  header["audit"] = {{"max_normalization_error", grid.max_normalization_error},
                     {"min_value", grid.min_value}};
  json modes = json::array();
  for (const ModeTomogramBlock& b : grid.modes)
    modes.push_back(json{{"x_axis", axis_to_json(b.x_axis)},
                         {"nodes", b.nodes.size()}});
  header["modes"] = modes;
  header["config"] = config;

  std::ostringstream body;
  body << header.dump() << "\n";
  body << (multimode ? "mode,X,mu,nu,W" : "X,mu,nu,W") << "\n";
  for (size_t m = 0; m < grid.modes.size(); ++m) {
    const ModeTomogramBlock& b = grid.modes[m];
    ArrayXd xs = b.x_axis.nodes();
    for (size_t j = 0; j < b.nodes.size(); ++j)
      for (int i = 0; i < b.x_axis.count; ++i) {
        if (multimode) body << m << ",";
        body << format_double(xs[i]) << "," << format_double(b.nodes[j].first) << ","
             << format_double(b.nodes[j].second) << ","
             << format_double(b.values(static_cast<int>(j), i)) << "\n";
      }
  }
  atomic_write(path, body.str());
}

TomogramGrid read_tomogram_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  json header = json::parse(line);
  if (header.at("type") != "tomogram_grid")
    throw std::invalid_argument(path + ": not a tomogram_grid file");
  TomogramGrid grid;
  grid.state_descriptor = header.value("state", "");
  grid.quad_level = header.value("quad_level", "standard");
  if (header.contains("audit")) {
    grid.max_normalization_error = header["audit"].value("max_normalization_error", 0.0);
    grid.min_value = header["audit"].value("min_value", 0.0);
  }
  bool multimode = header.at("columns") == "mode,X,mu,nu,W";
  if (header.at("modes").empty()) throw std::invalid_argument(path + ": no mode blocks");
  for (const json& m : header.at("modes")) {
    ModeTomogramBlock b;
    b.x_axis = axis_from_json(m.at("x_axis"));
    size_t nodes = m.at("nodes").get<size_t>();
    b.values.resize(nodes, b.x_axis.count);
    grid.modes.push_back(std::move(b));
  }
  if (!std::getline(in, line)) throw std::runtime_error(path + ": missing CSV header");

  // mode blocks are contiguous, nodes in written order, X fastest
  size_t mode = 0, row_in_mode = 0;
  size_t expected = static_cast<size_t>(grid.modes[0].values.rows()) * grid.modes[0].x_axis.count;
  std::vector<ArrayXd> axes;
  for (const ModeTomogramBlock& b : grid.modes) axes.push_back(b.x_axis.nodes());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv(line);
    size_t expect_cols = multimode ? 5 : 4;
    if (f.size() != expect_cols) throw std::invalid_argument(path + ": malformed CSV row");
    size_t col = 0;
    size_t m = multimode ? std::stoul(f[col++]) : 0;
    if (m != mode) {
      if (m != mode + 1 || row_in_mode != expected || m >= grid.modes.size())
        throw std::invalid_argument(path + ": mode blocks out of order");
      mode = m;
      row_in_mode = 0;
      expected = static_cast<size_t>(grid.modes[m].values.rows()) * grid.modes[m].x_axis.count;
    }
    if (row_in_mode >= expected) throw std::invalid_argument(path + ": too many rows");
    ModeTomogramBlock& b = grid.modes[m];
    double X = std::stod(f[col++]);
    double mu = std::stod(f[col++]);
    double nu = std::stod(f[col++]);
    double W = std::stod(f[col++]);
    int nx = b.x_axis.count;
    size_t node = row_in_mode / nx;
    int ix = static_cast<int>(row_in_mode % nx);
    if (ix == 0) {
      if (mu == 0.0 && nu == 0.0)
        throw std::invalid_argument(path + ": degenerate (mu, nu) node " +
                                    std::to_string(node));
      b.nodes.emplace_back(mu, nu);
    }
    b.values(static_cast<int>(node), ix) = W;
    if (std::abs(axes[m][ix] - X) > 1e-9 * std::max(1.0, std::abs(X)))
      throw std::invalid_argument(path + ": X column off the declared axis");
    ++row_in_mode;
  }
  if (mode != grid.modes.size() - 1 || row_in_mode != expected)
    throw std::invalid_argument(path + ": incomplete mode block");
  return grid;
}

void write_grid_density(const std::string& path, const GridDensity& density,
                        const json& config) {
  json header;
  header["type"] = "grid_density";
  header["columns"] = "xi,eta,rho";
  header["extents"] = {{"xi", {density.xi_min(), density.xi_max()}},
                       {"eta", {density.eta_min(), density.eta_max()}}};
  header["counts"] = {density.xi_count(), density.eta_count()};
  header["units"] = {{"xi", "sqrt(action)"}, {"eta", "sqrt(action)"}, {"rho", "1/action"}};
  header["config"] = config;

  std::ostringstream body;
  body << header.dump() << "\n";
  body << "xi,eta,rho\n";
  for (int i = 0; i < density.xi_count(); ++i) {
    double xi = density.xi_min() + i * density.dxi();
    for (int j = 0; j < density.eta_count(); ++j) {
      double eta = density.eta_min() + j * density.deta();
      body << format_double(xi) << "," << format_double(eta) << ","
           << format_double(density.values()(i, j)) << "\n";
    }
  }
  atomic_write(path, body.str());
}

GridDensity read_grid_density(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  json header = json::parse(line);
  if (header.at("type") != "grid_density")
    throw std::invalid_argument(path + ": not a grid_density file");
  auto ext = header.at("extents");
  double xi_min = ext.at("xi")[0], xi_max = ext.at("xi")[1];
  double eta_min = ext.at("eta")[0], eta_max = ext.at("eta")[1];
  int nx = header.at("counts")[0], ny = header.at("counts")[1];
  ArrayXXd values(nx, ny);
  if (!std::getline(in, line)) throw std::runtime_error(path + ": missing CSV header");
  long row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv(line);
    if (f.size() != 3) throw std::invalid_argument(path + ": malformed CSV row");
    if (row >= static_cast<long>(nx) * ny)
      throw std::invalid_argument(path + ": too many rows");
    values(static_cast<int>(row / ny), static_cast<int>(row % ny)) = std::stod(f[2]);
    ++row;
  }
  if (row != static_cast<long>(nx) * ny)
    throw std::invalid_argument(path + ": row count mismatch");
  return GridDensity(xi_min, xi_max, eta_min, eta_max, std::move(values),
                     /*audit_mass=*/true);
}

nlohmann::json read_header(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
  return json::parse(line);
}

}  // namespace tomo
