#include "efl/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace efl {

namespace {

struct Row {
  double r, z, t, vr, vth, vz;
};

bool close(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace

GridData GridData::load(std::istream& in) {
  std::string line;
  // Header: first non-blank, non-comment line.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty() || toks[0][0] == '#') continue;
    header = toks;
    break;
  }
  const std::vector<std::string> expected = {"r", "z", "t", "v_r", "v_theta", "v_z"};
  if (header != std::vector<std::string>(expected))
    throw GridFormatError("header must be exactly `r z t v_r v_theta v_z`");

  std::vector<Row> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first[0] == '#') continue;
    Row row{};
    std::istringstream rs(line);
    if (!(rs >> row.r >> row.z >> row.t >> row.vr >> row.vth >> row.vz))
      throw GridFormatError("line " + std::to_string(lineno) + ": expected 6 numbers");
    std::string extra;
    if (rs >> extra)
      throw GridFormatError("line " + std::to_string(lineno) + ": trailing tokens");
    rows.push_back(row);
  }
  if (rows.empty()) throw GridFormatError("no data rows");

  GridData g;
  // r is fastest: the r-axis is the prefix until r stops increasing.
  size_t nr = 1;
  while (nr < rows.size() && rows[nr].r > rows[nr - 1].r) ++nr;
  for (size_t i = 0; i < nr; ++i) g.r_nodes.push_back(rows[i].r);
  if (rows.size() % nr != 0) throw GridFormatError("row count not a multiple of the r-axis length");

  // z advances every nr rows until it stops increasing.
  size_t nz = 1;
  while (nz * nr < rows.size() && rows[nz * nr].z > rows[(nz - 1) * nr].z) ++nz;
  for (size_t i = 0; i < nz; ++i) g.z_nodes.push_back(rows[i * nr].z);
  if (rows.size() % (nr * nz) != 0)
    throw GridFormatError("row count not a multiple of the meridian block size");

  const size_t nt = rows.size() / (nr * nz);
  for (size_t i = 0; i < nt; ++i) g.t_nodes.push_back(rows[i * nr * nz].t);

  for (const auto* axis : {&g.r_nodes, &g.z_nodes, &g.t_nodes}) {
    if (axis->size() < 4) throw GridFormatError("every axis needs at least 4 nodes");
    for (size_t i = 1; i < axis->size(); ++i)
      if (!((*axis)[i] > (*axis)[i - 1]))
        throw GridFormatError("axis values must be strictly increasing");
  }

  double vmax = 0.0;
  g.values.resize(rows.size());
  for (size_t m = 0; m < rows.size(); ++m) {
    const size_t ir = m % nr;
    const size_t iz = (m / nr) % nz;
    const size_t it = m / (nr * nz);
    const Row& row = rows[m];
    if (!close(row.r, g.r_nodes[ir]) || !close(row.z, g.z_nodes[iz]) || !close(row.t, g.t_nodes[it]))
      throw GridFormatError("row " + std::to_string(m + 1) +
                            ": coordinates do not follow the (t,z,r) row-major lattice order");
    g.values[m] = {row.vr, row.vth, row.vz};
    vmax = std::max({vmax, std::fabs(row.vr), std::fabs(row.vth), std::fabs(row.vz)});
  }

  if (g.r_nodes.front() == 0.0) {
    const double tol = 1e-12 * std::max(1.0, vmax);
    for (size_t it = 0; it < nt; ++it)
      for (size_t iz = 0; iz < nz; ++iz) {
        const CylVec& v = g.at(0, iz, it);
        if (std::fabs(v.r) > tol || std::fabs(v.th) > tol)
          throw AxisParityError("v_r and v_theta must vanish at r = 0 (node z=" +
                                std::to_string(g.z_nodes[iz]) + ", t=" +
                                std::to_string(g.t_nodes[it]) + ")");
      }
  }
  return g;
}

GridData GridData::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridFormatError("cannot open grid file: " + path);
  return load(in);
}

GriddedField::GriddedField(std::shared_ptr<const GridData> data)
    : FlowField([&] {
        if (!data) throw ConfigError("gridded fixture requires grid data");
        Domain d;
        d.r_min = data->r_nodes.front();
        d.r_max = data->r_nodes.back();
        d.z_min = data->z_nodes.front();
        d.z_max = data->z_nodes.back();
        d.radius_scale = data->r_nodes.back();
        return d;
      }()),
      data_(std::move(data)) {
  const size_t nr = data_->nr(), nz = data_->nz();
  t_splines_.reserve(3 * nz * nr);
  std::vector<double> col(data_->nt());
  for (int c = 0; c < 3; ++c)
    for (size_t iz = 0; iz < nz; ++iz)
      for (size_t ir = 0; ir < nr; ++ir) {
        for (size_t it = 0; it < data_->nt(); ++it) {
          const CylVec& v = data_->at(ir, iz, it);
          col[it] = (c == 0) ? v.r : (c == 1) ? v.th : v.z;
        }
        t_splines_.emplace_back(data_->t_nodes, col);
      }
}

namespace {

// Spline-differentiated partial of one component, orders (pr, pz, pt).
double tensor_partial(const GridData& g, const std::vector<CubicSpline>& tsp, int c, double r,
                      double z, double t, int pr, int pz, int pt) {
  const size_t nr = g.nr(), nz = g.nz();
  std::vector<double> line(nz), rad(nr);
  for (size_t ir = 0; ir < nr; ++ir) {
    for (size_t iz = 0; iz < nz; ++iz)
      line[iz] = tsp[(c * nz + iz) * nr + ir].eval(t, pt);
    CubicSpline zs(g.z_nodes, line);
    rad[ir] = zs.eval(z, pz);
  }
  CubicSpline rsp(g.r_nodes, rad);
  return rsp.eval(r, pr);
}

}  // namespace

CylVec GriddedField::eval_impl(double r, double z, double t) const {
  if (t < data_->t_nodes.front() - 1e-12 || t > data_->t_nodes.back() + 1e-12)
    throw OutOfDomain("time " + std::to_string(t) + " outside grid span");
  CylVec v;
  v.r = tensor_partial(*data_, t_splines_, 0, r, z, t, 0, 0, 0);
  v.th = tensor_partial(*data_, t_splines_, 1, r, z, t, 0, 0, 0);
  v.z = tensor_partial(*data_, t_splines_, 2, r, z, t, 0, 0, 0);
  return v;
}

FieldJet GriddedField::jet_impl(double r, double z, double t, bool third) const {
  (void)third;  // never reached: supports_third_order() is false
  if (t < data_->t_nodes.front() - 1e-12 || t > data_->t_nodes.back() + 1e-12)
    throw OutOfDomain("time " + std::to_string(t) + " outside grid span");
  FieldJet J;
  auto P = [&](int c, int pr, int pz, int pt) {
    return tensor_partial(*data_, t_splines_, c, r, z, t, pr, pz, pt);
  };
  auto comp = [](CylVec& v, int c) -> double& { return c == 0 ? v.r : (c == 1 ? v.th : v.z); };
  CylVec* slots[10] = {&J.u, &J.d_r, &J.d_z, &J.d_t, &J.d_rr, &J.d_rz, &J.d_zz, &J.d_rt, &J.d_zt, &J.d_tt};
  static constexpr int orders[10][3] = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
                                        {1, 1, 0}, {0, 2, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}};
  for (int c = 0; c < 3; ++c)
    for (int k = 0; k < 10; ++k)
      comp(*slots[k], c) = P(c, orders[k][0], orders[k][1], orders[k][2]);
  return J;
}

}  // namespace efl
