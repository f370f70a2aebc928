#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "efl/field.hpp"
#include "efl/spline.hpp"

namespace efl {

/// Tabulated velocity samples on a full (r, z, t) tensor grid.
///
/// Text format: a header line `r z t v_r v_theta v_z`, then one row of six
/// whitespace-separated numbers per node, row-major with t slowest and r
/// fastest.  Axes must be strictly increasing with at least 4 nodes each;
/// rows at r = 0 must have v_r = v_theta = 0 (axis parity), enforced at load.
struct GridData {
  std::vector<double> r_nodes, z_nodes, t_nodes;
  std::vector<CylVec> values;  // index ((it * nz + iz) * nr + ir)
  static constexpr int interp_order = 3;

  size_t nr() const { return r_nodes.size(); }
  size_t nz() const { return z_nodes.size(); }
  size_t nt() const { return t_nodes.size(); }
  const CylVec& at(size_t ir, size_t iz, size_t it) const {
    return values[(it * nz() + iz) * nr() + ir];
  }

  static GridData load(std::istream& in);
  static GridData load_file(const std::string& path);
};

/// Field backed by nested not-a-knot cubic splines over a GridData lattice.
/// Derivatives up to order 2 come from spline differentiation; third-order
/// jets are unavailable by design.
class GriddedField final : public FlowField {
 public:
  explicit GriddedField(std::shared_ptr<const GridData> data);

  bool euler_exact() const override { return false; }
  bool supports_third_order() const override { return false; }
  bool steady() const override { return false; }
  std::string name() const override { return "gridded"; }

 protected:
  CylVec eval_impl(double r, double z, double t) const override;
  FieldJet jet_impl(double r, double z, double t, bool third) const override;

 private:
  // partial(c, pr, pz, pt): spline-differentiated component c at the query.
  struct Query;
  void prepare(Query& q, double r, double z, double t) const;

  std::shared_ptr<const GridData> data_;
  // One t-spline per component per (ir, iz), built once.
  std::vector<CubicSpline> t_splines_;  // index ((c * nz + iz) * nr + ir)
  const CubicSpline& t_spline(int c, size_t ir, size_t iz) const {
    return t_splines_[(c * data_->nz() + iz) * data_->nr() + ir];
  }
};

}  // namespace efl
