#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "rsm/adaptation.hpp"
#include "rsm/field.hpp"
#include "rsm/grid.hpp"
#include "rsm/mesh_matrix.hpp"
#include "rsm/monitors.hpp"

namespace rsm::cancer {

// Field component order: c (cancer cells), v (ECM), m (MMP enzyme).
struct Params {
  double chi = 2e-2;    // haptotactic sensitivity
  double d_c = 2e-4;    // cancer cell diffusion
  double d_m = 1e-3;    // MMP diffusion
  double mu = 0.5;      // logistic proliferation rate
  double delta = 4.0;   // ECM degradation rate
  double alpha = 0.5;   // MMP production rate
  double beta = 0.3;    // MMP decay rate
};

// S(U) = (mu c (1-c), -delta v m, alpha c - beta m)
std::array<double, 3> source(const std::array<double, 3>& u, const Params& p);

// Interface flux between neighbor states separated by center distance
// `dist`, normal sign*e_axis from i to j: upwind haptotaxis plus central
// diffusion in c, zero flux in v, central diffusion in m. Axis-isotropic.
std::array<double, 3> interface_flux(const std::array<double, 3>& ui,
                                     const std::array<double, 3>& uj, double dist,
                                     int sign, const Params& p);

struct SchemeConfig {
  Params params;
  double cfl = 0.5;
  double blowup_guard = 1e6;
};

struct StepResult {
  Field field;
  double dt;
};

// Explicit update with homogeneous Neumann walls (boundary faces carry zero
// flux). dt = cfl * min over cells of min(h^2 / (4 max(D_c, D_m)),
// h / (chi max |grad v|)); max_dt <= 0 means uncapped. Throws
// InstabilityError when any value passes the blow-up guard.
StepResult step(const MeshMatrix& matrix, const Field& field, const SchemeConfig& scheme,
                double max_dt = 0.0);

// Normalized gradient monitor on the cancer cell density.
MonitorResult cancer_monitor(const MeshMatrix& matrix, const Field& field);

// Initial ECM density outside the tumour region.
class EcmField {
 public:
  static EcmField uniform(double v0 = 1.0);
  // Built-in smooth bump landscape used by the heterogeneous experiment.
  static EcmField bumps();
  // ASCII PGM (P2) raster mapped to [0,1]; pixel rows run top to bottom.
  static EcmField from_pgm(const std::string& path);

  double operator()(double x, double y) const;

 private:
  enum class Kind { uniform, bumps, raster };
  Kind kind_ = Kind::uniform;
  double constant_ = 1.0;
  int width_ = 0, height_ = 0;
  std::vector<double> pixels_;
};

// (1, 0, 0.3) inside the upper region bounded below by
// y = sin(x^3/125 + (2x+26)/25 + 1/20), (0, v0(x,y), 0) below it;
// straddling cells take the 16x16 subsampled mix.
Field initial_condition(const MeshMatrix& matrix, const Grid& grid, const EcmField& ecm);

struct RunConfig {
  RefinementBounds bounds{2, 5, 7, 1};
  SchemeConfig scheme;
  Thresholds thresholds{0.2, 0.1};
  double t_end = 5.0;
  std::vector<double> snapshot_times{0.0, 2.5, 5.0};
  EcmField ecm = EcmField::uniform();
};

// Adaptive invasion run. Starts on uniform G_{level_min}, settles the initial
// data on the adapting mesh (the ECM carries no flux, so its initial
// discretization is permanent); per step: advance, adapt with the cancer
// monitor, transfer by the projections.
void run_invasion(const MeshMatrix& matrix, const RunConfig& config,
                  const std::function<void(double, const Field&)>& on_snapshot);

struct ErrorRow {
  std::string setting;
  std::size_t cells;    // grid size at the comparison time
  double l1_error;      // L1 difference of c against the uniform level_max run
};

// Reference study at t_compare: uniform runs on every level plus the adaptive
// run, each differenced against the uniform level_max solution. Rows: uniform
// levels below level_max, then the adaptive run.
std::vector<ErrorRow> invasion_error_table(const MeshMatrix& matrix, const RunConfig& config,
                                           double t_compare = 2.5);

}  // namespace rsm::cancer
