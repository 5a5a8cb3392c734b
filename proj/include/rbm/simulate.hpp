// Euler scheme for the reflected diffusion in the three-quarter plane:
// independent ground truth for the analytic pipeline. Produces occupation
// histograms split over the two convex half-wedges, boundary measures
// weighted by local-time increments, empirical Fourier transforms on a
// fixed imaginary panel with batch-means standard errors, and the
// functional-equation validation report.
#pragma once

#include <cstdint>
#include <vector>

#include "rbm/bvp.hpp"
#include "rbm/model.hpp"

namespace rbm {

enum class CornerPolicy { Resample, FirstFace };

struct HistSpec {
    double x_min = -6.0, x_max = 8.0;
    double y_min = -6.0, y_max = 8.0;
    int nx = 140, ny = 140;
    double boundary_extent = 8.0;  // boundary hists cover [-extent, 0]
    int n_boundary_bins = 160;
};

struct SimConfig {
    double dt = 1e-3;
    double horizon = 1e4;
    double burn_in = -1.0;  // < 0: defaults to 10% of horizon
    int n_paths = 32;
    std::uint64_t seed = 1;
    CornerPolicy corner_policy = CornerPolicy::Resample;
    HistSpec hist;
    int batches_per_path = 8;
    int transform_thinning = 8;  // record transforms every k-th step
    int n_threads = 0;           // 0: RBM_THREADS or hardware
};

struct PathState {
    double z1, z2;
    double l1 = 0.0, l2 = 0.0;  // accumulated local times
};

class SimulationError : public std::runtime_error {
  public:
    explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

/// One Euler step with oblique pushback; (g1, g2) are standard normals.
/// Updates local times on boundary contact. Returns false when the move is
/// corner-ambiguous under CornerPolicy::Resample; the caller draws a fresh
/// increment and retries.
bool step(const ModelParams& m, PathState& state, double dt, double g1, double g2,
          CornerPolicy policy);

/// step with exact one-step reflection away from the corner: bridge_u in
/// (0, 1) samples the within-step minimum of the normal coordinate's
/// Brownian bridge, which removes the O(sqrt dt) local-time bias of plain
/// projection. bridge_u <= 0 disables the bridge (plain projection).
bool step_bridge(const ModelParams& m, PathState& state, double dt, double g1, double g2,
                 double bridge_u, CornerPolicy policy);

/// Fixed imaginary panel used for the empirical transforms: a 5x5 grid of
/// (x, y) with |x|, |y| <= 2, meaning evaluation at (p, q) = (ix, iy).
std::vector<std::pair<double, double>> transform_panel();

struct EmpiricalMeasures {
    SimConfig config;
    ModelParams params;

    // occupation measure, time-weighted; S1 = {z1 <= z2, z2 >= 0}
    std::vector<double> hist;       // nx * ny, row-major in x
    std::vector<double> hist_s1;    // same grid, S1 part only
    double mass_in_range = 0.0;     // fraction of time inside the histogram box
    double mass_s1 = 0.0, mass_s2 = 0.0;

    // boundary measures weighted by local-time increments
    std::vector<double> boundary1;  // on z1 in [-extent, 0]
    std::vector<double> boundary2;  // on z2 in [-extent, 0]
    double l1_rate = 0.0, l1_rate_se = 0.0;  // estimates A(0), B(0)
    double l2_rate = 0.0, l2_rate_se = 0.0;

    // per-batch samples for SE estimation (batch = path x time-window)
    struct BatchCell {
        double weight;                    // thinned-record weight sum
        double time;                      // wall time covered by the cell
        std::vector<Complex> lhat;        // panel transform sums, full measure
        std::vector<Complex> lhat_s1;     // S1 part
        std::vector<Complex> ahat;        // boundary transform sums at panel x
        std::vector<Complex> bhat;        // boundary transform sums at panel y
        double l1_sum, l2_sum;            // local-time mass in the cell
        std::vector<double> coarse;       // coarse occupation histogram (time)
    };
    std::vector<BatchCell> cells;
    int coarse_nx = 0, coarse_ny = 0;

    long long corner_resamples = 0;
    double time_effective = 0.0;

    double bin_area() const;
    double coarse_bin_area() const;
};

/// Runs n_paths independent paths, each over [0, horizon] with the first
/// burn_in discarded; deterministic for a fixed seed and config.
EmpiricalMeasures run(const ModelParams& m, const SimConfig& cfg);

struct EmpiricalTransform {
    double x, y;        // evaluation at (p, q) = (ix, iy)
    Complex L, L1, L2;  // interior transforms: full, S1 part, S2 part
    Complex A, B;       // boundary transforms
    double se_L, se_L1, se_L2, se_A, se_B;
};

/// Panel transforms with batch-means standard errors. (x, y) must be one
/// of the panel points of transform_panel() (binned accumulators).
EmpiricalTransform empirical_transform(const EmpiricalMeasures& meas, double x, double y);

struct ValidationRow {
    double x, y;
    Complex residual;    // K L_hat + u A + v B  (A, B analytic)
    double se;           // 3 SE threshold uses this combined SE
    bool pass;           // |residual| <= 3 se
    Complex F1, F2;      // K L1_hat + u A   and   -K L2_hat - v B
    double se_F;
    bool pass_F;         // |F1 - F2| <= 3 se_F
};

struct ValidationReport {
    std::vector<ValidationRow> rows;
    int n_pass = 0, n_pass_F = 0;
    double max_residual_over_se = 0.0;
    // density comparison (vs module inversion) is assembled by the caller
    // that owns an inversion grid; see tools/ and the acceptance suite.
};

/// Functional-equation residuals K L_hat + u A + v B on the fixed panel,
/// with analytic A, B from the BVP solution, against 3 combined SE.
/// A companion run at doubled dt (same horizon) enables Richardson
/// extrapolation of the O(dt) weak error of the Euler occupation measure;
/// the combined SE then includes both statistical contributions.
ValidationReport validation_report(const Transforms& tr, const EmpiricalMeasures& meas,
                                   const EmpiricalMeasures* coarse_dt = nullptr);

}  // namespace rbm
