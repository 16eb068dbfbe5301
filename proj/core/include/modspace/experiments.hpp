#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modspace/dirac.hpp"
#include "modspace/norms.hpp"
#include "modspace/phaseflow.hpp"
#include "modspace/potentials.hpp"
#include "modspace/rng.hpp"
#include "modspace/splitstep.hpp"

namespace modspace {

/// Thrown on malformed or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PotentialConfig {
  std::string cls = "none";  // none | quadratic | hermitian | bounded | sum
  std::string name;
  double amplitude = 1.0;
  double gamma = 0.5;
  std::vector<PotentialConfig> parts;  // for cls == "sum"
};

struct DecayConfig {
  std::vector<double> p_list{2.0, 4.0, 6.0};
  double theta = 1.0;
  double q = 2.0;
  double t_min = 5.0;
  double t_max = 40.0;
  int t_samples = 9;
};

struct ExperimentConfig {
  std::string experiment;
  int N = 1;
  int n = 256;
  double L = 25.0;
  std::string clifford = "dirac1d";
  double mass = 1.0;
  PotentialConfig potential;
  std::vector<NormSpec> norms;
  double T = 2.0;
  int time_samples = 9;
  int ensemble = 10;
  std::uint64_t seed = 12345;
  double window_width = 1.0;
  double dt = 1e-3;
  PicardOptions picard;
  bool picard_compare = false;
  DecayConfig decay;
  int kernel_decay_n = 1;
  std::string kernel_symbol = "dirac";  // or "quadratic"
  bool stability = false;
  std::string csv_path;
  std::string json_path;
  /// When set, experiments with trajectories write binary field dumps
  /// under this path prefix.
  std::string dump_prefix;

  Grid make_grid() const { return Grid(N, n, L); }
  CliffordSystem make_clifford() const;
  PotentialSpec make_potential() const;

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
};

struct EstimateRow {
  double t = 0.0;
  NormSpec spec;
  double norm = 0.0;
  double ratio = 0.0;
};

struct SpecSummary {
  NormSpec spec;
  double C_T = 0.0;
  std::optional<double> growth_slope;      // log ratio vs log(1+t)
  std::optional<double> decay_slope;       // log ratio vs log<t>
  std::optional<double> decay_target;
  std::optional<double> fit_residual;
  std::optional<double> stability_change;  // |C_T' - C_T| / C_T, refined run
};

struct EstimateReport {
  std::string experiment;
  std::vector<EstimateRow> rows;
  std::vector<SpecSummary> specs;
  double C_T = 0.0;
  std::optional<double> slope;
  std::optional<double> slope_residual;
  std::optional<double> gronwall_c;
  std::optional<double> gronwall_ref;
  bool pass = true;
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;

  /// Convergence history (iteration, sup diff, L2 diff) when a Picard
  /// comparison ran.
  std::vector<std::array<double, 3>> picard_history;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms of fit residuals
};
LinearFit linear_fit(const std::vector<double>& xs,
                     const std::vector<double>& ys);

/// Band-limited random spinor field: iid complex Gaussian coefficients on
/// frequency nodes with |xi| <= band_fraction * xi_max, zero outside,
/// L2-normalized. Deterministic in (grid, m, rng state).
SpinorField random_band_limited_field(const Grid& grid, int m,
                                      double band_fraction, CounterRng& rng);

/// Gaussian spinor e^{-|x|^2/2} in the first component (L2-normalized).
SpinorField gaussian_spinor(const Grid& grid, int m, double width = 1.0);

EstimateReport run_free_bound(const ExperimentConfig& cfg);
EstimateReport run_free_decay(const ExperimentConfig& cfg);
EstimateReport run_quadratic_bound(const ExperimentConfig& cfg);
EstimateReport run_subquadratic_bound(const ExperimentConfig& cfg);
EstimateReport run_kernel_decay(const ExperimentConfig& cfg);
EstimateReport run_picard_compare(const ExperimentConfig& cfg);
EstimateReport run_transform_roundtrip(const ExperimentConfig& cfg);

/// Dispatch on cfg.experiment; writes CSV/JSON when paths are set.
EstimateReport run_experiment(const ExperimentConfig& cfg);

std::string report_to_csv(const EstimateReport& report);
std::string report_to_json(const EstimateReport& report);

}  // namespace modspace
