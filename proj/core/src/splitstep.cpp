#include "modspace/splitstep.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <stdexcept>

#include "modspace/fft.hpp"
#include "modspace/matexp.hpp"
#include "modspace/parallel.hpp"

namespace modspace {

Matrix herm_phase_factor(const Matrix& H, double theta) {
  const auto n = H.rows();
  if (n == 2) {
    // H = c0 I + c.sigma -> e^{-i th H} = e^{-i th c0}(cos(th|c|) I
    //                                   - i sin(th|c|) c.sigma/|c|)
    const double c0 = 0.5 * (H(0, 0).real() + H(1, 1).real());
    const double c3 = 0.5 * (H(0, 0).real() - H(1, 1).real());
    const double c1 = H(0, 1).real();
    const double c2 = -H(0, 1).imag();
    const double r = std::sqrt(c1 * c1 + c2 * c2 + c3 * c3);
    const Complex ph = std::polar(1.0, -theta * c0);
    Matrix u(2, 2);
    if (r == 0.0) {
      u = ph * Matrix::Identity(2, 2);
      return u;
    }
    const double cr = std::cos(theta * r), sr = std::sin(theta * r) / r;
    const Complex i(0.0, 1.0);
    u(0, 0) = ph * (cr - i * sr * c3);
    u(0, 1) = ph * (-i * sr * Complex(c1, -c2));
    u(1, 0) = ph * (-i * sr * Complex(c1, c2));
    u(1, 1) = ph * (cr + i * sr * c3);
    return u;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  Eigen::VectorXcd phases(n);
  for (Eigen::Index j = 0; j < n; ++j)
    phases(j) = std::polar(1.0, -theta * es.eigenvalues()(j));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

Matrix general_matrix_exp(const Matrix& A) { return A.exp(); }

void EvolutionConfig::validate() const {
  if (!(dt > 0)) throw std::invalid_argument("EvolutionConfig: dt > 0");
  if (!(T > 0)) throw std::invalid_argument("EvolutionConfig: T > 0");
  if (splitting_order != 2)
    throw std::invalid_argument("EvolutionConfig: only order 2 shipped");
  const double steps = T / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9)
    throw std::invalid_argument("EvolutionConfig: T/dt must be integral");
}

namespace {

// exp(-i dt/2 V(t,x)) per grid point.
std::vector<Matrix> potential_half_step(const CliffordSystem& cs,
                                        const PotentialSpec& spec,
                                        const Grid& g, double t, double dt) {
  std::vector<Matrix> e(g.size());
  const bool herm = spec.is_hermitian();
  parallel_for(0, g.size(), [&](std::size_t x) {
    const Matrix v = spec.total(t, g.point(x));
    if (herm) {
      e[x] = herm_phase_factor(v, 0.5 * dt);
    } else {
      e[x] = general_matrix_exp(Complex(0.0, -0.5 * dt) * v);
    }
  });
  (void)cs;
  return e;
}

std::vector<Matrix> kinetic_step(const CliffordSystem& cs, const Grid& g,
                                 double dt) {
  std::vector<Matrix> u(g.size());
  const Matrix id = Matrix::Identity(cs.components, cs.components);
  parallel_for(0, g.size(), [&](std::size_t k) {
    const Vec xi = g.frequency(k);
    const double e2 = xi.norm2() + cs.mass * cs.mass;
    if (e2 <= 0.0) {
      u[k] = id;
      return;
    }
    const double e = std::sqrt(e2);
    u[k] = std::cos(dt * e) * id -
           Complex(0.0, 1.0) * (std::sin(dt * e) / e) * cs.symbol(xi);
  });
  return u;
}

void apply_pointwise(const std::vector<Matrix>& mats, SpinorField& f) {
  const int m = f.components();
  parallel_for(0, f.grid().size(), [&](std::size_t x) {
    Eigen::VectorXcd v(m);
    for (int c = 0; c < m; ++c) v(c) = f.at(x, c);
    Eigen::VectorXcd w = mats[x] * v;
    for (int c = 0; c < m; ++c) f.at(x, c) = w(c);
  });
}

void apply_kinetic(const std::vector<Matrix>& mats, SpinorField& f) {
  const Grid& g = f.grid();
  const int m = f.components();
  const std::size_t size = g.size();
  std::vector<std::vector<Complex>> spec(
      static_cast<std::size_t>(m), std::vector<Complex>(size));
  parallel_for(0, static_cast<std::size_t>(m), [&](std::size_t c) {
    std::vector<Complex> in(size);
    for (std::size_t x = 0; x < size; ++x) in[x] = f.at(x, static_cast<int>(c));
    grid_dft(g, in.data(), spec[c].data());
  });
  parallel_for(0, size, [&](std::size_t k) {
    Eigen::VectorXcd v(m);
    for (int c = 0; c < m; ++c) v(c) = spec[static_cast<std::size_t>(c)][k];
    Eigen::VectorXcd w = mats[k] * v;
    for (int c = 0; c < m; ++c) spec[static_cast<std::size_t>(c)][k] = w(c);
  });
  parallel_for(0, static_cast<std::size_t>(m), [&](std::size_t c) {
    std::vector<Complex> out(size);
    grid_idft(g, spec[c].data(), out.data());
    for (std::size_t x = 0; x < size; ++x) f.at(x, static_cast<int>(c)) = out[x];
  });
}

}  // namespace

std::vector<SpinorField> split_step_evolve(
    const CliffordSystem& cs, const PotentialSpec& spec,
    const SpinorField& psi0, const EvolutionConfig& cfg,
    const std::vector<double>& sample_times) {
  cfg.validate();
  if (psi0.grid().dim() != cs.dim || psi0.components() != cs.components)
    throw std::invalid_argument("split_step_evolve: field/system mismatch");

  const Grid& g = psi0.grid();
  const double dt = cfg.dt;
  const long steps = std::lround(cfg.T / dt);

  std::vector<long> sample_steps(sample_times.size());
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    const double t = sample_times[i];
    const long k = std::lround(t / dt);
    if (k < 0 || k > steps || std::abs(k * dt - t) > 1e-9 * std::max(1.0, t))
      throw std::invalid_argument(
          "split_step_evolve: sample time not on a step boundary");
    sample_steps[i] = k;
  }

  const std::vector<Matrix> kin = kinetic_step(cs, g, dt);
  std::vector<Matrix> half_cached;
  const bool has_potential = !spec.empty();
  if (has_potential && !spec.time_dependent)
    half_cached = potential_half_step(cs, spec, g, 0.0, dt);

  std::vector<SpinorField> out;
  out.reserve(sample_times.size());
  SpinorField psi = psi0;

  // collect snapshots in evolution order, reorder to the requested order
  std::vector<std::pair<long, SpinorField>> snaps;
  auto emit = [&](long k) {
    bool wanted = false;
    for (long s : sample_steps)
      if (s == k) wanted = true;
    if (wanted) {
      psi.check_finite("split_step_evolve");
      snaps.emplace_back(k, psi);
    }
  };

  emit(0);
  for (long k = 0; k < steps; ++k) {
    const double t = k * dt;
    if (has_potential) {
      const std::vector<Matrix>& h1 =
          spec.time_dependent
              ? potential_half_step(cs, spec, g, t + 0.25 * dt, dt)
              : half_cached;
      apply_pointwise(h1, psi);
    }
    apply_kinetic(kin, psi);
    if (has_potential) {
      const std::vector<Matrix>& h2 =
          spec.time_dependent
              ? potential_half_step(cs, spec, g, t + 0.75 * dt, dt)
              : half_cached;
      apply_pointwise(h2, psi);
    }
    if ((k & 63) == 0) psi.check_finite("split_step_evolve");
    emit(k + 1);
  }

  for (std::size_t i = 0; i < sample_steps.size(); ++i) {
    for (auto& [k, f] : snaps)
      if (k == sample_steps[i]) {
        out.push_back(f);
        break;
      }
  }
  return out;
}

SpinorField split_step_final(const CliffordSystem& cs,
                             const PotentialSpec& spec,
                             const SpinorField& psi0,
                             const EvolutionConfig& cfg) {
  return split_step_evolve(cs, spec, psi0, cfg, {cfg.T}).front();
}

}  // namespace modspace
