#include "lacsim/periodic.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace lacsim::periodic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using liouville::GeneratorPencil;
using liouville::HermitianBasis;

double phase(long m, long n) {
  return kTwoPi * (static_cast<double>(m) / static_cast<double>(n));
}

template <int Size>
struct PeriodKernel {
  using Mat = Eigen::Matrix<double, Size, Size>;
  using Row = Eigen::Matrix<double, 1, Size>;

  const Mat base;
  const Mat zeeman;
  const Row bright;
  const DriveSpec& drive;
  const double dt;

  PeriodKernel(const GeneratorPencil& pencil, const HermitianBasis& basis, const DriveSpec& d)
      : base(pencil.base),
        zeeman(pencil.zeeman),
        bright(basis.bright_row().transpose()),
        drive(d),
        dt(d.dt()) {}

  Mat step(long k) const {
    const Mat a = (base + drive.step_omega(k) * zeeman) * dt;
    Mat u = a.exp();
    if (!u.allFinite()) {
      throw PropagatorFailure(fmt::format("step propagator {} is not finite", k));
    }
    return u;
  }

  // Plain time-ordered product over all N intervals.
  void run_generic(bool retain, Mat& monodromy, Row& fc, Row& fs,
                   std::vector<RMatrix>& steps) const {
    const long n = drive.n_steps;
    Mat p = Mat::Identity();
    Mat next;
    fc.setZero();
    fs.setZero();
    if (retain) steps.reserve(static_cast<std::size_t>(n));
    for (long k = 0; k < n; ++k) {
      const Mat u = step(k);
      const Row bp = bright * p;
      const double angle = phase(k, n);
      fc += std::cos(angle) * bp;
      fs += std::sin(angle) * bp;
      next.noalias() = u * p;
      p = next;
      if (retain) steps.emplace_back(u);
    }
    monodromy = p;
  }

  // Midpoint sampling with even N: U_k == U_{N-1-k}, so with H = N/2
  //   monodromy = (U_0 U_1 ... U_{H-1}) (U_{H-1} ... U_0)
  // and the partial products of the second half are U_{H-j} ... U_{H-1} Q.
  // Their bright-row projections are accumulated by a Horner recursion.
  void run_symmetric(Mat& monodromy, Row& fc, Row& fs) const {
    const long n = drive.n_steps;
    const long half = n / 2;
    Mat q = Mat::Identity();
    Mat qt = Mat::Identity();
    Mat next;
    Row rc = Row::Zero();
    Row rs = Row::Zero();
    Row tmp;
    fc.setZero();
    fs.setZero();
    for (long k = 0; k < half; ++k) {
      const Mat u = step(k);
      const Row bq = bright * q;
      const double angle = phase(k, n);
      fc += std::cos(angle) * bq;
      fs += std::sin(angle) * bq;

      next.noalias() = u * q;
      q = next;
      next.noalias() = qt * u;
      qt = next;

      // Sample m = N - k belongs to the second half for k >= 1.
      if (k > 0) {
        const double mirrored = phase(n - k, n);
        rc += std::cos(mirrored) * bright;
        rs += std::sin(mirrored) * bright;
      }
      tmp.noalias() = rc * u;
      rc = tmp;
      tmp.noalias() = rs * u;
      rs = tmp;
    }
    const double mid = phase(half, n);
    fc += (std::cos(mid) * bright + rc) * q;
    fs += (std::sin(mid) * bright + rs) * q;
    monodromy.noalias() = qt * q;
  }

  PeriodCache build(const PeriodOptions& options, int dim_h) const {
    Mat monodromy;
    Row fc;
    Row fs;
    std::vector<RMatrix> steps;
    const bool symmetric = options.use_symmetry && !options.retain_steps &&
                           drive.sampling == Sampling::Midpoint && drive.n_steps % 2 == 0;
    if (symmetric) {
      run_symmetric(monodromy, fc, fs);
    } else {
      run_generic(options.retain_steps, monodromy, fc, fs, steps);
    }
    const double inv_n = 1.0 / static_cast<double>(drive.n_steps);
    return PeriodCache(drive, dim_h, RMatrix(monodromy), RVector(fc.transpose() * inv_n),
                       RVector(fs.transpose() * inv_n), std::move(steps));
  }
};

CMatrix complex_residual(const HermitianBasis& basis, const RMatrix& m, const RVector& r) {
  return basis.transform() * (m * r).cast<Complex>();
}

}  // namespace

const char* to_string(Sampling sampling) {
  return sampling == Sampling::Midpoint ? "midpoint" : "left_endpoint";
}

double DriveSpec::omega_at(double t) const {
  return omega0 + omega1 * std::cos(kTwoPi * f_mod * t);
}

double DriveSpec::step_omega(long k) const {
  const double offset = sampling == Sampling::Midpoint ? 0.5 : 0.0;
  return omega0 +
         omega1 * std::cos(kTwoPi * ((static_cast<double>(k) + offset) /
                                     static_cast<double>(n_steps)));
}

void DriveSpec::validate() const {
  if (!std::isfinite(omega0) || !std::isfinite(omega1)) {
    throw InvalidArgument("drive: omega0 and omega1 must be finite");
  }
  if (!std::isfinite(f_mod) || f_mod <= 0.0) {
    throw InvalidArgument(fmt::format("drive: f_mod = {} must be finite and positive", f_mod));
  }
  if (n_steps < 2) {
    throw InvalidArgument(fmt::format("drive: n_steps = {} must be at least 2", n_steps));
  }
}

PeriodCache::PeriodCache(DriveSpec drive, int dim_h, RMatrix monodromy, RVector cos_functional,
                         RVector sin_functional, std::vector<RMatrix> steps)
    : drive_(drive),
      dim_h_(dim_h),
      basis_(dim_h),
      monodromy_(std::move(monodromy)),
      cos_functional_(std::move(cos_functional)),
      sin_functional_(std::move(sin_functional)),
      steps_(std::move(steps)) {}

liouville::Superoperator PeriodCache::monodromy() const { return basis_.to_complex(monodromy_); }

std::vector<liouville::Superoperator> PeriodCache::step_propagators() const {
  std::vector<liouville::Superoperator> out;
  out.reserve(steps_.size());
  for (const RMatrix& u : steps_) out.push_back(basis_.to_complex(u));
  return out;
}

std::pair<double, double> PeriodCache::quadratures(const DensityMatrix& rho0) const {
  if (rho0.dim() != dim_h_) throw InvalidArgument("quadratures: dimension mismatch");
  const RVector r = basis_.coefficients(rho0.matrix());
  return {cos_functional_.dot(r), sin_functional_.dot(r)};
}

PeriodCache build_period(const spinops::SpinSystemSpec& system,
                         const liouville::RelaxationSpec& relax, const DriveSpec& drive,
                         const PeriodOptions& options) {
  system.validate();
  relax.validate();
  drive.validate();
  const GeneratorPencil pencil = liouville::make_generator_pencil(system, relax);
  const HermitianBasis basis(system.dim());
  if (system.dim() == 2) return PeriodKernel<4>(pencil, basis, drive).build(options, 2);
  return PeriodKernel<16>(pencil, basis, drive).build(options, 4);
}

SteadyState solve_steady_state(const PeriodCache& cache, const SteadyStateOptions& options) {
  const HermitianBasis& basis = cache.basis();
  const int d = cache.dim_h();
  const int n = basis.size();
  const RMatrix m = cache.monodromy_real() - RMatrix::Identity(n, n);

  Eigen::JacobiSVD<RMatrix> svd(m, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  int null_dim = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) < options.null_space_tolerance) ++null_dim;
  }
  if (null_dim > 1) {
    throw NoUniqueSteadyState(
        fmt::format("periodic steady state is not unique: null space of (U - 1) has dimension {}",
                    null_dim),
        null_dim);
  }

  int row = options.replaced_row < 0 ? basis.population_index(d - 1) : options.replaced_row;
  bool is_population_row = false;
  for (int s = 0; s < d; ++s) is_population_row |= (row == basis.population_index(s));
  if (!is_population_row) {
    throw InvalidArgument(fmt::format("replaced_row {} is not a population row", row));
  }

  RMatrix system_matrix = m;
  system_matrix.row(row) = basis.trace_row().transpose();
  RVector rhs = RVector::Zero(n);
  rhs(row) = 1.0;
  RVector r = system_matrix.fullPivLu().solve(rhs);

  const auto residual_of = [&](const RVector& x) {
    return x.allFinite() ? complex_residual(basis, m, x).cwiseAbs().maxCoeff()
                         : std::numeric_limits<double>::infinity();
  };
  double residual = residual_of(r);
  bool used_fallback = false;
  if (!(residual < options.residual_tolerance)) {
    const RVector v = svd.matrixV().col(n - 1);
    const double tr = basis.trace_row().dot(v);
    if (std::abs(tr) < 1e-14) {
      throw NoUniqueSteadyState("periodic steady state: null vector has zero trace", null_dim);
    }
    r = v / tr;
    residual = residual_of(r);
    used_fallback = true;
    if (!(residual < options.residual_tolerance)) {
      throw Error(fmt::format("periodic steady state: residual {:.3g} exceeds tolerance {:.3g}",
                              residual, options.residual_tolerance));
    }
  }
  CMatrix rho = basis.operator_from(r);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return {DensityMatrix(std::move(rho)), residual, used_fallback};
}

DensityMatrix periodic_steady_state(const PeriodCache& cache, const SteadyStateOptions& options) {
  return solve_steady_state(cache, options).rho;
}

DensityMatrix apply_periods(const PeriodCache& cache, const DensityMatrix& rho0, long n_periods) {
  const HermitianBasis& basis = cache.basis();
  RVector r = basis.coefficients(rho0.matrix());
  for (long p = 0; p < n_periods; ++p) r = cache.monodromy_real() * r;
  CMatrix rho = basis.operator_from(r);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

std::vector<double> period_waveform(const spinops::SpinSystemSpec& system,
                                    const liouville::RelaxationSpec& relax,
                                    const DriveSpec& drive, const DensityMatrix& rho0) {
  drive.validate();
  const GeneratorPencil pencil = liouville::make_generator_pencil(system, relax);
  const HermitianBasis basis(system.dim());
  RVector r = basis.coefficients(rho0.matrix());
  std::vector<double> waveform;
  waveform.reserve(static_cast<std::size_t>(drive.n_steps));
  for (long k = 0; k < drive.n_steps; ++k) {
    waveform.push_back(basis.bright_row().dot(r));
    r = liouville::real_propagator(pencil.at(drive.step_omega(k)), drive.dt()) * r;
  }
  return waveform;
}

std::vector<TracePoint> time_trace(const spinops::SpinSystemSpec& system,
                                   const liouville::RelaxationSpec& relax,
                                   const DriveSpec& drive, const DensityMatrix& rho0,
                                   long n_periods) {
  drive.validate();
  if (n_periods < 1) throw InvalidArgument("time_trace: n_periods must be at least 1");
  if (rho0.dim() != system.dim()) throw InvalidArgument("time_trace: dimension mismatch");
  const GeneratorPencil pencil = liouville::make_generator_pencil(system, relax);
  const HermitianBasis basis(system.dim());
  const double dt = drive.dt();
  const long n = drive.n_steps;

  // The same N step propagators repeat every period.
  std::vector<RMatrix> steps;
  steps.reserve(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    steps.push_back(liouville::real_propagator(pencil.at(drive.step_omega(k)), dt));
  }

  RVector r = basis.coefficients(rho0.matrix());
  std::vector<TracePoint> trace;
  trace.reserve(static_cast<std::size_t>(n * n_periods + 1));
  trace.push_back({0.0, drive.omega_at(0.0), basis.bright_row().dot(r)});
  for (long p = 0; p < n_periods; ++p) {
    for (long k = 0; k < n; ++k) {
      r = steps[static_cast<std::size_t>(k)] * r;
      const double t = static_cast<double>(p * n + k + 1) * dt;
      trace.push_back({t, drive.omega_at(t), basis.bright_row().dot(r)});
    }
  }
  return trace;
}

DensityMatrix propagate_schedule(const spinops::SpinSystemSpec& system,
                                 const liouville::RelaxationSpec& relax,
                                 const std::function<double(double)>& omega_of_t, double t_start,
                                 double t_end, long n_steps, const DensityMatrix& rho0,
                                 Sampling sampling, const Observer& observer) {
  if (!(t_end > t_start) || n_steps < 1) {
    throw InvalidArgument("propagate_schedule: need t_end > t_start and n_steps >= 1");
  }
  if (rho0.dim() != system.dim()) throw InvalidArgument("propagate_schedule: dimension mismatch");
  const GeneratorPencil pencil = liouville::make_generator_pencil(system, relax);
  const HermitianBasis basis(system.dim());
  const double dt = (t_end - t_start) / static_cast<double>(n_steps);
  const double offset = sampling == Sampling::Midpoint ? 0.5 : 0.0;

  const auto to_density = [&basis](const RVector& r) {
    CMatrix rho = basis.operator_from(r);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
  };

  RVector r = basis.coefficients(rho0.matrix());
  if (observer) observer(t_start, omega_of_t(t_start), rho0);
  for (long k = 0; k < n_steps; ++k) {
    const double t_sample = t_start + (static_cast<double>(k) + offset) * dt;
    r = liouville::real_propagator(pencil.at(omega_of_t(t_sample)), dt) * r;
    if (observer) {
      const double t = t_start + static_cast<double>(k + 1) * dt;
      observer(t, omega_of_t(t), to_density(r));
    }
  }
  return to_density(r);
}

}  // namespace lacsim::periodic
