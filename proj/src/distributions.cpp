#include "ustatboot/distributions.hpp"

#include "ustatboot/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace ustatboot {

void EllipticalModel::validate() const {
  if (v.dim() < 1) throw DimensionError("EllipticalModel: empty scale matrix");
  switch (family) {
    case Family::ContaminatedNormal:
      if (!(epsilon >= 0.0 && epsilon < 1.0)) {
        throw DomainError("EllipticalModel: epsilon must lie in [0, 1)");
      }
      if (!(nu > 0.0)) throw DomainError("EllipticalModel: contamination scale nu must be > 0");
      break;
    case Family::EllipticT:
      if (!(nu > 4.0)) {
        throw DomainError("EllipticalModel: t degrees of freedom must exceed 4, got " +
                          std::to_string(nu));
      }
      break;
  }
  (void)cholesky(v);
}

EllipticalModel model_m1(SymMatrix v) {
  return {Family::ContaminatedNormal, 0.2, 1.5, std::move(v)};
}

EllipticalModel model_m2(SymMatrix v, double nu) {
  return {Family::EllipticT, 0.0, nu, std::move(v)};
}

EllipticalModel model_gaussian(SymMatrix v) {
  return {Family::ContaminatedNormal, 0.0, 1.0, std::move(v)};
}

SymMatrix build_v(const DependenceSpec& spec) {
  if (spec.p < 1) throw DimensionError("build_v: p must be >= 1");
  const Index p = spec.p;
  Matrix v(p, p);
  switch (spec.kind) {
    case DependenceKind::D1:
    case DependenceKind::Equicorrelation:
      v.setConstant(spec.rho);
      v.diagonal().setOnes();
      break;
    case DependenceKind::AR1:
      if (!(spec.rho > -1.0 && spec.rho < 1.0)) {
        throw DomainError("build_v: AR(1) rho must lie in (-1, 1)");
      }
      for (Index m = 0; m < p; ++m) {
        for (Index k = 0; k < p; ++k) {
          v(m, k) = std::pow(spec.rho, static_cast<double>(std::abs(m - k)));
        }
      }
      break;
  }
  return trusted_symmetric(std::move(v));
}

SymMatrix band_truncate(const SymMatrix& v, Index bandwidth) {
  if (bandwidth < 0) throw DomainError("band_truncate: bandwidth must be >= 0");
  Matrix out = v.matrix();
  for (Index m = 0; m < out.rows(); ++m) {
    for (Index k = 0; k < out.cols(); ++k) {
      if (std::abs(m - k) > bandwidth) out(m, k) = 0.0;
    }
  }
  return trusted_symmetric(std::move(out));
}

DataMatrix sample(const EllipticalModel& model, Index n, Rng& rng) {
  if (n < 1) throw SampleSizeError("sample: n must be >= 1");
  model.validate();
  const Matrix l = cholesky(model.v);
  const Index p = model.p();
  const Rng root(rng.next_u64());
  Matrix z(n, p);
  Vector g(p);
  for (Index i = 0; i < n; ++i) {
    Rng stream = root.substream(static_cast<std::uint64_t>(i));
    for (Index k = 0; k < p; ++k) g(k) = stream.normal();
    double scale = 1.0;
    if (model.family == Family::ContaminatedNormal) {
      if (model.epsilon > 0.0 && stream.uniform() < model.epsilon) scale = model.nu;
    } else {
      scale = 1.0 / std::sqrt(stream.chi_squared(model.nu) / model.nu);
    }
    z.row(i) = scale * (l * g).transpose();
  }
  return DataMatrix(std::move(z));
}

SymMatrix population_sigma(const EllipticalModel& model) {
  switch (model.family) {
    case Family::ContaminatedNormal:
      return (1.0 - model.epsilon + model.epsilon * model.nu * model.nu) * model.v;
    case Family::EllipticT:
      if (!(model.nu > 2.0)) {
        throw DomainError("population_sigma: t covariance needs nu > 2");
      }
      return (model.nu / (model.nu - 2.0)) * model.v;
  }
  throw DomainError("population_sigma: unknown family");
}

double kurtosis_kappa(const EllipticalModel& model) {
  switch (model.family) {
    case Family::ContaminatedNormal: {
      const double e = model.epsilon;
      const double nu2 = model.nu * model.nu;
      const double m2 = 1.0 - e + e * nu2;
      const double m4 = 1.0 - e + e * nu2 * nu2;
      return (m4 - m2 * m2) / (m2 * m2);
    }
    case Family::EllipticT:
      if (!(model.nu > 4.0)) throw DomainError("kurtosis_kappa: t kurtosis needs nu > 4");
      return 2.0 / (model.nu - 4.0);
  }
  throw DomainError("kurtosis_kappa: unknown family");
}

SymMatrix population_kendall_mean(const SymMatrix& v) {
  const Index p = v.dim();
  Matrix out(p, p);
  for (Index m = 0; m < p; ++m) {
    for (Index k = 0; k < p; ++k) {
      const double denom = std::sqrt(v(m, m) * v(k, k));
      if (!(denom > 0.0)) throw DomainError("population_kendall_mean: zero variance");
      const double rho = std::clamp(v(m, k) / denom, -1.0, 1.0);
      out(m, k) = (m == k) ? 2.0 : 2.0 / std::numbers::pi * std::asin(rho) + 1.0;
    }
  }
  return trusted_symmetric(std::move(out));
}

}  // namespace ustatboot
