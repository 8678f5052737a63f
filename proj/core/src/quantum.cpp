#include "picomm/quantum.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace picomm {

namespace {

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

CMatrix weighted_sum(const std::map<IndexSet, double>& coeffs, const QuantumModel& model) {
  CMatrix acc = CMatrix::Zero(model.dimension, model.dimension);
  for (const auto& [label, w] : coeffs) {
    auto it = model.states.find(label);
    if (it == model.states.end()) throw LookupError("model has no state " + to_string(label));
    acc += w * it->second;
  }
  return acc;
}

CMatrix weighted_sum(const std::map<EffectKey, double>& coeffs, const QuantumModel& model, const TaskLayout& layout) {
  CMatrix acc = CMatrix::Zero(model.dimension, model.dimension);
  for (const auto& [key, w] : coeffs) {
    auto it = model.povms.find(key.measurement);
    if (it == model.povms.end()) throw LookupError("model has no POVM " + to_string(key.measurement));
    const std::size_t k = layout.outcome_index(layout.measurement_index(key.measurement), key.outcome);
    acc += w * it->second.at(k);
  }
  return acc;
}

}  // namespace

CMatrix hermitize(const CMatrix& h, double tolerance) {
  if (h.rows() != h.cols()) throw ModelValidationError("matrix is not square");
  const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff() / 2.0;
  if (h.size() > 0 && dev > tolerance) {
    throw ModelValidationError("matrix deviates from Hermitian by " + std::to_string(dev));
  }
  return (h + h.adjoint()) / 2.0;
}

void QuantumModel::validate(double eigen_tolerance, double entry_tolerance) const {
  if (dimension < 1) throw ModelValidationError("dimension must be positive");
  const TaskLayout layout(task);
  const CMatrix id = CMatrix::Identity(dimension, dimension);
  for (const auto& [label, rho] : states) {
    layout.preparation_index(label);
    if (rho.rows() != dimension || rho.cols() != dimension) throw ModelValidationError("state " + to_string(label) + " has wrong shape");
    const CMatrix h = hermitize(rho, entry_tolerance);
    if (std::abs(h.trace() - Complex(1.0)) > eigen_tolerance) {
      throw ModelValidationError("state " + to_string(label) + " has trace " + std::to_string(h.trace().real()));
    }
    if (min_eigenvalue(h) < -eigen_tolerance) throw ModelValidationError("state " + to_string(label) + " is not PSD");
  }
  for (const auto& [label, effects] : povms) {
    const std::size_t j = layout.measurement_index(label);
    if (effects.size() != layout.outcome_count(j)) {
      throw ModelValidationError("POVM " + to_string(label) + " has " + std::to_string(effects.size()) + " effects, expected " +
                                 std::to_string(layout.outcome_count(j)));
    }
    CMatrix total = CMatrix::Zero(dimension, dimension);
    for (const CMatrix& e : effects) {
      if (e.rows() != dimension || e.cols() != dimension) throw ModelValidationError("effect of " + to_string(label) + " has wrong shape");
      const CMatrix h = hermitize(e, entry_tolerance);
      if (min_eigenvalue(h) < -eigen_tolerance) throw ModelValidationError("an effect of POVM " + to_string(label) + " is not PSD");
      total += h;
    }
    if ((total - id).cwiseAbs().maxCoeff() > entry_tolerance) {
      throw ModelValidationError("effects of POVM " + to_string(label) + " do not sum to the identity");
    }
  }
}

Behavior behavior_of(const QuantumModel& model) {
  model.validate();
  const TaskLayout layout(model.task);
  Behavior out;
  for (const auto& [a, rho] : model.states) {
    for (const auto& [b, effects] : model.povms) {
      const std::size_t j = layout.measurement_index(b);
      for (std::size_t k = 0; k < effects.size(); ++k) {
        const Complex value = (rho * effects[k]).trace();
        if (std::abs(value.imag()) > tol::kImaginaryPart) {
          throw ModelValidationError("tr(rho M) has imaginary part " + std::to_string(value.imag()));
        }
        out.set({a, b, layout.outcomes(j)[k]}, value.real());
      }
    }
  }
  return out;
}

bool check_equivalence(const QuantumModel& model, const PreparationEquivalence& eq, double tolerance) {
  const CMatrix diff = weighted_sum(signed_coefficients(eq), model);
  return diff.size() == 0 || diff.cwiseAbs().maxCoeff() <= tolerance;
}

bool check_equivalence(const QuantumModel& model, const EffectEquivalence& eq, double tolerance) {
  const TaskLayout layout(model.task);
  const CMatrix diff = weighted_sum(signed_coefficients(eq), model, layout);
  return diff.size() == 0 || diff.cwiseAbs().maxCoeff() <= tolerance;
}

CMatrix projector(const CVector& v) {
  const double nrm = v.squaredNorm();
  return v * v.adjoint() / nrm;
}

CVector haar_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(d);
  for (int i = 0; i < d; ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

QuantumModel random_model(const TaskSpec& task, int dimension, std::mt19937_64& rng) {
  if (dimension < 1) throw ConstraintViolation("dimension must be positive");
  const TaskLayout layout(task);
  std::exponential_distribution<double> expo(1.0);
  QuantumModel m;
  m.task = task;
  m.dimension = dimension;
  for (const IndexSet& a : layout.preparations()) {
    CMatrix rho = CMatrix::Zero(dimension, dimension);
    for (int r = 0; r < dimension; ++r) rho += expo(rng) * projector(haar_vector(dimension, rng));
    m.states[a] = rho;
  }
  for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
    std::vector<CMatrix> effects;
    for (std::size_t k = 0; k < layout.outcome_count(j); ++k) {
      CMatrix e = CMatrix::Zero(dimension, dimension);
      for (int r = 0; r < dimension; ++r) e += expo(rng) * projector(haar_vector(dimension, rng));
      effects.push_back(e);
    }
    m.povms[layout.measurements()[j]] = std::move(effects);
  }
  normalize_model(m);
  return m;
}

void normalize_model(QuantumModel& model) {
  for (auto& [label, rho] : model.states) {
    CMatrix h = (rho + rho.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    h = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
    rho = h / h.trace().real();
  }
  for (auto& [label, effects] : model.povms) {
    CMatrix total = CMatrix::Zero(model.dimension, model.dimension);
    for (CMatrix& e : effects) {
      CMatrix h = (e + e.adjoint()) / 2.0;
      Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
      Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
      e = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
      total += e;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(total);
    const CMatrix inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
                             es.eigenvectors().adjoint();
    for (CMatrix& e : effects) {
      e = inv_sqrt * e * inv_sqrt;
      e = (e + e.adjoint()) / 2.0;
    }
  }
}

}  // namespace picomm
