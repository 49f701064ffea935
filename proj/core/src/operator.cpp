#include "nlsg/operator.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>

#include "nlsg/errors.hpp"

namespace nlsg {

namespace {

Vector vector_from_json(const nlohmann::json& a, const char* what) {
  if (!a.is_array() || a.empty()) throw ConfigError(std::string(what) + " must be a non-empty array");
  Vector v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
  }
  if (!v.allFinite()) throw ConfigError(std::string(what) + " entries must be finite");
  return v;
}

nlohmann::json vector_to_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void reject_unknown(const nlohmann::json& d, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : d.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown operator field: " + key);
    }
  }
}

// (1 - e^{-s}) / s, continuous at 0.
double relax(double s) { return s == 0.0 ? 1.0 : -std::expm1(-s) / s; }

double residual_scale(const Vector& x, double tol) { return tol * std::max(1.0, x.norm()); }

}  // namespace

Operator Operator::linear_psd(Matrix M, Vector q) {
  if (M.rows() != M.cols() || M.rows() < 1) throw DomainError("linear_psd needs a square matrix");
  if (q.size() != M.rows()) throw DimensionMismatch("linear_psd offset does not match matrix size");
  if (!M.allFinite() || !q.allFinite()) throw DomainError("linear_psd entries must be finite");
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) throw DomainError("linear_psd matrix must be symmetric");
  Operator op;
  op.kind_ = OperatorKind::linear_psd;
  op.dimension_ = static_cast<int>(M.rows());
  op.M_ = 0.5 * (M + M.transpose());
  op.q_ = std::move(q);
  op.prepare_linear();
  if (op.eigvals_.minCoeff() < -1e-12 * scale) throw DomainError("linear_psd matrix must be positive semidefinite");
  op.eigvals_ = op.eigvals_.cwiseMax(0.0);
  return op;
}

Operator Operator::diagonal(std::vector<ScalarFn> fns) {
  if (fns.empty()) throw DomainError("diagonal operator needs at least one function");
  Operator op;
  op.kind_ = OperatorKind::diagonal;
  op.dimension_ = static_cast<int>(fns.size());
  op.fns_ = std::move(fns);
  return op;
}

Operator Operator::constant(Vector q) {
  if (q.size() < 1 || !q.allFinite()) throw DomainError("constant operator needs a finite non-empty q");
  Operator op;
  op.kind_ = OperatorKind::constant;
  op.dimension_ = static_cast<int>(q.size());
  op.q_ = std::move(q);
  return op;
}

Operator Operator::from_descriptor(const nlohmann::json& d) {
  if (!d.is_object() || !d.contains("kind")) throw ConfigError("operator descriptor needs a \"kind\"");
  const auto kind = d.at("kind").get<std::string>();
  try {
    if (kind == "linear_psd") {
      reject_unknown(d, {"kind", "matrix", "q"});
      if (!d.contains("matrix") || !d.at("matrix").is_array() || d.at("matrix").empty()) {
        throw ConfigError("linear_psd needs a non-empty \"matrix\"");
      }
      const auto& rows = d.at("matrix");
      const auto n = static_cast<Eigen::Index>(rows.size());
      Matrix M(n, n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Vector row = vector_from_json(rows[static_cast<std::size_t>(i)], "matrix row");
        if (row.size() != n) throw ConfigError("linear_psd matrix must be square");
        M.row(i) = row.transpose();
      }
      Vector q = d.contains("q") ? vector_from_json(d.at("q"), "q") : Vector(Vector::Zero(n));
      return linear_psd(std::move(M), std::move(q));
    }
    if (kind == "diagonal") {
      reject_unknown(d, {"kind", "fns"});
      if (!d.contains("fns") || !d.at("fns").is_array()) throw ConfigError("diagonal needs a \"fns\" array");
      std::vector<ScalarFn> fns;
      for (const auto& f : d.at("fns")) fns.push_back(ScalarFn::from_descriptor(f));
      return diagonal(std::move(fns));
    }
    if (kind == "constant") {
      reject_unknown(d, {"kind", "q"});
      if (!d.contains("q")) throw ConfigError("constant needs \"q\"");
      return constant(vector_from_json(d.at("q"), "q"));
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const DimensionMismatch& e) {
    throw ConfigError(e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("operator descriptor: ") + e.what());
  }
  throw ConfigError("unknown operator kind: " + kind);
}

nlohmann::json Operator::descriptor() const {
  switch (kind_) {
    case OperatorKind::linear_psd: {
      auto rows = nlohmann::json::array();
      for (Eigen::Index i = 0; i < M_.rows(); ++i) rows.push_back(vector_to_json(M_.row(i).transpose()));
      return {{"kind", "linear_psd"}, {"matrix", rows}, {"q", vector_to_json(q_)}};
    }
    case OperatorKind::diagonal: {
      auto fns = nlohmann::json::array();
      for (const auto& f : fns_) fns.push_back(f.descriptor());
      return {{"kind", "diagonal"}, {"fns", fns}};
    }
    case OperatorKind::constant: break;
  }
  return {{"kind", "constant"}, {"q", vector_to_json(q_)}};
}

Operator Operator::with_lambda0(double lambda0) const {
  if (!(lambda0 > 0.0)) throw DomainError("lambda0 must be positive");
  Operator op = *this;
  op.lambda0_ = lambda0;
  return op;
}

void Operator::prepare_linear() {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M_);
  if (es.info() != Eigen::Success) throw DomainError("eigendecomposition of linear_psd matrix failed");
  eigvals_ = es.eigenvalues();
  eigvecs_ = es.eigenvectors();
}

bool Operator::monotone_by_construction() const noexcept {
  return std::all_of(fns_.begin(), fns_.end(), [](const ScalarFn& f) { return f.monotone(); });
}

bool Operator::accretive_in(const Space& space) const {
  if (!monotone_by_construction()) return false;
  if (kind_ != OperatorKind::linear_psd || space.exponent() == 2.0) return true;
  // Symmetric M with nonpositive off-diagonals and nonnegative row sums generates
  // a sub-Markovian semigroup, contractive on every l_p.
  const double tol = 1e-12 * std::max(1.0, M_.cwiseAbs().maxCoeff());
  for (int i = 0; i < dimension_; ++i) {
    for (int j = 0; j < dimension_; ++j) {
      if (i != j && M_(i, j) > tol) return false;
    }
    if (M_.row(i).sum() < -tol) return false;
  }
  return true;
}

void Operator::check_dimension(const Vector& x) const {
  if (x.size() != dimension_) {
    throw DimensionMismatch("vector of dimension " + std::to_string(x.size()) + " for operator of dimension " +
                            std::to_string(dimension_));
  }
}

Vector Operator::apply(const Vector& x) const {
  check_dimension(x);
  switch (kind_) {
    case OperatorKind::linear_psd: return M_ * x + q_;
    case OperatorKind::diagonal: {
      Vector u(dimension_);
      for (int i = 0; i < dimension_; ++i) u[i] = fns_[static_cast<std::size_t>(i)](x[i]);
      return u;
    }
    case OperatorKind::constant: break;
  }
  return q_;
}

bool Operator::graph_contains(const Space& space, const Vector& x, const Vector& u, double tol) const {
  return space.norm(apply(x) - u) <= tol;
}

std::function<Vector(const Vector&)> Operator::resolvent_stepper(double lambda, double tol) const {
  if (!(lambda >= 0.0)) throw DomainError("resolvent step must be nonnegative");
  if (lambda >= lambda0_) throw DomainError("resolvent step exceeds the range-condition bound lambda0");
  if (lambda == 0.0) return [](const Vector& x) { return x; };

  switch (kind_) {
    case OperatorKind::linear_psd: {
      auto ldlt = std::make_shared<Eigen::LDLT<Matrix>>(Matrix::Identity(dimension_, dimension_) + lambda * M_);
      const Vector shift = lambda * q_;
      return [M = M_, ldlt, shift, lambda, tol](const Vector& x) {
        if (x.size() != M.rows()) throw DimensionMismatch("resolvent input has the wrong dimension");
        const Vector rhs = x - shift;
        Vector y = ldlt->solve(rhs);
        Vector r = y + lambda * (M * y) - rhs;
        const double allowed = residual_scale(x, tol);
        if (r.norm() > allowed) {
          y -= ldlt->solve(r);
          r = y + lambda * (M * y) - rhs;
          if (r.norm() > allowed) throw ResolventFailure("linear resolvent residual above tolerance");
        }
        return y;
      };
    }
    case OperatorKind::diagonal:
      return [fns = fns_, lambda, tol](const Vector& x) {
        const auto dim = static_cast<Eigen::Index>(fns.size());
        if (x.size() != dim) throw DimensionMismatch("resolvent input has the wrong dimension");
        const double per_coord = residual_scale(x, tol) / std::sqrt(static_cast<double>(dim));
        Vector y(dim);
        for (Eigen::Index i = 0; i < dim; ++i) y[i] = fns[static_cast<std::size_t>(i)].resolvent(lambda, x[i], per_coord);
        return y;
      };
    case OperatorKind::constant: break;
  }
  const Vector shift = lambda * q_;
  return [shift](const Vector& x) {
    if (x.size() != shift.size()) throw DimensionMismatch("resolvent input has the wrong dimension");
    return Vector(x - shift);
  };
}

Vector Operator::resolvent(double lambda, const Vector& x, double tol) const {
  check_dimension(x);
  if (lambda == 0.0) return x;
  return resolvent_stepper(lambda, tol)(x);
}

Vector Operator::yosida(double lambda, const Vector& x, double tol) const {
  if (!(lambda > 0.0)) throw DomainError("Yosida approximate needs lambda > 0");
  return apply(resolvent(lambda, x, tol));
}

double Operator::bracket_norm(const Space& space, const Vector& x) const { return space.norm(apply(x)); }

double Operator::lipschitz_bound(const Space& space, double b) const {
  if (!(b > 0.0)) throw DomainError("Lipschitz bound needs b > 0");
  switch (kind_) {
    case OperatorKind::linear_psd:
      if (space.exponent() == 2.0) return eigvals_.cwiseAbs().maxCoeff();
      // Symmetric: ||M||_1 = ||M||_inf bounds every ||M||_p.
      return M_.cwiseAbs().rowwise().sum().maxCoeff();
    case OperatorKind::diagonal: {
      double L = 0.0;
      for (const auto& f : fns_) L = std::max(L, f.lipschitz_on(b));
      return L;
    }
    case OperatorKind::constant: break;
  }
  return 0.0;
}

double Operator::bracket_modulus(const Space& space, double eps, double b) const {
  if (!(eps > 0.0) || !(b > 0.0)) throw DomainError("bracket modulus needs eps > 0 and b > 0");
  return eps / std::max(1.0, lipschitz_bound(space, b));
}

BracketModulus Operator::bracket_modulus_fn(const Space& space) const {
  return [op = *this, space](double eps, double b) { return op.bracket_modulus(space, eps, b); };
}

double Operator::majorant(const Space& space, double b) const {
  if (!(b >= 0.0)) throw DomainError("majorant needs b >= 0");
  switch (kind_) {
    case OperatorKind::linear_psd: return lipschitz_bound(space, std::max(b, 1.0)) * b + space.norm(q_);
    case OperatorKind::diagonal: {
      Vector m(dimension_);
      for (int i = 0; i < dimension_; ++i) m[i] = fns_[static_cast<std::size_t>(i)].sup_abs_on(b);
      return space.norm(m);
    }
    case OperatorKind::constant: break;
  }
  return space.norm(q_);
}

DomainWitness Operator::domain_witness() const {
  Vector c = Vector::Zero(dimension_);
  Vector d = apply(c);
  return {std::move(c), std::move(d)};
}

RangeData Operator::range_data(const Space& space) const {
  space.check_dimension(Vector::Zero(dimension_));
  RangeData rd;
  switch (kind_) {
    case OperatorKind::constant: {
      rd.d_inf = space.norm(q_);
      const double bound = rd.d_inf;
      rd.f = [bound](double) { return bound; };
      rd.witness = [dim = dimension_, q = q_](double) { return std::make_pair(Vector(Vector::Zero(dim)), q); };
      break;
    }
    case OperatorKind::linear_psd: {
      // Least-norm point of {My + q}: y* = -M^+ q leaves the null-space part of q.
      const double cutoff = 1e-12 * std::max(1.0, eigvals_.maxCoeff());
      const Vector coeffs = eigvecs_.transpose() * q_;
      Vector ycoef = Vector::Zero(dimension_);
      for (int i = 0; i < dimension_; ++i) {
        if (eigvals_[i] > cutoff) ycoef[i] = -coeffs[i] / eigvals_[i];
      }
      const Vector y = eigvecs_ * ycoef;
      const Vector z = apply(y);
      const double zn = space.norm(z);
      if (space.exponent() != 2.0 && zn > 1e-12 * std::max(1.0, space.norm(q_))) {
        throw Unsupported("range infimum of an affine operator with q outside ran M is only computed in the Euclidean norm");
      }
      rd.d_inf = space.exponent() == 2.0 ? zn : 0.0;
      const double bound = std::max(space.norm(y), zn);
      rd.f = [bound](double) { return bound; };
      rd.witness = [y, z](double) { return std::make_pair(y, z); };
      break;
    }
    case OperatorKind::diagonal: {
      rd.d_inf = 0.0;
      Vector cvec = Vector::Zero(dimension_);
      for (int i = 0; i < dimension_; ++i) {
        const auto& f = fns_[static_cast<std::size_t>(i)];
        if (f.type() == ScalarFn::Type::exp) cvec[i] = f.coef();
      }
      const auto witness = [fns = fns_, dim = dimension_](double eps) {
        Vector y = Vector::Zero(dim);
        for (int i = 0; i < dim; ++i) {
          const auto& f = fns[static_cast<std::size_t>(i)];
          if (f.type() == ScalarFn::Type::exp) {
            const double delta = std::min(eps / dim, f.coef());
            y[i] = std::log(delta / f.coef());
          }
        }
        Vector z(dim);
        for (int i = 0; i < dim; ++i) z[i] = fns[static_cast<std::size_t>(i)](y[i]);
        return std::make_pair(y, z);
      };
      const double cnorm = space.norm(cvec);
      rd.f = [witness, space, cnorm](double eps) {
        if (!(eps > 0.0)) throw DomainError("witness bound needs eps > 0");
        return std::max(space.norm(witness(eps).first), cnorm);
      };
      rd.witness = witness;
      break;
    }
  }
  rd.E = static_cast<int>(std::ceil(rd.d_inf)) + 1;
  if (rd.d_inf > 0.0) rd.D = rd.d_inf;
  return rd;
}

Vector Operator::exact_semigroup(double t, const Vector& x) const {
  check_dimension(x);
  if (!(t >= 0.0)) throw DomainError("semigroup time must be nonnegative");
  if (t == 0.0) return x;
  switch (kind_) {
    case OperatorKind::linear_psd: {
      // u = e^{-mu t} w - t h(mu t) r in the eigenbasis.
      const Vector w = eigvecs_.transpose() * x;
      const Vector r = eigvecs_.transpose() * q_;
      Vector u(dimension_);
      for (int i = 0; i < dimension_; ++i) {
        const double mt = eigvals_[i] * t;
        u[i] = std::exp(-mt) * w[i] - t * relax(mt) * r[i];
      }
      return eigvecs_ * u;
    }
    case OperatorKind::diagonal: {
      Vector u(dimension_);
      for (int i = 0; i < dimension_; ++i) u[i] = fns_[static_cast<std::size_t>(i)].flow(t, x[i]);
      return u;
    }
    case OperatorKind::constant: break;
  }
  return x - t * q_;
}

Vector Operator::exact_semigroup_quotient(double t, const Vector& x) const {
  check_dimension(x);
  if (!(t >= 0.0)) throw DomainError("semigroup time must be nonnegative");
  if (t == 0.0) return apply(x);
  switch (kind_) {
    case OperatorKind::linear_psd: {
      const Vector w = eigvecs_.transpose() * x;
      const Vector r = eigvecs_.transpose() * q_;
      Vector g(dimension_);
      for (int i = 0; i < dimension_; ++i) g[i] = (eigvals_[i] * w[i] + r[i]) * relax(eigvals_[i] * t);
      return eigvecs_ * g;
    }
    case OperatorKind::diagonal: {
      Vector g(dimension_);
      for (int i = 0; i < dimension_; ++i) g[i] = fns_[static_cast<std::size_t>(i)].flow_quotient(t, x[i]);
      return g;
    }
    case OperatorKind::constant: break;
  }
  return q_;
}

}  // namespace nlsg
