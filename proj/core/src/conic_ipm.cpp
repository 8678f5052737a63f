// Homogeneous self-dual interior point method over R_+^n x (PSD blocks),
// HKM search direction with a Mehrotra predictor-corrector.
#include "conic_ipm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

namespace picomm::detail {

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Blocks = std::vector<Mat>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kStepFraction = 0.98;
constexpr double kDependentRow = 1e-11;

struct Point {
  Vec x;
  Blocks X;
  Vec y;
  Vec z;
  Blocks Z;
  double tau = 1.0;
  double kappa = 1.0;
};

struct Direction {
  Vec dx;
  Blocks dX;
  Vec dy;
  Vec dz;
  Blocks dZ;
  double dtau = 0.0;
  double dkappa = 0.0;
};

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double norm_sq(const Blocks& a) {
  double s = 0.0;
  for (const Mat& m : a) s += m.squaredNorm();
  return s;
}

Mat sym(const Mat& m) { return 0.5 * (m + m.transpose()); }

Blocks zeros_like(const std::vector<int>& sizes) {
  Blocks out;
  out.reserve(sizes.size());
  for (int n : sizes) out.push_back(Mat::Zero(n, n));
  return out;
}

/// Largest alpha with M + alpha dM still PSD (infinity if unbounded).
double max_step(const Mat& m, const Mat& dm) {
  if (m.size() == 0) return kInf;
  Eigen::LLT<Mat> llt(m);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto L = llt.matrixL();
  Mat t = L.solve(dm);
  t = L.solve(t.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<Mat> es(sym(t), Eigen::EigenvaluesOnly);
  const double lam = es.eigenvalues()(0);
  return lam >= 0.0 ? kInf : -1.0 / lam;
}

double max_step(const Vec& v, const Vec& dv) {
  double a = kInf;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
  return a;
}

double max_step(double v, double dv) { return dv < 0.0 ? -v / dv : kInf; }

class Operator {
 public:
  explicit Operator(const ConicData& d) : d_(d), by_block_(d.psd_sizes.size()) {
    for (int i = 0; i < d.rows(); ++i) {
      std::vector<std::vector<SymEntry>> split(d.psd_sizes.size());
      for (const SymEntry& e : d.psd_rows[i]) split[e.block].push_back(e);
      for (std::size_t k = 0; k < split.size(); ++k)
        if (!split[k].empty()) by_block_[k].push_back({i, std::move(split[k])});
    }
  }

  Vec apply(const Vec& x, const Blocks& X) const {
    Vec out = Vec::Zero(d_.rows());
    if (d_.lp_dim > 0) out += d_.lp_matrix * x;
    for (std::size_t k = 0; k < by_block_.size(); ++k) {
      for (const auto& [i, entries] : by_block_[k]) out(i) += dot(entries, X[k]);
    }
    return out;
  }

  void adjoint(const Vec& y, Vec& x, Blocks& X) const {
    x = d_.lp_dim > 0 ? Vec(d_.lp_matrix.transpose() * y) : Vec::Zero(0);
    X = zeros_like(d_.psd_sizes);
    for (std::size_t k = 0; k < by_block_.size(); ++k) {
      for (const auto& [i, entries] : by_block_[k]) {
        for (const SymEntry& e : entries) {
          X[k](e.row, e.col) += y(i) * e.value;
          if (e.row != e.col) X[k](e.col, e.row) += y(i) * e.value;
        }
      }
    }
  }

  /// M_ij = <A_i, D(A_j)> with D(W) = sym(X W Z^{-1}) on PSD blocks and
  /// x w / z on the orthant.
  Mat schur(const Vec& ratio, const Blocks& X, const Blocks& Zinv) const {
    const int m = d_.rows();
    Mat M = Mat::Zero(m, m);
    if (d_.lp_dim > 0) M.noalias() += d_.lp_matrix * ratio.asDiagonal() * d_.lp_matrix.transpose();
    for (std::size_t k = 0; k < by_block_.size(); ++k) {
      const int n = d_.psd_sizes[k];
      const auto& rows = by_block_[k];
      Mat T(n, n);
      Mat W(n, n);
      std::vector<char> used(n);
      for (const auto& [j, entries_j] : rows) {
        T.setZero();
        std::fill(used.begin(), used.end(), 0);
        for (const SymEntry& e : entries_j) {
          T.col(e.col) += e.value * X[k].col(e.row);
          used[e.col] = 1;
          if (e.row != e.col) {
            T.col(e.row) += e.value * X[k].col(e.col);
            used[e.row] = 1;
          }
        }
        W.setZero();
        for (int c = 0; c < n; ++c)
          if (used[c]) W.noalias() += T.col(c) * Zinv[k].row(c);
        for (const auto& [i, entries_i] : rows) {
          if (i > j) continue;
          double s = 0.0;
          for (const SymEntry& e : entries_i) {
            s += e.row == e.col ? e.value * W(e.row, e.row) : e.value * (W(e.row, e.col) + W(e.col, e.row));
          }
          M(i, j) += s;
        }
      }
    }
    for (int j = 0; j < m; ++j)
      for (int i = j + 1; i < m; ++i) M(i, j) = M(j, i);
    // The LP part is already symmetric; the PSD loop only filled i <= j.
    return M;
  }

 private:
  static double dot(const std::vector<SymEntry>& entries, const Mat& X) {
    double s = 0.0;
    for (const SymEntry& e : entries) s += (e.row == e.col ? 1.0 : 2.0) * e.value * X(e.row, e.col);
    return s;
  }

  struct Row {
    int index;
    std::vector<SymEntry> entries;
  };

  const ConicData& d_;
  std::vector<std::vector<Row>> by_block_;
};

struct Presolved {
  ConicData data;
  std::vector<int> kept;      // original row index per reduced row
  Vec scale;                  // per original row: reduced row = original / scale
  bool infeasible = false;
  Vec ray;                    // over original rows
  std::string message;
};

/// Normalizes rows, drops linearly dependent rows, and detects inconsistent
/// ones (which certify infeasibility directly).
Presolved presolve(const ConicData& in) {
  const int m = in.rows();
  Presolved out;
  out.scale = Vec::Ones(m);

  std::vector<int> offsets;
  int ncols = in.lp_dim;
  for (int n : in.psd_sizes) {
    offsets.push_back(ncols);
    ncols += n * (n + 1) / 2;
  }
  const double root2 = std::sqrt(2.0);
  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < m; ++i) {
    for (int c = 0; c < in.lp_dim; ++c)
      if (in.lp_matrix(i, c) != 0.0) trips.emplace_back(i, c, in.lp_matrix(i, c));
    for (const SymEntry& e : in.psd_rows[i]) {
      const int idx = offsets[e.block] + e.col * (e.col + 1) / 2 + e.row;
      trips.emplace_back(i, idx, e.row == e.col ? e.value : root2 * e.value);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> S(m, std::max(ncols, 1));
  S.setFromTriplets(trips.begin(), trips.end());
  Mat G = Mat(S * S.transpose());

  for (int i = 0; i < m; ++i) out.scale(i) = std::sqrt(std::max(G(i, i), 0.0));

  Vec bs = in.b;
  for (int i = 0; i < m; ++i) {
    if (out.scale(i) == 0.0) continue;
    bs(i) /= out.scale(i);
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (out.scale(i) > 0.0 && out.scale(j) > 0.0) G(i, j) /= out.scale(i) * out.scale(j);

  auto fail = [&](const Vec& ray_scaled, double residual, const std::string& why) {
    out.infeasible = true;
    out.ray = Vec::Zero(m);
    for (int i = 0; i < m; ++i)
      if (out.scale(i) > 0.0) out.ray(i) = ray_scaled(i) / out.scale(i);
    out.ray /= residual;
    out.message = why;
  };

  for (int i = 0; i < m; ++i) {
    if (out.scale(i) == 0.0 && std::abs(in.b(i)) > 1e-9) {
      Vec r = Vec::Zero(m);
      r(i) = 1.0;
      out.scale(i) = 1.0;
      fail(r, in.b(i), "constraint row with zero coefficients and nonzero right-hand side");
      out.ray(i) = 1.0 / in.b(i);
      return out;
    }
  }

  // Pivoted Cholesky on the normalized Gram matrix.
  std::vector<int> order;
  Mat L = Mat::Zero(m, m);
  Vec resid(m);
  for (int i = 0; i < m; ++i) resid(i) = out.scale(i) > 0.0 ? 1.0 : 0.0;
  std::vector<char> chosen(m, 0);
  for (int k = 0; k < m; ++k) {
    int best = -1;
    double best_val = kDependentRow;
    for (int i = 0; i < m; ++i)
      if (!chosen[i] && resid(i) > best_val) {
        best = i;
        best_val = resid(i);
      }
    if (best < 0) break;
    const double piv = std::sqrt(best_val);
    Vec col = G.col(best);
    if (k > 0) col.noalias() -= L.leftCols(k) * L.row(best).head(k).transpose();
    col /= piv;
    for (int i = 0; i < m; ++i)
      if (chosen[i]) col(i) = 0.0;
    col(best) = piv;
    L.col(k) = col;
    chosen[best] = 1;
    order.push_back(best);
    for (int i = 0; i < m; ++i)
      if (!chosen[i]) resid(i) -= col(i) * col(i);
  }
  const int r = static_cast<int>(order.size());
  Mat K(r, r);
  Vec bsel(r);
  for (int a = 0; a < r; ++a) {
    K.row(a) = L.row(order[a]).head(r);
    bsel(a) = bs(order[a]);
  }
  for (int i = 0; i < m; ++i) {
    if (chosen[i] || out.scale(i) == 0.0) continue;
    const Vec li = L.row(i).head(r).transpose();
    const Vec coeff = K.transpose().triangularView<Eigen::Upper>().solve(li);
    const double residual = bs(i) - coeff.dot(bsel);
    const double bound = 1e-7 * (1.0 + std::abs(bs(i)) + coeff.lpNorm<1>() * (bsel.size() ? bsel.lpNorm<Eigen::Infinity>() : 0.0));
    if (std::abs(residual) > bound) {
      Vec ray_scaled = Vec::Zero(m);
      ray_scaled(i) = 1.0;
      for (int a = 0; a < r; ++a) ray_scaled(order[a]) = -coeff(a);
      fail(ray_scaled, residual, "linearly dependent constraints with inconsistent right-hand sides");
      return out;
    }
  }

  std::sort(order.begin(), order.end());
  out.kept = order;
  ConicData& d = out.data;
  d.lp_dim = in.lp_dim;
  d.psd_sizes = in.psd_sizes;
  d.c_lp = in.c_lp;
  d.c_psd = in.c_psd;
  d.b.resize(r);
  d.lp_matrix.resize(r, in.lp_dim);
  d.psd_rows.resize(r);
  for (int a = 0; a < r; ++a) {
    const int i = order[a];
    const double s = out.scale(i);
    d.b(a) = in.b(i) / s;
    if (in.lp_dim > 0) d.lp_matrix.row(a) = in.lp_matrix.row(i) / s;
    for (SymEntry e : in.psd_rows[i]) {
      e.value /= s;
      d.psd_rows[a].push_back(e);
    }
  }
  return out;
}

class Solver {
 public:
  Solver(const ConicData& d, const SolverSettings& s) : d_(d), s_(s), A_(d) {
    nu_ = d.lp_dim;
    for (int n : d.psd_sizes) nu_ += n;
    bnorm_ = std::max(1.0, d.b.norm());
    cnorm_ = std::max(1.0, std::sqrt(d.c_lp.squaredNorm() + norm_sq(d.c_psd)));
  }

  ConicResult run() {
    Point p;
    p.x = Vec::Ones(d_.lp_dim);
    p.z = Vec::Ones(d_.lp_dim);
    for (int n : d_.psd_sizes) {
      p.X.push_back(Mat::Identity(n, n));
      p.Z.push_back(Mat::Identity(n, n));
    }
    p.y = Vec::Zero(d_.rows());

    ConicResult res;
    int stalls = 0;
    for (int it = 0;; ++it) {
      res.iterations = it;
      const Measures ms = measure(p);
      res.primal_residual = ms.pres;
      res.dual_residual = ms.dres;
      res.relative_gap = ms.gap;
      if (s_.verbose) {
        std::fprintf(stderr, "%3d pobj=% .9e dobj=% .9e pres=%.2e dres=%.2e gap=%.2e tau=%.2e kappa=%.2e mu=%.2e\n", it,
                     ms.pobj, ms.dobj, ms.pres, ms.dres, ms.gap, p.tau, p.kappa, ms.mu);
      }
      if (ms.pres <= s_.feasibility_tolerance && ms.dres <= s_.feasibility_tolerance && ms.gap <= s_.gap_tolerance) {
        return finish(p, SolveStatus::kOptimal, "optimal", res);
      }
      if (ms.by > 0.0 && ms.pinf <= s_.certificate_tolerance) {
        res.ray = p.y / ms.by;
        return finish(p, SolveStatus::kInfeasible, "primal infeasible", res);
      }
      if (ms.cx < 0.0 && ms.dinf <= s_.certificate_tolerance) {
        return finish(p, SolveStatus::kUnbounded, "dual infeasible (primal unbounded)", res);
      }
      if (it >= s_.max_iterations || stalls >= 5) {
        const double loose = 1e3;
        if (ms.pres <= loose * s_.feasibility_tolerance && ms.dres <= loose * s_.feasibility_tolerance &&
            ms.gap <= loose * s_.gap_tolerance) {
          return finish(p, SolveStatus::kOptimal, "optimal (reduced accuracy)", res);
        }
        if (ms.by > 0.0 && ms.pinf <= loose * s_.certificate_tolerance) {
          res.ray = p.y / ms.by;
          return finish(p, SolveStatus::kInfeasible, "primal infeasible (reduced accuracy)", res);
        }
        if (ms.cx < 0.0 && ms.dinf <= loose * s_.certificate_tolerance) {
          return finish(p, SolveStatus::kUnbounded, "dual infeasible (reduced accuracy)", res);
        }
        return finish(p, SolveStatus::kNumericalFailure, it >= s_.max_iterations ? "iteration limit" : "stalled", res);
      }

      const double alpha = step(p, ms.mu);
      if (!(alpha > 1e-8)) {
        ++stalls;
      } else {
        stalls = 0;
      }
      if (!std::isfinite(alpha)) return finish(p, SolveStatus::kNumericalFailure, "factorization failure", res);
    }
  }

 private:
  struct Measures {
    double pres, dres, gap, pobj, dobj, mu, by, cx, pinf, dinf;
  };

  struct Residuals {
    Vec rp;
    Vec rd_lp;
    Blocks Rd;
    double rg;
  };

  double c_dot(const Vec& x, const Blocks& X) const { return d_.c_lp.dot(x) + inner(d_.c_psd, X); }

  Residuals residuals(const Point& p) const {
    Residuals r;
    r.rp = d_.b * p.tau - A_.apply(p.x, p.X);
    Vec aty;
    Blocks ATY;
    A_.adjoint(p.y, aty, ATY);
    r.rd_lp = d_.c_lp * p.tau - aty - p.z;
    r.Rd.resize(ATY.size());
    for (std::size_t k = 0; k < ATY.size(); ++k) r.Rd[k] = d_.c_psd[k] * p.tau - ATY[k] - p.Z[k];
    r.rg = p.kappa + c_dot(p.x, p.X) - d_.b.dot(p.y);
    return r;
  }

  double mu_of(const Point& p) const { return (p.x.dot(p.z) + inner(p.X, p.Z) + p.tau * p.kappa) / (nu_ + 1.0); }

  Measures measure(const Point& p) const {
    const Residuals r = residuals(p);
    Measures m{};
    const double cx = c_dot(p.x, p.X);
    const double by = d_.b.dot(p.y);
    m.pres = r.rp.norm() / p.tau / bnorm_;
    m.dres = std::sqrt(r.rd_lp.squaredNorm() + norm_sq(r.Rd)) / p.tau / cnorm_;
    m.pobj = cx / p.tau;
    m.dobj = by / p.tau;
    m.gap = std::abs(m.pobj - m.dobj) / (1.0 + std::abs(m.pobj) + std::abs(m.dobj));
    m.mu = mu_of(p);
    m.by = by;
    m.cx = cx;
    // A^T y + Z = C tau - Rd.
    double sq = (d_.c_lp * p.tau - r.rd_lp).squaredNorm();
    for (std::size_t k = 0; k < r.Rd.size(); ++k) sq += (d_.c_psd[k] * p.tau - r.Rd[k]).squaredNorm();
    m.pinf = by > 0.0 ? std::sqrt(sq) / by : kInf;
    // A(X) = b tau - rp.
    m.dinf = cx < 0.0 ? (d_.b * p.tau - r.rp).norm() / (-cx) : kInf;
    return m;
  }

  // D(W) = sym(X W Z^{-1}) / x w / z.
  void scale_apply(const Vec& w, const Blocks& W, Vec& out, Blocks& OUT) const {
    out = ratio_.cwiseProduct(w);
    OUT.resize(W.size());
    for (std::size_t k = 0; k < W.size(); ++k) OUT[k] = sym(cur_->X[k] * W[k] * zinv_[k]);
  }

  bool factor(const Mat& M) {
    const int m = static_cast<int>(M.rows());
    llt_.compute(M);
    if (llt_.info() == Eigen::Success) return true;
    const double reg = 1e-13 * std::max(1.0, M.diagonal().cwiseAbs().maxCoeff());
    llt_.compute(M + reg * Mat::Identity(m, m));
    return llt_.info() == Eigen::Success;
  }

  Vec msolve(const Vec& rhs) const {
    if (rhs.size() == 0) return rhs;
    Vec sol = llt_.solve(rhs);
    const Vec corr = llt_.solve(rhs - M_ * sol);
    return sol + corr;
  }

  Direction direction(const Residuals& r, double eta, double sigma_mu, const Direction* aff) const {
    const Point& p = *cur_;
    Direction dir;
    // Rc' = sym((sigma mu I - corr) Z^{-1}) - X.
    Vec rc_lp = (Vec::Constant(d_.lp_dim, sigma_mu)).cwiseQuotient(p.z) - p.x;
    if (aff) rc_lp -= aff->dx.cwiseProduct(aff->dz).cwiseQuotient(p.z);
    Blocks Rc(p.X.size());
    for (std::size_t k = 0; k < p.X.size(); ++k) {
      Mat t = sigma_mu * zinv_[k];
      if (aff) t -= aff->dX[k] * aff->dZ[k] * zinv_[k];
      Rc[k] = sym(t) - p.X[k];
    }
    double r_tk = sigma_mu - p.tau * p.kappa;
    if (aff) r_tk -= aff->dtau * aff->dkappa;

    Vec drd_lp;
    Blocks DRd;
    scale_apply(r.rd_lp, r.Rd, drd_lp, DRd);
    const Vec rhs = eta * r.rp - A_.apply(rc_lp, Rc) + eta * A_.apply(drd_lp, DRd);
    const Vec pv = msolve(rhs);

    Vec atp;
    Blocks ATP;
    A_.adjoint(pv, atp, ATP);
    Vec datp;
    Blocks DATP;
    scale_apply(atp, ATP, datp, DATP);
    const Vec u_lp = rc_lp + datp - eta * drd_lp;
    Blocks U(p.X.size());
    for (std::size_t k = 0; k < U.size(); ++k) U[k] = Rc[k] + DATP[k] - eta * DRd[k];

    dir.dtau = (-eta * r.rg - r_tk / p.tau - c_dot(u_lp, U) + d_.b.dot(pv)) / denom_;
    dir.dkappa = (r_tk - p.kappa * dir.dtau) / p.tau;
    dir.dy = pv + q_ * dir.dtau;
    dir.dx = u_lp + v_lp_ * dir.dtau;
    dir.dX.resize(U.size());
    for (std::size_t k = 0; k < U.size(); ++k) dir.dX[k] = U[k] + V_[k] * dir.dtau;
    Vec aty;
    Blocks ATY;
    A_.adjoint(dir.dy, aty, ATY);
    dir.dz = d_.c_lp * dir.dtau - aty + eta * r.rd_lp;
    dir.dZ.resize(U.size());
    for (std::size_t k = 0; k < U.size(); ++k) dir.dZ[k] = sym(d_.c_psd[k] * dir.dtau - ATY[k] + eta * r.Rd[k]);
    return dir;
  }

  double max_alpha(const Point& p, const Direction& dir) const {
    double a = std::min({max_step(p.x, dir.dx), max_step(p.z, dir.dz), max_step(p.tau, dir.dtau),
                         max_step(p.kappa, dir.dkappa)});
    for (std::size_t k = 0; k < p.X.size(); ++k) {
      a = std::min(a, max_step(p.X[k], dir.dX[k]));
      a = std::min(a, max_step(p.Z[k], dir.dZ[k]));
    }
    return a;
  }

  /// One predictor-corrector step; returns the step length (NaN on failure).
  double step(Point& p, double mu) {
    cur_ = &p;
    ratio_ = p.x.cwiseQuotient(p.z);
    zinv_.resize(p.Z.size());
    for (std::size_t k = 0; k < p.Z.size(); ++k) {
      Eigen::LLT<Mat> llt(p.Z[k]);
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
      zinv_[k] = sym(llt.solve(Mat::Identity(p.Z[k].rows(), p.Z[k].cols())));
    }
    M_ = A_.schur(ratio_, p.X, zinv_);
    if (!factor(M_)) return std::numeric_limits<double>::quiet_NaN();

    Vec dc_lp;
    Blocks DC;
    scale_apply(d_.c_lp, d_.c_psd, dc_lp, DC);
    q_ = msolve(d_.b + A_.apply(dc_lp, DC));
    Vec atq;
    Blocks ATQ;
    A_.adjoint(q_, atq, ATQ);
    Vec datq;
    Blocks DATQ;
    scale_apply(atq, ATQ, datq, DATQ);
    v_lp_ = datq - dc_lp;
    V_.resize(DC.size());
    for (std::size_t k = 0; k < DC.size(); ++k) V_[k] = DATQ[k] - DC[k];
    denom_ = -p.kappa / p.tau + c_dot(v_lp_, V_) - d_.b.dot(q_);

    const Residuals r = residuals(p);
    const Direction aff = direction(r, 1.0, 0.0, nullptr);
    const double a_aff = std::min(1.0, max_alpha(p, aff));
    Point trial = p;
    advance(trial, aff, a_aff);
    const double mu_aff = mu_of(trial);
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const Direction dir = direction(r, 1.0 - sigma, sigma * mu, &aff);
    const double alpha = std::min(1.0, kStepFraction * max_alpha(p, dir));
    if (!std::isfinite(dir.dtau)) return std::numeric_limits<double>::quiet_NaN();
    advance(p, dir, alpha);
    return alpha;
  }

  static void advance(Point& p, const Direction& d, double a) {
    p.x += a * d.dx;
    p.z += a * d.dz;
    p.y += a * d.dy;
    for (std::size_t k = 0; k < p.X.size(); ++k) {
      p.X[k] = sym(p.X[k] + a * d.dX[k]);
      p.Z[k] = sym(p.Z[k] + a * d.dZ[k]);
    }
    p.tau += a * d.dtau;
    p.kappa += a * d.dkappa;
  }

  ConicResult& finish(const Point& p, SolveStatus status, const char* msg, ConicResult& res) const {
    res.status = status;
    res.message = msg;
    const double t = status == SolveStatus::kOptimal ? p.tau : 1.0;
    res.x_lp = p.x / t;
    res.x_psd.clear();
    for (const Mat& X : p.X) res.x_psd.push_back(X / t);
    res.y = p.y / t;
    res.primal_objective = c_dot(p.x, p.X) / t;
    res.dual_objective = d_.b.dot(p.y) / t;
    return res;
  }

  const ConicData& d_;
  SolverSettings s_;
  Operator A_;
  double nu_ = 0.0;
  double bnorm_ = 1.0;
  double cnorm_ = 1.0;

  const Point* cur_ = nullptr;
  Vec ratio_;
  Blocks zinv_;
  Mat M_;
  Eigen::LLT<Mat> llt_;
  Vec q_;
  Vec v_lp_;
  Blocks V_;
  double denom_ = -1.0;
};

}  // namespace

ConicResult solve_conic(const ConicData& data, const SolverSettings& settings) {
  Presolved pre = presolve(data);
  ConicResult res;
  if (pre.infeasible) {
    res.status = SolveStatus::kInfeasible;
    res.ray = pre.ray;
    res.message = pre.message;
    res.x_lp = Vec::Zero(data.lp_dim);
    for (int n : data.psd_sizes) res.x_psd.push_back(Mat::Zero(n, n));
    res.y = Vec::Zero(data.rows());
    return res;
  }
  Solver solver(pre.data, settings);
  ConicResult inner_res = solver.run();
  res = inner_res;
  const int m = data.rows();
  res.y = Vec::Zero(m);
  res.ray = Vec::Zero(m);
  for (std::size_t a = 0; a < pre.kept.size(); ++a) {
    const int i = pre.kept[a];
    res.y(i) = inner_res.y(static_cast<Eigen::Index>(a)) / pre.scale(i);
    if (inner_res.ray.size() > 0) res.ray(i) = inner_res.ray(static_cast<Eigen::Index>(a)) / pre.scale(i);
  }
  return res;
}

}  // namespace picomm::detail
