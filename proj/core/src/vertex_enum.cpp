#include <algorithm>

#include <boost/dynamic_bitset.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "picomm/contextuality.hpp"

namespace picomm {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RVec = std::vector<Rational>;
using Bits = boost::dynamic_bitset<>;

Rational to_rational(double w) {
  // Equivalence weights are short binary fractions in practice; convert the
  // double exactly.
  return Rational(w);
}

void normalize(RVec& v) {
  for (const Rational& x : v) {
    if (x != 0) {
      const Rational scale = abs(x);
      for (Rational& y : v) y /= scale;
      return;
    }
  }
}

/// Basis of {z : A z = 0} by reduced row echelon form.
std::vector<RVec> null_space(std::vector<RVec> A, std::size_t dim) {
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < dim && row < A.size(); ++col) {
    std::size_t piv = row;
    while (piv < A.size() && A[piv][col] == 0) ++piv;
    if (piv == A.size()) continue;
    std::swap(A[row], A[piv]);
    const Rational inv = 1 / A[row][col];
    for (Rational& x : A[row]) x *= inv;
    for (std::size_t r = 0; r < A.size(); ++r) {
      if (r == row || A[r][col] == 0) continue;
      const Rational f = A[r][col];
      for (std::size_t c = 0; c < dim; ++c) A[r][c] -= f * A[row][c];
    }
    pivot_col.push_back(static_cast<int>(col));
    ++row;
  }
  std::vector<char> is_pivot(dim, 0);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = 1;
  std::vector<RVec> basis;
  for (std::size_t free = 0; free < dim; ++free) {
    if (is_pivot[free]) continue;
    RVec v(dim, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[static_cast<std::size_t>(pivot_col[r])] = -A[r][free];
    basis.push_back(v);
  }
  return basis;
}

struct Ray {
  RVec z;
  Bits zeros;
};

/// Vertices of {x >= 0, A_eq [x; -1] = 0} via the double description method on
/// the homogenized cone {(x, t) : x >= 0, t >= 0, A_eq (x, t) = 0}.
std::vector<RVec> double_description(const std::vector<RVec>& equalities, std::size_t D, std::size_t max_rays) {
  const std::size_t dim = D + 1;
  std::vector<RVec> lineality = null_space(equalities, dim);
  std::vector<Ray> rays;
  const std::size_t n_ineq = dim;  // x_i >= 0 then t >= 0
  for (std::size_t h = 0; h < n_ineq; ++h) {
    auto value = [h](const RVec& v) { return v[h]; };
    auto pivot = std::find_if(lineality.begin(), lineality.end(), [&](const RVec& l) { return value(l) != 0; });
    if (pivot != lineality.end()) {
      RVec l = *pivot;
      lineality.erase(pivot);
      if (value(l) < 0)
        for (Rational& x : l) x = -x;
      const Rational al = value(l);
      for (RVec& other : lineality) {
        const Rational f = value(other) / al;
        if (f != 0)
          for (std::size_t c = 0; c < dim; ++c) other[c] -= f * l[c];
      }
      for (Ray& r : rays) {
        const Rational f = value(r.z) / al;
        if (f != 0)
          for (std::size_t c = 0; c < dim; ++c) r.z[c] -= f * l[c];
        r.zeros.set(h);
      }
      normalize(l);
      Bits zeros(n_ineq);
      for (std::size_t prev = 0; prev < h; ++prev) zeros.set(prev);
      rays.push_back({l, std::move(zeros)});
      continue;
    }

    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      const Rational v = value(rays[i].z);
      if (v > 0) {
        pos.push_back(i);
        next.push_back(rays[i]);
      } else if (v < 0) {
        neg.push_back(i);
      } else {
        next.push_back(rays[i]);
        next.back().zeros.set(h);
      }
    }
    for (std::size_t p : pos) {
      for (std::size_t n : neg) {
        const Bits common = rays[p].zeros & rays[n].zeros;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r == p || r == n) continue;
          if (common.is_subset_of(rays[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        const Rational vp = value(rays[p].z);
        const Rational vn = value(rays[n].z);
        RVec z(dim);
        for (std::size_t c = 0; c < dim; ++c) z[c] = vp * rays[n].z[c] - vn * rays[p].z[c];
        normalize(z);
        Bits zeros = common;
        zeros.set(h);
        next.push_back({std::move(z), std::move(zeros)});
        if (next.size() > max_rays) throw BudgetExceeded("vertex enumeration exceeded its size guard", static_cast<double>(next.size()));
      }
    }
    rays = std::move(next);
  }
  if (!lineality.empty()) throw ConstraintViolation("response-function polytope is unbounded");

  std::vector<RVec> vertices;
  for (const Ray& r : rays) {
    const Rational t = r.z[D];
    if (t == 0) throw ConstraintViolation("response-function polytope is unbounded");
    RVec v(r.z.begin(), r.z.begin() + static_cast<std::ptrdiff_t>(D));
    for (Rational& x : v) x /= t;
    vertices.push_back(std::move(v));
  }
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  return vertices;
}

}  // namespace

std::size_t VertexSet::column(const EffectKey& key) const {
  auto it = std::find(columns.begin(), columns.end(), key);
  if (it == columns.end()) throw LookupError("vertex set has no column for " + to_string(key.measurement) + " outcome " + std::to_string(key.outcome));
  return static_cast<std::size_t>(it - columns.begin());
}

VertexSet enumerate_vertices(const TaskSpec& task, const std::vector<EffectEquivalence>& effect_equivalences,
                             const VertexEnumerationOptions& options) {
  const TaskLayout layout(task);
  VertexSet out;
  out.task = task;
  std::vector<std::size_t> offset;
  for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
    offset.push_back(out.columns.size());
    for (int k : layout.outcomes(j)) out.columns.push_back({layout.measurements()[j], k});
  }
  const std::size_t D = out.columns.size();

  if (effect_equivalences.empty() && !options.force_double_description) {
    double count = 1.0;
    for (std::size_t j = 0; j < layout.measurements().size(); ++j) count *= static_cast<double>(layout.outcome_count(j));
    if (count > static_cast<double>(options.max_vertices)) throw BudgetExceeded("vertex enumeration exceeded its size guard", count);
    std::vector<std::size_t> choice(layout.measurements().size(), 0);
    for (std::size_t v = 0; v < static_cast<std::size_t>(count); ++v) {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(D));
      std::vector<std::string> ex(D, "0");
      for (std::size_t j = 0; j < choice.size(); ++j) {
        x(static_cast<Eigen::Index>(offset[j] + choice[j])) = 1.0;
        ex[offset[j] + choice[j]] = "1";
      }
      out.vertices.push_back(std::move(x));
      out.exact.push_back(std::move(ex));
      for (std::size_t j = choice.size(); j-- > 0;) {
        if (++choice[j] < layout.outcome_count(j)) break;
        choice[j] = 0;
      }
    }
    return out;
  }

  std::vector<RVec> eqs;
  for (std::size_t j = 0; j < layout.measurements().size(); ++j) {
    RVec row(D + 1, Rational(0));
    for (std::size_t k = 0; k < layout.outcome_count(j); ++k) row[offset[j] + k] = 1;
    row[D] = -1;
    eqs.push_back(row);
  }
  for (const EffectEquivalence& eq : effect_equivalences) {
    validate_equivalence(eq, layout);
    RVec row(D + 1, Rational(0));
    for (const auto& [key, w] : signed_coefficients(eq)) {
      const std::size_t j = layout.measurement_index(key.measurement);
      row[offset[j] + layout.outcome_index(j, key.outcome)] += to_rational(w);
    }
    eqs.push_back(row);
  }
  const std::vector<RVec> verts = double_description(eqs, D, options.max_vertices);
  if (verts.size() > options.max_vertices) throw BudgetExceeded("vertex enumeration exceeded its size guard", static_cast<double>(verts.size()));
  for (const RVec& v : verts) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(D));
    std::vector<std::string> ex;
    for (std::size_t c = 0; c < D; ++c) {
      x(static_cast<Eigen::Index>(c)) = static_cast<double>(v[c]);
      ex.push_back(v[c].str());
    }
    out.vertices.push_back(std::move(x));
    out.exact.push_back(std::move(ex));
  }
  return out;
}

}  // namespace picomm
