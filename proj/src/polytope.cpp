#include "invsched/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "invsched/errors.hpp"
#include "invsched/lp.hpp"

namespace invsched {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kZeroRowNorm = 1e-12;
constexpr double kInfinity = std::numeric_limits<double>::infinity();

double inf_norm(const VectorXd& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void require_same_dim(const HPolytope& P, const HPolytope& Q, const char* op) {
  if (P.dim() != Q.dim()) {
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(P.dim()) +
                            " and " + std::to_string(Q.dim()) + " differ");
  }
}

void require_vector_dim(const HPolytope& P, const VectorXd& v, const char* op) {
  if (v.size() != P.dim()) {
    throw DimensionMismatch(std::string(op) + ": vector of length " + std::to_string(v.size()) +
                            " for a polytope of dimension " + std::to_string(P.dim()));
  }
}

// Unit-norm copy of the nonzero rows; `origin` maps back to rows of the input.
struct UnitRows {
  MatrixXd A;
  VectorXd b;
  std::vector<int> origin;
  bool trivially_empty = false;
};

UnitRows unit_rows(const HPolytope& P) {
  UnitRows out;
  std::vector<int> keep;
  for (int i = 0; i < P.rows(); ++i) {
    const double norm = P.H().row(i).norm();
    if (norm <= kZeroRowNorm) {
      if (P.h()[i] < -kRedundancyTol) out.trivially_empty = true;
      continue;
    }
    keep.push_back(i);
  }
  out.A.resize(static_cast<Index>(keep.size()), P.dim());
  out.b.resize(static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    const double norm = P.H().row(keep[k]).norm();
    out.A.row(static_cast<Index>(k)) = P.H().row(keep[k]) / norm;
    out.b[static_cast<Index>(k)] = P.h()[keep[k]] / norm;
  }
  out.origin = std::move(keep);
  return out;
}

lp::Solution maximize(const MatrixXd& A, const VectorXd& b, const VectorXd& c) {
  return lp::solve(lp::Problem{c, A, b});
}

enum RowState : char { kUnknown, kFacet, kRedundant };

// Redundancy machinery over a fixed set of unit rows.
class RedundancyPruner {
 public:
  RedundancyPruner(const MatrixXd& A, const VectorXd& b) : A_(A), b_(b) {}

  // Optimum of max a_i.x over `active` rows plus a_i.x <= b_i + 1.
  lp::Solution relaxed_max(const std::vector<int>& active, int i) const {
    const Index n = static_cast<Index>(active.size());
    MatrixXd M(n + 1, A_.cols());
    VectorXd rhs(n + 1);
    for (Index k = 0; k < n; ++k) {
      M.row(k) = A_.row(active[static_cast<std::size_t>(k)]);
      rhs[k] = b_[active[static_cast<std::size_t>(k)]];
    }
    M.row(n) = A_.row(i);
    rhs[n] = b_[i] + 1.0;
    lp::Solution sol = maximize(M, rhs, A_.row(i).transpose());
    if (!sol.optimal()) {
      throw NumericalFailure(std::string("redundancy LP was ") + lp::to_string(sol.status));
    }
    return sol;
  }

  bool implied_value(double value, int i) const {
    return value <= b_[i] + kRedundancyTol * (1.0 + std::abs(b_[i]));
  }

  // Row i against every row of `alive` except itself.
  bool implied_by(const std::vector<int>& alive, int i) const {
    std::vector<int> others;
    others.reserve(alive.size());
    for (int k : alive) {
      if (k != i) others.push_back(k);
    }
    return implied_value(relaxed_max(others, i).value, i);
  }

  std::vector<int> sequential(std::vector<int> alive) const {
    for (std::size_t pos = 0; pos < alive.size();) {
      const int i = alive[pos];
      if (implied_by(alive, i)) {
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(pos));
      } else {
        ++pos;
      }
    }
    return alive;
  }

  // Clarkson's output-sensitive scheme: LPs run only over rows already known
  // to be facets; a violated candidate is resolved by shooting a ray from an
  // interior point, whose first uniquely-hit row is a facet.
  std::vector<int> clarkson(const std::vector<int>& candidates, const VectorXd& interior,
                            double radius) const {
    std::vector<char> state(static_cast<std::size_t>(A_.rows()), kUnknown);
    std::vector<int> facets;
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> normal;

    auto alive_rows = [&] {
      std::vector<int> alive;
      for (int k : candidates) {
        if (state[k] != kRedundant) alive.push_back(k);
      }
      return alive;
    };
    auto mark_facet = [&](int k) {
      state[k] = kFacet;
      facets.push_back(k);
    };

    for (int i : candidates) {
      while (state[i] == kUnknown) {
        const lp::Solution sol = relaxed_max(facets, i);
        if (implied_value(sol.value, i)) {
          state[i] = kRedundant;
          break;
        }

        std::vector<int> hits;
        for (int attempt = 0; attempt < 4 && hits.size() != 1; ++attempt) {
          VectorXd origin = interior;
          if (attempt > 0) {
            VectorXd offset(interior.size());
            for (Index c = 0; c < offset.size(); ++c) offset[c] = normal(rng);
            origin += 0.25 * radius * offset.normalized();
          }
          hits = first_hits(candidates, state, origin, sol.point - origin);
        }

        if (hits.size() == 1 && state[hits.front()] == kUnknown) {
          mark_facet(hits.front());
          continue;
        }

        // Degenerate ray: decide the tied rows exactly.
        bool progress = false;
        for (int r : hits) {
          if (state[r] != kUnknown) continue;
          if (implied_by(alive_rows(), r)) {
            state[r] = kRedundant;
          } else {
            mark_facet(r);
          }
          progress = true;
        }
        if (!progress && state[i] == kUnknown) {
          if (implied_by(alive_rows(), i)) {
            state[i] = kRedundant;
          } else {
            mark_facet(i);
          }
        }
      }
    }

    std::sort(facets.begin(), facets.end());
    return sequential(std::move(facets));
  }

 private:
  std::vector<int> first_hits(const std::vector<int>& candidates, const std::vector<char>& state,
                              const VectorXd& origin, const VectorXd& direction) const {
    double best = kInfinity;
    std::vector<std::pair<int, double>> hit_times;
    for (int k : candidates) {
      if (state[k] == kRedundant) continue;
      const double rate = A_.row(k).dot(direction);
      if (rate <= 0.0) continue;
      const double t = (b_[k] - A_.row(k).dot(origin)) / rate;
      hit_times.emplace_back(k, t);
      best = std::min(best, t);
    }
    std::vector<int> hits;
    for (const auto& [k, t] : hit_times) {
      if (t <= best + 1e-10) hits.push_back(k);
    }
    return hits;
  }

  const MatrixXd& A_;
  const VectorXd& b_;
};

// Drops rows whose unit normal matches an earlier one to ~1e-11, keeping the smallest rhs.
std::vector<int> dedupe(const UnitRows& rows) {
  std::map<std::vector<long long>, int> seen;
  std::vector<int> order;
  for (Index i = 0; i < rows.A.rows(); ++i) {
    std::vector<long long> key(static_cast<std::size_t>(rows.A.cols()));
    for (Index c = 0; c < rows.A.cols(); ++c) {
      key[static_cast<std::size_t>(c)] = std::llround(rows.A(i, c) * 1e11);
    }
    auto [it, inserted] = seen.emplace(std::move(key), static_cast<int>(i));
    if (inserted) {
      order.push_back(static_cast<int>(i));
    } else if (rows.b[i] < rows.b[it->second]) {
      std::replace(order.begin(), order.end(), it->second, static_cast<int>(i));
      it->second = static_cast<int>(i);
    }
  }
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

HPolytope::HPolytope(Eigen::MatrixXd H, Eigen::VectorXd h) : H_(std::move(H)), h_(std::move(h)) {
  if (H_.rows() != h_.size()) {
    throw DimensionMismatch("H has " + std::to_string(H_.rows()) + " rows but h has length " +
                            std::to_string(h_.size()));
  }
  if (H_.cols() < 1) throw std::invalid_argument("polytope dimension must be positive");
  if (!H_.allFinite() || !h_.allFinite()) {
    throw std::invalid_argument("polytope data must be finite");
  }
}

HPolytope HPolytope::universe(int dim) { return HPolytope(MatrixXd(0, dim), VectorXd(0)); }

HPolytope HPolytope::empty(int dim) {
  return HPolytope(MatrixXd::Zero(1, dim), VectorXd::Constant(1, -1.0));
}

HPolytope HPolytope::box(const VectorXd& lo, const VectorXd& hi) {
  if (lo.size() != hi.size()) throw DimensionMismatch("box bounds differ in length");
  const Index n = lo.size();
  MatrixXd H(2 * n, n);
  H << MatrixXd::Identity(n, n), -MatrixXd::Identity(n, n);
  VectorXd h(2 * n);
  h << hi, -lo;
  return HPolytope(std::move(H), std::move(h));
}

HPolytope HPolytope::box(int dim, double lo, double hi) {
  return box(VectorXd::Constant(dim, lo), VectorXd::Constant(dim, hi));
}

bool contains(const HPolytope& P, const VectorXd& x, double tol) {
  require_vector_dim(P, x, "contains");
  if (P.rows() == 0) return true;
  const double slack = tol * (1.0 + inf_norm(P.h()));
  return ((P.H() * x - P.h()).array() <= slack).all();
}

bool is_empty(const HPolytope& P) {
  for (int i = 0; i < P.rows(); ++i) {
    if (P.H().row(i).norm() <= kZeroRowNorm && P.h()[i] < -kRedundancyTol) return true;
  }
  return maximize(P.H(), P.h(), VectorXd::Zero(P.dim())).status == lp::Status::Infeasible;
}

HPolytope intersect(const HPolytope& P, const HPolytope& Q) {
  require_same_dim(P, Q, "intersect");
  MatrixXd H(P.rows() + Q.rows(), P.dim());
  H << P.H(), Q.H();
  VectorXd h(P.rows() + Q.rows());
  h << P.h(), Q.h();
  return HPolytope(std::move(H), std::move(h));
}

SupportPoint support_point(const HPolytope& P, const VectorXd& c) {
  require_vector_dim(P, c, "support");
  const lp::Solution sol = maximize(P.H(), P.h(), c);
  switch (sol.status) {
    case lp::Status::Infeasible:
      throw EmptySet("support of an empty polytope");
    case lp::Status::Unbounded:
      return {kInfinity, VectorXd()};
    case lp::Status::Optimal:
      break;
  }
  return {sol.value, sol.point};
}

double support(const HPolytope& P, const VectorXd& c) { return support_point(P, c).value; }

HPolytope eliminate(const HPolytope& P, int coordinate) {
  if (coordinate < 0 || coordinate >= P.dim()) {
    throw std::out_of_range("eliminate: coordinate " + std::to_string(coordinate) +
                            " out of range");
  }
  if (P.dim() < 2) throw std::invalid_argument("eliminate: cannot drop the only coordinate");

  const int d = P.dim();
  std::vector<int> pos, neg, zero;
  for (int i = 0; i < P.rows(); ++i) {
    const double a = P.H()(i, coordinate);
    const double scale = P.H().row(i).cwiseAbs().maxCoeff();
    if (a > 1e-12 * scale) {
      pos.push_back(i);
    } else if (a < -1e-12 * scale) {
      neg.push_back(i);
    } else {
      zero.push_back(i);
    }
  }

  auto drop_column = [&](const Eigen::RowVectorXd& row) {
    Eigen::RowVectorXd out(d - 1);
    out << row.head(coordinate), row.tail(d - 1 - coordinate);
    return out;
  };

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  auto push = [&](const Eigen::RowVectorXd& row, double value) {
    const double norm = row.norm();
    if (norm <= kZeroRowNorm) {
      if (value < -kRedundancyTol * (1.0 + std::abs(value))) {
        rows.assign(1, Eigen::RowVectorXd::Zero(d - 1));
        rhs.assign(1, -1.0);
        return false;
      }
      return true;
    }
    rows.push_back(row / norm);
    rhs.push_back(value / norm);
    return true;
  };

  for (int i : zero) {
    if (!push(drop_column(P.H().row(i)), P.h()[i])) return HPolytope::empty(d - 1);
  }
  for (int p : pos) {
    const double ap = P.H()(p, coordinate);
    for (int q : neg) {
      const double aq = -P.H()(q, coordinate);
      const Eigen::RowVectorXd combined = P.H().row(p) / ap + P.H().row(q) / aq;
      if (!push(drop_column(combined), P.h()[p] / ap + P.h()[q] / aq)) {
        return HPolytope::empty(d - 1);
      }
    }
  }

  MatrixXd H(static_cast<Index>(rows.size()), d - 1);
  VectorXd h(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    H.row(static_cast<Index>(k)) = rows[k];
    h[static_cast<Index>(k)] = rhs[k];
  }
  return HPolytope(std::move(H), std::move(h));
}

HPolytope project(const HPolytope& P, std::span<const int> keep) {
  if (keep.empty()) throw std::invalid_argument("project: keep set is empty");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= P.dim() || (k > 0 && keep[k] <= keep[k - 1])) {
      throw std::invalid_argument(
          "project: keep must be strictly increasing indices within the dimension");
    }
  }
  const int target_dim = static_cast<int>(keep.size());
  if (target_dim == P.dim()) return P;
  if (is_empty(P)) return HPolytope::empty(target_dim);

  // columns[c] = original index of the current column c
  std::vector<int> columns(static_cast<std::size_t>(P.dim()));
  for (int c = 0; c < P.dim(); ++c) columns[static_cast<std::size_t>(c)] = c;
  auto kept = [&](int original) { return std::binary_search(keep.begin(), keep.end(), original); };

  HPolytope current = P;
  while (static_cast<int>(columns.size()) > target_dim) {
    // Eliminate the coordinate that generates the fewest new rows.
    int choice = -1;
    long best_growth = std::numeric_limits<long>::max();
    for (int c = 0; c < current.dim(); ++c) {
      if (kept(columns[static_cast<std::size_t>(c)])) continue;
      long pos = 0, neg = 0;
      for (int i = 0; i < current.rows(); ++i) {
        const double a = current.H()(i, c);
        if (a > 0.0) ++pos;
        if (a < 0.0) ++neg;
      }
      const long growth = pos * neg - pos - neg;
      if (growth < best_growth) {
        best_growth = growth;
        choice = c;
      }
    }
    current = eliminate(current, choice);
    columns.erase(columns.begin() + choice);
    if (is_empty(current)) return HPolytope::empty(target_dim);
    current = remove_redundancies(current);
  }
  return current;
}

HPolytope remove_redundancies(const HPolytope& P) {
  const UnitRows rows = unit_rows(P);
  if (rows.trivially_empty) throw EmptySet("remove_redundancies: polytope is empty");
  const std::optional<Ball> ball = chebyshev_ball(P);
  if (!ball) throw EmptySet("remove_redundancies: polytope is empty");
  if (rows.A.rows() == 0) return HPolytope::universe(P.dim());

  const std::vector<int> candidates = dedupe(rows);
  const RedundancyPruner pruner(rows.A, rows.b);
  const std::vector<int> survivors =
      ball->radius > 1e-7 ? pruner.clarkson(candidates, ball->center, ball->radius)
                          : pruner.sequential(candidates);

  MatrixXd H(static_cast<Index>(survivors.size()), P.dim());
  VectorXd h(static_cast<Index>(survivors.size()));
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    const int original = rows.origin[static_cast<std::size_t>(survivors[k])];
    H.row(static_cast<Index>(k)) = P.H().row(original);
    h[static_cast<Index>(k)] = P.h()[original];
  }
  return HPolytope(std::move(H), std::move(h));
}

HPolytope pontryagin_diff(const HPolytope& P, const HPolytope& S) {
  require_same_dim(P, S, "pontryagin_diff");
  if (is_empty(P)) throw EmptySet("pontryagin_diff: minuend is empty");
  if (is_empty(S)) throw EmptySet("pontryagin_diff: subtrahend is empty");
  VectorXd h = P.h();
  for (int i = 0; i < P.rows(); ++i) {
    const double s = support(S, P.H().row(i).transpose());
    if (std::isinf(s)) return HPolytope::empty(P.dim());
    h[i] -= s;
  }
  return HPolytope(P.H(), std::move(h));
}

bool is_subset(const HPolytope& P, const HPolytope& Q, double tol) {
  require_same_dim(P, Q, "is_subset");
  if (is_empty(P)) return true;
  if (is_empty(Q)) return false;
  const UnitRows rows = unit_rows(Q);
  for (Index i = 0; i < rows.A.rows(); ++i) {
    const double s = support(P, rows.A.row(i).transpose());
    if (s > rows.b[i] + tol * (1.0 + std::abs(rows.b[i]))) return false;
  }
  return true;
}

bool equals(const HPolytope& P, const HPolytope& Q, double tol) {
  require_same_dim(P, Q, "equals");
  return is_subset(P, Q, tol) && is_subset(Q, P, tol);
}

bool is_bounded(const HPolytope& P) {
  if (is_empty(P)) return false;
  for (int c = 0; c < P.dim(); ++c) {
    const VectorXd e = VectorXd::Unit(P.dim(), c);
    if (std::isinf(support(P, e)) || std::isinf(support(P, -e))) return false;
  }
  return true;
}

std::optional<Ball> chebyshev_ball(const HPolytope& P, double radius_cap) {
  const UnitRows rows = unit_rows(P);
  if (rows.trivially_empty) return std::nullopt;
  const Index m = rows.A.rows();
  const Index d = P.dim();
  MatrixXd M = MatrixXd::Zero(m + 1, d + 1);
  VectorXd rhs(m + 1);
  M.topLeftCorner(m, d) = rows.A;
  M.col(d).head(m).setOnes();
  rhs.head(m) = rows.b;
  M(m, d) = 1.0;
  rhs[m] = radius_cap;
  const lp::Solution sol = maximize(M, rhs, VectorXd::Unit(d + 1, d));
  if (!sol.optimal()) {
    throw NumericalFailure(std::string("Chebyshev-ball LP was ") + lp::to_string(sol.status));
  }
  const double radius = sol.point[d];
  if (radius < 0.0 && is_empty(P)) return std::nullopt;
  return Ball{sol.point.head(d), std::max(radius, 0.0)};
}

}  // namespace invsched
