// Copyright 2026 the optiloop authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Bounded-variable primal revised simplex. Rows are kept as equalities
// against logical (slack) columns whose bounds carry the right-hand side,
// so the basis always has one column per row. The basis is held as a
// sparse LU factorization refreshed periodically, with product-form eta
// updates in between. A composite phase 1 drives the total bound
// violation of the basic variables to zero, then the same machinery
// minimizes the true cost. The engine is resident: bounds can be edited
// between solves and each solve restarts from the previous basis.

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <vector>

#include "optiloop/lp.hpp"

namespace optiloop::lp {

namespace {

constexpr double kFeasTol = 1e-7;   // per-variable violation band (scaled)
constexpr double kOptTol = 1e-7;    // reduced-cost tolerance (scaled)
constexpr double kZeroTol = 1e-13;

enum class VarStat : char { Basic, Lower, Upper, Free, Fixed };

struct Eta {
  int pos;
  double pivot;
  std::vector<std::pair<int, double>> nz;  // excludes the pivot entry
};

double pow2_round(double v) {
  if (!(v > 0) || !std::isfinite(v)) return 1.0;
  return std::exp2(std::round(std::log2(v)));
}

}  // namespace

struct IncrementalSimplex::Impl {
  Lp p;  // owned copy; bounds editable

  int m = 0, n = 0, N = 0;

  // scaled structural matrix, CSC
  std::vector<int> cstart, rindex;
  std::vector<double> cval;
  std::vector<double> lo, hi, cost;   // size N (slacks appended)
  std::vector<double> rscale, cscale;

  std::vector<VarStat> stat;
  std::vector<double> x;
  std::vector<int> basis;
  std::vector<int> basis_pos;
  bool has_state = false;

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  bool has_factor = false;
  std::vector<Eta> etas;

  long iters = 0;
  long degen_streak = 0;
  bool bland = false;
  int price_cursor = 0;
  std::vector<double> last_y;

  explicit Impl(const Lp& problem) : p(problem) {
    m = p.num_rows();
    n = p.num_cols();
    N = n + m;
    compute_scaling();
    cstart.assign(n + 1, 0);
    rindex.reserve(p.row_index.size());
    cval.reserve(p.value.size());
    for (int j = 0; j < n; ++j) {
      for (int k = p.col_start[j]; k < p.col_start[j + 1]; ++k) {
        const int r = p.row_index[k];
        const double v = rscale[r] * p.value[k] * cscale[j];
        if (v == 0.0) continue;
        rindex.push_back(r);
        cval.push_back(v);
      }
      cstart[j + 1] = static_cast<int>(rindex.size());
    }
    lo.assign(N, 0.0);
    hi.assign(N, 0.0);
    cost.assign(N, 0.0);
    for (int j = 0; j < n; ++j) cost[j] = p.obj[j] * cscale[j];
    refresh_bounds();
  }

  void compute_scaling() {
    rscale.assign(m, 1.0);
    cscale.assign(n, 1.0);
    for (int pass = 0; pass < 3; ++pass) {
      std::vector<double> rmax(m, 0.0), rmin(m, kInf);
      for (int j = 0; j < n; ++j)
        for (int k = p.col_start[j]; k < p.col_start[j + 1]; ++k) {
          const int r = p.row_index[k];
          const double a = std::abs(p.value[k]) * rscale[r] * cscale[j];
          if (a == 0.0) continue;
          rmax[r] = std::max(rmax[r], a);
          rmin[r] = std::min(rmin[r], a);
        }
      for (int r = 0; r < m; ++r)
        if (rmax[r] > 0) rscale[r] *= pow2_round(1.0 / std::sqrt(rmax[r] * rmin[r]));
      for (int j = 0; j < n; ++j) {
        double cmax = 0.0, cmin = kInf;
        for (int k = p.col_start[j]; k < p.col_start[j + 1]; ++k) {
          const double a = std::abs(p.value[k]) * rscale[p.row_index[k]] * cscale[j];
          if (a == 0.0) continue;
          cmax = std::max(cmax, a);
          cmin = std::min(cmin, a);
        }
        if (cmax > 0) cscale[j] *= pow2_round(1.0 / std::sqrt(cmax * cmin));
      }
    }
    for (int r = 0; r < m; ++r) rscale[r] = std::clamp(rscale[r], 0x1p-30, 0x1p30);
    for (int j = 0; j < n; ++j) cscale[j] = std::clamp(cscale[j], 0x1p-30, 0x1p30);
  }

  // scaled bounds from the current (possibly edited) problem bounds
  void refresh_bounds() {
    for (int j = 0; j < n; ++j) {
      lo[j] = p.col_lo[j] / cscale[j];
      hi[j] = p.col_hi[j] / cscale[j];
    }
    for (int r = 0; r < m; ++r) {
      const int j = n + r;
      const double b = rscale[r] * p.rhs[r];
      switch (p.sense[r]) {
        case Sense::LE: lo[j] = -kInf; hi[j] = b; break;
        case Sense::GE: lo[j] = b; hi[j] = kInf; break;
        case Sense::EQ: lo[j] = b; hi[j] = b; break;
      }
    }
  }

  void cold_state() {
    stat.assign(N, VarStat::Lower);
    x.assign(N, 0.0);
    for (int j = 0; j < n; ++j) init_nonbasic(j);
    basis.resize(m);
    basis_pos.assign(N, -1);
    for (int r = 0; r < m; ++r) {
      basis[r] = n + r;
      basis_pos[n + r] = r;
      stat[n + r] = VarStat::Basic;
    }
    has_factor = false;
    has_state = true;
  }

  void init_nonbasic(int j) {
    if (lo[j] == hi[j]) {
      stat[j] = VarStat::Fixed;
      x[j] = lo[j];
    } else if (std::isfinite(lo[j]) &&
               (!std::isfinite(hi[j]) || std::abs(lo[j]) <= std::abs(hi[j]))) {
      stat[j] = VarStat::Lower;
      x[j] = lo[j];
    } else if (std::isfinite(hi[j])) {
      stat[j] = VarStat::Upper;
      x[j] = hi[j];
    } else {
      stat[j] = VarStat::Free;
      x[j] = 0.0;
    }
  }

  // Re-snap a nonbasic variable after its bounds moved, staying close to
  // its previous value so warm restarts keep most of the solution.
  void resnap_nonbasic(int j) {
    const double old = x[j];
    if (lo[j] == hi[j]) {
      stat[j] = VarStat::Fixed;
      x[j] = lo[j];
      return;
    }
    switch (stat[j]) {
      case VarStat::Lower:
        if (std::isfinite(lo[j])) { x[j] = lo[j]; return; }
        break;
      case VarStat::Upper:
        if (std::isfinite(hi[j])) { x[j] = hi[j]; return; }
        break;
      case VarStat::Fixed: break;
      case VarStat::Free: return;
      case VarStat::Basic: return;
    }
    // previous status no longer applies (bound vanished or was equal)
    const bool lo_fin = std::isfinite(lo[j]), hi_fin = std::isfinite(hi[j]);
    if (lo_fin && hi_fin) {
      stat[j] = std::abs(old - lo[j]) <= std::abs(old - hi[j]) ? VarStat::Lower
                                                               : VarStat::Upper;
      x[j] = stat[j] == VarStat::Lower ? lo[j] : hi[j];
    } else if (lo_fin) {
      stat[j] = VarStat::Lower;
      x[j] = lo[j];
    } else if (hi_fin) {
      stat[j] = VarStat::Upper;
      x[j] = hi[j];
    } else {
      stat[j] = VarStat::Free;
      x[j] = old;
    }
  }

  // ---- basis kernels ---------------------------------------------------

  void refactorize() {
    Eigen::SparseMatrix<double> B(m, m);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(rindex.size());
    for (int pos = 0; pos < m; ++pos) {
      const int j = basis[pos];
      if (j >= n) {
        trips.emplace_back(j - n, pos, -1.0);
      } else {
        for (int k = cstart[j]; k < cstart[j + 1]; ++k)
          trips.emplace_back(rindex[k], pos, cval[k]);
      }
    }
    B.setFromTriplets(trips.begin(), trips.end());
    lu.analyzePattern(B);
    lu.factorize(B);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("basis factorization failed");
    etas.clear();
    has_factor = true;
    recompute_basics();
  }

  void recompute_basics() {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    for (int j = 0; j < N; ++j) {
      if (stat[j] == VarStat::Basic || x[j] == 0.0) continue;
      add_column_times(j, -x[j], rhs);
    }
    Eigen::VectorXd xb = ftran(rhs);
    for (int pos = 0; pos < m; ++pos) x[basis[pos]] = xb[pos];
  }

  void add_column_times(int j, double mult, Eigen::VectorXd& out) const {
    if (j >= n) {
      out[j - n] += -1.0 * mult;
    } else {
      for (int k = cstart[j]; k < cstart[j + 1]; ++k)
        out[rindex[k]] += cval[k] * mult;
    }
  }

  Eigen::VectorXd ftran(const Eigen::VectorXd& v) const {
    Eigen::VectorXd z = lu.solve(v);
    for (const Eta& e : etas) {
      const double zp = z[e.pos] / e.pivot;
      if (zp != 0.0)
        for (const auto& [i, w] : e.nz) z[i] -= w * zp;
      z[e.pos] = zp;
    }
    return z;
  }

  Eigen::VectorXd btran(const Eigen::VectorXd& v) {
    Eigen::VectorXd d = v;
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double s = 0.0;
      for (const auto& [i, w] : it->nz) s += w * d[i];
      d[it->pos] = (d[it->pos] - s) / it->pivot;
    }
    return lu.transpose().solve(d);
  }

  // ---- iteration -------------------------------------------------------

  double infeasibility(int j) const {
    if (x[j] < lo[j] - kFeasTol) return lo[j] - x[j];
    if (x[j] > hi[j] + kFeasTol) return x[j] - hi[j];
    return 0.0;
  }

  bool primal_feasible() const {
    for (int pos = 0; pos < m; ++pos)
      if (infeasibility(basis[pos]) > 0) return false;
    return true;
  }

  Eigen::VectorXd phase_cost(bool phase1) const {
    Eigen::VectorXd db(m);
    for (int pos = 0; pos < m; ++pos) {
      const int j = basis[pos];
      if (phase1) {
        if (x[j] < lo[j] - kFeasTol)
          db[pos] = -1.0;
        else if (x[j] > hi[j] + kFeasTol)
          db[pos] = 1.0;
        else
          db[pos] = 0.0;
      } else {
        db[pos] = cost[j];
      }
    }
    return db;
  }

  double reduced_cost(int j, const Eigen::VectorXd& y, bool phase1) const {
    double z = phase1 ? 0.0 : cost[j];
    if (j >= n) {
      z += y[j - n];
    } else {
      for (int k = cstart[j]; k < cstart[j + 1]; ++k)
        z -= y[rindex[k]] * cval[k];
    }
    return z;
  }

  bool eligible(int j, double z, int* dir) const {
    switch (stat[j]) {
      case VarStat::Lower:
        if (z < -kOptTol) { *dir = +1; return true; }
        return false;
      case VarStat::Upper:
        if (z > kOptTol) { *dir = -1; return true; }
        return false;
      case VarStat::Free:
        if (z < -kOptTol) { *dir = +1; return true; }
        if (z > kOptTol) { *dir = -1; return true; }
        return false;
      default:
        return false;
    }
  }

  int price(const Eigen::VectorXd& y, bool phase1, int* dir) {
    if (bland) {
      for (int j = 0; j < N; ++j) {
        if (stat[j] == VarStat::Basic || stat[j] == VarStat::Fixed) continue;
        const double z = reduced_cost(j, y, phase1);
        if (eligible(j, z, dir)) return j;
      }
      return -1;
    }
    const int window = std::max(512, N / 16);
    int scanned = 0;
    int best = -1;
    double best_score = 0.0;
    int best_dir = 0;
    while (scanned < N) {
      const int begin = price_cursor;
      for (int t = 0; t < window && scanned < N; ++t, ++scanned) {
        const int j = (begin + t) % N;
        price_cursor = (j + 1) % N;
        if (stat[j] == VarStat::Basic || stat[j] == VarStat::Fixed) continue;
        const double z = reduced_cost(j, y, phase1);
        int d = 0;
        if (eligible(j, z, &d) && std::abs(z) > best_score) {
          best = j;
          best_score = std::abs(z);
          best_dir = d;
        }
      }
      if (best >= 0) break;
    }
    *dir = best_dir;
    return best;
  }

  struct Ratio {
    double t = kInf;
    int pos = -1;  // -1: entering variable flips to its opposite bound
    double to_value = 0;
    VarStat to_stat = VarStat::Lower;
  };

  Ratio ratio_test(int q, int dir, const Eigen::VectorXd& w, bool phase1) const {
    Ratio best;
    if (std::isfinite(lo[q]) && std::isfinite(hi[q])) best.t = hi[q] - lo[q];

    for (int pos = 0; pos < m; ++pos) {
      const double wp = w[pos];
      if (std::abs(wp) < 1e-9) continue;
      const int j = basis[pos];
      const double delta = -dir * wp;
      const double cur = x[j];
      double t = kInf, target = 0.0;
      VarStat ts = VarStat::Lower;
      if (phase1 && cur < lo[j] - kFeasTol) {
        if (delta > 0) { t = (lo[j] - cur) / delta; target = lo[j]; ts = VarStat::Lower; }
      } else if (phase1 && cur > hi[j] + kFeasTol) {
        if (delta < 0) { t = (hi[j] - cur) / delta; target = hi[j]; ts = VarStat::Upper; }
      } else {
        if (delta > 0 && std::isfinite(hi[j])) {
          t = (hi[j] - cur) / delta; target = hi[j]; ts = VarStat::Upper;
        } else if (delta < 0 && std::isfinite(lo[j])) {
          t = (lo[j] - cur) / delta; target = lo[j]; ts = VarStat::Lower;
        }
      }
      if (t == kInf) continue;
      if (t < 0) t = 0;  // roundoff pushed the variable past its bound
      const bool better =
          t < best.t - 1e-12 ||
          (t < best.t + 1e-12 && best.pos >= 0 && std::abs(wp) > std::abs(w[best.pos]));
      if (better) {
        best.t = t;
        best.pos = pos;
        best.to_value = target;
        best.to_stat = lo[j] == hi[j] ? VarStat::Fixed : ts;
      }
    }
    return best;
  }

  LpResult iterate(const LpOptions& opts) {
    const long max_iters = opts.max_iterations > 0
                               ? opts.max_iterations
                               : 20000L + 60L * static_cast<long>(N);
    const long bland_after = 10L * static_cast<long>(N);
    const int refactor_every = std::max(16, opts.refactor_interval);
    iters = 0;
    degen_streak = 0;
    bland = false;
    last_y.clear();

    while (true) {
      if (iters >= max_iters) return finish(LpStatus::IterationLimit, opts);
      const bool phase1 = !primal_feasible();
      if (!phase1 && opts.phase1_only) return finish(LpStatus::Feasible, opts);

      const Eigen::VectorXd y = btran(phase_cost(phase1));
      int dir = 0;
      const int q = price(y, phase1, &dir);
      if (q < 0) {
        last_y.assign(y.data(), y.data() + m);
        if (phase1) return finish(LpStatus::Infeasible, opts);
        return finish(LpStatus::Optimal, opts);
      }

      Eigen::VectorXd col = Eigen::VectorXd::Zero(m);
      add_column_times(q, 1.0, col);
      const Eigen::VectorXd w = ftran(col);

      const Ratio r = ratio_test(q, dir, w, phase1);
      if (r.t == kInf) {
        if (!etas.empty()) {  // retry from a fresh factorization first
          refactorize();
          continue;
        }
        if (phase1) return finish(LpStatus::Numerical, opts);
        return finish(LpStatus::Unbounded, opts);
      }

      if (r.t > 0) {
        x[q] += dir * r.t;
        for (int pos = 0; pos < m; ++pos) {
          const double wp = w[pos];
          if (wp != 0.0) x[basis[pos]] -= dir * r.t * wp;
        }
      }

      if (r.pos < 0) {
        stat[q] = dir > 0 ? VarStat::Upper : VarStat::Lower;
        x[q] = dir > 0 ? hi[q] : lo[q];
      } else {
        const int leaving = basis[r.pos];
        x[leaving] = r.to_value;
        stat[leaving] = r.to_stat;
        basis_pos[leaving] = -1;
        basis[r.pos] = q;
        basis_pos[q] = r.pos;
        stat[q] = VarStat::Basic;

        Eta e;
        e.pos = r.pos;
        e.pivot = w[r.pos];
        for (int pos = 0; pos < m; ++pos)
          if (pos != r.pos && std::abs(w[pos]) > kZeroTol)
            e.nz.emplace_back(pos, w[pos]);
        etas.push_back(std::move(e));
        if (static_cast<int>(etas.size()) >= refactor_every) refactorize();
      }

      degen_streak = r.t < 1e-10 ? degen_streak + 1 : 0;
      if (degen_streak > bland_after) bland = true;
      ++iters;
    }
  }

  // ---- extraction ------------------------------------------------------

  void refine() {
    for (int pass = 0; pass < 3; ++pass) {
      Eigen::VectorXd res = Eigen::VectorXd::Zero(m);
      for (int j = 0; j < N; ++j)
        if (x[j] != 0.0) add_column_times(j, -x[j], res);
      if (res.lpNorm<Eigen::Infinity>() < 1e-13) break;
      const Eigen::VectorXd dx = ftran(res);
      for (int pos = 0; pos < m; ++pos) x[basis[pos]] += dx[pos];
    }
  }

  LpResult finish(LpStatus status, const LpOptions& opts) {
    (void)opts;
    LpResult res;
    res.status = status;
    res.iterations = iters;
    if (status == LpStatus::Optimal || status == LpStatus::Feasible) refine();

    res.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
      double v = x[j] * cscale[j];
      const double plo = p.col_lo[j], phi = p.col_hi[j];
      const double span = std::max({1.0, std::abs(plo), std::abs(phi)});
      if (std::isfinite(plo) && v < plo && v > plo - 1e-9 * span) v = plo;
      if (std::isfinite(phi) && v > phi && v < phi + 1e-9 * span) v = phi;
      res.x[j] = v;
    }

    double obj = p.obj_const;
    for (int j = 0; j < n; ++j) obj += p.obj[j] * res.x[j];
    res.objective = obj;

    if (!last_y.empty()) {
      res.row_dual.assign(m, 0.0);
      for (int r = 0; r < m; ++r) res.row_dual[r] = rscale[r] * last_y[r];
    }
    if (status == LpStatus::Infeasible) {
      for (int r = 0; r < m; ++r)
        if (!last_y.empty() && std::abs(last_y[r]) > 1e-9)
          res.infeasible_rows.push_back(r);
    }
    return res;
  }

  LpResult solve_unconstrained(const LpOptions& opts) {
    LpResult res;
    res.x.assign(n, 0.0);
    double obj = p.obj_const;
    for (int j = 0; j < n; ++j) {
      const double plo = p.col_lo[j], phi = p.col_hi[j], c = p.obj[j];
      double v;
      if (c > 0) {
        if (!std::isfinite(plo)) { res.status = LpStatus::Unbounded; return res; }
        v = plo;
      } else if (c < 0) {
        if (!std::isfinite(phi)) { res.status = LpStatus::Unbounded; return res; }
        v = phi;
      } else {
        v = std::isfinite(plo) ? plo : (std::isfinite(phi) ? phi : 0.0);
      }
      if (plo > phi) { res.status = LpStatus::Infeasible; return res; }
      res.x[j] = v;
      obj += c * v;
    }
    res.objective = obj;
    res.status = opts.phase1_only ? LpStatus::Feasible : LpStatus::Optimal;
    return res;
  }

  LpResult run(const LpOptions& opts) {
    refresh_bounds();
    for (int j = 0; j < n; ++j)
      if (p.col_lo[j] > p.col_hi[j] + 1e-12) {
        LpResult res;
        res.status = LpStatus::Infeasible;
        return res;
      }
    if (m == 0) return solve_unconstrained(opts);

    if (!has_state) {
      cold_state();
    } else {
      // bounds may have moved: re-snap every nonbasic variable
      for (int j = 0; j < N; ++j)
        if (stat[j] != VarStat::Basic) resnap_nonbasic(j);
    }
    try {
      if (!has_factor || static_cast<int>(etas.size()) >=
                             std::max(8, opts.refactor_interval / 2)) {
        refactorize();
      } else {
        recompute_basics();
      }
      return iterate(opts);
    } catch (const std::exception&) {
      // fall back to a cold start once before giving up
      try {
        cold_state();
        refactorize();
        return iterate(opts);
      } catch (const std::exception&) {
        LpResult res;
        res.status = LpStatus::Numerical;
        return res;
      }
    }
  }
};

IncrementalSimplex::IncrementalSimplex(const Lp& problem)
    : impl_(std::make_unique<Impl>(problem)) {}
IncrementalSimplex::~IncrementalSimplex() = default;
IncrementalSimplex::IncrementalSimplex(IncrementalSimplex&&) noexcept = default;
IncrementalSimplex& IncrementalSimplex::operator=(IncrementalSimplex&&) noexcept =
    default;

void IncrementalSimplex::set_col_bounds(int col, double lo, double hi) {
  impl_->p.col_lo[col] = lo;
  impl_->p.col_hi[col] = hi;
}

void IncrementalSimplex::set_obj(int col, double coef) {
  impl_->p.obj[col] = coef;
  impl_->cost[col] = coef * impl_->cscale[col];
}

void IncrementalSimplex::reset_basis() { impl_->has_state = false; }

LpResult IncrementalSimplex::solve(const LpOptions& opts) {
  return impl_->run(opts);
}

LpResult SimplexEngine::solve(const Lp& p, const LpOptions& opts) const {
  try {
    IncrementalSimplex s(p);
    return s.solve(opts);
  } catch (const std::exception&) {
    LpResult res;
    res.status = LpStatus::Numerical;
    return res;
  }
}

}  // namespace optiloop::lp
