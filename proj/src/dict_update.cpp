#include "blotless/dict_update.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "blotless/errors.hpp"
#include "blotless/metrics.hpp"
#include "blotless/numerics.hpp"
#include "blotless/rng.hpp"

namespace blotless {

const char* to_string(UpdateKind kind) {
  switch (kind) {
    case UpdateKind::kMod: return "MOD";
    case UpdateKind::kKsvd: return "KSVD";
    case UpdateKind::kBlotlessLs: return "BLOTLESS_LS";
    case UpdateKind::kBlotlessParTls: return "BLOTLESS_PARTLS";
    case UpdateKind::kBlotlessIterTls: return "BLOTLESS_ITERTLS";
    case UpdateKind::kBlotlessStls: return "BLOTLESS_STLS";
  }
  return "?";
}

UpdateKind update_kind_from_string(const std::string& name) {
  for (UpdateKind kind :
       {UpdateKind::kMod, UpdateKind::kKsvd, UpdateKind::kBlotlessLs,
        UpdateKind::kBlotlessParTls, UpdateKind::kBlotlessIterTls,
        UpdateKind::kBlotlessStls}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError("unknown update method: " + name);
}

Matrix mod_update(const Matrix& y, const SparseCoeffs& x) {
  if (y.cols() != x.n()) throw DimensionError("mod_update: column mismatch");
  if (x.values.norm() == 0.0) {
    throw NumericalError("mod_update: all-zero coefficients");
  }
  // min_D ||Y - D X||_F  <=>  D' = argmin ||X' D' - Y'||_F.
  return least_squares(x.values.transpose(), y.transpose()).transpose();
}

void ksvd_update(const Matrix& y, Dictionary& d, SparseCoeffs& x) {
  if (y.rows() != d.m() || y.cols() != x.n() || d.l() != x.l()) {
    throw DimensionError("ksvd_update: inconsistent dimensions");
  }
  Matrix residual = y - d.atoms * x.values;
  for (int i = 0; i < d.l(); ++i) {
    const auto& omega = x.pattern.rows[i];
    if (omega.empty()) continue;
    const int s = static_cast<int>(omega.size());

    Matrix restricted(d.m(), s);
    for (int t = 0; t < s; ++t) {
      restricted.col(t) =
          residual.col(omega[t]) + d.atoms.col(i) * x.values(i, omega[t]);
    }
    SvdFactors f = svd(restricted);
    const Vector atom = f.u.col(0);
    const Vector row = f.s(0) * f.vt.row(0).transpose();
    d.atoms.col(i) = atom;
    for (int t = 0; t < s; ++t) {
      x.values(i, omega[t]) = row(t);
      residual.col(omega[t]) = restricted.col(t) - atom * row(t);
    }
  }
}

namespace {

struct RowSystem {
  Matrix a;  // (n+1) x (m + |O_i|)
  Vector b;  // (0, ..., 0, 1)
};

RowSystem build_row_system(const Matrix& y, const std::vector<int>& omega) {
  const int m = static_cast<int>(y.rows());
  const int n = static_cast<int>(y.cols());
  const int s = static_cast<int>(omega.size());
  RowSystem sys;
  sys.a = Matrix::Zero(n + 1, m + s);
  sys.a.topLeftCorner(n, m) = y.transpose();
  for (int t = 0; t < s; ++t) sys.a(omega[t], m + t) = -1.0;
  sys.a.row(n).head(m).setOnes();
  sys.b = Vector::Zero(n + 1);
  sys.b(n) = 1.0;
  return sys;
}

RowSolveResult solve_rows_ls(const Matrix& y, const SupportPattern& pattern,
                             bool strict) {
  pattern.check();
  if (pattern.n != y.cols()) {
    throw DimensionError("blotless_ls: pattern n != cols(y)");
  }
  const int m = static_cast<int>(y.rows());
  RowSolveResult result;
  result.h.h = Matrix(pattern.l, m);
  Matrix values = Matrix::Zero(pattern.l, pattern.n);

  for (int i = 0; i < pattern.l; ++i) {
    const auto& omega = pattern.rows[i];
    RowSystem sys = build_row_system(y, omega);
    SvdFactors f = svd(sys.a);
    if (strict && f.rank() < sys.a.cols()) {
      throw AmbiguousRowError(
          i, "blotless_ls: row " + std::to_string(i) +
                 " admits more than the scaling family of solutions");
    }
    const double cutoff = f.s.size() ? kRankRelTol * f.s(0) : 0.0;
    Vector inv = Vector::Zero(f.s.size());
    for (int t = 0; t < f.s.size(); ++t) {
      if (f.s(t) > cutoff) inv(t) = 1.0 / f.s(t);
    }
    const Vector z =
        f.vt.transpose() * (inv.asDiagonal() * (f.u.transpose() * sys.b));
    result.h.h.row(i) = z.head(m).transpose();
    for (std::size_t t = 0; t < omega.size(); ++t) {
      values(i, omega[t]) = z(m + static_cast<int>(t));
    }
  }
  result.x.values = std::move(values);
  result.x.pattern = pattern;
  return result;
}

}  // namespace

RowSolveResult blotless_ls(const Matrix& y, const SupportPattern& pattern) {
  if (pattern.l != y.rows()) {
    throw DimensionError("blotless_ls: requires a square system "
                         "(pattern.l == rows(y))");
  }
  return solve_rows_ls(y, pattern, /*strict=*/true);
}

RowSolveResult blotless_ls_lenient(const Matrix& y,
                                   const SupportPattern& pattern) {
  return solve_rows_ls(y, pattern, /*strict=*/false);
}

RowSolveResult partls_update(const Matrix& y, const SupportPattern& pattern) {
  pattern.check();
  if (pattern.n != y.cols()) {
    throw DimensionError("partls_update: pattern n != cols(y)");
  }
  const int m = static_cast<int>(y.rows());
  RowSolveResult result;
  result.h.h = Matrix(pattern.l, m);
  Matrix values = Matrix::Zero(pattern.l, pattern.n);

  for (int i = 0; i < pattern.l; ++i) {
    const auto& omega = pattern.rows[i];
    const int s = static_cast<int>(omega.size());
    RowSystem sys = build_row_system(y, omega);
    Matrix stacked(sys.a.rows(), sys.a.cols() + 1);
    stacked.leftCols(sys.a.cols()) = sys.a;
    stacked.rightCols(1) = -sys.b;
    if (stacked.rows() < stacked.cols()) {
      throw AmbiguousRowError(
          i, "partls_update: row " + std::to_string(i) +
                 " is underdetermined (n + 1 < m + |O_i| + 1)");
    }
    SvdFactors f = svd(stacked);
    // Smallest singular value lives at the last index; equal-value ties are
    // resolved by that same fixed position.
    const Vector v = f.vt.row(f.vt.rows() - 1).transpose();
    const double hom = v(m + s);
    if (std::abs(hom) < 1e-10) {
      throw ScalingDegenerateError(
          i, "partls_update: homogeneous coordinate vanished on row " +
                 std::to_string(i));
    }
    const Vector z = v.head(m + s) / hom;
    result.h.h.row(i) = z.head(m).transpose();
    for (int t = 0; t < s; ++t) values(i, omega[t]) = z(m + t);
  }
  result.x.values = std::move(values);
  result.x.pattern = pattern;
  return result;
}

TlsResult itertls_update(const Matrix& y, const SparseCoeffs& x_init,
                         const UpdateMethod& cfg) {
  if (x_init.n() != y.cols()) {
    throw DimensionError("itertls_update: coefficient columns != cols(y)");
  }
  const int m = static_cast<int>(y.rows());
  const int l = x_init.l();
  const int n = static_cast<int>(y.cols());
  const SupportPattern& pattern = x_init.pattern;

  Matrix x_hat = x_init.values;
  if (x_hat.norm() == 0.0) {
    // Initial estimate from the exact-case equations on the pattern.
    x_hat = blotless_ls_lenient(y, pattern).x.values;
  }

  TlsResult result;
  Matrix stack(n, m + l);
  stack.leftCols(m) = y.transpose();
  for (int it = 0; it < cfg.iter_tls_max_iters; ++it) {
    stack.rightCols(l) = x_hat.transpose();
    SvdFactors f = svd(stack);
    if (f.rank() < m) {
      throw DegenerateDataError(
          "itertls_update: stacked data has rank below m");
    }
    const Matrix truncated =
        f.u.leftCols(m) * f.s.head(m).asDiagonal() * f.vt.topRows(m);
    result.denoised_y = truncated.leftCols(m).transpose();
    const Matrix x_tilde = truncated.rightCols(l).transpose();
    result.h.h =
        least_squares(truncated.leftCols(m), truncated.rightCols(l)).transpose();

    Matrix projected = Matrix::Zero(l, n);
    for (int i = 0; i < l; ++i) {
      for (int j : pattern.rows[i]) projected(i, j) = x_tilde(i, j);
    }
    const double step = (projected - x_hat).norm();
    x_hat = std::move(projected);
    if (step <= cfg.iter_tls_tol * std::max(1e-300, x_hat.norm())) break;
  }
  result.x.values = std::move(x_hat);
  result.x.pattern = pattern;
  return result;
}

namespace {

double stls_objective(const Matrix& y, const Matrix& y_tilde,
                      const Matrix& x_tilde, const SupportPattern& pattern) {
  double off = 0.0;
  for (int i = 0; i < pattern.l; ++i) {
    std::size_t next = 0;
    for (int j = 0; j < pattern.n; ++j) {
      if (next < pattern.rows[i].size() && pattern.rows[i][next] == j) {
        ++next;
        continue;
      }
      off += x_tilde(i, j) * x_tilde(i, j);
    }
  }
  return 0.5 * (y - y_tilde).squaredNorm() + 0.5 * off;
}

}  // namespace

StlsResult stls_update(const Matrix& y, const SparseCoeffs& x_init,
                       const InverseEstimate& h_init, const UpdateMethod& cfg) {
  const int m = static_cast<int>(y.rows());
  const int n = static_cast<int>(y.cols());
  const int l = x_init.l();
  if (x_init.n() != n || h_init.h.rows() != l || h_init.h.cols() != m) {
    throw DimensionError("stls_update: inconsistent dimensions");
  }
  if (static_cast<long>(m) * n > cfg.stls_size_cap) {
    throw ConfigError("stls_update: m*n = " + std::to_string(long(m) * n) +
                      " exceeds the size cap " +
                      std::to_string(cfg.stls_size_cap));
  }
  const SupportPattern& pattern = x_init.pattern;

  const long ny = static_cast<long>(m) * n;
  const long nx = static_cast<long>(l) * n;
  const long nh = static_cast<long>(l) * m;
  const long nvar = ny + nx + nh;
  const long ncon = static_cast<long>(l) * (n + 1);

  Vector hess = Vector::Zero(nvar);
  hess.head(ny).setOnes();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < l; ++i) {
      if (!pattern.contains(i, j)) hess(ny + static_cast<long>(j) * l + i) = 1.0;
    }
  }
  Vector linear = Vector::Zero(nvar);
  linear.head(ny) = Eigen::Map<const Vector>(y.data(), ny);

  Matrix y_hat = y;
  Matrix x_hat = x_init.values;
  Matrix h_hat = h_init.h;

  StlsResult result;
  const double scale = std::max(1.0, y.norm());

  for (int it = 0; it < cfg.stls_max_iters; ++it) {
    // Residual of the bilinear constraints at the linearization point.
    Matrix constraint_resid = h_hat * y_hat - x_hat;          // l x n
    Vector ones_resid = h_hat.rowwise().sum() - Vector::Ones(l);
    const double feas =
        std::sqrt(constraint_resid.squaredNorm() + ones_resid.squaredNorm());
    const double objective = stls_objective(y, y_hat, x_hat, pattern);
    if (it == 0 && feas <= 1e-12 * scale && objective <= 1e-24 * scale * scale) {
      // Already feasible with zero cost: a stationary point.
      result.objective_history.push_back(objective);
      break;
    }

    Matrix jac = Matrix::Zero(ncon, nvar);
    Vector rhs(ncon);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < l; ++i) {
        const long row = static_cast<long>(j) * l + i;
        jac.block(row, static_cast<long>(j) * m, 1, m) = h_hat.row(i);
        jac(row, ny + static_cast<long>(j) * l + i) = -1.0;
        for (int k = 0; k < m; ++k) {
          jac(row, ny + nx + static_cast<long>(k) * l + i) = y_hat(k, j);
        }
        rhs(row) = h_hat.row(i).dot(y_hat.col(j));
      }
    }
    for (int i = 0; i < l; ++i) {
      const long row = static_cast<long>(l) * n + i;
      for (int k = 0; k < m; ++k) {
        jac(row, ny + nx + static_cast<long>(k) * l + i) = 1.0;
      }
      rhs(row) = 1.0;
    }

    const Vector z = solve_eq_qp(hess, linear, jac, rhs);

    Matrix y_new = Eigen::Map<const Matrix>(z.data(), m, n);
    Matrix x_new = Eigen::Map<const Matrix>(z.data() + ny, l, n);
    Matrix h_new = Eigen::Map<const Matrix>(z.data() + ny + nx, l, m);
    const double step =
        std::sqrt((y_new - y_hat).squaredNorm() + (x_new - x_hat).squaredNorm() +
                  (h_new - h_hat).squaredNorm());
    const double prev_norm = std::sqrt(y_hat.squaredNorm() +
                                       x_hat.squaredNorm() +
                                       h_hat.squaredNorm());
    y_hat = std::move(y_new);
    x_hat = std::move(x_new);
    h_hat = std::move(h_new);
    result.objective_history.push_back(
        stls_objective(y, y_hat, x_hat, pattern));
    if (step <= 1e-8 * (1.0 + prev_norm)) break;
  }

  result.h.h = std::move(h_hat);
  Matrix projected = Matrix::Zero(l, n);
  for (int i = 0; i < l; ++i) {
    for (int j : pattern.rows[i]) projected(i, j) = x_hat(i, j);
  }
  result.x.values = std::move(projected);
  result.x.pattern = pattern;
  result.denoised_y = std::move(y_hat);
  return result;
}

namespace {

// Replace zero-norm atoms (and, when clean_duplicates is set, atoms nearly
// parallel to a better-used one) with the worst-represented training
// columns; the replaced coefficient rows are zeroed.
void replace_degenerate_atoms(const Matrix& y, Matrix& atoms, Matrix& values,
                              bool clean_duplicates,
                              double coherence_thresh = 0.99) {
  const int l = static_cast<int>(atoms.cols());
  Vector column_err =
      (y - atoms * values).colwise().squaredNorm().transpose();

  std::vector<int> support_count(l, 0);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < values.cols(); ++j) {
      if (values(i, j) != 0.0) ++support_count[i];
    }
  }

  for (int i = 0; i < l; ++i) {
    const double norm = atoms.col(i).norm();
    bool degenerate = norm < 1e-12 || support_count[i] == 0;
    if (!degenerate && clean_duplicates) {
      for (int j = 0; j < l && !degenerate; ++j) {
        if (j == i) continue;
        const double ip = std::abs(atoms.col(i).dot(atoms.col(j))) /
                          std::max(1e-300, norm * atoms.col(j).norm());
        if (ip > coherence_thresh && support_count[j] >= support_count[i]) {
          degenerate = true;
        }
      }
    }
    if (!degenerate) continue;

    int worst = -1;
    double worst_err = -1.0;
    for (int j = 0; j < y.cols(); ++j) {
      if (column_err(j) > worst_err && y.col(j).norm() > 0.0) {
        worst_err = column_err(j);
        worst = j;
      }
    }
    if (worst < 0) continue;
    atoms.col(i) = y.col(worst) / y.col(worst).norm();
    values.row(i).setZero();
    support_count[i] = 0;
    column_err(worst) = -1.0;  // one replacement per training column
  }
}

void normalize_with_rescale(Matrix& atoms, Matrix& values) {
  for (int i = 0; i < atoms.cols(); ++i) {
    const double norm = atoms.col(i).norm();
    if (norm > 0.0) {
      atoms.col(i) /= norm;
      values.row(i) *= norm;
    }
  }
}

SupportPattern sub_pattern(const SupportPattern& pattern, int first, int count) {
  SupportPattern sub(count, pattern.n);
  for (int t = 0; t < count; ++t) sub.rows[t] = pattern.rows[first + t];
  return sub;
}

}  // namespace

void blotless_block_update(const Matrix& y, Dictionary& d, SparseCoeffs& x,
                           const UpdateMethod& cfg) {
  const int m = d.m();
  const int l = d.l();
  if (y.rows() != m || y.cols() != x.n() || x.l() != l) {
    throw DimensionError("blotless_block_update: inconsistent dimensions");
  }
  const int block = cfg.block_size > 0 ? cfg.block_size : std::min(m, l);
  if (block > m) {
    throw ConfigError("blotless_block_update: block_size " +
                      std::to_string(block) + " > m = " + std::to_string(m) +
                      " would make a block overcomplete");
  }

  Matrix atoms = d.atoms;
  Matrix values = x.values;

  for (int first = 0; first < l; first += block) {
    const int count = std::min(block, l - first);
    Matrix residual = y - atoms * values +
                      atoms.middleCols(first, count) *
                          values.middleRows(first, count);
    SparseCoeffs block_coeffs(values.middleRows(first, count),
                              sub_pattern(x.pattern, first, count));
    try {
      Matrix fitted_rows, fit_target;
      switch (cfg.kind) {
        case UpdateKind::kBlotlessLs: {
          RowSolveResult r = blotless_ls_lenient(residual, block_coeffs.pattern);
          fitted_rows = std::move(r.x.values);
          fit_target = residual;
          break;
        }
        case UpdateKind::kBlotlessParTls: {
          RowSolveResult r = partls_update(residual, block_coeffs.pattern);
          fitted_rows = std::move(r.x.values);
          fit_target = residual;
          break;
        }
        case UpdateKind::kBlotlessStls: {
          InverseEstimate h0;
          h0.h = pseudo_inverse(atoms.middleCols(first, count));
          StlsResult r = stls_update(residual, block_coeffs, h0, cfg);
          fitted_rows = std::move(r.x.values);
          fit_target = std::move(r.denoised_y);
          break;
        }
        case UpdateKind::kBlotlessIterTls:
        default: {
          TlsResult r = itertls_update(residual, block_coeffs, cfg);
          fitted_rows = std::move(r.x.values);
          fit_target = std::move(r.denoised_y);
          break;
        }
      }
      // Block dictionary from the (denoised) data: min ||Yr - D_T X_T||_F.
      atoms.middleCols(first, count) =
          least_squares(fitted_rows.transpose(), fit_target.transpose())
              .transpose();
      values.middleRows(first, count) = fitted_rows;
    } catch (const NumericalError& e) {
      throw NumericalError("block " + std::to_string(first / block) + ": " +
                           e.what());
    }
  }

  replace_degenerate_atoms(y, atoms, values, /*clean_duplicates=*/false);
  normalize_with_rescale(atoms, values);
  d = Dictionary(std::move(atoms));
  x = SparseCoeffs(std::move(values), x.pattern);
}

LearnResult learn(const Matrix& y, const LearnConfig& cfg,
                  const Dictionary* reference) {
  require_finite(y, "learn");
  if (cfg.n_iterations < 1) throw ConfigError("learn: n_iterations must be >= 1");
  const int m = static_cast<int>(y.rows());
  const int l = cfg.l > 0 ? cfg.l : m;
  if (reference && (reference->m() != m || reference->l() != l)) {
    throw DimensionError("learn: reference dictionary shape mismatch");
  }

  Xoshiro256pp rng(stream_seed(cfg.seed, StreamTag::kLearnInit));
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix atoms(m, l);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < l; ++j) atoms(i, j) = scale * rng.gaussian();
  }
  Matrix zero_values = Matrix::Zero(l, y.cols());
  normalize_with_rescale(atoms, zero_values);
  Dictionary dict(atoms);
  SparseCoeffs coeffs;

  LearnResult result;
  double best_objective = std::numeric_limits<double>::infinity();

  for (int it = 0; it < cfg.n_iterations; ++it) {
    const auto started = std::chrono::steady_clock::now();
    IterationRecord record;
    record.iteration = it;

    coeffs = omp_encode_all(dict, y, cfg.omp);
    try {
      switch (cfg.method.kind) {
        case UpdateKind::kMod: {
          Matrix updated = mod_update(y, coeffs);
          Matrix vals = coeffs.values;
          replace_degenerate_atoms(y, updated, vals, false);
          dict = Dictionary(std::move(updated));
          coeffs = SparseCoeffs(std::move(vals), coeffs.pattern);
          break;
        }
        case UpdateKind::kKsvd:
          ksvd_update(y, dict, coeffs);
          break;
        default:
          blotless_block_update(y, dict, coeffs, cfg.method);
          break;
      }
    } catch (const NumericalError&) {
      record.update_failed = true;  // keep the previous iterate
    } catch (const ZeroAtomError&) {
      record.update_failed = true;
    }

    // Atom maintenance: unit norms, dead-atom and twin-atom replacement.
    Matrix a = dict.atoms;
    Matrix v = coeffs.values;
    normalize_with_rescale(a, v);
    replace_degenerate_atoms(y, a, v, /*clean_duplicates=*/true);
    normalize_with_rescale(a, v);
    dict = Dictionary(std::move(a));
    coeffs = SparseCoeffs(std::move(v), coeffs.pattern);

    record.objective = (y - dict.atoms * coeffs.values).norm();
    if (reference) {
      record.r_err = recovery_error(dict, *reference).r_err;
    }
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      started)
            .count();
    result.history.push_back(record);

    if (record.objective < best_objective) {
      best_objective = record.objective;
      result.dict = dict;
      result.coeffs = coeffs;
    }
  }
  return result;
}

void write_history_csv(std::ostream& out,
                       const std::vector<IterationRecord>& history) {
  out << "iteration,objective,r_err,seconds\n";
  for (const auto& rec : history) {
    out << rec.iteration << ',' << format_full(rec.objective) << ',';
    if (rec.r_err) out << format_full(*rec.r_err);
    out << ',' << format_full(rec.seconds) << '\n';
  }
}

}  // namespace blotless
