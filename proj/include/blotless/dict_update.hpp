#ifndef BLOTLESS_DICT_UPDATE_HPP
#define BLOTLESS_DICT_UPDATE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "blotless/model.hpp"
#include "blotless/sparse_coding.hpp"

namespace blotless {

enum class UpdateKind {
  kMod,
  kKsvd,
  kBlotlessLs,
  kBlotlessParTls,
  kBlotlessIterTls,
  kBlotlessStls,
};

const char* to_string(UpdateKind kind);
UpdateKind update_kind_from_string(const std::string& name);

struct UpdateMethod {
  UpdateKind kind = UpdateKind::kBlotlessIterTls;
  int iter_tls_max_iters = 10;
  double iter_tls_tol = 1e-8;
  int stls_max_iters = 10;
  // Sub-dictionary width for the block scheduler; 0 means min(m, l). Must
  // not exceed m: every block stays complete or undercomplete.
  int block_size = 0;
  // STLS assembles a dense KKT system quadratic in the instance size; refuse
  // instances with m * n above this cap.
  long stls_size_cap = 64L * 200L;
};

struct LearnConfig {
  UpdateMethod method;
  OmpConfig omp;
  int n_iterations = 1;
  std::uint64_t seed = 0;
  int l = 0;  // atom count; 0 means square (l = m)
};

// Row-wise inverse dictionary estimate H (l x m), H = D^-1 for square
// dictionaries and H = pinv(D) for tall ones. The LS/TLS solvers that carry
// the affine constraint return rows summing to one on consistent data.
struct InverseEstimate {
  Matrix h;
};

struct RowSolveResult {
  InverseEstimate h;
  SparseCoeffs x;
};

struct TlsResult {
  InverseEstimate h;
  SparseCoeffs x;
  Matrix denoised_y;
};

struct StlsResult {
  InverseEstimate h;
  SparseCoeffs x;
  Matrix denoised_y;
  std::vector<double> objective_history;  // one entry per linearization
};

// MOD: the least-squares minimizer of ||Y - D X||_F with X fixed. Columns
// are returned unnormalized; the learning driver handles rescaling.
Matrix mod_update(const Matrix& y, const SparseCoeffs& x);

// K-SVD sweep: for each atom in index order, replace (atom, coefficient row
// restricted to its support) by the top singular triplet of the residual
// with that atom removed. Atoms with empty support are left untouched.
void ksvd_update(const Matrix& y, Dictionary& d, SparseCoeffs& x);

// Exact-case solver: for every row i solves
//   [ Y'   -P_i ] [ H_i'      ]   [ 0 ]
//   [ 1'    0   ] [ X_{i,O_i}'] = [ 1 ]
// in the least-squares sense, where P_i keeps the identity columns indexed
// by O_i. Raises AmbiguousRowError for a row whose system does not pin the
// solution (rank below column count), which is how non-unique recovery shows
// up. Requires pattern.l == rows(y).
RowSolveResult blotless_ls(const Matrix& y, const SupportPattern& pattern);

// Same per-row systems solved leniently: no ambiguity check, minimum-norm
// solutions. Used to bootstrap the TLS iterations on possibly-wrong patterns.
RowSolveResult blotless_ls_lenient(const Matrix& y,
                                   const SupportPattern& pattern);

// ParTLS: per row, total least squares on the same system; the solution is
// the right singular vector of [A_i, -b] for the smallest singular value,
// rescaled so its homogeneous coordinate is one.
RowSolveResult partls_update(const Matrix& y, const SupportPattern& pattern);

// IterTLS: alternate (a) best rank-m approximation of the stack [Y', Xhat']
// split into denoised Y-tilde and X-tilde, (b) H from the least-squares fit
// Y-tilde' H' = X-tilde', (c) projection of X-tilde onto the pattern, until
// the projected coefficients stabilize. An all-zero x_init is bootstrapped
// from blotless_ls_lenient on the pattern.
TlsResult itertls_update(const Matrix& y, const SparseCoeffs& x_init,
                         const UpdateMethod& cfg);

// STLS: sequential linearization of H [Y-tilde, 1] = [X-tilde, 1]; each step
// solves the equality-constrained QP
//   min 0.5 ||Y - Y-tilde||_F^2 + 0.5 ||offpattern(X-tilde)||^2
// through a dense KKT system. Small instances only (see stls_size_cap).
StlsResult stls_update(const Matrix& y, const SparseCoeffs& x_init,
                       const InverseEstimate& h_init, const UpdateMethod& cfg);

// One sweep of the BLOTLESS block scheduler: consecutive blocks of
// block_size atoms, each block solved on the residual of the others by the
// TLS variant selected in cfg.kind, then the block dictionary re-fit to the
// denoised data. Atoms are normalized (with coefficient rescaling) at the
// end; atoms that died during the sweep are replaced by the currently
// worst-represented training columns.
void blotless_block_update(const Matrix& y, Dictionary& d, SparseCoeffs& x,
                           const UpdateMethod& cfg);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;          // ||Y - D X||_F after the update
  std::optional<double> r_err;     // vs. the reference dictionary, if given
  double seconds = 0.0;
  bool update_failed = false;      // update raised; previous iterate kept
};

struct LearnResult {
  Dictionary dict;                 // best-by-objective iterate
  SparseCoeffs coeffs;
  std::vector<IterationRecord> history;
};

// Alternating dictionary learning: seeded N(0, 1/m) initialization, then
// omp_encode_all -> update(cfg.method) -> atom maintenance per iteration.
// A failing update leaves the previous iterate in place and is recorded in
// the history. When `reference` is set, per-iteration recovery error against
// it is recorded.
LearnResult learn(const Matrix& y, const LearnConfig& cfg,
                  const Dictionary* reference = nullptr);

// CSV export: iteration,objective,r_err,seconds (r_err empty when absent).
void write_history_csv(std::ostream& out,
                       const std::vector<IterationRecord>& history);

}  // namespace blotless

#endif
