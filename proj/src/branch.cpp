#include "ggwpd/branch.hpp"

#include <cmath>

#include "ggwpd/error.hpp"

namespace ggwpd {

BranchAccumulator::BranchAccumulator(Complex initial) : last_(initial), phase_(std::arg(initial)) {
  if (initial == Complex(0.0, 0.0)) {
    throw NumericalError(NumericalErrorKind::caustic, "branch accumulator started at a zero determinant");
  }
}

void BranchAccumulator::advance(Complex det) {
  if (det == Complex(0.0, 0.0)) {
    throw NumericalError(NumericalErrorKind::caustic, "determinant vanished along the path (caustic)");
  }
  phase_ += std::arg(det / last_);
  last_ = det;
}

Complex BranchAccumulator::sqrt() const {
  return std::sqrt(std::abs(last_)) * std::polar(1.0, 0.5 * phase_);
}

Complex branch_sqrt(Complex det, BranchAccumulator& acc) {
  acc.advance(det);
  return acc.sqrt();
}

namespace {

void refine(BranchAccumulator& acc, const DeterminantOf& det_of, const CMat& ma, Complex da,
            const CMat& mb, Complex db, const BranchTracking& opts, int depth) {
  if (db == Complex(0.0, 0.0)) {
    throw NumericalError(NumericalErrorKind::caustic, "determinant vanished along the path (caustic)");
  }
  if (std::abs(std::arg(db / da)) <= opts.max_step || depth >= opts.max_depth) {
    acc.advance(db);
    return;
  }
  CMat mid = 0.5 * (ma + mb);
  Complex dm = det_of(mid);
  refine(acc, det_of, ma, da, mid, dm, opts, depth + 1);
  refine(acc, det_of, mid, dm, mb, db, opts, depth + 1);
}

}  // namespace

BranchAccumulator track_branch(const std::vector<CMat>& path, const DeterminantOf& det_of,
                               const BranchTracking& opts) {
  if (path.empty()) throw std::invalid_argument("track_branch: empty stability path");
  Complex d0 = det_of(path.front());
  BranchAccumulator acc(d0);
  const int sub = opts.subdivisions < 1 ? 1 : opts.subdivisions;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    const CMat& a = path[k];
    CMat delta = path[k + 1] - a;
    CMat prev = a;
    Complex dprev = acc.value();
    for (int j = 1; j <= sub; ++j) {
      CMat m = (j == sub) ? path[k + 1] : CMat(a + delta * (double(j) / sub));
      Complex dm = det_of(m);
      refine(acc, det_of, prev, dprev, m, dm, opts, 0);
      prev = std::move(m);
      dprev = dm;
    }
  }
  return acc;
}

const char* to_string(NumericalErrorKind kind) {
  switch (kind) {
    case NumericalErrorKind::singular_system: return "singular_system";
    case NumericalErrorKind::non_convergence: return "non_convergence";
    case NumericalErrorKind::runaway: return "runaway";
    case NumericalErrorKind::caustic: return "caustic";
    case NumericalErrorKind::not_hyperbolic: return "not_hyperbolic";
    case NumericalErrorKind::refinement_cap: return "refinement_cap";
  }
  return "unknown";
}

}  // namespace ggwpd
