#include "chandef/randomgen.hpp"

#include <cmath>
#include <stdexcept>

namespace chandef::rnd {

double u01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1p-53;
}

double gauss(Rng& rng) {
  // Box–Muller; guard the log against an exact zero draw.
  double u = u01(rng);
  while (u <= 0.0) u = u01(rng);
  const double v = u01(rng);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

Mat ginibre(Rng& rng, int rows, int cols) {
  Mat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Cx(gauss(rng), gauss(rng));
  return g;
}

Mat hermitian(Rng& rng, int d, double scale) {
  return scale * herm(ginibre(rng, d, d));
}

Mat psd(Rng& rng, int d, int rank) {
  const int r = rank > 0 ? rank : d;
  const Mat g = ginibre(rng, d, r);
  return g * g.adjoint();
}

State state(Rng& rng, const BlockAlgebra& alg, int rank) {
  const Mat rho = conditional_expectation(alg, psd(rng, alg.ambient(), rank));
  return State(alg, rho / rho.trace().real());
}

CVec pure(Rng& rng, int d) {
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = Cx(gauss(rng), gauss(rng));
  return v / v.norm();
}

Mat unitary(Rng& rng, int d) {
  const Mat g = ginibre(rng, d, d);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase ambiguity of QR so the result is Haar distributed.
  for (int j = 0; j < d; ++j) {
    const Cx rj = r(j, j);
    q.col(j) *= std::abs(rj) > 0 ? rj / std::abs(rj) : Cx(1, 0);
  }
  return q;
}

HermitianMap channel(Rng& rng, const BlockAlgebra& in, const BlockAlgebra& out,
                     int env) {
  const int din = in.ambient(), dout = out.ambient();
  const int de = env > 0 ? env : dout;
  // Isometry V: C^din → C^dout ⊗ C^env, first din columns of a Haar unitary.
  const Mat v = unitary(rng, dout * de).leftCols(din);
  return map_from_action(in, out, [&](const Mat& a) {
    return partial_trace_second(Mat(v * a * v.adjoint()), dout, de);
  });
}

HermitianMap herm_map(Rng& rng, const BlockAlgebra& in, const BlockAlgebra& out,
                      double scale) {
  const int d = out.ambient() * in.ambient();
  return HermitianMap(in, out, hermitian(rng, d, scale / d));
}

HermitianMap eb_channel(Rng& rng, const BlockAlgebra& in, const BlockAlgebra& out,
                        int outcomes) {
  const int k = outcomes > 0 ? outcomes : in.ambient() * in.ambient();
  const Povm m = povm(rng, in, k);
  std::vector<Mat> preps;
  preps.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) preps.push_back(state(rng, out).matrix());
  return make_measure_prepare(in, out, m.effects, preps);
}

Povm povm(Rng& rng, const BlockAlgebra& alg, int outcomes) {
  if (outcomes < 1) throw std::invalid_argument("povm: need at least one outcome");
  const int d = alg.ambient();
  std::vector<Mat> raw;
  raw.reserve(static_cast<size_t>(outcomes));
  Mat sum = Mat::Zero(d, d);
  for (int i = 0; i < outcomes; ++i) {
    raw.push_back(conditional_expectation(alg, psd(rng, d)));
    sum += raw.back();
  }
  const Mat s = pinv_sqrt(sum).inv_sqrt;
  std::vector<Mat> effects;
  effects.reserve(raw.size());
  for (const Mat& g : raw) effects.push_back(herm(s * g * s));
  return Povm(alg, effects);
}

Experiment experiment(Rng& rng, const BlockAlgebra& alg, int n, int rank) {
  std::vector<Mat> states;
  states.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) states.push_back(state(rng, alg, rank).matrix());
  return Experiment(alg, states);
}

}  // namespace chandef::rnd
