#include "cvdg/fock.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "cvdg/errors.hpp"
#include "cvdg/phasespace.hpp"

namespace cvdg::fock {

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;
using LeftAction = std::function<CMatrix(const CMatrix&)>;

int full_dimension(int modes, int cutoff) {
  int dim = 1;
  for (int j = 0; j < modes; ++j) dim *= cutoff + 1;
  return dim;
}

void check_modes(int modes) {
  if (modes < 1 || modes > max_modes) {
    throw DimensionError("Fock oracle supports 1 or 2 modes, got " + std::to_string(modes));
  }
}

// Single-mode annihilator on d levels.
Matrix ladder(int d) {
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

// exp(A) for anti-Hermitian A = -iH, computed in a padded space; the leading
// d x d block is returned.
CMatrix padded_exponential(const std::function<CMatrix(const Matrix&)>& generator, int d) {
  const int padded = std::max(d + 64, 3 * d);
  const CMatrix A = generator(ladder(padded));
  const CMatrix H = Complex(0, 1) * A;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver((H + H.adjoint()) / 2.0);
  const Eigen::VectorXcd phases =
      (Complex(0, -1) * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
  const CMatrix U = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  return U.topLeftCorner(d, d);
}

// U with U^dag x U = k x, U^dag p U = p / k.
CMatrix squeezer(double k, int d) {
  const double r = -std::log(k);
  return padded_exponential(
      [r](const Matrix& a) {
        const Matrix a2 = a * a;
        return CMatrix((0.5 * r * (a2 - a2.transpose())).cast<Complex>());
      },
      d);
}

// D(alpha) = exp(alpha a^dag - alpha* a).
CMatrix displacement(Complex alpha, int d) {
  return padded_exponential(
      [alpha](const Matrix& a) {
        const CMatrix ac = a.cast<Complex>();
        return CMatrix(alpha * ac.adjoint() - std::conj(alpha) * ac);
      },
      d);
}

// Left action of U_1 (x) ... (x) U_m on the columns of X.
LeftAction local_action(const std::vector<CMatrix>& ops, int d) {
  return [ops, d](const CMatrix& X) -> CMatrix {
    if (ops.size() == 1) return ops[0] * X;
    CMatrix out(X.rows(), X.cols());
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      // Column-major view of the column is M(n2, n1); the action is U2 M U1^T.
      Eigen::Map<const CMatrix> M(X.col(c).data(), d, d);
      Eigen::Map<CMatrix> R(out.col(c).data(), d, d);
      R.noalias() = ops[1] * M * ops[0].transpose();
    }
    return out;
  };
}

CMatrix two_sided(const CMatrix& rho, const LeftAction& act) {
  const CMatrix left = act(rho);
  CMatrix out = act(CMatrix(left.adjoint()));
  return (out + out.adjoint()) / 2.0;
}

CMatrix two_sided(const CMatrix& rho, const SparseC& op) {
  const CMatrix out = op * rho * op.adjoint();
  return (out + out.adjoint()) / 2.0;
}

// Annihilator of mode j on the full truncated space.
SparseC annihilator(int modes, int cutoff, int j) {
  const int d = cutoff + 1;
  const int dim = full_dimension(modes, cutoff);
  std::vector<Eigen::Triplet<Complex>> entries;
  for (int idx = 0; idx < dim; ++idx) {
    const int n1 = modes == 1 ? idx : idx / d;
    const int n2 = modes == 1 ? 0 : idx % d;
    const int n = j == 0 ? n1 : n2;
    if (n == 0) continue;
    const int target = j == 0 ? (modes == 1 ? idx - 1 : idx - d) : idx - 1;
    entries.emplace_back(target, idx, std::sqrt(static_cast<double>(n)));
  }
  SparseC a(dim, dim);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

// Q(f) = sum_j f_xj (a_j + a_j^dag) - i f_pj (a_j - a_j^dag)
SparseC quadrature(int modes, int cutoff, const Vector& f) {
  const int dim = full_dimension(modes, cutoff);
  SparseC Q(dim, dim);
  for (int j = 0; j < modes; ++j) {
    const SparseC a = annihilator(modes, cutoff, j);
    const SparseC ad = SparseC(a.adjoint());
    Q += Complex(f(j), 0) * (a + ad) + Complex(0, -f(modes + j)) * (a - ad);
  }
  return Q;
}

// a(g) = sum_j (g_xj - i g_pj) a_j
SparseC mode_annihilator(int modes, int cutoff, const Vector& g) {
  const int dim = full_dimension(modes, cutoff);
  SparseC out(dim, dim);
  for (int j = 0; j < modes; ++j) out += Complex(g(j), -g(modes + j)) * annihilator(modes, cutoff, j);
  return out;
}

// Passive unitary exp(-i a^dag h a), exponentiated within each total photon
// number sector; returns its left action.
LeftAction passive_action(const Matrix& L, int modes, int cutoff) {
  const int d = cutoff + 1;
  const int dim = full_dimension(modes, cutoff);
  // L acts on (x, p) as the complex matrix u^dag on x + ip.
  const CMatrix u_dag = L.topLeftCorner(modes, modes).cast<Complex>() +
                        Complex(0, 1) * L.bottomLeftCorner(modes, modes).cast<Complex>();
  const CMatrix u = u_dag.adjoint();
  Eigen::ComplexSchur<CMatrix> schur(u);
  Eigen::VectorXcd eigen_h(modes);
  for (int j = 0; j < modes; ++j) eigen_h(j) = -std::arg(schur.matrixT()(j, j));  // h = i log u
  const CMatrix h = schur.matrixU() * eigen_h.asDiagonal() * schur.matrixU().adjoint();

  CMatrix G = CMatrix::Zero(dim, dim);
  std::vector<SparseC> a;
  for (int j = 0; j < modes; ++j) a.push_back(annihilator(modes, cutoff, j));
  for (int j = 0; j < modes; ++j) {
    for (int k = 0; k < modes; ++k) G += h(j, k) * CMatrix(SparseC(a[j].adjoint()) * a[k]);
  }

  std::vector<std::vector<int>> sectors(static_cast<std::size_t>(modes * cutoff + 1));
  for (int idx = 0; idx < dim; ++idx) {
    const int total = modes == 1 ? idx : idx / d + idx % d;
    sectors[static_cast<std::size_t>(total)].push_back(idx);
  }
  std::vector<CMatrix> blocks;
  for (const auto& sector : sectors) {
    const auto n = static_cast<Eigen::Index>(sector.size());
    CMatrix sub(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      for (Eigen::Index c = 0; c < n; ++c) sub(r, c) = G(sector[r], sector[c]);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver((sub + sub.adjoint()) / 2.0);
    const Eigen::VectorXcd phases =
        (Complex(0, -1) * solver.eigenvalues().cast<Complex>()).array().exp().matrix();
    blocks.push_back(solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint());
  }
  return [sectors, blocks](const CMatrix& X) -> CMatrix {
    CMatrix out(X.rows(), X.cols());
    for (std::size_t s = 0; s < sectors.size(); ++s) {
      const auto& idx = sectors[s];
      const auto n = static_cast<Eigen::Index>(idx.size());
      CMatrix rows(n, X.cols());
      for (Eigen::Index r = 0; r < n; ++r) rows.row(r) = X.row(idx[r]);
      const CMatrix mapped = blocks[s] * rows;
      for (Eigen::Index r = 0; r < n; ++r) out.row(idx[r]) = mapped.row(r);
    }
    return out;
  };
}

CMatrix thermal(int modes, int cutoff, const Vector& nu) {
  const int d = cutoff + 1;
  std::vector<Vector> p;
  for (int j = 0; j < modes; ++j) {
    const double nbar = std::max(0.0, (nu(j) - 1.0) / 2.0);
    Vector pj(d);
    for (int n = 0; n < d; ++n) pj(n) = std::pow(nbar, n) / std::pow(nbar + 1.0, n + 1);
    p.push_back(pj);
  }
  const int dim = full_dimension(modes, cutoff);
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (int idx = 0; idx < dim; ++idx) {
    rho(idx, idx) = modes == 1 ? p[0](idx) : p[0](idx / d) * p[1](idx % d);
  }
  return rho;
}

}  // namespace

FockState::FockState(int modes, int cutoff, CMatrix rho, double leakage)
    : modes_(modes), cutoff_(cutoff), rho_(std::move(rho)), leakage_(leakage) {
  check_modes(modes_);
  if (cutoff_ < 1) throw DimensionError("cutoff must be at least 1");
  const int dim = full_dimension(modes_, cutoff_);
  if (rho_.rows() != dim || rho_.cols() != dim) throw DimensionError("density matrix size does not match cutoff");
}

FockState FockState::number_state(const std::vector<int>& photons, int cutoff) {
  const int modes = static_cast<int>(photons.size());
  check_modes(modes);
  const int d = cutoff + 1;
  int idx = 0;
  for (int n : photons) {
    if (n < 0 || n > cutoff) throw DimensionError("photon number outside the truncated space");
    idx = idx * d + n;
  }
  const int dim = full_dimension(modes, cutoff);
  CMatrix rho = CMatrix::Zero(dim, dim);
  rho(idx, idx) = 1.0;
  return {modes, cutoff, std::move(rho)};
}

FockState build_gaussian(const Matrix& V, const Vector& xi, int cutoff, double leakage_threshold) {
  const int modes = static_cast<int>(mode_count(V.rows()));
  check_modes(modes);
  require_same_dimension(V, xi);
  const int d = cutoff + 1;

  const WilliamsonDecomposition<double> w = williamson(CovarianceMatrix<double>(V));
  const BlochMessiahDecomposition<double> bm = bloch_messiah<double>(w.S);

  // U = U_O U_K U_O' realises S = O' K O on the quadratures.
  CMatrix rho = thermal(modes, cutoff, w.spectrum);
  rho = two_sided(rho, passive_action(bm.O_prime, modes, cutoff));
  std::vector<CMatrix> squeezers;
  for (int j = 0; j < modes; ++j) squeezers.push_back(squeezer(bm.K(j), d));
  rho = two_sided(rho, local_action(squeezers, d));
  rho = two_sided(rho, passive_action(bm.O, modes, cutoff));
  if (xi.squaredNorm() > 0.0) {
    std::vector<CMatrix> shifts;
    for (int j = 0; j < modes; ++j) shifts.push_back(displacement(Complex(xi(j), xi(modes + j)) / 2.0, d));
    rho = two_sided(rho, local_action(shifts, d));
  }

  const double trace = rho.trace().real();
  const double leakage = 1.0 - trace;
  if (leakage > leakage_threshold) {
    throw CutoffError("Fock cutoff " + std::to_string(cutoff) + " loses " + std::to_string(leakage) +
                      " of the probability");
  }
  return {modes, cutoff, rho / trace, leakage};
}

FockState build_gaussian(const GaussianState<double>& state, int cutoff, double leakage_threshold) {
  return build_gaussian(state.V(), state.xi(), cutoff, leakage_threshold);
}

ModeOperatorResult apply_mode_operator(const FockState& state, const Vector& g, Process process) {
  require_normalised(g);
  if (g.size() != 2 * state.modes()) throw DimensionError("mode vector does not match the Fock state");
  SparseC op = mode_annihilator(state.modes(), state.cutoff(), g);
  if (process == Process::add) op = SparseC(op.adjoint());
  const CMatrix out = two_sided(state.rho(), op);
  const double ratio = out.trace().real() / state.trace();
  if (ratio <= 1e-14) throw VacuumSubtractionError("mode operator annihilates the state");
  return {FockState(state.modes(), state.cutoff(), out / out.trace().real(), state.leakage()), ratio};
}

ModeOperatorResult apply_mixture(const FockState& state, const SubtractionSpec<double>& spec) {
  if (spec.dimension() != 2 * state.modes()) throw DimensionError("spec does not match the Fock state");
  CMatrix total = CMatrix::Zero(state.rho().rows(), state.rho().cols());
  for (const auto& c : spec.components()) {
    SparseC op = mode_annihilator(state.modes(), state.cutoff(), c.g);
    if (spec.process() == Process::add) op = SparseC(op.adjoint());
    total += c.gamma * two_sided(state.rho(), op);
  }
  const double ratio = total.trace().real() / state.trace();
  if (ratio <= 1e-14) throw VacuumSubtractionError("mode operators annihilate the state");
  return {FockState(state.modes(), state.cutoff(), total / total.trace().real(), state.leakage()), ratio};
}

FockState apply_passive(const FockState& state, const Matrix& L) {
  if (L.rows() != 2 * state.modes() || !is_orthogonal_symplectic(L)) {
    throw InvalidStateError("passive transform must be orthogonal symplectic of matching size");
  }
  return {state.modes(), state.cutoff(), two_sided(state.rho(), passive_action(L, state.modes(), state.cutoff())),
          state.leakage()};
}

FockState reduce_to_mode(const FockState& state, const Vector& g) {
  require_normalised(g);
  if (g.size() != 2 * state.modes()) throw DimensionError("mode vector does not match the Fock state");
  const SymplecticBasis<double> basis = complete_symplectic_basis<double>(Matrix(g));
  const FockState rotated = apply_passive(state, basis_change(basis));
  if (state.modes() == 1) return rotated;
  const int d = state.local_dimension();
  CMatrix reduced = CMatrix::Zero(d, d);
  for (int n1 = 0; n1 < d; ++n1) {
    for (int m1 = 0; m1 < d; ++m1) {
      Complex s(0);
      for (int n2 = 0; n2 < d; ++n2) s += rotated.rho()(n1 * d + n2, m1 * d + n2);
      reduced(n1, m1) = s;
    }
  }
  return {1, state.cutoff(), std::move(reduced), state.leakage()};
}

Complex displacement_element(int m, int n, Complex gamma) {
  const double x = std::norm(gamma);
  const double envelope = std::exp(-x / 2.0);
  if (m >= n) {
    const double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
    return ratio * std::pow(gamma, m - n) * envelope *
           std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(m - n), x);
  }
  const double ratio = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)));
  return ratio * std::pow(-std::conj(gamma), n - m) * envelope *
         std::assoc_laguerre(static_cast<unsigned>(m), static_cast<unsigned>(n - m), x);
}

double fock_wigner(const FockState& state, const Vector& beta) {
  const int modes = state.modes();
  if (beta.size() != 2 * modes) throw DimensionError("evaluation point does not match the Fock state");
  const int d = state.local_dimension();
  // Displaced parity D(gamma) (-1)^n per mode, gamma = beta_x + i beta_p.
  std::vector<CMatrix> kernels;
  for (int j = 0; j < modes; ++j) {
    const Complex gamma(beta(j), beta(modes + j));
    CMatrix K(d, d);
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n < d; ++n) K(m, n) = (n % 2 == 0 ? 1.0 : -1.0) * displacement_element(m, n, gamma);
    }
    kernels.push_back(K);
  }
  const CMatrix& rho = state.rho();
  Complex total(0);
  if (modes == 1) {
    total = (kernels[0] * rho).trace();
  } else {
    for (int a1 = 0; a1 < d; ++a1) {
      for (int a2 = 0; a2 < d; ++a2) {
        for (int b1 = 0; b1 < d; ++b1) {
          const Complex k1 = kernels[0](a1, b1);
          for (int b2 = 0; b2 < d; ++b2) total += k1 * kernels[1](a2, b2) * rho(b1 * d + b2, a1 * d + a2);
        }
      }
    }
  }
  return total.real() / std::pow(2.0 * EIGEN_PI, modes);
}

Complex fock_moment(const FockState& state, const std::vector<Vector>& fs) {
  // Intermediate states of Q(f1)...Q(fn) reach n levels above the cutoff, so
  // the operators act in a space padded by n.
  const int modes = state.modes();
  const int d = state.local_dimension();
  const int cutoff = state.cutoff() + static_cast<int>(fs.size());
  const int padded_d = cutoff + 1;
  const int dim = full_dimension(modes, cutoff);
  auto embed = [&](int idx) { return modes == 1 ? idx : (idx / d) * padded_d + idx % d; };
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (int i = 0; i < state.rho().rows(); ++i) {
    for (int j = 0; j < state.rho().cols(); ++j) rho(embed(i), embed(j)) = state.rho()(i, j);
  }
  CMatrix product = CMatrix::Identity(dim, dim);
  for (const auto& f : fs) {
    if (f.size() != 2 * modes) throw DimensionError("quadrature vector does not match the Fock state");
    product = product * quadrature(modes, cutoff, f);
  }
  return (rho * product).trace();
}

double fock_purity(const FockState& state) { return state.rho().squaredNorm(); }

}  // namespace cvdg::fock
