#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "sqjcm/entanglement.hpp"
#include "sqjcm/errors.hpp"

namespace sqjcm {
namespace {

double spectrum_entropy(const Eigen::VectorXd& eig, LogBase base) {
  std::vector<double> v(eig.data(), eig.data() + eig.size());
  for (double& x : v)
    if (x < 0.0 && x > -1e-10) x = 0.0;
  return shannon_entropy(v, base);
}

}  // namespace

DemResult dem_exact_dense(const PreparedField& prepared, const AtomMixture& atom, const ModelParams& params,
                          double t, LogBase base) {
  atom.validate();
  if (prepared.cutoff() > kDenseCheckMaxCutoff)
    throw DomainError("dem_exact_dense: cutoff above " + std::to_string(kDenseCheckMaxCutoff));

  const auto excited = evolve_branch(prepared.amplitudes, params, BranchStart::excited, t);
  const auto ground = evolve_branch(prepared.amplitudes, params, BranchStart::ground, t);
  const Eigen::Index m = static_cast<Eigen::Index>(excited.excited_amplitudes.size());

  // Basis index: level * m + n with level 0 = |2>, level 1 = |1>.
  auto as_vector = [m](const BranchState& b) {
    Eigen::VectorXcd v(2 * m);
    for (Eigen::Index n = 0; n < m; ++n) {
      v(n) = b.excited_amplitudes[static_cast<std::size_t>(n)];
      v(m + n) = b.ground_amplitudes[static_cast<std::size_t>(n)];
    }
    return v;
  };
  const Eigen::VectorXcd psi1 = as_vector(excited);
  const Eigen::VectorXcd psi0 = as_vector(ground);
  const Eigen::MatrixXcd sigma = atom.lambda1 * psi1 * psi1.adjoint() + atom.lambda0 * psi0 * psi0.adjoint();

  Eigen::Matrix2cd rho_atom;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) rho_atom(i, j) = sigma.block(i * m, j * m, m, m).trace();
  const Eigen::MatrixXcd rho_field = sigma.block(0, 0, m, m) + sigma.block(m, m, m, m);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> joint_solver(sigma, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> field_solver(rho_field, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> atom_solver(rho_atom, Eigen::EigenvaluesOnly);

  DemResult out;
  out.mode = DemMode::exact;
  out.t = t;
  out.s_atom = spectrum_entropy(atom_solver.eigenvalues(), base);
  out.s_field = spectrum_entropy(field_solver.eigenvalues(), base);
  out.s_joint = spectrum_entropy(joint_solver.eigenvalues(), base);
  out.dem = out.s_atom + *out.s_field - *out.s_joint;
  return out;
}

}  // namespace sqjcm
