#pragma once

#include <optional>
#include <vector>

#include "secbeam/beamformer.hpp"
#include "secbeam/channel.hpp"
#include "secbeam/hermitian.hpp"

namespace secbeam {

// ---- robust quadratic constraints ------------------------------------------
//
// Every worst-case constraint here has the shape
//   (h + d)^H X (h + d) + c >= 0   for all ||d|| <= eps
// with X Hermitian. The S-procedure turns it into a semidefinite block in one
// scalar multiplier mu >= 0; the block is affine in mu, so the feasible mu set
// is an interval and max-min-eigenvalue search over mu is a concave problem.

// Exact global minimum of d^H X d + 2 Re(b^H d) + c0 over ||d|| <= radius.
// Eigenvalue decomposition plus a secular-equation bisection; handles the
// degenerate case where b has no component along the bottom eigenspace.
struct BallQuadraticMin {
  double value = 0.0;
  CxVector argmin;     // a minimizer, ||argmin|| <= radius
  double multiplier = 0.0;  // nu >= 0 with (X + nu I) argmin = -b
};
BallQuadraticMin minimize_quadratic_ball(const CxMatrix& x, const CxVector& b,
                                         double c0, double radius);

// Per-user constraint matrices for a rank-one design.
//   user: (1/gamma_k) S_k - sum_{i != k} S_i - W      (c = -sigma_k^2)
//   eve:  sum_{i != k} S_i + W - (1/gamma_e_k) S_k    (c = +sigma_e^2)
struct ConstraintMatrices {
  std::vector<CxMatrix> user;
  std::vector<CxMatrix> eve;
};
ConstraintMatrices build_x_matrices(const ChannelSet& channels,
                                    const BeamformingSolution& sol,
                                    const TargetSinrs& targets);

// The (n+1) x (n+1) multiplier block
//   [ X + mu I        X h              ]
//   [ h^H X^H   h^H X h + c - mu eps^2 ]
CxMatrix assemble_lmi(const CxMatrix& x, const CxVector& h, double c,
                      double mu, double eps);

// Membership test at a fixed multiplier, routed through the generalized Schur
// complement so singular top-left blocks are handled exactly.
bool lmi_feasible_at(const CxMatrix& x, const CxVector& h, double c, double mu,
                     double eps, double tol = 1e-9);

// Searches mu >= 0 for a positive semidefinite block. The block is affine in
// mu, so the best multiplier maximizes a concave smallest-eigenvalue curve.
struct LmiFeasibility {
  bool feasible = false;
  double mu = 0.0;              // best multiplier found
  double min_eigenvalue = 0.0;  // of the block at that multiplier
};
LmiFeasibility check_lmi_feasibility(const CxMatrix& x, const CxVector& h,
                                     double c, double eps, double tol = 1e-9);

// ---- worst-case performance ------------------------------------------------

struct WorstCase {
  double sinr = 0.0;
  CxVector witness;  // error vector attaining the reported value
};

// Smallest SINR of user k over its estimation error ball.
WorstCase worst_case_user_sinr(const ChannelSet& channels,
                               const BeamformingSolution& sol, int k);

// Largest SINR of the eavesdropper on stream k over its error ball.
WorstCase worst_case_eve_sinr(const ChannelSet& channels,
                              const BeamformingSolution& sol, int k);

// ---- solution structure ----------------------------------------------------

struct RankReport {
  std::vector<int> signal_ranks;
  int an_rank = 0;
  int total_rank = 0;
  double worst_alignment = 1.0;  // min_k |<v_k, h_k>| / ||h_k||
  bool rank_one = false;         // every transmit block has rank <= 1
  bool aligned = false;          // principal directions follow the estimates
};
RankReport check_rank_structure(const ChannelSet& channels,
                                const BeamformingSolution& sol,
                                double tol = 1e-9);

// First-order optimality of the per-user power subproblem at the multipliers
// carried by the solution. All residuals are scaled to be dimensionless.
struct KktReport {
  struct PerUser {
    double binding = 0.0;          // user power margin at (mu, p)
    double power_stationarity = 0.0;
    double multiplier_stationarity = 0.0;
    double eve_binding = 0.0;      // eavesdropper margin at its multiplier
  };
  std::vector<PerUser> users;
  double max_residual = 0.0;
};
KktReport kkt_residuals(const ChannelSet& channels,
                        const BeamformingSolution& sol,
                        const TargetSinrs& targets);

// ---- composition -----------------------------------------------------------

struct FeasibilityReport {
  struct UserCheck {
    double worst_sinr = 0.0;
    double target = 0.0;
    bool ok = false;
  };
  struct EveCheck {
    double worst_sinr = 0.0;
    double cap = 0.0;
    bool ok = false;
  };
  std::vector<UserCheck> users;
  std::vector<EveCheck> eves;
  RankReport rank;
  bool users_ok = false;
  bool eves_ok = false;
  bool structure_ok = false;
  bool ok() const { return users_ok && eves_ok && structure_ok; }
};
FeasibilityReport verify_solution(const ChannelSet& channels,
                                  const BeamformingSolution& sol,
                                  const TargetSinrs& targets,
                                  double rel_tol = 1e-9);

// ---- independent power oracle ----------------------------------------------

// Minimum per-user power that admits a multiplier with nonnegative user power
// margin. Bisection over power with a concave inner search over the
// multiplier; shares no algebra with the closed-form design.
double p2_power_oracle(double gamma, double sigma2, double norm, double eps);

// Orthonormal basis of the orthogonal complement of the column span.
// Throws if the input columns are rank deficient.
CxMatrix orthogonal_complement_basis(const CxMatrix& vectors,
                                     double tol = 1e-10);

}  // namespace secbeam
