#include "secbeam/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "secbeam/metrics.hpp"
#include "secbeam/power_kernels.hpp"

namespace secbeam {

namespace {

double min_eigenvalue(const CxMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CxMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("min_eigenvalue: eigensolver did not converge");
  }
  return es.eigenvalues().minCoeff();
}

double quadratic_value(const CxMatrix& x, const CxVector& b, double c0,
                       const CxVector& d) {
  return d.dot(x * d).real() + 2.0 * b.dot(d).real() + c0;
}

// Unit directions that appear in a SINR quotient for stream k: the wanted
// beam first, then every interfering beam, then the noise beam if it is fed.
struct QuotientDirections {
  CxVector wanted;
  double wanted_power = 0.0;
  std::vector<CxVector> interferers;
  std::vector<double> powers;
};

QuotientDirections quotient_directions(const BeamformingSolution& sol, int k) {
  QuotientDirections q;
  q.wanted = sol.directions.col(k);
  q.wanted_power = sol.powers[k];
  const int users = static_cast<int>(sol.powers.size());
  for (int i = 0; i < users; ++i) {
    if (i == k) continue;
    q.interferers.push_back(sol.directions.col(i));
    q.powers.push_back(sol.powers[i]);
  }
  if (sol.an_power > 0.0) {
    q.interferers.push_back(sol.an_direction);
    q.powers.push_back(sol.an_power);
  }
  return q;
}

// d^H Xq d with Xq = p_k w w^H - gamma * sum p_i v_i v_i^H is the quadratic
// whose sign at the worst error decides whether the stream SINR clears gamma.
CxMatrix quotient_matrix(const QuotientDirections& q, double gamma) {
  CxMatrix x = q.wanted_power * q.wanted * q.wanted.adjoint();
  for (size_t i = 0; i < q.interferers.size(); ++i) {
    x -= gamma * q.powers[i] * q.interferers[i] * q.interferers[i].adjoint();
  }
  return x;
}

// True when the wanted beam is colinear with the estimate and every direction
// in the quotient is orthogonal to the others, which lets the worst error be
// found along two unit vectors.
bool aligned_geometry(const QuotientDirections& q, const CxVector& estimate) {
  const double tol = 1e-10;
  const double en = estimate.norm();
  if (std::abs(q.wanted.dot(estimate)) < (1.0 - 1e-12) * en) return false;
  for (const CxVector& v : q.interferers) {
    if (std::abs(v.dot(estimate)) > tol * en) return false;
    if (std::abs(v.dot(q.wanted)) > tol) return false;
  }
  for (size_t i = 0; i < q.interferers.size(); ++i) {
    for (size_t j = i + 1; j < q.interferers.size(); ++j) {
      if (std::abs(q.interferers[i].dot(q.interferers[j])) > tol) return false;
    }
  }
  return true;
}

struct AlignedEve {
  bool usable = false;
  CxVector an_unit;  // colinear with the estimate when the noise beam is fed
  double an_power = 0.0;
};

// The eavesdropper quotient admits the two-direction reduction when its
// estimate is orthogonal to all signal beams and the noise beam rides on the
// estimate itself.
AlignedEve aligned_eve_geometry(const BeamformingSolution& sol,
                                const CxVector& eve_estimate, int k) {
  AlignedEve out;
  const double tol = 1e-10;
  const double en = eve_estimate.norm();
  const int users = static_cast<int>(sol.powers.size());
  for (int i = 0; i < users; ++i) {
    if (std::abs(sol.directions.col(i).dot(eve_estimate)) > tol * en) {
      return out;
    }
    for (int j = i + 1; j < users; ++j) {
      if (std::abs(sol.directions.col(i).dot(sol.directions.col(j))) > tol) {
        return out;
      }
    }
  }
  if (sol.an_power > 0.0) {
    if (std::abs(sol.an_direction.dot(eve_estimate)) < (1.0 - 1e-12) * en) {
      return out;  // noise beam not on the estimate: no reduction
    }
    for (int i = 0; i < users; ++i) {
      if (std::abs(sol.an_direction.dot(sol.directions.col(i))) > tol) {
        return out;
      }
    }
    out.an_unit = eve_estimate / en;
    out.an_power = sol.an_power;
  }
  out.usable = true;
  (void)k;
  return out;
}

// Smallest gamma is 0; past this bound the numerator cannot keep up even with
// zero interference, so the worst-case search can bisect inside it.
double sinr_upper_bound(double p, double norm, double eps, double sigma2) {
  const double reach = norm + eps;
  return p * reach * reach / sigma2 + 1.0;
}

}  // namespace

// ---- trust-region style ball minimizer -------------------------------------

BallQuadraticMin minimize_quadratic_ball(const CxMatrix& x, const CxVector& b,
                                         double c0, double radius) {
  const Eigen::Index n = x.rows();
  if (x.cols() != n || b.size() != n) {
    throw std::invalid_argument("minimize_quadratic_ball: size mismatch");
  }
  if (radius < 0.0) {
    throw std::invalid_argument("minimize_quadratic_ball: negative radius");
  }
  BallQuadraticMin out;
  if (radius == 0.0 || n == 0) {
    out.value = c0;
    out.argmin = CxVector::Zero(n);
    return out;
  }

  const EigenDecomposition<double> dec = evd(HermitianXcd(x));
  const RealVector& lam = dec.eigenvalues;  // descending
  const CxMatrix& u = dec.eigenvectors;
  const double lam_min = lam[n - 1];
  const CxVector beta = u.adjoint() * b;
  const double r2 = radius * radius;

  const auto phi = [&](double nu) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double den = lam[i] + nu;
      acc += std::norm(beta[i]) / (den * den);
    }
    return acc;
  };
  const auto finish = [&](const CxVector& coords, double nu) {
    out.argmin = u * coords;
    out.value = quadratic_value(x, b, c0, out.argmin);
    out.multiplier = nu;
    return out;
  };

  if (lam_min > 0.0 && phi(0.0) <= r2) {
    CxVector coords(n);
    for (Eigen::Index i = 0; i < n; ++i) coords[i] = -beta[i] / lam[i];
    return finish(coords, 0.0);
  }

  double lo = std::max(0.0, -lam_min);
  if (lam_min <= 0.0) {
    // bottom eigenspace handling: when b has no weight there the secular
    // equation can fall short of the radius and the minimizer needs padding
    const double spread = std::max(std::abs(lam[0]), std::abs(lam_min));
    const double gap = 1e-12 * std::max(spread, 1.0);
    double bottom2 = 0.0;
    double phi_perp = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lam[i] - lam_min <= gap) {
        bottom2 += std::norm(beta[i]);
      } else {
        const double den = lam[i] + lo;
        phi_perp += std::norm(beta[i]) / (den * den);
      }
    }
    const double btol = 1e-13 * std::max(b.norm(), 1e-300);
    if (bottom2 <= btol * btol && phi_perp <= r2) {
      CxVector coords = CxVector::Zero(n);
      double used2 = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (lam[i] - lam_min > gap) {
          coords[i] = -beta[i] / (lam[i] + lo);
          used2 += std::norm(coords[i]);
        }
      }
      coords[n - 1] += std::sqrt(std::max(r2 - used2, 0.0));
      return finish(coords, lo);
    }
  }

  double hi = lo + b.norm() / radius + 1.0;  // phi(hi) < r2 by construction
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (phi(mid) > r2) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  CxVector coords(n);
  for (Eigen::Index i = 0; i < n; ++i) coords[i] = -beta[i] / (lam[i] + hi);
  return finish(coords, hi);
}

// ---- constraint matrices and multiplier blocks -----------------------------

ConstraintMatrices build_x_matrices(const ChannelSet& channels,
                                    const BeamformingSolution& sol,
                                    const TargetSinrs& targets) {
  const int k = channels.n_users();
  if (static_cast<int>(sol.powers.size()) != k ||
      static_cast<int>(targets.gamma.size()) != k) {
    throw std::invalid_argument("build_x_matrices: size mismatch");
  }
  const CovarianceViews v = covariance_views(sol);
  const Eigen::Index n = channels.n_antennas();
  CxMatrix total = v.an.rows() == n ? CxMatrix(v.an)
                                    : CxMatrix(CxMatrix::Zero(n, n));
  for (int i = 0; i < k; ++i) total += v.signal[i];

  ConstraintMatrices out;
  out.user.reserve(k);
  out.eve.reserve(k);
  for (int i = 0; i < k; ++i) {
    const CxMatrix others = total - v.signal[i];
    out.user.push_back((1.0 / targets.gamma[i]) * v.signal[i] - others);
    out.eve.push_back(others - (1.0 / targets.gamma_e[i]) * v.signal[i]);
  }
  return out;
}

CxMatrix assemble_lmi(const CxMatrix& x, const CxVector& h, double c,
                      double mu, double eps) {
  const Eigen::Index n = x.rows();
  if (x.cols() != n || h.size() != n) {
    throw std::invalid_argument("assemble_lmi: size mismatch");
  }
  CxMatrix m(n + 1, n + 1);
  m.topLeftCorner(n, n) = x + mu * CxMatrix::Identity(n, n);
  m.topRightCorner(n, 1) = x * h;
  m.bottomLeftCorner(1, n) = (x * h).adjoint();
  m(n, n) = h.dot(x * h).real() + c - mu * eps * eps;
  return m;
}

bool lmi_feasible_at(const CxMatrix& x, const CxVector& h, double c, double mu,
                     double eps, double tol) {
  const Eigen::Index n = x.rows();
  const CxMatrix a = x + mu * CxMatrix::Identity(n, n);
  const CxVector b = x * h;
  const double corner = h.dot(b).real() + c - mu * eps * eps;
  return generalized_schur_feasible(HermitianXcd(a), b, corner, 1e-9, tol);
}

LmiFeasibility check_lmi_feasibility(const CxMatrix& x, const CxVector& h,
                                     double c, double eps, double tol) {
  LmiFeasibility out;
  const double corner0 = h.dot(x * h).real() + c;
  const double scale = std::max({1.0, std::abs(corner0), x.cwiseAbs().maxCoeff()});
  if (eps <= 0.0) {
    // zero radius: only the nominal point matters
    out.feasible = corner0 >= -tol * scale;
    out.mu = 0.0;
    out.min_eigenvalue = corner0;
    return out;
  }
  const auto eig_at = [&](double mu) {
    return min_eigenvalue(assemble_lmi(x, h, c, mu, eps));
  };
  if (corner0 < 0.0) {
    out.feasible = false;
    out.mu = 0.0;
    out.min_eigenvalue = eig_at(0.0);
    return out;
  }
  // any admissible multiplier keeps the corner entry nonnegative
  const double mu_hi = corner0 / (eps * eps);
  const int grid = 64;
  double best_mu = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= grid; ++i) {
    const double mu = mu_hi * i / grid;
    const double val = eig_at(mu);
    if (val > best) {
      best = val;
      best_mu = mu;
      best_i = i;
    }
  }
  // the smallest eigenvalue of an affine family is concave in mu, so a
  // golden-section refinement of the bracketing cell finds its maximum
  double a = mu_hi * std::max(best_i - 1, 0) / grid;
  double b = mu_hi * std::min(best_i + 1, grid) / grid;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = eig_at(x1);
  double f2 = eig_at(x2);
  for (int it = 0; it < 120; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = eig_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = eig_at(x1);
    }
    if (std::max(f1, f2) > best) {
      best = std::max(f1, f2);
      best_mu = f1 > f2 ? x1 : x2;
    }
  }
  out.mu = best_mu;
  out.min_eigenvalue = best;
  out.feasible = best >= -tol * scale;
  return out;
}

// ---- worst-case search -----------------------------------------------------

WorstCase worst_case_user_sinr(const ChannelSet& channels,
                               const BeamformingSolution& sol, int k) {
  const CxVector est = channels.estimates.col(k);
  const double en = est.norm();
  const double eps = channels.error_radii[k];
  const double sigma2 = channels.noise_vars[k];
  const QuotientDirections q = quotient_directions(sol, k);

  if (aligned_geometry(q, est)) {
    // worst error: back off the wanted beam by t, dump the rest of the budget
    // on the strongest interfering direction
    double p_max = 0.0;
    int strongest = -1;
    for (size_t i = 0; i < q.powers.size(); ++i) {
      if (q.powers[i] > p_max) {
        p_max = q.powers[i];
        strongest = static_cast<int>(i);
      }
    }
    const auto value_at = [&](double t) {
      const double back = en - t;
      return q.wanted_power * back * back /
             (p_max * (eps * eps - t * t) + sigma2);
    };
    std::vector<double> candidates = {0.0, eps};
    if (p_max > 0.0) {
      const double t_flat = (p_max * eps * eps + sigma2) / (p_max * en);
      if (t_flat > 0.0 && t_flat < eps) candidates.push_back(t_flat);
    }
    double t_best = candidates[0];
    double best = value_at(t_best);
    for (double t : candidates) {
      const double val = value_at(t);
      if (val < best) {
        best = val;
        t_best = t;
      }
    }
    WorstCase out;
    out.sinr = best;
    out.witness = CxVector::Zero(est.size());
    if (en > 0.0) out.witness -= (t_best / en) * est;
    const double spill = std::sqrt(std::max(eps * eps - t_best * t_best, 0.0));
    if (strongest >= 0 && spill > 0.0) {
      out.witness += spill * q.interferers[strongest];
    }
    return out;
  }

  // general geometry: bisect on the target and test each level with the exact
  // ball minimizer applied to the level quadratic
  const auto margin = [&](double gamma) {
    const CxMatrix x = quotient_matrix(q, gamma);
    const CxVector b = x * est;
    const double c0 = est.dot(b).real() - gamma * sigma2;
    return minimize_quadratic_ball(x, b, c0, eps);
  };
  double lo = 0.0;
  double hi = sinr_upper_bound(q.wanted_power, en, eps, sigma2);
  BallQuadraticMin at_lo = margin(lo);
  if (at_lo.value < 0.0) {
    // numerator can vanish inside the ball
    WorstCase out;
    out.sinr = 0.0;
    out.witness = at_lo.argmin;
    return out;
  }
  WorstCase out;
  out.witness = at_lo.argmin;
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(hi, 1.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    const BallQuadraticMin m = margin(mid);
    if (m.value >= 0.0) {
      lo = mid;
      out.witness = m.argmin;
    } else {
      hi = mid;
      out.witness = m.argmin;
    }
  }
  out.sinr = 0.5 * (lo + hi);
  return out;
}

WorstCase worst_case_eve_sinr(const ChannelSet& channels,
                              const BeamformingSolution& sol, int k) {
  const CxVector est = channels.eve_estimate;
  const double en = est.norm();
  const double eps = channels.eve_error_radius;
  const double sigma2 = channels.eve_noise_var;
  const QuotientDirections q = quotient_directions(sol, k);

  const AlignedEve geom = aligned_eve_geometry(sol, est, k);
  if (geom.usable) {
    // steer leakage onto the wanted beam with t of the budget; the remainder
    // walks the estimate toward the noise beam null
    const auto value_at = [&](double t) {
      const double u = std::sqrt(std::max(eps * eps - t * t, 0.0));
      const double left = std::max(en - u, 0.0);
      return q.wanted_power * t * t /
             (geom.an_power * left * left + sigma2);
    };
    double t_best = eps;
    double best = value_at(eps);
    if (geom.an_power > 0.0) {
      const int grid = 1000;
      for (int i = 0; i <= grid; ++i) {
        const double t = eps * i / grid;
        const double val = value_at(t);
        if (val > best) {
          best = val;
          t_best = t;
        }
      }
      double a = std::max(t_best - eps / grid, 0.0);
      double b = std::min(t_best + eps / grid, eps);
      const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - ratio * (b - a);
      double x2 = a + ratio * (b - a);
      double f1 = value_at(x1);
      double f2 = value_at(x2);
      for (int it = 0; it < 200; ++it) {
        if (f1 > f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - ratio * (b - a);
          f1 = value_at(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + ratio * (b - a);
          f2 = value_at(x2);
        }
      }
      const double t_ref = 0.5 * (a + b);
      if (value_at(t_ref) > best) {
        best = value_at(t_ref);
        t_best = t_ref;
      }
    }
    WorstCase out;
    out.sinr = best;
    out.witness = CxVector::Zero(est.size());
    if (t_best > 0.0) {
      // keep the leakage coherent with any residual overlap
      const Complex r0 = q.wanted.dot(est);
      const Complex phase =
          std::abs(r0) > 0.0 ? r0 / std::abs(r0) : Complex(1.0, 0.0);
      out.witness += t_best * phase * q.wanted;
    }
    const double u = std::sqrt(std::max(eps * eps - t_best * t_best, 0.0));
    if (geom.an_power > 0.0 && u > 0.0 && en > 0.0) {
      out.witness -= std::min(u, en) / en * est;
      // any leftover budget is irrelevant once the noise beam is nulled
    }
    return out;
  }

  // general geometry: the largest target the leakage can reach, found by
  // minimizing the reversed level quadratic
  const auto margin = [&](double gamma) {
    // capped at gamma everywhere iff min of gamma*den - num stays nonnegative
    CxMatrix x = CxMatrix::Zero(est.size(), est.size());
    for (size_t i = 0; i < q.interferers.size(); ++i) {
      x += gamma * q.powers[i] * q.interferers[i] * q.interferers[i].adjoint();
    }
    x -= q.wanted_power * q.wanted * q.wanted.adjoint();
    const CxVector b = x * est;
    const double c0 = est.dot(b).real() + gamma * sigma2;
    return minimize_quadratic_ball(x, b, c0, eps);
  };
  double lo = 0.0;
  double hi = sinr_upper_bound(q.wanted_power, en, eps, sigma2);
  WorstCase out;
  out.witness = CxVector::Zero(est.size());
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(hi, 1.0); ++it) {
    const double mid = 0.5 * (lo + hi);
    const BallQuadraticMin m = margin(mid);
    if (m.value >= 0.0) {
      hi = mid;  // every error keeps the interception below mid
    } else {
      lo = mid;
      out.witness = m.argmin;  // violator: interception above mid here
    }
  }
  out.sinr = 0.5 * (lo + hi);
  return out;
}

// ---- structure and optimality reports --------------------------------------

RankReport check_rank_structure(const ChannelSet& channels,
                                const BeamformingSolution& sol, double tol) {
  const CovarianceViews v = covariance_views(sol);
  const int k = channels.n_users();
  RankReport out;
  out.signal_ranks.resize(k, 0);
  out.rank_one = true;
  out.aligned = true;
  const auto block_rank = [&](const CxMatrix& m, const CxVector& ref,
                              double* alignment) {
    const EigenDecomposition<double> d = evd(HermitianXcd(m));
    const double trace = d.eigenvalues.sum();
    const double thresh = tol * std::max(trace, 1e-300);
    int rank = 0;
    for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
      if (d.eigenvalues[i] > thresh) ++rank;
    }
    if (rank >= 1 && ref.size() > 0 && ref.norm() > 0.0) {
      *alignment = std::abs(d.eigenvectors.col(0).dot(ref)) / ref.norm();
    }
    return rank;
  };
  for (int i = 0; i < k; ++i) {
    double alignment = 1.0;
    out.signal_ranks[i] =
        block_rank(v.signal[i], channels.estimates.col(i), &alignment);
    out.total_rank += out.signal_ranks[i];
    if (out.signal_ranks[i] > 1) out.rank_one = false;
    out.worst_alignment = std::min(out.worst_alignment, alignment);
  }
  double an_alignment = 1.0;
  out.an_rank = v.an.rows() == 0
                    ? 0
                    : block_rank(v.an, channels.eve_estimate, &an_alignment);
  out.total_rank += out.an_rank;
  if (out.an_rank > 1) out.rank_one = false;
  out.worst_alignment = std::min(out.worst_alignment, an_alignment);
  out.aligned = out.worst_alignment >= 1.0 - 1e-8;
  return out;
}

KktReport kkt_residuals(const ChannelSet& channels,
                        const BeamformingSolution& sol,
                        const TargetSinrs& targets) {
  const int k = channels.n_users();
  KktReport out;
  out.users.resize(k);
  const double en2 = channels.eve_estimate.squaredNorm();
  for (int i = 0; i < k; ++i) {
    KktReport::PerUser& r = out.users[i];
    const double norm = channels.estimates.col(i).norm();
    const double n2 = channels.estimates.col(i).squaredNorm();
    const double p = sol.powers[i];
    const double eps = channels.error_radii[i];
    const double sigma2 = channels.noise_vars[i];
    const double gamma = targets.gamma[i];
    if (sol.user_multipliers[i]) {
      const double mu = *sol.user_multipliers[i];
      const double margin =
          user_power_margin(mu, p, n2, sigma2, gamma, eps * eps);
      const double den = mu * gamma + p;
      const double flow = den > 0.0 ? mu * p * n2 / den : 0.0;
      r.binding = margin / std::max({1.0, std::abs(flow), sigma2});
      const double xi = robust_user_dual(gamma, norm, eps);
      r.power_stationarity =
          1.0 - xi * mu * mu * gamma * n2 / (den * den);
      const double slope = p * p * n2 / (den * den);
      r.multiplier_stationarity =
          (slope - eps * eps) / std::max({1.0, slope, eps * eps});
    }
    if (sol.eve_multipliers[i]) {
      const double mu_e = *sol.eve_multipliers[i];
      const double margin = eve_power_margin(
          mu_e, sol.an_power, en2, channels.eve_noise_var,
          channels.eve_error_radius * channels.eve_error_radius);
      r.eve_binding =
          margin / std::max({1.0, channels.eve_noise_var,
                             mu_e * channels.eve_error_radius *
                                 channels.eve_error_radius});
    }
    out.max_residual = std::max(
        {out.max_residual, std::abs(r.binding), std::abs(r.power_stationarity),
         std::abs(r.multiplier_stationarity), std::abs(r.eve_binding)});
  }
  return out;
}

FeasibilityReport verify_solution(const ChannelSet& channels,
                                  const BeamformingSolution& sol,
                                  const TargetSinrs& targets, double rel_tol) {
  const int k = channels.n_users();
  FeasibilityReport out;
  out.users.resize(k);
  out.eves.resize(k);
  out.users_ok = true;
  out.eves_ok = true;
  for (int i = 0; i < k; ++i) {
    const WorstCase wu = worst_case_user_sinr(channels, sol, i);
    out.users[i] = {wu.sinr, targets.gamma[i],
                    wu.sinr >= targets.gamma[i] * (1.0 - rel_tol)};
    out.users_ok = out.users_ok && out.users[i].ok;
    const WorstCase we = worst_case_eve_sinr(channels, sol, i);
    out.eves[i] = {we.sinr, targets.gamma_e[i],
                   we.sinr <= targets.gamma_e[i] * (1.0 + rel_tol)};
    out.eves_ok = out.eves_ok && out.eves[i].ok;
  }
  out.rank = check_rank_structure(channels, sol);
  out.structure_ok =
      out.rank.rank_one && out.rank.total_rank <= k + 1;
  return out;
}

// ---- independent power oracle ----------------------------------------------

double p2_power_oracle(double gamma, double sigma2, double norm, double eps) {
  if (gamma <= 0.0 || sigma2 <= 0.0 || norm <= 0.0 || eps < 0.0 ||
      eps >= norm) {
    throw std::invalid_argument("p2_power_oracle: bad parameters");
  }
  const double n2 = norm * norm;
  if (eps == 0.0) {
    // the margin climbs toward p n2/gamma - sigma2 as the multiplier grows
    return gamma * sigma2 / n2;
  }
  const double eps2 = eps * eps;
  const auto best_margin = [&](double p) {
    // concave in the multiplier; past p n2/(gamma eps2) it is surely negative
    double lo = 0.0;
    double hi = p * n2 / (gamma * eps2) + sigma2 / eps2;
    for (int it = 0; it < 150; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      const double g1 = user_power_margin(m1, p, n2, sigma2, gamma, eps2);
      const double g2 = user_power_margin(m2, p, n2, sigma2, gamma, eps2);
      if (g1 < g2) {
        lo = m1;
      } else {
        hi = m2;
      }
    }
    const double mu = 0.5 * (lo + hi);
    return user_power_margin(mu, p, n2, sigma2, gamma, eps2);
  };
  double hi = gamma * sigma2 / n2 + sigma2;
  int guard = 0;
  while (best_margin(hi) < 0.0 && guard++ < 2000) hi *= 2.0;
  if (guard >= 2000) {
    throw std::runtime_error("p2_power_oracle: could not bracket");
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (best_margin(mid) >= 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

CxMatrix orthogonal_complement_basis(const CxMatrix& vectors, double tol) {
  const Eigen::Index n = vectors.rows();
  const Eigen::Index m = vectors.cols();
  if (m > n) {
    throw std::invalid_argument(
        "orthogonal_complement_basis: more vectors than dimensions");
  }
  if (m == 0) return CxMatrix::Identity(n, n);
  Eigen::ColPivHouseholderQR<CxMatrix> qr(vectors);
  qr.setThreshold(tol);
  if (qr.rank() < m) {
    throw std::invalid_argument(
        "orthogonal_complement_basis: rank-deficient input");
  }
  const CxMatrix q = qr.householderQ();
  CxMatrix basis = q.rightCols(n - m);
  const double defect =
      (basis.adjoint() * basis - CxMatrix::Identity(n - m, n - m))
          .cwiseAbs()
          .maxCoeff();
  if (defect > 1e-10) {
    throw std::runtime_error("orthogonal_complement_basis: lost unitarity");
  }
  return basis;
}

}  // namespace secbeam
