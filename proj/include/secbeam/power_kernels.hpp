#pragma once

namespace secbeam {

// Scalar kernels of the decoupled power allocation.  Templated so the same
// expressions can be evaluated in double for solving and in exact rational
// arithmetic for identity checks.

// Worst-case per-user transmit power gamma * sigma2 / (norm - eps)^2.
// Requires eps < norm.
template <typename Scalar>
Scalar robust_info_power(Scalar gamma, Scalar sigma2, Scalar norm, Scalar eps) {
  const Scalar d = norm - eps;
  return gamma * sigma2 / (d * d);
}

// Multiplier paired with the robust power, p (norm - eps) / (gamma eps).
// Requires eps > 0.
template <typename Scalar>
Scalar robust_user_multiplier(Scalar p, Scalar gamma, Scalar norm, Scalar eps) {
  return p * (norm - eps) / (gamma * eps);
}

// Dual scale of the binding user power constraint, gamma / (norm - eps)^2.
template <typename Scalar>
Scalar robust_user_dual(Scalar gamma, Scalar norm, Scalar eps) {
  const Scalar d = norm - eps;
  return gamma / (d * d);
}

// Left side of the robust user power constraint,
//   mu p norm2 / (mu gamma + p) - sigma2 - mu eps2.
template <typename Scalar>
Scalar user_power_margin(Scalar mu, Scalar p, Scalar norm2, Scalar sigma2,
                         Scalar gamma, Scalar eps2) {
  const Scalar den = mu * gamma + p;
  const Scalar coupling = den == Scalar(0) ? Scalar(0) : mu * p * norm2 / den;
  return coupling - sigma2 - mu * eps2;
}

// Left side of the artificial-noise power constraint at the eavesdropper,
//   mu p norm2 / (mu + p) + sigma2 - mu eps2, whose first term vanishes at
//   p = 0.
template <typename Scalar>
Scalar eve_power_margin(Scalar mu, Scalar p, Scalar norm2, Scalar sigma2,
                        Scalar eps2) {
  const Scalar den = mu + p;
  const Scalar coupling = (p == Scalar(0) || den == Scalar(0))
                              ? Scalar(0)
                              : mu * p * norm2 / den;
  return coupling + sigma2 - mu * eps2;
}

}  // namespace secbeam
