#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "secbeam/hermitian.hpp"
#include "secbeam/rng.hpp"

using namespace secbeam;

namespace {

CxMatrix random_hermitian(int n, Rng& rng, double scale = 1.0) {
  CxMatrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a(i, j) = scale * rng.cgaussian();
    }
  }
  return 0.5 * (a + a.adjoint()).eval();
}

// Random PSD matrix with the given rank.
CxMatrix random_psd(int n, int rank, Rng& rng) {
  CxMatrix g(n, rank);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < rank; ++j) {
      g(i, j) = rng.cgaussian();
    }
  }
  return g * g.adjoint();
}

// Independent eigenvalue oracle: roots of det(m - q I) located by scanning
// for sign changes on a Gershgorin bracket and bisecting each one.  Shares
// nothing with the solver used by evd().
std::vector<double> charpoly_roots(const CxMatrix& m) {
  const int n = static_cast<int>(m.rows());
  double lo = 1e300;
  double hi = -1e300;
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j != i) radius += std::abs(m(i, j));
    }
    lo = std::min(lo, m(i, i).real() - radius);
    hi = std::max(hi, m(i, i).real() + radius);
  }
  const double pad = 1e-6 * std::max(1.0, hi - lo);
  lo -= pad;
  hi += pad;
  auto det_at = [&](double q) {
    return (m - q * CxMatrix::Identity(n, n)).determinant().real();
  };
  const int grid = 20000;
  std::vector<double> roots;
  double prev_q = lo;
  double prev_v = det_at(lo);
  for (int i = 1; i <= grid; ++i) {
    const double q = lo + (hi - lo) * i / grid;
    const double v = det_at(q);
    if (v == 0.0) {
      roots.push_back(q);
    } else if (prev_v != 0.0 && std::signbit(v) != std::signbit(prev_v)) {
      double a = prev_q;
      double b = q;
      double fa = prev_v;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = det_at(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (std::signbit(fm) == std::signbit(fa)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_q = q;
    prev_v = v;
  }
  std::sort(roots.begin(), roots.end(), std::greater<double>());
  return roots;
}

}  // namespace

TEST_CASE("evd identity") {
  HermitianXcd m(CxMatrix::Identity(4, 4));
  auto d = evd(m);
  for (int i = 0; i < 4; ++i) {
    CHECK(d.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK((d.eigenvectors.adjoint() * d.eigenvectors - CxMatrix::Identity(4, 4))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("evd rank one outer product") {
  const int n = 16;
  Rng rng(11);
  CxVector h(n);
  for (int i = 0; i < n; ++i) h[i] = rng.cgaussian();
  h *= std::sqrt(128.0) / h.norm();
  HermitianXcd m(h * h.adjoint());
  auto d = evd(m);
  CHECK(d.eigenvalues[0] == doctest::Approx(128.0).epsilon(1e-12));
  for (int i = 1; i < n; ++i) {
    CHECK(std::abs(d.eigenvalues[i]) < 1e-9 * 128.0);
  }
  // top eigenvector is h up to phase
  const double overlap = std::abs(d.eigenvectors.col(0).dot(h)) / h.norm();
  CHECK(overlap == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("evd matches bisection characteristic polynomial oracle") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    Rng rng(seed);
    CxMatrix a = random_hermitian(6, rng);
    HermitianXcd m(a);
    auto d = evd(m);
    auto roots = charpoly_roots(a);
    REQUIRE(roots.size() == 6);
    const double scale = d.eigenvalues.cwiseAbs().maxCoeff();
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(d.eigenvalues[i] - roots[i]) < 1e-8 * scale);
    }
  }
}

TEST_CASE("evd reconstruction property") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 7);
    CxMatrix a = random_hermitian(n, rng, 3.0);
    HermitianXcd m(a);
    auto d = evd(m);
    CxMatrix rec = d.eigenvectors * d.eigenvalues.asDiagonal() *
                   d.eigenvectors.adjoint();
    CHECK((rec - m.matrix()).cwiseAbs().maxCoeff() <
          1e-10 * std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff()));
    for (int i = 0; i + 1 < n; ++i) {
      CHECK(d.eigenvalues[i] >= d.eigenvalues[i + 1]);
    }
  }
}

TEST_CASE("hermitian construction validates symmetry") {
  CxMatrix bad(2, 2);
  bad << Complex(1, 0), Complex(2, 0), Complex(0, 0), Complex(1, 0);
  CHECK_THROWS_AS(HermitianXcd{bad}, std::invalid_argument);
  CxMatrix rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(HermitianXcd{rect}, std::invalid_argument);
  // tiny asymmetry is symmetrized, not rejected
  CxMatrix near = CxMatrix::Identity(3, 3);
  near(0, 1) = Complex(1e-15, 0);
  HermitianXcd ok(near);
  CHECK((ok.matrix() - ok.matrix().adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pseudo inverse diagonal") {
  CxMatrix a = CxMatrix::Zero(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  CxMatrix p = pseudo_inverse(HermitianXcd(a));
  CHECK(std::abs(p(0, 0) - Complex(0.5, 0)) < 1e-14);
  CHECK(std::abs(p(1, 1) - Complex(0.25, 0)) < 1e-14);
  CHECK(std::abs(p(0, 1)) < 1e-14);
}

TEST_CASE("pseudo inverse rank one") {
  Rng rng(5);
  CxVector u(6);
  for (int i = 0; i < 6; ++i) u[i] = rng.cgaussian();
  u.normalize();
  CxMatrix a = 5.0 * u * u.adjoint();
  CxMatrix p = pseudo_inverse(HermitianXcd(a));
  CxMatrix expect = (1.0 / 5.0) * u * u.adjoint();
  CHECK((p - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pseudo inverse satisfies Penrose identities") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    CxMatrix a = random_psd(5, 2, rng);
    CxMatrix p = pseudo_inverse(HermitianXcd(a));
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    CHECK((a * p * a - a).cwiseAbs().maxCoeff() < 1e-9 * scale);
    CHECK((p * a * p - p).cwiseAbs().maxCoeff() < 1e-9 * scale);
    CHECK(((a * p).adjoint() - a * p).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(((p * a).adjoint() - p * a).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("is_psd basic verdicts") {
  auto z = is_psd(HermitianXcd(CxMatrix::Zero(3, 3)));
  CHECK(z.min_eigenvalue == 0.0);
  CHECK(z.psd);
  CxMatrix d = CxMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -0.5;
  auto r = is_psd(HermitianXcd(d));
  CHECK(r.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(!r.psd);
}

TEST_CASE("schur predicate trivial cases") {
  // a = I: block psd iff c >= b^H b
  CxVector b(3);
  b << Complex(1, 0), Complex(0, 1), Complex(0.5, -0.5);
  HermitianXcd a(CxMatrix::Identity(3, 3));
  const double need = b.squaredNorm();
  CHECK(generalized_schur_feasible(a, b, need + 0.01));
  CHECK(!generalized_schur_feasible(a, b, need - 0.01));
  // singular a with b outside its range
  CxMatrix s = CxMatrix::Zero(2, 2);
  s(0, 0) = 1.0;
  CxVector b2(2);
  b2 << Complex(0, 0), Complex(1, 0);
  CHECK(!generalized_schur_feasible(HermitianXcd(s), b2, 100.0));
  // same a, b inside the range
  CxVector b3(2);
  b3 << Complex(1, 0), Complex(0, 0);
  CHECK(generalized_schur_feasible(HermitianXcd(s), b3, 1.0 + 1e-6));
}

TEST_CASE("schur predicate agrees with direct block psd check") {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5);  // 2..6
    // PSD with a well separated spectrum: eigenvalues either exactly zero or
    // in [0.5, 3], so the pseudo-inverse is well conditioned and the block
    // margin stays decisively signed.
    CxMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) g(i, j) = rng.cgaussian();
    }
    CxMatrix u = Eigen::HouseholderQR<CxMatrix>(g).householderQ();
    RealVector w(n);
    int rank = 0;
    for (int i = 0; i < n; ++i) {
      const bool zero = rng.uniform() < 0.4 && !(i == n - 1 && rank == 0);
      w[i] = zero ? 0.0 : 0.5 + 2.5 * rng.uniform();
      if (!zero) ++rank;
    }
    CxMatrix a = u * w.asDiagonal() * u.adjoint();
    CxVector b(n);
    if (rng.uniform() < 0.5) {
      CxVector x(n);
      for (int i = 0; i < n; ++i) x[i] = rng.cgaussian();
      b = a * x;  // inside range(a)
    } else {
      for (int i = 0; i < n; ++i) b[i] = rng.cgaussian();
    }
    // c on either side of the schur boundary, at least 0.01 away
    CxMatrix ap = pseudo_inverse(HermitianXcd(a));
    const double boundary = (b.adjoint() * ap * b)[0].real();
    double offset = (rng.uniform() - 0.5) * 2.0;
    if (std::abs(offset) < 0.01) offset = offset < 0 ? -0.02 : 0.02;
    const double c = boundary + offset;

    CxMatrix block(n + 1, n + 1);
    block.topLeftCorner(n, n) = a;
    block.topRightCorner(n, 1) = b;
    block.bottomLeftCorner(1, n) = b.adjoint();
    block(n, n) = c;
    const bool direct = is_psd(HermitianXcd(block), 1e-9).psd;
    const bool schur = generalized_schur_feasible(HermitianXcd(a), b, c, 1e-9, 1e-9);
    CHECK(direct == schur);
  }
}
