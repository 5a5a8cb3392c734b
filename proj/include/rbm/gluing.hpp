// Conformal gluing function w(p) = T_{pi/beta}((2p - (p1+p2))/(p2-p1))
// built from the generalized Chebyshev function T_a, with the quarter-mode
// sign flip of the argument. w identifies conjugate points of the BVP
// hyperbola: w(p) = w(conj p) there.
#pragma once

#include "rbm/curve.hpp"
#include "rbm/model.hpp"

namespace rbm {

class GluingCutError : public std::runtime_error {
  public:
    explicit GluingCutError(const std::string& what) : std::runtime_error(what) {}
};

/// T_a(x) = cos(a arccos x) = ((x + sqrt(x^2-1))^a + (x - sqrt(x^2-1))^a)/2,
/// analytic on C \ (-inf, -1]. The sqrt branch keeps |x + sqrt(x^2-1)| >= 1,
/// which makes the algebraic form agree with the trigonometric one across
/// the seam [-1, 1]. Throws GluingCutError on the cut.
Complex chebyshev_T(double a, Complex x);

/// d/dx T_a(x) under the same branch conventions.
Complex chebyshev_T_prime(double a, Complex x);

class Gluing {
  public:
    Gluing(const ModelParams& m, const BranchPoints& bp);

    double exponent() const { return a_; }      // pi/beta
    double orientation() const { return sign_; }  // +1 three-quarter, -1 quarter

    /// Affine argument sign*(2p - (p1+p2))/(p2-p1).
    Complex affine(Complex p) const { return sign_ * (2.0 * p - (p1_ + p2_)) / (p2_ - p1_); }

    bool on_cut(Complex p) const;

    Complex w(Complex p) const;
    Complex w_prime(Complex p) const;

    /// phi-coordinate: principal arccos of the affine argument. Re phi in
    /// [0, pi]; the BVP contour sits at Re phi = beta, the BVP domain is
    /// Re phi < beta and the analyticity cut is Re phi = pi.
    Complex phi(Complex p) const;

    /// Inverse of phi: p = (p1+p2)/2 + sign*(p2-p1)/2 * cos(phi).
    Complex p_of_phi(Complex phi) const;

    double beta() const { return beta_; }

  private:
    double a_, sign_, p1_, p2_, beta_;
};

Gluing make_gluing(const ModelParams& m);

}  // namespace rbm
