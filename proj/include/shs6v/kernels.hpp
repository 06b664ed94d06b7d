#pragma once

#include <complex>
#include <map>
#include <vector>

#include "shs6v/qspecial.hpp"
#include "shs6v/tilt.hpp"

namespace shs6v {

using cplx = std::complex<double>;

enum class ContourKind { Circle, ShiftedCircle, ClippedShifted, ImplicitProduct };

struct ContourSpec {
  ContourKind kind = ContourKind::Circle;
  double radius = 1.0;
  double center = 0.0;
  double u = 0.0;  // ClippedShifted enlargement
  int nodes = 512;
};

// Exponent of z that must be an integer on a closed contour; throws ParameterError otherwise.
long integral_exponent(double e, double tol = 1e-9);

// ---- one particle ----

struct OneParticleResult {
  double value = 0.0;
  int nodes = 0;
};

// p(t, s, x) with x in Xi(t, s) = Z - (mu_hat(t) - mu_hat(s)).
OneParticleResult one_particle_kernel(const TiltFrame& f, long t, long s, double x);
// Direct convolution of the per-step tilted pmfs, indexed by n = x + mu_hat(t) - mu_hat(s) >= 0.
std::vector<double> one_particle_convolution(const TiltFrame& f, long t, long s, double tail_tol = 1e-17);

// ---- two particle ----

// Building blocks of the untilted two-particle formula.
cplx D_tilde(const ModelParams& p, cplx z);
cplx R_tilde(const ModelParams& p, cplx z, long t, long s);
cplx F_tilde(const ModelParams& p, cplx z1, cplx z2);
cplx s_tilde(const ModelParams& p, cplx z);
cplx p_tilde(const ModelParams& p, cplx z);
double c_of(const ModelParams& p, long y1, long y2);
// Residue of F_tilde(., z2) at z1 = s_tilde(z2): numerator / d(denominator)/dz1.
cplx residue_F(const ModelParams& p, cplx z2);

// Tabulated evaluation of the reversed two-particle transition probability
// P(x -> y, t, s) for coordinates spread over at most span + 1 sites, on deformed contours:
// z1 on a circle about [0, theta] enclosing the poles but not s_tilde(z2), z2 enclosing p_tilde of the z1 circle.
// With rho != 0 the tilted integrand (lambda(k) factors and q^{-rho} z substitution) is used and the
// result is the tilted kernel V at integer labels X = x + mu_hat(t), Y = y + mu_hat(s).
class TwoParticleKernel {
 public:
  TwoParticleKernel(const ModelParams& p, long t, long s, int span, double rho = 0.0, bool parallel = true);
  double operator()(long x1, long x2, long y1, long y2) const;
  int nodes() const { return nodes_; }
  double c1() const { return c1_; }
  double r1() const { return r1_; }
  double r2(bool negative_b) const { return negative_b ? r2neg_ : r2pos_; }

 private:
  struct Tables {
    std::vector<cplx> c;  // one-particle coefficients, m in [0, span]
    std::vector<cplx> w;  // coupled term, a in [0, span], b in [-span, span]
    double gmax1 = 0.0, gmax2 = 0.0, fmax = 0.0;
  };
  Tables build(int n, bool parallel) const;
  cplx g(cplx z) const;

  ModelParams p_;
  long t_, s_;
  int span_;
  double rho_;
  double scale_;  // q^rho
  double lam_;    // product of lambda(k), 1 when untilted
  double c1_ = 0, r1_ = 0, r2pos_ = 0, r2neg_ = 0;
  int nodes_ = 0;
  Tables tab_;
};

// Single evaluation on the deformed contours (builds a table of the required span).
double two_particle_reversed(const ModelParams& p, long x1, long x2, long y1, long y2, long t, long s);
// Formula read literally on one large circle C_R with the analytic residue term; accurate only for small
// coordinates, kept as a cross-check.
double two_particle_reversed_literal(const ModelParams& p, long x1, long x2, long y1, long y2, long t, long s,
                                     int nodes = 1024);
// Radius of the large circle: starts at 2 max(1, pole moduli, |s_tilde(infinity)|) and doubles until sup |s_tilde| < R/2.
double literal_radius(const ModelParams& p);

// Tilted kernel on Xi lattices: path 1 integrates the tilted integrand, path 2 multiplies the untilted
// probability by the tilt factor.
double tilted_V(const TiltFrame& f, double x1, double x2, double y1, double y2, long t, long s);
double tilted_V_via_reversed(const TiltFrame& f, double x1, double x2, double y1, double y2, long t, long s);

// ---- dense oracle ----

// Exact law of the k-particle reversed location process started at x (ascending) after the steps
// s..t-1, by mirrored forward enumeration. Particles moving below lo are absorbed and reported at lo - 1.
std::map<std::vector<long>, double> reversed_distribution(const ModelParams& p, const std::vector<long>& x, long t,
                                                          long s, long lo);

}  // namespace shs6v
