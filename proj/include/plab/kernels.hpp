#pragma once

// Analysis kernels: smooth dyadic band systems on the frequency side,
// compactly supported local means on the space side, damped shifted suprema
// (Peetre-type maximal fields), maximal operators, and the bump pairing
// inequality used to control cross-scale kernel interactions.

#include <memory>
#include <vector>

#include "plab/fft.hpp"
#include "plab/grid.hpp"

namespace plab {

/// Smooth monotone ramp: 1 on [0, lo], 0 on [hi, inf), C-infinity in between
/// (classic exp(-1/t) partition ratio, exact at the endpoints).
class PlateauProfile {
 public:
  PlateauProfile(double lo, double hi);
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double operator()(double r) const;

 private:
  double lo_ = 1.0;
  double hi_ = 2.0;
};

/// A family of analysis kernels indexed by dyadic level.  Level j probes
/// frequencies around 2^j; the coarsest slot of an inhomogeneous family
/// (j_min = 0) is a low-pass member, every other slot has vanishing moments.
class ConvolutionSystem {
 public:
  virtual ~ConvolutionSystem() = default;
  virtual const BoxDomain& box() const = 0;
  virtual const ScaleWindow& window() const = 0;
  virtual GridFunction convolve(const GridFunction& f, int j) const = 0;
  /// Convolve against every level of the window (one shared forward DFT).
  std::vector<GridFunction> convolve_all(const GridFunction& f) const;

 protected:
  virtual GridFunction convolve_spectrum(const Eigen::ArrayXcd& spectrum,
                                         int j) const = 0;
  friend std::vector<GridFunction> convolve_levels(const ConvolutionSystem&,
                                                   const GridFunction&);
};

/// Dyadic band system built from a radial frequency plateau P:
///   low-pass symbol  P(|xi|)        (slot j = 0 of inhomogeneous windows)
///   band j symbol    P(2^-j |xi|) - P(2^(1-j) |xi|)
/// The bands of levels 0..J telescope exactly to P(2^-J |xi|).
/// Homogeneous families use the band symbol on every slot (j may be <= 0).
class BandSystem : public ConvolutionSystem {
 public:
  const BoxDomain& box() const override { return box_; }
  const ScaleWindow& window() const override { return window_; }
  GridFunction convolve(const GridFunction& f, int j) const override;
  bool homogeneous() const { return homogeneous_; }

  /// Radial symbol of level j at frequency radius r (exact, for tests).
  double symbol(int j, double r) const;
  /// Spatial kernel of level j: convolve_periodic(f, kernel(j)) reproduces
  /// convolve(f, j).
  GridFunction kernel(int j) const;
  /// Frequency band where the level-j symbol can be nonzero, as radii.
  std::array<double, 2> support_radii(int j) const;

 private:
  friend BandSystem build_band_system(const BoxDomain&, const ScaleWindow&,
                                      double, double, bool);
  GridFunction convolve_spectrum(const Eigen::ArrayXcd&, int) const override;

  BoxDomain box_;
  ScaleWindow window_;
  PlateauProfile plateau_{1.0, 2.0};
  bool homogeneous_ = false;
  std::vector<Eigen::ArrayXd> symbols_;  // per level, over spectral bins
};

/// Band system with plateau P equal to 1 on [0, lo] and 0 beyond hi.
/// Requires lo < hi <= 2 * lo so consecutive bands overlap and the family
/// covers every frequency; hi must stay below the grid Nyquist margin.
BandSystem build_band_system(const BoxDomain& box, const ScaleWindow& window,
                             double lo = 1.0, double hi = 2.0,
                             bool homogeneous = false);

/// Compactly supported local means.  The low-pass member Psi is a spatial
/// plateau with indicator(B(0,1)) <= Psi <= indicator(B(0,2)); level j >= 1
/// applies the discrete Laplacian stencil laplace_power times to the exact
/// lattice dilation 2^(jn) Psi(2^j x), matching Laplacian^m Psi dilated in
/// the continuum limit while keeping the support exactly compact and the
/// sampled moments through order 2*laplace_power - 1 exactly zero per level.
class LocalMeanSystem : public ConvolutionSystem {
 public:
  const BoxDomain& box() const override { return box_; }
  const ScaleWindow& window() const override { return window_; }
  GridFunction convolve(const GridFunction& f, int j) const override;
  int laplace_power() const { return laplace_power_; }
  /// Vanishing-moment order of the band member (moments 0..order-1 vanish).
  int moment_order() const { return 2 * laplace_power_; }
  GridFunction kernel(int j) const;

 private:
  friend LocalMeanSystem build_local_mean_system(const BoxDomain&,
                                                 const ScaleWindow&, int);
  GridFunction convolve_spectrum(const Eigen::ArrayXcd&, int) const override;

  BoxDomain box_;
  ScaleWindow window_;
  int laplace_power_ = 3;
  std::vector<Eigen::ArrayXcd> kernel_spectra_;  // DFT of sampled kernels
  std::vector<GridFunction> kernels_;
};

/// laplace_power >= 1; the window must be inhomogeneous (j_min = 0).
LocalMeanSystem build_local_mean_system(const BoxDomain& box,
                                        const ScaleWindow& window,
                                        int laplace_power);

/// Band convolution at one level (thin named wrapper).
GridFunction band_convolve(const GridFunction& f, const ConvolutionSystem& sys,
                           int j);

/// Exact damped shifted supremum over the torus:
///   out(x) = sup_z |g(z)| / (1 + scale * d(x, z))^a
/// with d the periodic minimal-image distance.  Computed by block pruning;
/// the result equals the brute-force scan to the last bit ordering-wise.
GridFunction damped_sup(const GridFunction& g, double scale, double a);

/// Peetre-type maximal field of f at level j:
///   damped_sup(convolve(f, j), 2^j, a).
GridFunction peetre_maximal(const GridFunction& f, const ConvolutionSystem& sys,
                            int j, double a);

/// Cube-window Hardy-Littlewood maximal function on the torus: the sup over
/// a two-per-octave ladder of window half-widths of the circular cube
/// averages of |f|.
GridFunction hardy_littlewood_maximal(const GridFunction& f);

/// Tail-damped windowed maximal operator at dyadic level nu:
///   ( eta_{nu,lambda} * |f|^r )^{1/r},
/// eta_{nu,lambda}(x) = 2^(nu n) (1 + 2^nu |x|)^(-lambda).
/// Requires lambda > dim and r > 0.
GridFunction windowed_maximal(const GridFunction& f, int nu, double r,
                              double lambda);

/// Smoothness lift: Fourier multiplier (1 + |xi|^2)^(s/2).  Positive s adds
/// roughness (acts like s derivatives), negative s smooths.
GridFunction bessel_lift(const GridFunction& f, double s);

/// Cross-scale pairing inequality.  For a coarse kernel at level j centered
/// at cc whose order-L derivatives decay like
///   |d^alpha phi(x)| <= A_alpha 2^(j(n+L)) (1 + 2^j|x-cc|)^(-M)
/// and a fine kernel at level nu >= j centered at cf with
///   |psi(x)| <= B 2^(nu n) (1 + 2^nu|x-cf|)^(-N)
/// and vanishing moments through order L-1, the pairing obeys
///   |integral phi psi| <= a_sum * (N-M-L)/(N-M-L-n) * B * omega_n
///                          * 2^(jn - (nu-j)L) * (1 + 2^j|cc-cf|)^(-M)
/// with a_sum the sum of A_alpha/alpha! over ||alpha||_1 = L and omega_n the
/// unit-ball volume.  The constants are measured from the supplied samples;
/// lhs and rhs are returned for comparison.
struct PairingBound {
  double lhs = 0.0;
  double rhs = 0.0;
  double a_sum = 0.0;
  double b_const = 0.0;
  double moment_residual = 0.0;
};

PairingBound bump_pairing_bound(const GridFunction& coarse, int level_coarse,
                                std::array<double, 2> center_coarse,
                                const GridFunction& fine, int level_fine,
                                std::array<double, 2> center_fine, int L,
                                double M, double N);

}  // namespace plab
