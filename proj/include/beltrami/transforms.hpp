#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "beltrami/fft.hpp"
#include "beltrami/grid.hpp"

namespace beltrami {

/// Spectral machinery for the Beurling and Cauchy transforms on a padded copy
/// of a grid.
///
/// Conventions (uhat(xi) = integral of u(z) e^{-2 pi i (x xi1 + y xi2)} dA,
/// xi identified with xi1 + i xi2):
///   d_z       <-> pi i conj(xi)
///   d_zbar    <-> pi i xi
///   Beurling T <-> conj(xi) / xi, zero mode -> 0
///   Cauchy  P <-> 1 / (pi i xi), zero mode -> 0
///
/// The input field is embedded centrally into a square padding_factor times
/// wider, transformed there, and cropped back. Padding pushes the periodic
/// images of the kernel away; the zero mode is the one multiplier value the
/// discrete torus cannot represent and is always dropped.
class TransformPlan {
public:
  /// padding_factor must be 1, 2 or 4 (default 2).
  static std::shared_ptr<const TransformPlan> make(const GridSpec& grid,
                                                   int padding_factor = 2);

  const GridSpec& grid() const { return grid_; }
  int padding_factor() const { return pf_; }
  int padded_n() const { return np_; }

  enum class Multiplier { identity, beurling, cauchy };

  /// pad -> FFT -> multiply by kind's symbol times (pi i conj(xi))^a (pi i xi)^b
  /// -> inverse FFT -> crop. (0,0) with identity is a pure round trip.
  ComplexField apply(const ComplexField& u, Multiplier kind, int a = 0, int b = 0) const;

  /// Same pipeline without the final crop; samples of the padded square,
  /// row-major padded_n()^2. Norm probes measure here so Parseval is exact.
  std::vector<cdouble> apply_padded(const ComplexField& u, Multiplier kind, int a = 0,
                                    int b = 0) const;

  /// Mean of u over the padded square (the embedding is zero outside u's grid).
  cdouble padded_mean(const ComplexField& u) const;

  double padded_l2_norm(std::span<const cdouble> padded) const;
  double padded_lp_norm(std::span<const cdouble> padded, double p) const;

private:
  TransformPlan(GridSpec grid, int pf);

  GridSpec grid_;
  int pf_;
  int np_;
  std::shared_ptr<Fft2D> fft_;
  std::vector<double> freq_; // freq_[k] = cycles per unit length for padded index k

  std::vector<cdouble> pad(const ComplexField& u) const;
  ComplexField crop(const std::vector<cdouble>& padded) const;
};

/// Support diagnostics for a transform input: the largest |u| sampled outside
/// the central half of the padded square, and whether it is negligible. A
/// violation does not abort the transform, it flags that periodization error
/// is no longer controlled.
struct TransformStats {
  bool support_ok = true;
  double boundary_mass = 0.0;
};

/// Discrete Beurling transform T u.
ComplexField beurling(const TransformPlan& plan, const ComplexField& u,
                      TransformStats* stats = nullptr);

/// Discrete Cauchy transform P u, normalized so the value at the grid node
/// nearest z = 0 is exactly zero.
ComplexField cauchy(const TransformPlan& plan, const ComplexField& u,
                    TransformStats* stats = nullptr);

/// Direct midpoint quadrature of T u(z) = -(1/pi) pv integral u(zeta) /
/// (zeta - z)^2 dA, skipping the singular cell. Independent of the FFT path;
/// exists to cross-check it.
std::vector<cdouble> beurling_quadrature(const ComplexField& u, std::span<const cdouble> pts);

/// Direct midpoint quadrature of P u(z) = -(1/pi) integral u(zeta) *
/// (1/(zeta - z) - 1/zeta) dA, skipping each kernel's singular cell.
std::vector<cdouble> cauchy_quadrature(const ComplexField& u, std::span<const cdouble> pts);

/// Empirical L^p -> L^p operator norm probe for T: random mean-free smooth
/// bumps plus a fixed family of capped power-law fields with angular modes,
/// ratios measured on the padded square before cropping.
struct NormProbeReport {
  double max_ratio = 0.0;
  std::vector<double> ratios;
};

NormProbeReport beurling_norm_probe(const TransformPlan& plan, double p, int trials,
                                    std::uint64_t seed);

} // namespace beltrami
