#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

#include "beltrami/errors.hpp"

namespace beltrami {

using cdouble = std::complex<double>;

/// Uniform n x n sampling of the square [center - hw(1+i), center + hw(1+i)),
/// node (i, j) at center + (i - n/2)h + i(j - n/2)h with h = 2 hw / n. Row
/// index i moves along the real axis, column index j along the imaginary one.
struct GridSpec {
  int n = 0;
  cdouble center{0.0, 0.0};
  double half_width = 0.0;

  /// Validates: n a power of two >= 16, half_width > 0, finite center.
  static GridSpec make(int n, cdouble center, double half_width);

  double spacing() const { return 2.0 * half_width / n; }

  cdouble node(int i, int j) const {
    double h = spacing();
    return center + cdouble((i - n / 2) * h, (j - n / 2) * h);
  }

  bool operator==(const GridSpec&) const = default;
};

/// Open disk |z - center| < radius used to restrict norms.
struct DiskRegion {
  cdouble center{0.0, 0.0};
  double radius = 0.0;

  static DiskRegion make(cdouble center, double radius);

  bool contains(cdouble z) const { return std::abs(z - center) < radius; }
};

/// W^{k,p} norm request: sum over all Wirtinger derivatives of total order
/// <= k of their discrete L^p(region) norms.
struct SobolevSpec {
  int k = 0;
  double p = 2.0;
  DiskRegion region;

  /// Validates: 0 <= k <= 4, 1 <= p < infinity.
  static SobolevSpec make(int k, double p, DiskRegion region);
};

/// Complex scalar field sampled on a GridSpec, row-major samples[i*n + j].
class ComplexField {
public:
  ComplexField(GridSpec spec, std::vector<cdouble> samples);

  static ComplexField zeros(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int n() const { return spec_.n; }

  cdouble& at(int i, int j) { return samples_[static_cast<std::size_t>(i) * spec_.n + j]; }
  const cdouble& at(int i, int j) const {
    return samples_[static_cast<std::size_t>(i) * spec_.n + j];
  }

  cdouble* data() { return samples_.data(); }
  const cdouble* data() const { return samples_.data(); }
  std::size_t size() const { return samples_.size(); }

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(cdouble alpha);

  /// this += alpha * other
  ComplexField& add_scaled(const ComplexField& other, cdouble alpha);

private:
  GridSpec spec_;
  std::vector<cdouble> samples_;
};

/// out[i] = a[i] * b[i]; grids must match.
ComplexField pointwise_multiply(const ComplexField& a, const ComplexField& b);

/// Samples f at every node. Throws invariant_error naming the first node where
/// the value is non-finite.
ComplexField sample_function(const GridSpec& spec, const std::function<cdouble(cdouble)>& f);

/// Bilinear interpolation of the samples at z. z must lie inside the grid
/// square with one cell of slack on the far edges.
cdouble value_at(const ComplexField& field, cdouble z);

/// Index pair of the grid node closest to the absolute origin z = 0, clamped
/// to the grid if the origin lies outside.
std::pair<int, int> node_nearest_zero(const GridSpec& spec);

/// Discrete Wirtinger derivative d_z^a d_zbar^b of a sampled field.
///
/// The field is split into an affine part c0 + c1 z + c2 zbar fitted by least
/// squares over the outermost node frame and a remainder. The remainder is
/// differentiated spectrally (Fourier multipliers (pi i conj(xi))^a (pi i xi)^b
/// for the convention uhat(xi) = integral of u e^{-2 pi i (x xi1 + y xi2)}),
/// the affine derivative is added back in closed form. Affine fields therefore
/// differentiate exactly; for fields that decay before the frame the split is
/// a no-op to ~1e-13.
ComplexField wirtinger(const ComplexField& field, int a, int b);
ComplexField wirtinger_dz(const ComplexField& field);
ComplexField wirtinger_dzbar(const ComplexField& field);

/// Discrete L^p norm over the whole grid, weight spacing^2 per node.
double lp_norm(const ComplexField& field, double p);

/// Discrete L^p norm over the nodes strictly inside the region.
double lp_norm(const ComplexField& field, double p, const DiskRegion& region);

/// Pointwise max of |field|.
double sup_norm(const ComplexField& field);

/// W^{k,p}(region) norm with derivatives from wirtinger(). The region closure
/// must sit inside the grid square with margin >= k * spacing.
double sobolev_norm(const ComplexField& field, const SobolevSpec& sobolev);

/// Supplies the derivative d_z^a d_zbar^b of some field; (0,0) is the field
/// itself. Lets solution types with exact derivative algebra feed norms
/// without round-tripping through wirtinger().
using DerivativeSource = std::function<ComplexField(int a, int b)>;

double sobolev_norm(const DerivativeSource& derivs, const GridSpec& spec,
                    const SobolevSpec& sobolev);

/// FLD1 serialization: header "FLD1 n=<n> center=<re>,<im> half_width=<w>"
/// followed by n^2 lines "i,j,re,im" in row-major order, all reals printed
/// with 17 significant digits so the round trip is bit-exact.
void write_fld1(const ComplexField& field, std::ostream& out);
ComplexField read_fld1(std::istream& in);
void write_fld1_file(const ComplexField& field, const std::string& path);
ComplexField read_fld1_file(const std::string& path);

} // namespace beltrami
