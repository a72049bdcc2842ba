#include "beltrami/grid.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

#include "beltrami/fft.hpp"
#include "beltrami/kernels.hpp"

namespace beltrami {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string fmt_node(const GridSpec& spec, int i, int j) {
  cdouble z = spec.node(i, j);
  std::ostringstream os;
  os << "(" << i << ", " << j << "), z = " << fmt_double(z.real()) << " + "
     << fmt_double(z.imag()) << "i";
  return os.str();
}

} // namespace

GridSpec GridSpec::make(int n, cdouble center, double half_width) {
  if (!is_pow2(n) || n < 16) {
    throw config_error("GridSpec: n must be a power of two >= 16, got " + std::to_string(n));
  }
  if (!std::isfinite(half_width) || half_width <= 0.0) {
    throw config_error("GridSpec: half_width must be positive and finite");
  }
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag())) {
    throw config_error("GridSpec: center must be finite");
  }
  return GridSpec{n, center, half_width};
}

DiskRegion DiskRegion::make(cdouble center, double radius) {
  if (!std::isfinite(radius) || radius <= 0.0) {
    throw config_error("DiskRegion: radius must be positive and finite");
  }
  if (!std::isfinite(center.real()) || !std::isfinite(center.imag())) {
    throw config_error("DiskRegion: center must be finite");
  }
  return DiskRegion{center, radius};
}

SobolevSpec SobolevSpec::make(int k, double p, DiskRegion region) {
  if (k < 0 || k > 4) {
    throw config_error("SobolevSpec: order k must be in [0, 4], got " + std::to_string(k));
  }
  if (!std::isfinite(p) || p < 1.0) {
    throw config_error("SobolevSpec: exponent p must be finite and >= 1");
  }
  return SobolevSpec{k, p, region};
}

ComplexField::ComplexField(GridSpec spec, std::vector<cdouble> samples)
    : spec_(spec), samples_(std::move(samples)) {
  std::size_t want = static_cast<std::size_t>(spec_.n) * spec_.n;
  if (samples_.size() != want) {
    throw config_error("ComplexField: sample count " + std::to_string(samples_.size()) +
                       " does not match grid " + std::to_string(spec_.n) + "^2");
  }
}

ComplexField ComplexField::zeros(const GridSpec& spec) {
  return ComplexField(spec, std::vector<cdouble>(static_cast<std::size_t>(spec.n) * spec.n));
}

namespace {
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) throw invariant_error(std::string(what) + ": grids differ");
}
} // namespace

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(spec_, other.spec_, "ComplexField::operator+=");
  kernels::active_ops().axpy(1.0, other.data(), data(), size());
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(spec_, other.spec_, "ComplexField::operator-=");
  kernels::active_ops().axpy(-1.0, other.data(), data(), size());
  return *this;
}

ComplexField& ComplexField::operator*=(cdouble alpha) {
  kernels::active_ops().scale(alpha, data(), size());
  return *this;
}

ComplexField& ComplexField::add_scaled(const ComplexField& other, cdouble alpha) {
  require_same_grid(spec_, other.spec_, "ComplexField::add_scaled");
  kernels::active_ops().axpy(alpha, other.data(), data(), size());
  return *this;
}

ComplexField pointwise_multiply(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.spec(), b.spec(), "pointwise_multiply");
  ComplexField out = ComplexField::zeros(a.spec());
  kernels::active_ops().cmul(a.data(), b.data(), out.data(), out.size());
  return out;
}

ComplexField sample_function(const GridSpec& spec,
                             const std::function<cdouble(cdouble)>& f) {
  ComplexField out = ComplexField::zeros(spec);
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      cdouble v = f(spec.node(i, j));
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw invariant_error("sample_function: non-finite value at node " +
                              fmt_node(spec, i, j));
      }
      out.at(i, j) = v;
    }
  }
  return out;
}

cdouble value_at(const ComplexField& field, cdouble z) {
  const GridSpec& spec = field.spec();
  double h = spec.spacing();
  double x = (z.real() - spec.center.real()) / h + spec.n / 2;
  double y = (z.imag() - spec.center.imag()) / h + spec.n / 2;
  int i0 = static_cast<int>(std::floor(x));
  int j0 = static_cast<int>(std::floor(y));
  if (i0 < 0 || j0 < 0 || i0 + 1 >= spec.n || j0 + 1 >= spec.n) {
    throw invariant_error("value_at: point " + fmt_double(z.real()) + " + " +
                          fmt_double(z.imag()) + "i outside the interpolable grid");
  }
  double fx = x - i0;
  double fy = y - j0;
  return (1 - fx) * (1 - fy) * field.at(i0, j0) + fx * (1 - fy) * field.at(i0 + 1, j0) +
         (1 - fx) * fy * field.at(i0, j0 + 1) + fx * fy * field.at(i0 + 1, j0 + 1);
}

std::pair<int, int> node_nearest_zero(const GridSpec& spec) {
  double h = spec.spacing();
  auto clamp_idx = [&spec](double x) {
    int i = static_cast<int>(std::lround(x)) + spec.n / 2;
    return std::max(0, std::min(spec.n - 1, i));
  };
  return {clamp_idx(-spec.center.real() / h), clamp_idx(-spec.center.imag() / h)};
}

namespace {

// Cached FFT engines for the utility-grade spectral core; the transform layer
// owns its plans separately.
std::shared_ptr<Fft2D> engine_for(int n) {
  static std::mutex m;
  static std::map<int, std::shared_ptr<Fft2D>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto engine = std::make_shared<Fft2D>(n);
  cache.emplace(n, engine);
  return engine;
}

struct AffineFit {
  cdouble c0, cz, czbar;
};

// Least-squares fit of c0 + cz z + czbar zbar over the outermost node frame.
// 3x3 normal equations, solved by Gaussian elimination with partial pivoting.
AffineFit fit_frame_affine(const ComplexField& field) {
  const GridSpec& spec = field.spec();
  int n = spec.n;
  double cnt = 0.0;
  cdouble sz = 0.0, szsq = 0.0, r0 = 0.0, r1 = 0.0, r2 = 0.0;
  double szz = 0.0;
  auto visit = [&](int i, int j) {
    cdouble z = spec.node(i, j) - spec.center;
    cdouble f = field.at(i, j);
    cnt += 1.0;
    sz += z;
    szsq += z * z;
    szz += std::norm(z);
    r0 += f;
    r1 += std::conj(z) * f;
    r2 += z * f;
  };
  for (int i = 0; i < n; ++i) {
    visit(i, 0);
    visit(i, n - 1);
  }
  for (int j = 1; j + 1 < n; ++j) {
    visit(0, j);
    visit(n - 1, j);
  }

  cdouble szb = std::conj(sz);
  std::array<std::array<cdouble, 4>, 3> m = {{
      {cdouble(cnt), sz, szb, r0},
      {szb, cdouble(szz), std::conj(szsq), r1},
      {sz, szsq, cdouble(szz), r2},
  }};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int row = col + 1; row < 3; ++row) {
      if (std::abs(m[row][col]) > std::abs(m[piv][col])) piv = row;
    }
    std::swap(m[col], m[piv]);
    if (std::abs(m[col][col]) < 1e-300) {
      throw invariant_error("wirtinger: degenerate frame fit");
    }
    for (int row = col + 1; row < 3; ++row) {
      cdouble factor = m[row][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[row][k] -= factor * m[col][k];
    }
  }
  AffineFit fit;
  cdouble c[3];
  for (int row = 2; row >= 0; --row) {
    cdouble acc = m[row][3];
    for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * c[k];
    c[row] = acc / m[row][row];
  }
  fit.c0 = c[0];
  fit.cz = c[1];
  fit.czbar = c[2];
  return fit;
}

// In-place spectral d_z^a d_zbar^b on the field's own (unpadded) square.
void apply_derivative_multiplier(ComplexField& field, int a, int b) {
  const GridSpec& spec = field.spec();
  int n = spec.n;
  double length = 2.0 * spec.half_width;
  auto engine = engine_for(n);
  std::vector<cdouble> hat(field.size());
  engine->forward(field.data(), hat.data());
  const cdouble pii(0.0, M_PI);
  double inv_count = 1.0 / (static_cast<double>(n) * n);
  for (int ki = 0; ki < n; ++ki) {
    int fi = ki < n / 2 ? ki : ki - n;
    double xi1 = fi / length;
    for (int kj = 0; kj < n; ++kj) {
      int fj = kj < n / 2 ? kj : kj - n;
      double xi2 = fj / length;
      cdouble zeta(xi1, xi2);
      cdouble sym = inv_count;
      if (fi == 0 && fj == 0) {
        sym = 0.0; // derivative of the constant mode vanishes
      } else {
        for (int q = 0; q < a; ++q) sym *= pii * std::conj(zeta);
        for (int q = 0; q < b; ++q) sym *= pii * zeta;
      }
      hat[static_cast<std::size_t>(ki) * n + kj] *= sym;
    }
  }
  engine->backward(hat.data(), field.data());
}

} // namespace

ComplexField wirtinger(const ComplexField& field, int a, int b) {
  if (a < 0 || b < 0 || a + b > 5) {
    throw config_error("wirtinger: derivative orders must be nonnegative with a + b <= 5");
  }
  if (a == 0 && b == 0) return field;

  AffineFit fit = fit_frame_affine(field);
  const GridSpec& spec = field.spec();
  ComplexField rem = field;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      cdouble z = spec.node(i, j) - spec.center;
      rem.at(i, j) -= fit.c0 + fit.cz * z + fit.czbar * std::conj(z);
    }
  }
  apply_derivative_multiplier(rem, a, b);
  if (a == 1 && b == 0) {
    for (std::size_t idx = 0; idx < rem.size(); ++idx) rem.data()[idx] += fit.cz;
  } else if (a == 0 && b == 1) {
    for (std::size_t idx = 0; idx < rem.size(); ++idx) rem.data()[idx] += fit.czbar;
  }
  return rem;
}

ComplexField wirtinger_dz(const ComplexField& field) { return wirtinger(field, 1, 0); }

ComplexField wirtinger_dzbar(const ComplexField& field) { return wirtinger(field, 0, 1); }

double lp_norm(const ComplexField& field, double p) {
  if (!std::isfinite(p) || p < 1.0) throw config_error("lp_norm: p must be finite and >= 1");
  double h2 = field.spec().spacing() * field.spec().spacing();
  double acc = kernels::sum_abs_pow(field.data(), field.size(), p);
  return std::pow(acc * h2, 1.0 / p);
}

double lp_norm(const ComplexField& field, double p, const DiskRegion& region) {
  if (!std::isfinite(p) || p < 1.0) throw config_error("lp_norm: p must be finite and >= 1");
  const GridSpec& spec = field.spec();
  double h2 = spec.spacing() * spec.spacing();
  double acc = 0.0;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      if (region.contains(spec.node(i, j))) {
        acc += std::pow(std::abs(field.at(i, j)), p);
      }
    }
  }
  return std::pow(acc * h2, 1.0 / p);
}

double sup_norm(const ComplexField& field) {
  return std::sqrt(kernels::active_ops().max_abs2(field.data(), field.size()));
}

namespace {
void require_region_margin(const GridSpec& spec, const SobolevSpec& sobolev) {
  double need = sobolev.k * spec.spacing();
  double mx = spec.half_width -
              (std::abs(sobolev.region.center.real() - spec.center.real()) +
               sobolev.region.radius);
  double my = spec.half_width -
              (std::abs(sobolev.region.center.imag() - spec.center.imag()) +
               sobolev.region.radius);
  if (std::min(mx, my) + 1e-12 < need) {
    throw config_error("sobolev_norm: region closure must stay inside the grid square "
                       "with margin >= k * spacing");
  }
}
} // namespace

double sobolev_norm(const ComplexField& field, const SobolevSpec& sobolev) {
  return sobolev_norm([&field](int a, int b) { return wirtinger(field, a, b); },
                      field.spec(), sobolev);
}

double sobolev_norm(const DerivativeSource& derivs, const GridSpec& spec,
                    const SobolevSpec& sobolev) {
  require_region_margin(spec, sobolev);
  double total = 0.0;
  for (int a = 0; a <= sobolev.k; ++a) {
    for (int b = 0; a + b <= sobolev.k; ++b) {
      ComplexField d = derivs(a, b);
      if (!(d.spec() == spec)) {
        throw invariant_error("sobolev_norm: derivative source changed grids");
      }
      total += lp_norm(d, sobolev.p, sobolev.region);
    }
  }
  return total;
}

void write_fld1(const ComplexField& field, std::ostream& out) {
  const GridSpec& spec = field.spec();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "FLD1 n=%d center=%.17g,%.17g half_width=%.17g\n", spec.n,
                spec.center.real(), spec.center.imag(), spec.half_width);
  out << buf;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = 0; j < spec.n; ++j) {
      const cdouble& v = field.at(i, j);
      std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g\n", i, j, v.real(), v.imag());
      out << buf;
    }
  }
  if (!out) throw invariant_error("write_fld1: stream write failed");
}

ComplexField read_fld1(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw config_error("read_fld1: empty stream");
  int n = 0;
  double cre = 0.0, cim = 0.0, hw = 0.0;
  if (std::sscanf(line.c_str(), "FLD1 n=%d center=%lf,%lf half_width=%lf", &n, &cre, &cim,
                  &hw) != 4) {
    throw config_error("read_fld1: malformed header: " + line);
  }
  GridSpec spec = GridSpec::make(n, cdouble(cre, cim), hw);
  ComplexField out = ComplexField::zeros(spec);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!std::getline(in, line)) {
        throw config_error("read_fld1: truncated at node (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
      }
      int ri = 0, rj = 0;
      double re = 0.0, im = 0.0;
      if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &ri, &rj, &re, &im) != 4 || ri != i ||
          rj != j) {
        throw config_error("read_fld1: bad record for node (" + std::to_string(i) + ", " +
                           std::to_string(j) + "): " + line);
      }
      out.at(i, j) = cdouble(re, im);
    }
  }
  return out;
}

void write_fld1_file(const ComplexField& field, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("write_fld1_file: cannot open " + path);
  write_fld1(field, out);
}

ComplexField read_fld1_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("read_fld1_file: cannot open " + path);
  return read_fld1(in);
}

} // namespace beltrami
