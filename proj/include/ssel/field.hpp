#pragma once

// Coordinate frames, finite-difference operators, annulus grids and sphere
// quadrature on R^n \ {0}, n = 2,3,4.  Everything here is a pure function of
// its inputs; values are immutable after construction.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssel {

// Error category mapped onto the CLI exit-code contract.
enum class errc {
  validation,    // bad parameters / malformed input     (exit 2)
  solver,        // iteration failed to converge          (exit 3)
  precondition,  // operation preconditions not met       (exit 4)
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

// ---------------------------------------------------------------------------
// Small fixed-capacity vector/matrix for n <= 4.

class Vec {
 public:
  Vec() : n_(0), a_{} {}
  explicit Vec(int n) : n_(n), a_{} {}
  Vec(double x, double y) : n_(2), a_{x, y, 0, 0} {}
  Vec(double x, double y, double z) : n_(3), a_{x, y, z, 0} {}
  Vec(double x, double y, double z, double w) : n_(4), a_{x, y, z, w} {}

  int dim() const { return n_; }
  double& operator[](int i) { return a_[i]; }
  double operator[](int i) const { return a_[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n_; ++i) a_[i] += o.a_[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n_; ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (int i = 0; i < n_; ++i) a_[i] *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator/(Vec a, double s) { return a *= 1.0 / s; }
  friend Vec operator-(Vec a) { return a *= -1.0; }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < n_; ++i) s += a_[i] * o.a_[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  Vec normalized() const { return *this / norm(); }

  static Vec zero(int n) { return Vec(n); }
  static Vec unit(int n, int axis) {
    Vec e(n);
    e[axis] = 1.0;
    return e;
  }

 private:
  int n_;
  std::array<double, 4> a_;
};

class Mat {
 public:
  Mat() : n_(0), m_{} {}
  explicit Mat(int n) : n_(n), m_{} {}

  int dim() const { return n_; }
  double& operator()(int i, int j) { return m_[i][j]; }
  double operator()(int i, int j) const { return m_[i][j]; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m_[i][j] += o.m_[i][j];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m_[i][j] -= o.m_[i][j];
    return *this;
  }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }

  // row i as a vector
  Vec row(int i) const {
    Vec r(n_);
    for (int j = 0; j < n_; ++j) r[j] = m_[i][j];
    return r;
  }
  // matrix * vector
  Vec operator*(const Vec& v) const {
    Vec r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r[i] += m_[i][j] * v[j];
    return r;
  }
  double trace() const {
    double t = 0;
    for (int i = 0; i < n_; ++i) t += m_[i][i];
    return t;
  }
  double frobenius2() const {
    double s = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) s += m_[i][j] * m_[i][j];
    return s;
  }
  double frobenius() const { return std::sqrt(frobenius2()); }

 private:
  int n_;
  std::array<std::array<double, 4>, 4> m_;
};

using ScalarField = std::function<double(const Vec&)>;
using VectorField = std::function<Vec(const Vec&)>;

// ---------------------------------------------------------------------------
// Coordinate frames.

struct PolarBasis {
  Vec e_r, e_theta;
};
PolarBasis polar_basis(double theta);

struct SphericalBasis {
  Vec e_r, e_phi, e_theta;
};
// phi in (0,pi) polar angle, theta azimuthal; throws on phi at a pole.
SphericalBasis spherical_basis(double phi, double theta);

// ---------------------------------------------------------------------------
// Finite differences.  Steps are relative to radius: h = relative_step * |x|,
// so homogeneous fields see a scale-consistent stencil.

enum class DerivMode { analytic_preferred, forced_fd };

struct StencilConfig {
  int order = 4;                 // 2 or 4
  double relative_step = 1e-4;   // eta in (0, 1e-1)
  DerivMode mode = DerivMode::analytic_preferred;

  void validate() const {
    if (order != 2 && order != 4)
      throw Error(errc::validation, "stencil order must be 2 or 4");
    if (!(relative_step > 0.0 && relative_step < 1e-1))
      throw Error(errc::validation, "relative_step must lie in (0, 1e-1)");
  }
};

double fd_partial(const ScalarField& f, const Vec& x, int axis, const StencilConfig& cfg);
Vec fd_gradient(const ScalarField& f, const Vec& x, const StencilConfig& cfg);
double fd_laplacian(const ScalarField& f, const Vec& x, const StencilConfig& cfg);
// J(i,j) = dF_i/dx_j
Mat fd_jacobian(const VectorField& F, const Vec& x, const StencilConfig& cfg);
Vec fd_vector_laplacian(const VectorField& F, const Vec& x, const StencilConfig& cfg);
double fd_divergence(const VectorField& F, const Vec& x, const StencilConfig& cfg);

// ---------------------------------------------------------------------------
// Annulus grids.  Geometric radii; angular nodes uniform per angle, polar
// angles offset half a step so nodes never sit on coordinate poles.

struct GridSpec {
  double r_min = 0.5, r_max = 2.0;
  int n_radial = 8;
  std::vector<int> angular;  // one entry per angle: n=2 {n_th}, n=3 {n_phi,n_th}, n=4 {n_psi,n_phi,n_th}

  static GridSpec defaults(int dim);
  void validate(int dim) const;
};

std::vector<Vec> annulus_grid(const GridSpec& spec, int dim);

// ---------------------------------------------------------------------------
// Unit-sphere quadrature; weights sum to |S^{n-1}|.
//   n=2: uniform trapezoid.  n=3: Gauss-Legendre in cos(phi) x trapezoid.
//   n=4: Gauss-Legendre in both polar angles (sin^2 psi sin phi weight) x trapezoid.

struct Quadrature {
  int dim = 0;
  std::vector<Vec> nodes;      // points on the unit sphere
  std::vector<double> weights;

  double integrate(const ScalarField& f) const;           // at |x| = 1
  double integrate_radius(const ScalarField& f, double r) const;  // over |x| = r
};

Quadrature sphere_quadrature(int dim, int resolution);

// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

double sphere_area(int dim);  // |S^{n-1}|

// ---------------------------------------------------------------------------
// Deterministic chunked parallelism.  Results are independent of the thread
// count because chunk boundaries are fixed and reductions run in chunk order.

void set_thread_count(int n);
int thread_count();
void parallel_chunks(std::size_t n_items, const std::function<void(std::size_t, std::size_t)>& run_chunk);

// Pairwise summation over a value array (reproducible RMS accumulation).
double pairwise_sum(const std::vector<double>& v);

}  // namespace ssel
