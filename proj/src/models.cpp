#include "ggl/models.hpp"

#include <cmath>

namespace ggl {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ContractError(std::string("parameter ") + what + " must be positive and finite");
  }
}

void require_restitution(const Vector& eps, int contacts) {
  if (eps.size() != contacts) {
    throw ContractError("expected " + std::to_string(contacts) + " restitution coefficients, got " +
                        std::to_string(eps.size()));
  }
  for (double e : eps) {
    if (!(e >= 0.0 && e <= 1.0)) throw ContractError("restitution must lie in [0, 1]");
  }
}

// Corner signs of the four unilateral gaps: g_i = d/2 + sy*y + sa*a*sin(t3) - b*cos(t3).
constexpr double kSignY[4] = {-1.0, -1.0, 1.0, 1.0};
constexpr double kSignA[4] = {1.0, -1.0, -1.0, 1.0};

}  // namespace

// ---------------------------------------------------------------------------

void SliderCrankParams::validate() const {
  require_positive(crank_length, "crank_length");
  require_positive(rod_length, "rod_length");
  require_positive(half_length, "half_length");
  require_positive(half_height, "half_height");
  require_positive(clearance, "clearance");
  require_positive(crank_mass, "crank_mass");
  require_positive(rod_mass, "rod_mass");
  require_positive(slider_mass, "slider_mass");
  require_positive(crank_inertia, "crank_inertia");
  require_positive(rod_inertia, "rod_inertia");
  require_positive(slider_inertia, "slider_inertia");
  require_positive(gravity, "gravity");
}

GeneralizedState slider_crank_initial_state(bool unilateral) {
  GeneralizedState s;
  if (unilateral) {
    s.q = Vector::Zero(3);
    s.v = Vector{{150.0, -75.0, 0.0}};
  } else {
    s.q = Vector::Zero(2);
    s.v = Vector{{150.0, -75.0}};
  }
  return s;
}

SliderCrankBase::SliderCrankBase(SliderCrankParams params) : params_(params) {
  params_.validate();
}

double SliderCrankBase::slider_height(const Vector& q) const {
  check_position(q);
  return params_.crank_length * std::sin(q[0]) + params_.rod_length * std::sin(q[1]);
}

Eigen::Matrix2d SliderCrankBase::linkage_mass(double theta1, double theta2) const {
  const auto& p = params_;
  const double coupling =
      p.crank_length * p.rod_length * std::cos(theta1 - theta2) * (0.5 * p.rod_mass + p.slider_mass);
  Eigen::Matrix2d m;
  m(0, 0) = p.crank_inertia +
            p.crank_length * p.crank_length * (0.25 * p.crank_mass + p.rod_mass + p.slider_mass);
  m(0, 1) = coupling;
  m(1, 0) = coupling;
  m(1, 1) = p.rod_inertia + p.rod_length * p.rod_length * (0.25 * p.rod_mass + p.slider_mass);
  return m;
}

Eigen::Vector2d SliderCrankBase::linkage_forces(double theta1, double theta2, double omega1,
                                                double omega2) const {
  const auto& p = params_;
  const double k = p.crank_length * p.rod_length * (0.5 * p.rod_mass + p.slider_mass);
  const double s = std::sin(theta1 - theta2);
  const double crank_weight = p.gravity * p.crank_length * (0.5 * p.crank_mass + p.rod_mass + p.slider_mass);
  const double rod_weight = p.gravity * p.rod_length * (0.5 * p.rod_mass + p.slider_mass);
  return {-k * s * omega2 * omega2 - crank_weight * std::cos(theta1),
          k * s * omega1 * omega1 - rod_weight * std::cos(theta2)};
}

Eigen::Matrix2d SliderCrankBase::linkage_forces_dq(double theta1, double theta2, double omega1,
                                                   double omega2) const {
  const auto& p = params_;
  const double k = p.crank_length * p.rod_length * (0.5 * p.rod_mass + p.slider_mass);
  const double c = std::cos(theta1 - theta2);
  const double crank_weight = p.gravity * p.crank_length * (0.5 * p.crank_mass + p.rod_mass + p.slider_mass);
  const double rod_weight = p.gravity * p.rod_length * (0.5 * p.rod_mass + p.slider_mass);
  Eigen::Matrix2d d;
  d(0, 0) = -k * c * omega2 * omega2 + crank_weight * std::sin(theta1);
  d(0, 1) = k * c * omega2 * omega2;
  d(1, 0) = k * c * omega1 * omega1;
  d(1, 1) = -k * c * omega1 * omega1 + rod_weight * std::sin(theta2);
  return d;
}

Eigen::Matrix2d SliderCrankBase::linkage_forces_dv(double theta1, double theta2, double omega1,
                                                   double omega2) const {
  const auto& p = params_;
  const double k = p.crank_length * p.rod_length * (0.5 * p.rod_mass + p.slider_mass);
  const double s = std::sin(theta1 - theta2);
  Eigen::Matrix2d d;
  d << 0.0, -2.0 * k * s * omega2, 2.0 * k * s * omega1, 0.0;
  return d;
}

double SliderCrankBase::linkage_potential(double theta1, double theta2) const {
  const auto& p = params_;
  // Uniform links, slider mass at the rod tip.
  return p.gravity * (p.crank_mass * 0.5 * p.crank_length * std::sin(theta1) +
                      p.rod_mass * (p.crank_length * std::sin(theta1) + 0.5 * p.rod_length * std::sin(theta2)) +
                      p.slider_mass * (p.crank_length * std::sin(theta1) + p.rod_length * std::sin(theta2)));
}

// ---------------------------------------------------------------------------

UnilateralSliderCrank::UnilateralSliderCrank(SliderCrankParams params, double restitution)
    : UnilateralSliderCrank(params, Vector::Constant(4, restitution)) {}

UnilateralSliderCrank::UnilateralSliderCrank(SliderCrankParams params, Vector restitution)
    : SliderCrankBase(params), eps_(std::move(restitution)) {
  require_restitution(eps_, 4);
}

Matrix UnilateralSliderCrank::mass(const Vector& q) const {
  check_position(q);
  Matrix m = Matrix::Zero(3, 3);
  m.topLeftCorner<2, 2>() = linkage_mass(q[0], q[1]);
  m(2, 2) = params_.slider_inertia;
  return m;
}

Vector UnilateralSliderCrank::forces(const Vector& q, const Vector& v) const {
  check_state(q, v);
  Vector h = Vector::Zero(3);
  h.head<2>() = linkage_forces(q[0], q[1], v[0], v[1]);
  return h;
}

Vector UnilateralSliderCrank::gaps(const Vector& q) const {
  check_position(q);
  const auto& p = params_;
  const double y = slider_height(q);
  const double s3 = std::sin(q[2]);
  const double c3 = std::cos(q[2]);
  Vector g(4);
  for (int i = 0; i < 4; ++i) {
    g[i] = 0.5 * p.notch() + kSignY[i] * y + kSignA[i] * p.half_length * s3 - p.half_height * c3;
  }
  return g;
}

Matrix UnilateralSliderCrank::gap_jacobian(const Vector& q) const {
  check_position(q);
  const auto& p = params_;
  const double dy1 = p.crank_length * std::cos(q[0]);
  const double dy2 = p.rod_length * std::cos(q[1]);
  const double s3 = std::sin(q[2]);
  const double c3 = std::cos(q[2]);
  Matrix w(4, 3);
  for (int i = 0; i < 4; ++i) {
    w(i, 0) = kSignY[i] * dy1;
    w(i, 1) = kSignY[i] * dy2;
    w(i, 2) = kSignA[i] * p.half_length * c3 + p.half_height * s3;
  }
  return w;
}

double UnilateralSliderCrank::potential(const Vector& q) const {
  check_position(q);
  return linkage_potential(q[0], q[1]);
}

std::optional<std::vector<Matrix>> UnilateralSliderCrank::gap_hessians(const Vector& q) const {
  check_position(q);
  const auto& p = params_;
  const double ddy1 = -p.crank_length * std::sin(q[0]);
  const double ddy2 = -p.rod_length * std::sin(q[1]);
  const double s3 = std::sin(q[2]);
  const double c3 = std::cos(q[2]);
  std::vector<Matrix> hessians;
  hessians.reserve(4);
  for (int i = 0; i < 4; ++i) {
    Matrix hess = Matrix::Zero(3, 3);
    hess(0, 0) = kSignY[i] * ddy1;
    hess(1, 1) = kSignY[i] * ddy2;
    hess(2, 2) = -kSignA[i] * p.half_length * s3 + p.half_height * c3;
    hessians.push_back(std::move(hess));
  }
  return hessians;
}

std::optional<Matrix> UnilateralSliderCrank::forces_dq(const Vector& q, const Vector& v) const {
  check_state(q, v);
  Matrix d = Matrix::Zero(3, 3);
  d.topLeftCorner<2, 2>() = linkage_forces_dq(q[0], q[1], v[0], v[1]);
  return d;
}

std::optional<Matrix> UnilateralSliderCrank::forces_dv(const Vector& q, const Vector& v) const {
  check_state(q, v);
  Matrix d = Matrix::Zero(3, 3);
  d.topLeftCorner<2, 2>() = linkage_forces_dv(q[0], q[1], v[0], v[1]);
  return d;
}

// ---------------------------------------------------------------------------

BilateralSliderCrank::BilateralSliderCrank(SliderCrankParams params)
    : SliderCrankBase(params), eps_(Vector::Zero(1)) {}

Matrix BilateralSliderCrank::mass(const Vector& q) const {
  check_position(q);
  return linkage_mass(q[0], q[1]);
}

Vector BilateralSliderCrank::forces(const Vector& q, const Vector& v) const {
  check_state(q, v);
  return linkage_forces(q[0], q[1], v[0], v[1]);
}

Vector BilateralSliderCrank::gaps(const Vector& q) const {
  return Vector::Constant(1, slider_height(q));
}

Matrix BilateralSliderCrank::gap_jacobian(const Vector& q) const {
  check_position(q);
  Matrix w(1, 2);
  w << params_.crank_length * std::cos(q[0]), params_.rod_length * std::cos(q[1]);
  return w;
}

double BilateralSliderCrank::potential(const Vector& q) const {
  check_position(q);
  return linkage_potential(q[0], q[1]);
}

std::optional<std::vector<Matrix>> BilateralSliderCrank::gap_hessians(const Vector& q) const {
  check_position(q);
  Matrix hess = Matrix::Zero(2, 2);
  hess(0, 0) = -params_.crank_length * std::sin(q[0]);
  hess(1, 1) = -params_.rod_length * std::sin(q[1]);
  return std::vector<Matrix>{hess};
}

std::optional<Matrix> BilateralSliderCrank::forces_dq(const Vector& q, const Vector& v) const {
  check_state(q, v);
  return Matrix(linkage_forces_dq(q[0], q[1], v[0], v[1]));
}

std::optional<Matrix> BilateralSliderCrank::forces_dv(const Vector& q, const Vector& v) const {
  check_state(q, v);
  return Matrix(linkage_forces_dv(q[0], q[1], v[0], v[1]));
}

// ---------------------------------------------------------------------------

void BouncingBallParams::validate() const {
  require_positive(mass, "mass");
  require_positive(gravity, "gravity");
  if (!(height >= 0.0) || !std::isfinite(height)) throw ContractError("height must be >= 0");
  if (!(restitution >= 0.0 && restitution <= 1.0)) throw ContractError("restitution must lie in [0, 1]");
}

BouncingBall::BouncingBall(BouncingBallParams params)
    : params_(params), eps_(Vector::Constant(1, params.restitution)) {
  params_.validate();
}

GeneralizedState BouncingBall::initial_state() const {
  return {0.0, Vector::Constant(1, params_.height), Vector::Zero(1)};
}

Matrix BouncingBall::mass(const Vector& q) const {
  check_position(q);
  return Matrix::Constant(1, 1, params_.mass);
}

Vector BouncingBall::forces(const Vector& q, const Vector& v) const {
  check_state(q, v);
  return Vector::Constant(1, -params_.mass * params_.gravity);
}

Vector BouncingBall::gaps(const Vector& q) const {
  check_position(q);
  return q;
}

Matrix BouncingBall::gap_jacobian(const Vector& q) const {
  check_position(q);
  return Matrix::Identity(1, 1);
}

double BouncingBall::potential(const Vector& q) const {
  check_position(q);
  return params_.mass * params_.gravity * q[0];
}

std::optional<std::vector<Matrix>> BouncingBall::gap_hessians(const Vector& q) const {
  check_position(q);
  return std::vector<Matrix>{Matrix::Zero(1, 1)};
}

std::optional<Matrix> BouncingBall::forces_dq(const Vector& q, const Vector& v) const {
  check_state(q, v);
  return Matrix::Zero(1, 1);
}

std::optional<Matrix> BouncingBall::forces_dv(const Vector& q, const Vector& v) const {
  check_state(q, v);
  return Matrix::Zero(1, 1);
}

}  // namespace ggl
