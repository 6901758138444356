#pragma once

#include "ggl/model.hpp"

namespace ggl {

/// Geometry and inertia of the slider-crank mechanism. Defaults are the
/// reference data set; `notch` defaults to 2 b + c so the slider has a total
/// vertical play of `clearance`.
struct SliderCrankParams {
  double crank_length = 0.1530;  // l1 [m]
  double rod_length = 0.3060;    // l2 [m]
  double half_length = 0.0500;   // a: slider half length [m]
  double half_height = 0.0250;   // b: slider half height [m]
  double clearance = 0.0010;     // c [m]
  double crank_mass = 0.0380;    // [kg]
  double rod_mass = 0.0380;
  double slider_mass = 0.0760;
  double crank_inertia = 7.4e-5;  // about the center of gravity [kg m^2]
  double rod_inertia = 5.9e-4;
  double slider_inertia = 2.7e-6;
  double gravity = 9.81;  // [m/s^2], acting in -y

  double notch() const { return 2.0 * half_height + clearance; }
  void validate() const;
};

/// Initial configuration of the reference runs: theta = 0, omega = (150, -75, 0).
GeneralizedState slider_crank_initial_state(bool unilateral);

/// Shared kinematics of both slider-crank variants (crank and rod angles).
class SliderCrankBase : public MechanicalModel {
 public:
  explicit SliderCrankBase(SliderCrankParams params);
  const SliderCrankParams& params() const { return params_; }

  /// Vertical position of the slider's center of gravity.
  double slider_height(const Vector& q) const;

 protected:
  // 2x2 crank/rod blocks shared by both variants.
  Eigen::Matrix2d linkage_mass(double theta1, double theta2) const;
  Eigen::Vector2d linkage_forces(double theta1, double theta2, double omega1, double omega2) const;
  Eigen::Matrix2d linkage_forces_dq(double theta1, double theta2, double omega1, double omega2) const;
  Eigen::Matrix2d linkage_forces_dv(double theta1, double theta2, double omega1, double omega2) const;
  double linkage_potential(double theta1, double theta2) const;

  SliderCrankParams params_;
};

/// Slider moving in a notch: q = (theta1, theta2, theta3), four frictionless
/// contacts at the slider corners (1, 2 on the upper wall, 3, 4 on the lower).
class UnilateralSliderCrank final : public SliderCrankBase {
 public:
  explicit UnilateralSliderCrank(SliderCrankParams params = {}, double restitution = 0.1);
  UnilateralSliderCrank(SliderCrankParams params, Vector restitution);

  std::string name() const override { return "slider_unilateral"; }
  int dof() const override { return 3; }
  int contact_count() const override { return 4; }
  const Vector& restitution() const override { return eps_; }

  Matrix mass(const Vector& q) const override;
  Vector forces(const Vector& q, const Vector& v) const override;
  Vector gaps(const Vector& q) const override;
  Matrix gap_jacobian(const Vector& q) const override;
  double potential(const Vector& q) const override;
  std::optional<std::vector<Matrix>> gap_hessians(const Vector& q) const override;
  std::optional<Matrix> forces_dq(const Vector& q, const Vector& v) const override;
  std::optional<Matrix> forces_dv(const Vector& q, const Vector& v) const override;

 private:
  Vector eps_;
};

/// Slider held at y = 0 by a two-sided constraint: q = (theta1, theta2),
/// one constraint g = l1 sin(theta1) + l2 sin(theta2).
class BilateralSliderCrank final : public SliderCrankBase {
 public:
  explicit BilateralSliderCrank(SliderCrankParams params = {});

  std::string name() const override { return "slider_bilateral"; }
  int dof() const override { return 2; }
  int contact_count() const override { return 1; }
  bool bilateral() const override { return true; }
  const Vector& restitution() const override { return eps_; }

  Matrix mass(const Vector& q) const override;
  Vector forces(const Vector& q, const Vector& v) const override;
  Vector gaps(const Vector& q) const override;
  Matrix gap_jacobian(const Vector& q) const override;
  double potential(const Vector& q) const override;
  std::optional<std::vector<Matrix>> gap_hessians(const Vector& q) const override;
  std::optional<Matrix> forces_dq(const Vector& q, const Vector& v) const override;
  std::optional<Matrix> forces_dv(const Vector& q, const Vector& v) const override;

 private:
  Vector eps_;
};

struct BouncingBallParams {
  double mass = 1.0;       // [kg]
  double gravity = 9.81;   // [m/s^2]
  double height = 0.1;     // initial drop height [m]
  double restitution = 0.5;

  void validate() const;
};

/// Point mass above a rigid floor: q = height, g = q, W = 1.
class BouncingBall final : public MechanicalModel {
 public:
  explicit BouncingBall(BouncingBallParams params = {});
  const BouncingBallParams& params() const { return params_; }
  GeneralizedState initial_state() const;

  std::string name() const override { return "ball"; }
  int dof() const override { return 1; }
  int contact_count() const override { return 1; }
  const Vector& restitution() const override { return eps_; }

  Matrix mass(const Vector& q) const override;
  Vector forces(const Vector& q, const Vector& v) const override;
  Vector gaps(const Vector& q) const override;
  Matrix gap_jacobian(const Vector& q) const override;
  double potential(const Vector& q) const override;
  std::optional<std::vector<Matrix>> gap_hessians(const Vector& q) const override;
  std::optional<Matrix> forces_dq(const Vector& q, const Vector& v) const override;
  std::optional<Matrix> forces_dv(const Vector& q, const Vector& v) const override;

 private:
  BouncingBallParams params_;
  Vector eps_;
};

}  // namespace ggl
