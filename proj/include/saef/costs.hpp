#pragma once

#include <array>

#include "saef/network.hpp"

namespace saef {

/// BPR volume-delay parameters.
struct BprParams {
  double alpha = 0.15;
  double beta = 4.0;
  void validate() const;  // alpha > 0, beta >= 1
};

/// Per-mile fuel curve A + B/v + C v^2 (liters per mile, v in mph).
struct FuelParams {
  double a = -0.00654170;
  double b = 1.902150;
  double c = 0.00001588;
  /// Requires b > 0, c > 0 and a positive curve on a 0.5 mph grid over [5, 90].
  void validate() const;
};

/// Annual-accident model coefficients indexed by lane count.
struct SpfParams {
  struct Coefficients {
    double alpha;
    double beta;
  };
  std::array<Coefficients, 8> by_lanes{{{-7.09, 0.98},
                                        {-7.09, 0.98},
                                        {-7.09, 0.98},
                                        {-5.78, 0.82},
                                        {-6.49, 0.89},
                                        {-6.49, 0.89},
                                        {-6.49, 0.89},
                                        {-10.75, 1.24}}};
  const Coefficients& for_lanes(int lanes) const;  // throws std::invalid_argument
};

/// Speed window used whenever the fuel curve is evaluated inside the solver.
struct FuelSpeedWindow {
  double min_mph = 5.0;
  double max_mph = 90.0;
};

// All functions throw std::invalid_argument for negative flow or an
// out-of-domain speed.

/// c0 * (1 + alpha (f/C)^beta), hours.
double bpr_time(double free_flow_time_h, double flow_vph, double capacity_vph, const BprParams& p = {});

/// d/df of bpr_time.
double bpr_time_derivative(double free_flow_time_h, double flow_vph, double capacity_vph,
                           const BprParams& p = {});

/// Link length divided by the BPR time.
double bpr_speed(const Link& link, double flow_vph, const BprParams& p = {});

/// Fuel for one traversal: length * (A + B/v + C v^2). Speed must lie in [1, 120] mph.
double link_fuel(double length_miles, double speed_mph, const FuelParams& p = {});

/// d/dv of link_fuel.
double link_fuel_speed_derivative(double length_miles, double speed_mph, const FuelParams& p = {});

/// Closed-form integral of bpr_time from 0 to f.
double bpr_integral(const Link& link, double flow_vph, const BprParams& p = {});

/// d(f c(f))/df = c0 (1 + alpha (1+beta) (f/C)^beta).
double marginal_time_cost(const Link& link, double flow_vph, const BprParams& p = {});

/// d(f m(v(f)))/df with v(f) the BPR speed.
double marginal_fuel_cost(const Link& link, double flow_vph, const BprParams& bpr = {},
                          const FuelParams& fuel = {});

/// Fuel per traversal with the speed clamped into `window` first.
double clamped_link_fuel(const Link& link, double speed_mph, const FuelParams& fuel,
                         const FuelSpeedWindow& window);

/// f * m(clamp(v(f))), liters per hour.
double fuel_rate(const Link& link, double flow_vph, const BprParams& bpr, const FuelParams& fuel,
                 const FuelSpeedWindow& window);

/// Exact derivative of fuel_rate in flow. Where the clamp is active the speed
/// term vanishes and the result is the clamped m.
double marginal_fuel_cost_clamped(const Link& link, double flow_vph, const BprParams& bpr,
                                  const FuelParams& fuel, const FuelSpeedWindow& window);

/// Expected accidents per year: exp(alpha) * length * ADT^beta; zero when ADT is 0.
double spf_accidents(int lanes, double length_miles, double adt, const SpfParams& p = {});

}  // namespace saef
