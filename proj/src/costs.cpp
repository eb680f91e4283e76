#include "saef/costs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace saef {

namespace {

void require_flow(double flow) {
  if (!(flow >= 0.0)) throw std::invalid_argument("negative flow " + std::to_string(flow));
}

void require_speed(double v) {
  if (!(v >= 1.0 && v <= 120.0)) {
    throw std::invalid_argument("speed " + std::to_string(v) + " mph outside fuel domain [1, 120]");
  }
}

}  // namespace

void BprParams::validate() const {
  if (!(alpha > 0.0)) throw std::invalid_argument("BPR alpha must be positive");
  if (!(beta >= 1.0)) throw std::invalid_argument("BPR beta must be >= 1");
}

void FuelParams::validate() const {
  if (!(b > 0.0)) throw std::invalid_argument("fuel B must be positive");
  if (!(c > 0.0)) throw std::invalid_argument("fuel C must be positive");
  for (int i = 0; i <= 170; ++i) {
    const double v = 5.0 + 0.5 * i;
    if (!(a + b / v + c * v * v > 0.0)) {
      throw std::invalid_argument("fuel curve not positive at " + std::to_string(v) + " mph");
    }
  }
}

const SpfParams::Coefficients& SpfParams::for_lanes(int lanes) const {
  if (lanes < 1 || lanes > 8) throw std::invalid_argument("no SPF coefficients for " + std::to_string(lanes) + " lanes");
  return by_lanes[static_cast<std::size_t>(lanes - 1)];
}

double bpr_time(double c0, double flow, double capacity, const BprParams& p) {
  require_flow(flow);
  return c0 * (1.0 + p.alpha * std::pow(flow / capacity, p.beta));
}

double bpr_time_derivative(double c0, double flow, double capacity, const BprParams& p) {
  require_flow(flow);
  if (flow == 0.0) return p.beta > 1.0 ? 0.0 : c0 * p.alpha / capacity;
  return c0 * p.alpha * p.beta * std::pow(flow / capacity, p.beta - 1.0) / capacity;
}

double bpr_speed(const Link& link, double flow, const BprParams& p) {
  return link.length_miles / bpr_time(free_flow_time(link), flow, link.capacity_vph, p);
}

double link_fuel(double length, double v, const FuelParams& p) {
  require_speed(v);
  return length * (p.a + p.b / v + p.c * v * v);
}

double link_fuel_speed_derivative(double length, double v, const FuelParams& p) {
  require_speed(v);
  return length * (-p.b / (v * v) + 2.0 * p.c * v);
}

double bpr_integral(const Link& link, double flow, const BprParams& p) {
  require_flow(flow);
  const double c0 = free_flow_time(link);
  return c0 * flow * (1.0 + p.alpha / (p.beta + 1.0) * std::pow(flow / link.capacity_vph, p.beta));
}

double marginal_time_cost(const Link& link, double flow, const BprParams& p) {
  require_flow(flow);
  return free_flow_time(link) * (1.0 + p.alpha * (1.0 + p.beta) * std::pow(flow / link.capacity_vph, p.beta));
}

double marginal_fuel_cost(const Link& link, double flow, const BprParams& bpr, const FuelParams& fuel) {
  require_flow(flow);
  const double c0 = free_flow_time(link);
  const double c = bpr_time(c0, flow, link.capacity_vph, bpr);
  const double v = link.length_miles / c;
  const double dc = bpr_time_derivative(c0, flow, link.capacity_vph, bpr);
  const double dv = -link.length_miles * dc / (c * c);
  return link_fuel(link.length_miles, v, fuel) + flow * link_fuel_speed_derivative(link.length_miles, v, fuel) * dv;
}

double clamped_link_fuel(const Link& link, double v, const FuelParams& fuel, const FuelSpeedWindow& w) {
  return link_fuel(link.length_miles, std::clamp(v, w.min_mph, w.max_mph), fuel);
}

double fuel_rate(const Link& link, double flow, const BprParams& bpr, const FuelParams& fuel,
                 const FuelSpeedWindow& w) {
  return flow * clamped_link_fuel(link, bpr_speed(link, flow, bpr), fuel, w);
}

double marginal_fuel_cost_clamped(const Link& link, double flow, const BprParams& bpr, const FuelParams& fuel,
                                  const FuelSpeedWindow& w) {
  require_flow(flow);
  const double v = bpr_speed(link, flow, bpr);
  if (v <= w.min_mph || v >= w.max_mph) return clamped_link_fuel(link, v, fuel, w);
  return marginal_fuel_cost(link, flow, bpr, fuel);
}

double spf_accidents(int lanes, double length, double adt, const SpfParams& p) {
  const auto& k = p.for_lanes(lanes);
  if (!(length > 0.0)) throw std::invalid_argument("SPF length must be positive");
  if (!(adt >= 0.0)) throw std::invalid_argument("SPF ADT must be non-negative");
  if (adt == 0.0) return 0.0;
  return std::exp(k.alpha + std::log(length) + k.beta * std::log(adt));
}

}  // namespace saef
