#include <algorithm>
#include <cmath>

#include "gila/errors.hpp"
#include "gila/layout.hpp"

namespace gila {

namespace {

double ipow(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace

const char* to_string(ForceMode mode) noexcept { return mode == ForceMode::FR ? "fr" : "linlog"; }

ForceMode parse_force_mode(std::string_view text) {
  if (text == "fr" || text == "FR") return ForceMode::FR;
  if (text == "linlog" || text == "LinLog") return ForceMode::LinLog;
  fail(ErrorKind::Config, "unknown force mode '" + std::string(text) + "'");
}

double ForceConfig::ideal_distance() const noexcept { return ns + std::sqrt(nh * nh + nw * nw); }

void ForceConfig::set_mode(ForceMode m) noexcept {
  mode = m;
  p = m == ForceMode::FR ? 2 : 0;
  q = 1;
}

void ForceConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorKind::Config, what); };
  if (k == 0) bad("k must be a positive integer");
  if (p < 0 || q < 1) bad("force exponents out of range");
  if (mode == ForceMode::FR && (p != 2 || q != 1)) bad("FR mode requires p=2, q=1");
  if (mode == ForceMode::LinLog && (p != 0 || q != 1)) bad("LinLog mode requires p=0, q=1");
  if (!(ns >= 0 && nh >= 0 && nw >= 0) || !(ideal_distance() > 0)) bad("ideal distance must be positive");
  if (!(frame_width > 0 && frame_height > 0)) bad("frame must have positive size");
  if (!(cool_base > 0 && cool_base < 1)) bad("cooling base must lie in (0,1)");
  if (!(conv_threshold >= 0)) bad("convergence threshold must be non-negative");
  if (!(conv_fraction > 0 && conv_fraction < 1)) bad("convergence fraction must lie in (0,1)");
  if (max_iterations == 0) bad("max_iterations must be positive");
  if (!(rho > 0)) bad("rho must be positive");
}

double attractive_force(double delta, const ForceConfig& cfg) {
  if (cfg.mode == ForceMode::LinLog) return cfg.ideal_distance();
  return ipow(delta, cfg.p) / cfg.ideal_distance();
}

double repulsive_force(double delta, std::uint32_t weight, const ForceConfig& cfg) {
  const double d = cfg.ideal_distance();
  return static_cast<double>(weight) * d * d / ipow(std::max(delta, kMinDistance), cfg.q);
}

double cooling(std::uint64_t h, std::size_t n, double aspect, const ForceConfig& cfg) {
  if (n == 0 || !(aspect > 0)) fail(ErrorKind::InvalidArgument, "cooling needs n >= 1 and a > 0");
  return std::sqrt(static_cast<double>(n) / aspect * cfg.ideal_distance()) *
         std::pow(cfg.cool_base, static_cast<double>(h));
}

bool halt_check(std::span<const double> displacements, const ForceConfig& cfg) {
  const auto above = std::count_if(displacements.begin(), displacements.end(),
                                   [&](double m) { return m > cfg.conv_threshold; });
  return static_cast<double>(above) < cfg.conv_fraction * static_cast<double>(displacements.size());
}

}  // namespace gila
