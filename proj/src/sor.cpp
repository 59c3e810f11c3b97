#include "mvbandit/sor.hpp"

#include <algorithm>
#include <cmath>

#include "mvbandit/errors.hpp"
#include "mvbandit/format.hpp"

namespace mvbandit {

void SorSpec::validate() const {
  if (d < 1) throw InvalidSpecError("d must be at least 1");
  if (S < 1) throw InvalidSpecError("S must be at least 1");
  if (price_coeffs.size() != d || var_coeffs.size() != d)
    throw InvalidSpecError("coefficient vectors must have d entries");
  if (!(omega >= 0.0)) throw InvalidSpecError("omega must be nonnegative");
  if (!(rho >= 0.0)) throw InvalidSpecError("rho must be nonnegative");
  for (int i = 0; i < d; ++i) {
    if (!(price_coeffs[i] > 0.0))
      throw InvalidSpecError("p[" + std::to_string(i) + "] must be positive");
    if (!(var_coeffs[i] > 0.0))
      throw InvalidSpecError("sigma2[" + std::to_string(i) +
                             "] must be positive");
  }
  for (int i = 0; i + 1 < d; ++i) {
    if (price_coeffs[i] > price_coeffs[i + 1])
      throw InvalidSpecError("p[" + std::to_string(i) + "] > p[" +
                             std::to_string(i + 1) + "] breaks ascending order");
    if (var_coeffs[i] > var_coeffs[i + 1])
      throw InvalidSpecError("sigma2[" + std::to_string(i) + "] > sigma2[" +
                             std::to_string(i + 1) + "] breaks ascending order");
  }
  if (d >= 2) {
    if (!(price_coeffs[0] < price_coeffs[1]))
      throw InvalidSpecError("p[0] must be strictly smallest");
    if (!(var_coeffs[0] < var_coeffs[1]))
      throw InvalidSpecError("sigma2[0] must be strictly smallest");
  }
  if (dark_count > 0 || lit_count > 0) {
    if (dark_count < 1 || lit_count < 1 || 1 + dark_count + lit_count != d)
      throw InvalidSpecError("venue split must satisfy 1 + dark + lit = d");
    int b = dark_count;  // venues 1..b are dark, b+1.. are lit
    if (!(price_coeffs[b] < price_coeffs[b + 1]))
      throw InvalidSpecError("p: dark venues must price strictly below lit");
    if (!(var_coeffs[b] < var_coeffs[b + 1]))
      throw InvalidSpecError("sigma2: dark venues must sit strictly below lit");
  }
}

long long count_allocations(int d, int S) {
  if (d < 1 || S < 1)
    throw InvalidSpecError("allocation count needs d >= 1 and S >= 1");
  // C(S + d - 1, d - 1) built up one factor at a time; each partial product
  // is itself a binomial coefficient, so the division is exact.
  unsigned __int128 result = 1;
  for (int i = 1; i <= d - 1; ++i) {
    result = result * static_cast<unsigned __int128>(S + i) /
             static_cast<unsigned __int128>(i);
    if (result > static_cast<unsigned __int128>(1) << 62)
      return (1LL << 62);
  }
  return static_cast<long long>(result);
}

ActionSet enumerate_allocations(int d, int S, long long cap) {
  long long count = count_allocations(d, S);
  if (count > cap) throw CapExceededError(count, cap);
  std::vector<Eigen::VectorXd> actions;
  actions.reserve(static_cast<std::size_t>(count));
  Eigen::VectorXd cur = Eigen::VectorXd::Zero(d);
  const double scale = 1.0 / S;
  // Depth-first fill emits vectors in ascending lexicographic order.
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == d - 1) {
      cur[pos] = remaining * scale;
      actions.push_back(cur);
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      cur[pos] = v * scale;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, S);
  return ActionSet(std::move(actions));
}

SorSpec load_scenario(const std::string& name) {
  SorSpec spec;
  spec.omega = 1.0;
  spec.rho = 2.0;
  spec.S = 4;
  if (name == "I") {
    spec.d = 4;
    spec.price_coeffs = Eigen::Vector4d(0.1316, 0.3218, 0.5800, 0.7367);
    spec.var_coeffs = Eigen::Vector4d(0.2506, 0.2902, 0.5090, 0.7706);
  } else if (name == "II") {
    spec.d = 5;
    spec.price_coeffs.resize(5);
    spec.price_coeffs << 0.1121, 0.2742, 0.4942, 0.5232, 0.6278;
    spec.var_coeffs.resize(5);
    spec.var_coeffs << 0.2318, 0.2685, 0.3798, 0.4709, 0.7129;
  } else if (name == "III") {
    spec.d = 6;
    spec.price_coeffs.resize(6);
    spec.price_coeffs << 0.1081, 0.2641, 0.2645, 0.4767, 0.5047, 0.6055;
    spec.var_coeffs.resize(6);
    spec.var_coeffs << 0.1631, 0.1889, 0.2672, 0.3313, 0.5015, 0.7106;
  } else {
    throw InvalidSpecError("unknown scenario \"" + name +
                           "\"; expected I, II, or III");
  }
  spec.label = "scenario-" + name;
  spec.validate();
  return spec;
}

double rescale_factor(const SorSpec& spec) {
  double pn = spec.price_coeffs.norm();
  double vn = spec.var_coeffs.norm();
  double c = 1.0;
  if (pn > 0.0) c = std::min(c, 1.0 / pn);
  if (vn > 0.0) c = std::min(c, spec.omega / vn);
  return c;
}

MVInstance to_instance(const SorSpec& spec, int S, long long cap) {
  spec.validate();
  if (S < 1) throw InvalidSpecError("S must be at least 1");
  ActionSet actions = enumerate_allocations(spec.d, S, cap);
  double c = rescale_factor(spec);
  std::string label = spec.label + " S=" + std::to_string(S);
  if (c < 1.0) label += " rescale=" + format_double(c);
  return MVInstance(std::move(actions), c * spec.price_coeffs,
                    c * spec.var_coeffs, spec.omega, spec.rho,
                    std::move(label));
}

SorSpec sample_random_spec(Xoshiro256pp& rng, int d, int lit_count,
                           int dark_count, double lo, double hi, double omega,
                           double rho) {
  if (d < 3 || dark_count < 1 || lit_count < 1 || 1 + dark_count + lit_count != d)
    throw InvalidSpecError("random spec needs 1 + dark + lit = d with d >= 3");
  if (!(lo > 0.0 && hi > lo))
    throw InvalidSpecError("coefficient range must satisfy 0 < lo < hi");
  SorSpec spec;
  spec.d = d;
  spec.omega = omega;
  spec.rho = rho;
  spec.dark_count = dark_count;
  spec.lit_count = lit_count;
  spec.label = "random-sor";
  auto draw_sorted = [&](Eigen::VectorXd& out) {
    out.resize(d);
    for (int i = 0; i < d; ++i) out[i] = lo + (hi - lo) * rng.uniform01();
    std::sort(out.data(), out.data() + d);
  };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    draw_sorted(spec.price_coeffs);
    draw_sorted(spec.var_coeffs);
    int b = dark_count;
    bool strict = spec.price_coeffs[0] < spec.price_coeffs[1] &&
                  spec.var_coeffs[0] < spec.var_coeffs[1] &&
                  spec.price_coeffs[b] < spec.price_coeffs[b + 1] &&
                  spec.var_coeffs[b] < spec.var_coeffs[b + 1];
    if (strict) {
      spec.validate();
      return spec;
    }
  }
  throw InvalidSpecError("could not draw strictly ordered coefficients");
}

}  // namespace mvbandit
