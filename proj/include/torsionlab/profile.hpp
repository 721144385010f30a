#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace torsionlab {

/// Tabulated nonincreasing function of the measure variable, linear between
/// breakpoints.
struct MonotoneProfile {
  std::vector<double> s;
  std::vector<double> v;

  double operator()(double x) const {
    if (s.empty()) return 0.0;
    if (x <= s.front()) return v.front();
    if (x >= s.back()) return v.back();
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t j = std::size_t(it - s.begin());
    double w = (x - s[j - 1]) / (s[j] - s[j - 1]);
    return v[j - 1] + w * (v[j] - v[j - 1]);
  }

  bool nonincreasing(double tol = 0.0) const {
    for (std::size_t i = 1; i < v.size(); ++i)
      if (v[i] > v[i - 1] + tol) return false;
    return true;
  }

  std::string csv(const std::string& value_name = "value") const {
    std::ostringstream os;
    os.precision(17);
    os << "s," << value_name << "\r\n";
    for (std::size_t i = 0; i < s.size(); ++i) os << s[i] << ',' << v[i] << "\r\n";
    return os.str();
  }
};

}  // namespace torsionlab
