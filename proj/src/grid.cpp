#include "stpp/grid.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace stpp {

namespace {

void check_axis(const std::vector<double>& x, const char* name) {
  if (x.empty()) throw std::invalid_argument(std::string("grid axis ") + name + " is empty");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !std::isfinite(x[i]) || (i > 0 && !(x[i] > x[i - 1]))) {
      throw std::invalid_argument(std::string("grid axis ") + name +
                                  " must be positive and strictly increasing");
    }
  }
}

}  // namespace

EvalGrid::EvalGrid(std::vector<double> u, std::vector<double> v)
    : u_(std::move(u)), v_(std::move(v)) {
  check_axis(u_, "u");
  check_axis(v_, "v");
}

std::vector<double> EvalGrid::axis(double start, double stop, double step) {
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("EvalGrid::regular: bad range");
  std::vector<double> x;
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  x.reserve(count);
  // Multiply rather than accumulate so that 0.01 * 10 prints as 0.1.
  for (std::size_t i = 0; i < count; ++i) {
    x.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return x;
}

EvalGrid EvalGrid::regular(double start, double stop, double step) {
  auto x = axis(start, stop, step);
  return {x, x};
}

EvalGrid EvalGrid::default_grid() { return regular(0.01, 0.25, 0.01); }

std::vector<double> trapezoid_weights(const std::vector<double>& x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = 0.5 * (x[i + 1] - x[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

}  // namespace stpp
