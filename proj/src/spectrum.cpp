#include "nlspec/spectra.hpp"

#include "nlspec/errors.hpp"
#include "nlspec/format.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace nlspec {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double positive(const std::map<std::string, double>& kv, const std::string& key, const std::string& text) {
  auto it = kv.find(key);
  if (it == kv.end()) fail(ErrorKind::InvalidArgument, "domain '" + text + "' is missing '" + key + "'");
  if (!(it->second > 0.0)) fail(ErrorKind::InvalidArgument, "domain '" + text + "' needs positive '" + key + "'");
  return it->second;
}

}  // namespace

Domain::Domain(Shape shape) : shape_(shape) {
  std::visit(overloaded{
                 [](const Interval& s) {
                   if (!(s.length > 0.0)) fail(ErrorKind::InvalidArgument, "interval length must be positive");
                 },
                 [](const Rectangle& s) {
                   if (!(s.a > 0.0 && s.b > 0.0)) fail(ErrorKind::InvalidArgument, "rectangle sides must be positive");
                 },
                 [](const Disk& s) {
                   if (!(s.radius > 0.0)) fail(ErrorKind::InvalidArgument, "disk radius must be positive");
                 },
                 [](const UnspecifiedDomain& s) {
                   if (s.dim < 1) fail(ErrorKind::InvalidArgument, "dimension must be >= 1");
                 },
             },
             shape_);
}

int Domain::dim() const {
  return std::visit(overloaded{
                        [](const Interval&) { return 1; },
                        [](const Rectangle&) { return 2; },
                        [](const Disk&) { return 2; },
                        [](const UnspecifiedDomain& s) { return s.dim; },
                    },
                    shape_);
}

double Domain::volume() const {
  return std::visit(overloaded{
                        [](const Interval& s) { return s.length; },
                        [](const Rectangle& s) { return s.a * s.b; },
                        [](const Disk& s) { return std::numbers::pi * s.radius * s.radius; },
                        [](const UnspecifiedDomain&) -> double {
                          fail(ErrorKind::InvalidArgument, "volume of an unspecified domain is unknown");
                        },
                    },
                    shape_);
}

double Domain::boundary_volume() const {
  return std::visit(overloaded{
                        [](const Interval&) { return 2.0; },
                        [](const Rectangle& s) { return 2.0 * (s.a + s.b); },
                        [](const Disk& s) { return 2.0 * std::numbers::pi * s.radius; },
                        [](const UnspecifiedDomain&) -> double {
                          fail(ErrorKind::InvalidArgument, "boundary of an unspecified domain is unknown");
                        },
                    },
                    shape_);
}

std::string Domain::describe() const {
  return std::visit(overloaded{
                        [](const Interval& s) { return "interval(length=" + format_double(s.length) + ")"; },
                        [](const Rectangle& s) {
                          return "rectangle(a=" + format_double(s.a) + ",b=" + format_double(s.b) + ")";
                        },
                        [](const Disk& s) { return "disk(radius=" + format_double(s.radius) + ")"; },
                        [](const UnspecifiedDomain& s) { return "unspecified(dim=" + std::to_string(s.dim) + ")"; },
                    },
                    shape_);
}

Domain Domain::parse(const std::string& text) {
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string::npos || close == std::string::npos || close < open || close + 1 != text.size())
    fail(ErrorKind::InvalidArgument, "malformed domain '" + text + "'");
  const std::string kind = text.substr(0, open);
  std::map<std::string, double> kv;
  std::stringstream body(text.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(body, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorKind::InvalidArgument, "malformed domain parameter '" + item + "'");
    kv[item.substr(0, eq)] = parse_double(item.substr(eq + 1));
  }
  Domain d;
  std::size_t expected = 1;
  if (kind == "interval") {
    d = Domain(Interval{positive(kv, "length", text)});
  } else if (kind == "rectangle") {
    d = Domain(Rectangle{positive(kv, "a", text), positive(kv, "b", text)});
    expected = 2;
  } else if (kind == "disk") {
    d = Domain(Disk{positive(kv, "radius", text)});
  } else if (kind == "unspecified") {
    d = Domain(UnspecifiedDomain{static_cast<int>(positive(kv, "dim", text))});
  } else {
    fail(ErrorKind::InvalidArgument, "unknown domain kind '" + kind + "'");
  }
  if (kv.size() != expected) fail(ErrorKind::InvalidArgument, "unexpected parameters in domain '" + text + "'");
  return d;
}

bool Domain::operator==(const Domain& other) const { return describe() == other.describe(); }

std::string to_string(BoundaryCondition bc) { return bc == BoundaryCondition::Dirichlet ? "dirichlet" : "neumann"; }

std::string to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::Analytic: return "analytic";
    case SolverMethod::BesselRoots: return "bessel";
    case SolverMethod::FiniteDifference: return "fd";
    case SolverMethod::Unknown: return "unknown";
  }
  return "unknown";
}

BoundaryCondition parse_boundary_condition(const std::string& text) {
  if (text == "dirichlet") return BoundaryCondition::Dirichlet;
  if (text == "neumann" || text == "traction") return BoundaryCondition::NeumannTraction;
  fail(ErrorKind::InvalidArgument, "unknown boundary condition '" + text + "' (expected dirichlet or neumann)");
}

SolverMethod parse_solver_method(const std::string& text) {
  if (text == "analytic") return SolverMethod::Analytic;
  if (text == "bessel") return SolverMethod::BesselRoots;
  if (text == "fd") return SolverMethod::FiniteDifference;
  if (text == "unknown") return SolverMethod::Unknown;
  fail(ErrorKind::InvalidArgument, "unknown solver method '" + text + "'");
}

long Spectrum::count() const {
  long c = 0;
  for (int m : multiplicities) c += m;
  return c;
}

double Spectrum::resolved_ceiling() const {
  if (eigenvalues.empty()) return 0.0;
  if (method != SolverMethod::FiniteDifference) return eigenvalues.back();
  const auto idx = static_cast<std::size_t>(kFiniteDifferenceResolvedFraction * static_cast<double>(eigenvalues.size()));
  return eigenvalues[std::min(idx, eigenvalues.size() - 1)];
}

void Spectrum::validate() const {
  if (eigenvalues.size() != multiplicities.size())
    fail(ErrorKind::InvalidArgument, "eigenvalue and multiplicity arrays differ in length");
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (!std::isfinite(eigenvalues[i])) fail(ErrorKind::InvalidArgument, "non-finite eigenvalue");
    if (multiplicities[i] < 1) fail(ErrorKind::InvalidArgument, "multiplicity must be >= 1");
    if (i > 0 && eigenvalues[i] < eigenvalues[i - 1]) {
      std::ostringstream os;
      os << "eigenvalue " << i + 1 << " (" << eigenvalues[i] << ") is below its predecessor (" << eigenvalues[i - 1] << ")";
      fail(ErrorKind::SortedViolation, os.str());
    }
  }
}

std::vector<double> Spectrum::expanded() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count()));
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) out.insert(out.end(), multiplicities[i], eigenvalues[i]);
  return out;
}

Spectrum interval_spectrum(double length, const LameParameters& params, BoundaryCondition bc, int count) {
  params.validate();
  if (count < 0) fail(ErrorKind::InvalidArgument, "count must be nonnegative");
  Spectrum s;
  s.domain = Domain(Interval{length});
  s.bc = bc;
  s.params = params;
  s.method = SolverMethod::Analytic;
  const int first = bc == BoundaryCondition::Dirichlet ? 1 : 0;
  const double c = params.pressure_modulus();
  for (int k = first; k < first + count; ++k) {
    const double w = k * std::numbers::pi / length;
    s.eigenvalues.push_back(c * w * w);
    s.multiplicities.push_back(1);
  }
  return s;
}

}  // namespace nlspec
