#include "fpot/means.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fpot/error.hpp"

namespace fpot {

namespace {

std::string str(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_number(std::string_view text, std::string_view what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw InputError("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

void check_domain(const GeneratorFunction& f, const WeightedDistribution& dist) {
  for (const Atom& a : dist.atoms()) {
    if (!f.domain().contains(a.x)) {
      throw DomainError("atom value " + str(a.x) + " lies outside the domain (" +
                            str(f.domain().lo()) + ", " + str(f.domain().hi()) + ")",
                        a.x);
    }
  }
}

}  // namespace

WeightedDistribution::WeightedDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) {
    throw InputError("distribution needs at least one atom");
  }
  CompensatedSum total;
  for (const Atom& a : atoms_) {
    if (!std::isfinite(a.x)) {
      throw InputError("atom value must be finite");
    }
    if (!(a.p > 0.0) || !std::isfinite(a.p)) {
      throw InputError("atom probability must be positive, got " + str(a.p));
    }
    total.add(a.p);
  }
  if (std::abs(total.value() - 1.0) > kSumTolerance) {
    throw InputError("probabilities sum to " + str(total.value()) + ", expected 1");
  }
}

WeightedDistribution WeightedDistribution::parse_inline(std::string_view text) {
  std::vector<Atom> atoms;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw InputError("atom '" + std::string(item) + "' must have the form value:probability");
    }
    atoms.push_back({parse_number(item.substr(0, colon), "atom value"),
                     parse_number(item.substr(colon + 1), "atom probability")});
    if (comma == std::string_view::npos) {
      break;
    }
    text.remove_prefix(comma + 1);
  }
  return WeightedDistribution(std::move(atoms));
}

WeightedDistribution WeightedDistribution::from_json(const nlohmann::json& j) {
  if (!j.is_array()) {
    throw InputError("distribution JSON must be an array of {\"x\", \"p\"} objects");
  }
  std::vector<Atom> atoms;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("x") || !item.contains("p") ||
        !item["x"].is_number() || !item["p"].is_number()) {
      throw InputError("each atom must be an object with numeric \"x\" and \"p\"");
    }
    atoms.push_back({item["x"].get<double>(), item["p"].get<double>()});
  }
  return WeightedDistribution(std::move(atoms));
}

nlohmann::json WeightedDistribution::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const Atom& a : atoms_) {
    j.push_back({{"x", a.x}, {"p", a.p}});
  }
  return j;
}

double WeightedDistribution::min_value() const {
  return std::min_element(atoms_.begin(), atoms_.end(),
                          [](const Atom& l, const Atom& r) { return l.x < r.x; })
      ->x;
}

double WeightedDistribution::max_value() const {
  return std::max_element(atoms_.begin(), atoms_.end(),
                          [](const Atom& l, const Atom& r) { return l.x < r.x; })
      ->x;
}

bool WeightedDistribution::is_nondegenerate() const { return min_value() < max_value(); }

WeightedDistribution WeightedDistribution::with_values(std::span<const double> values) const {
  if (values.size() != atoms_.size()) {
    throw InputError("expected one value per atom");
  }
  std::vector<Atom> out = atoms_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].x = values[i];
  }
  return WeightedDistribution(std::move(out));
}

WeightedDistribution WeightedDistribution::shifted(std::span<const double> psi, double t) const {
  if (psi.size() != atoms_.size()) {
    throw InputError("psi must supply one value per atom");
  }
  std::vector<Atom> out = atoms_;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].x += t * psi[i];
  }
  return WeightedDistribution(std::move(out));
}

double eval_potential(const GeneratorFunction& f, const WeightedDistribution& dist) {
  check_domain(f, dist);
  const double lo = dist.min_value();
  const double hi = dist.max_value();
  if (lo == hi) {
    return lo;
  }
  CompensatedSum mean;
  for (const Atom& a : dist.atoms()) {
    const double v = f.value(a.x);
    if (!std::isfinite(v)) {
      throw EvaluationError("f is not finite at atom " + str(a.x), a.x);
    }
    mean.add(a.p * v);
  }
  double y = mean.value();
  // Rounding can push the mean a hair past f(lo) or f(hi); internality pins it back.
  const double flo = f.value(lo);
  const double fhi = f.value(hi);
  y = std::clamp(y, std::min(flo, fhi), std::max(flo, fhi));
  return std::clamp(f.inverse_value(y, lo, hi), lo, hi);
}

std::vector<double> derivative_density(const GeneratorFunction& f,
                                       const WeightedDistribution& dist) {
  const double lambda = eval_potential(f, dist);
  const double d_lambda = f.jet(lambda).d1;
  if (d_lambda == 0.0 || !std::isfinite(d_lambda)) {
    throw DerivativeDegenerateError("f' vanishes at the potential value " + str(lambda));
  }
  std::vector<double> rho;
  rho.reserve(dist.size());
  for (const Atom& a : dist.atoms()) {
    const double d = f.jet(a.x).d1;
    if (d == 0.0) {
      throw DerivativeDegenerateError("f' vanishes at atom " + str(a.x));
    }
    rho.push_back(d / d_lambda);
  }
  return rho;
}

DirectionalDerivatives directional_derivatives(const GeneratorFunction& f,
                                               const WeightedDistribution& dist,
                                               std::span<const double> psi) {
  if (psi.size() != dist.size()) {
    throw InputError("psi must supply one value per atom");
  }
  const double lambda = eval_potential(f, dist);
  const Jet2 at_lambda = f.jet(lambda);
  if (at_lambda.d1 == 0.0 || !std::isfinite(at_lambda.d1)) {
    throw DerivativeDegenerateError("f' vanishes at the potential value " + str(lambda));
  }
  CompensatedSum s1;
  CompensatedSum s2;
  const auto atoms = dist.atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Jet2 j = f.jet(atoms[i].x);
    s1.add(atoms[i].p * j.d1 * psi[i]);
    s2.add(atoms[i].p * j.d2 * psi[i] * psi[i]);
  }
  const double d1 = at_lambda.d1;
  const double first = s1.value() / d1;
  const double second = s2.value() / d1 - at_lambda.d2 * first * first / d1;
  return {first, second};
}

double cgf(const WeightedDistribution& dist, double t) {
  double shift = -kInf;
  for (const Atom& a : dist.atoms()) {
    shift = std::max(shift, t * a.x);
  }
  CompensatedSum s;
  for (const Atom& a : dist.atoms()) {
    s.add(a.p * std::exp(t * a.x - shift));
  }
  return shift + std::log(s.value());
}

}  // namespace fpot
