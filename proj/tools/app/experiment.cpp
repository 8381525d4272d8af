#include "experiment.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "bullwhip/errors.hpp"
#include "bullwhip/overloaded.hpp"
#include "bullwhip/policy.hpp"

namespace bullwhip::app {
namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> known(keys.begin(), keys.end());
    for (const auto& [key, _] : node_.items()) {
      if (!known.count(key)) fail(child(key), "unknown key");
    }
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& at(const std::string& key) const {
    if (!node_.contains(key)) fail(child(key), "missing required key");
    return node_.at(key);
  }

  Reader object(const std::string& key) const { return Reader(at(key), child(key)); }

  double number(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number()) fail(child(key), "expected a number");
    return v.get<double>();
  }
  double number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  long long integer(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) fail(child(key), "expected an integer");
    return v.get<long long>();
  }
  long long positive(const std::string& key) const {
    const auto v = integer(key);
    if (v < 1) fail(child(key), "must be >= 1");
    return v;
  }
  long long non_negative(const std::string& key) const {
    const auto v = integer(key);
    if (v < 0) fail(child(key), "must be >= 0");
    return v;
  }

  std::string string(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) fail(child(key), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_array()) fail(child(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        fail(child(key) + "[" + std::to_string(i) + "]", "expected a number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  std::vector<int> positives(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_array()) fail(child(key), "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer() || v[i].get<long long>() < 1) {
        fail(child(key) + "[" + std::to_string(i) + "]",
             "expected an integer >= 1");
      }
      out.push_back(v[i].get<int>());
    }
    return out;
  }

  std::string child(const std::string& key) const { return path_ + "." + key; }
  const std::string& path() const { return path_; }

 private:
  const json& node_;
  std::string path_;
};

DemandProcessSpec read_demand(const Reader& r) {
  const auto type = r.string("type");
  if (type == "constant") {
    r.allow({"type", "value"});
    return demand::Constant{r.number("value")};
  }
  if (type == "iid_uniform") {
    r.allow({"type", "lo", "hi"});
    return demand::IidUniform{r.number("lo"), r.number("hi")};
  }
  if (type == "iid_normal") {
    r.allow({"type", "mean", "sd"});
    return demand::IidNormal{r.number("mean"), r.number("sd")};
  }
  if (type == "ar1") {
    r.allow({"type", "mu", "rho", "sigma_eps"});
    return demand::Ar1{r.number("mu"), r.number("rho"), r.number("sigma_eps")};
  }
  if (type == "arma11") {
    r.allow({"type", "mu", "rho", "theta", "sigma_eps"});
    return demand::Arma11{r.number("mu"), r.number("rho"), r.number("theta"),
                          r.number("sigma_eps")};
  }
  Reader::fail(r.child("type"), "unknown demand type '" + type +
                                    "' (constant, iid_uniform, iid_normal, "
                                    "ar1, arma11)");
}

LeadTimeDistSpec read_lead_time(const Reader& r) {
  const auto type = r.string("type");
  if (type == "deterministic") {
    r.allow({"type", "L"});
    return lead::Deterministic{static_cast<int>(r.positive("L"))};
  }
  if (type == "discrete_uniform") {
    r.allow({"type", "a", "b"});
    return lead::DiscreteUniform{static_cast<int>(r.positive("a")),
                                 static_cast<int>(r.positive("b"))};
  }
  if (type == "categorical") {
    r.allow({"type", "p"});
    return lead::Categorical{r.numbers("p")};
  }
  Reader::fail(r.child("type"), "unknown lead-time type '" + type +
                                    "' (deterministic, discrete_uniform, "
                                    "categorical)");
}

ForecasterSpec read_forecaster(const Reader& r, const DemandProcessSpec& demand,
                               int lead_bound) {
  const auto type = r.string("type");
  if (type == "ltd_moving_average") {
    r.allow({"type", "n", "M"});
    const int bound = r.has("M") ? static_cast<int>(r.positive("M")) : lead_bound;
    return forecast::LtdMovingAverage{static_cast<int>(r.positive("n")), bound};
  }
  if (type == "product_of_mas") {
    r.allow({"type", "m", "n"});
    return forecast::ProductOfMAs{static_cast<int>(r.positive("m")),
                                  static_cast<int>(r.positive("n"))};
  }
  // MMSE parameters default to the demand process they forecast.
  double rho = 0.0;
  double theta = 0.0;
  if (const auto* a = std::get_if<demand::Ar1>(&demand)) rho = a->rho;
  if (const auto* a = std::get_if<demand::Arma11>(&demand)) {
    rho = a->rho;
    theta = a->theta;
  }
  double mean = 0.0;
  try {
    mean = demand_moments(demand).mean;
  } catch (const ConfigError&) {
  }
  if (type == "mmse_ar1") {
    r.allow({"type", "mean", "rho"});
    return forecast::MmseAr1{r.number_or("mean", mean), r.number_or("rho", rho)};
  }
  if (type == "mmse_arma") {
    r.allow({"type", "mean", "rho", "theta"});
    return forecast::MmseArma{r.number_or("mean", mean), r.number_or("rho", rho),
                              r.number_or("theta", theta)};
  }
  Reader::fail(r.child("type"), "unknown forecaster type '" + type +
                                    "' (ltd_moving_average, product_of_mas, "
                                    "mmse_ar1, mmse_arma)");
}

SigmaMode read_sigma(const Reader& r) {
  const auto mode = r.string("mode");
  SigmaMode out;
  if (mode == "constant") {
    r.allow({"mode", "value"});
    out.kind = SigmaMode::Kind::Constant;
    out.value = r.number_or("value", 0.0);
    if (!(out.value >= 0.0)) Reader::fail(r.child("value"), "must be >= 0");
    return out;
  }
  if (mode == "empirical") {
    r.allow({"mode", "window"});
    out.kind = SigmaMode::Kind::Empirical;
    out.window = r.has("window") ? static_cast<std::size_t>(r.positive("window"))
                                 : out.window;
    if (out.window < 2) Reader::fail(r.child("window"), "must be >= 2");
    return out;
  }
  Reader::fail(r.child("mode"), "unknown sigma mode '" + mode +
                                    "' (constant, empirical)");
}

EchelonConfig read_echelon(const Reader& r, const DemandProcessSpec& demand) {
  r.allow({"name", "forecaster", "lead_time", "z", "service", "sigma",
           "round_orders"});
  EchelonConfig e;
  if (r.has("name")) e.name = r.string("name");
  try {
    e.lead_time = read_lead_time(r.object("lead_time"));
    const int bound = LeadTimeDist(e.lead_time).bound();
    e.forecaster = read_forecaster(r.object("forecaster"), demand, bound);
  } catch (const ConfigError& err) {
    const std::string what = err.what();
    if (what.rfind(r.path(), 0) == 0) throw;
    throw ConfigError(r.path() + ": " + what);
  }
  if (r.has("z") && r.has("service")) {
    Reader::fail(r.child("service"), "give either z or service, not both");
  }
  if (r.has("z")) e.z = r.number("z");
  if (r.has("service")) {
    const Reader s = r.object("service");
    s.allow({"p", "h"});
    try {
      e.z = z_from_service(s.number("p"), s.number("h"));
    } catch (const ConfigError& err) {
      Reader::fail(s.path(), err.what());
    }
  }
  if (r.has("sigma")) e.sigma = read_sigma(r.object("sigma"));
  e.round_orders = r.boolean_or("round_orders", false);
  return e;
}

}  // namespace

ExperimentFile parse_experiment(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  const Reader root(doc, "config");
  root.allow({"demand", "innovation", "echelons", "periods", "warmup", "seed",
              "replications", "grid", "compare"});

  ExperimentFile file;
  auto& chain = file.chain;
  chain.demand = read_demand(root.object("demand"));
  if (root.has("innovation")) {
    const auto kind = root.string("innovation");
    if (kind == "normal") {
      chain.innovation = Innovation::Normal;
    } else if (kind == "uniform") {
      chain.innovation = Innovation::Uniform;
    } else {
      Reader::fail(root.child("innovation"), "expected 'normal' or 'uniform'");
    }
  }
  const auto& echelons = root.at("echelons");
  if (!echelons.is_array() || echelons.empty()) {
    Reader::fail(root.child("echelons"), "expected a non-empty array");
  }
  for (std::size_t i = 0; i < echelons.size(); ++i) {
    chain.echelons.push_back(read_echelon(
        Reader(echelons[i], root.child("echelons") + "[" + std::to_string(i) + "]"),
        chain.demand));
  }
  chain.periods = static_cast<std::size_t>(root.positive("periods"));
  if (root.has("warmup")) chain.warmup = static_cast<std::size_t>(root.non_negative("warmup"));
  if (root.has("seed")) chain.seed = static_cast<std::uint64_t>(root.non_negative("seed"));
  if (root.has("replications")) {
    file.replications = static_cast<std::size_t>(root.positive("replications"));
  }
  if (root.has("grid")) {
    const Reader g = root.object("grid");
    g.allow({"m", "n"});
    if (g.has("m")) file.grid.m = g.positives("m");
    if (g.has("n")) file.grid.n = g.positives("n");
  }
  if (root.has("compare")) {
    const Reader c = root.object("compare");
    c.allow({"tolerance"});
    file.compare_tolerance = c.number("tolerance");
    if (!(file.compare_tolerance > 0.0)) {
      Reader::fail(c.child("tolerance"), "must be > 0");
    }
  }

  for (const auto& cell : expand_grid(file)) validate(cell.chain);
  return file;
}

ExperimentFile load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_experiment(in);
}

std::vector<GridCell> expand_grid(const ExperimentFile& file) {
  if (file.grid.empty()) return {GridCell{std::nullopt, std::nullopt, file.chain}};

  const auto ms = file.grid.m.empty() ? std::vector<std::optional<int>>{std::nullopt}
                                      : std::vector<std::optional<int>>(
                                            file.grid.m.begin(), file.grid.m.end());
  const auto ns = file.grid.n.empty() ? std::vector<std::optional<int>>{std::nullopt}
                                      : std::vector<std::optional<int>>(
                                            file.grid.n.begin(), file.grid.n.end());
  std::vector<GridCell> cells;
  for (const auto& m : ms) {
    for (const auto& n : ns) {
      GridCell cell{m, n, file.chain};
      for (std::size_t i = 0; i < cell.chain.echelons.size(); ++i) {
        auto& f = cell.chain.echelons[i].forecaster;
        const std::string where = "config.echelons[" + std::to_string(i) + "].forecaster";
        std::visit(overloaded{
                       [&](forecast::ProductOfMAs& p) {
                         if (m) p.m = *m;
                         if (n) p.n = *n;
                       },
                       [&](forecast::LtdMovingAverage& p) {
                         if (m) {
                           throw ConfigError(
                               where + ": grid.m needs a forecaster with a "
                                       "lead-time window (product_of_mas)");
                         }
                         if (n) p.n = *n;
                       },
                       [&](auto&) {
                         throw ConfigError(where +
                                           ": MMSE forecasters have no window "
                                           "to sweep with grid");
                       },
                   },
                   f);
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace bullwhip::app
