#include "smallgaps/serialize.hpp"

#include <cstdio>

namespace smallgaps {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const Tuple& t) {
  Json elements = Json::array();
  for (auto e : t.elements()) elements.push_back(e);
  return elements;
}

Json to_json(const Tuple& t, const SingularSeriesValue& v) {
  return Json{{"elements", to_json(t)},
              {"value", v.value},
              {"tail_error_bound", v.tail_error_bound},
              {"admissible", v.admissible},
              {"cutoff_prime", v.cutoff_prime}};
}

Json to_json(const WeightParams& p) {
  return Json{{"R", p.R},         {"k", p.k},       {"ell", p.ell},
              {"delta", p.delta}, {"N", p.N},       {"nu", p.nu},
              {"theta", p.theta_level}, {"eps", p.eps}, {"h", p.h}};
}

Json to_json(const MomentReport& r) {
  Json j{{"kind", to_string(r.kind)},
         {"empirical", r.empirical},
         {"predicted_main_term", r.predicted_main_term},
         {"ratio", r.ratio},
         {"singular_series", r.singular_series},
         {"tuple_info", r.tuple_info},
         {"params", to_json(r.params)}};
  if (r.within_bound) j["within_bound"] = *r.within_bound;
  if (r.in_regime) j["in_regime"] = *r.in_regime;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const GapDistribution& g) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < g.eta_grid.size(); ++i) {
    rows.push_back(Json{{"eta", g.eta_grid[i]},
                        {"count", g.counts[i]},
                        {"P", g.fraction(i)},
                        {"poisson", poisson_model(g.eta_grid[i])}});
  }
  return Json{{"x", g.x}, {"nu", g.nu}, {"pi_x", g.pi_x}, {"rows", rows}};
}

Json to_json(const ThresholdReport& r) {
  Json j{{"feasible", r.feasible},
         {"theta0", fraction_string(r.theta0)},
         {"nu", r.nu},
         {"eps", fraction_string(r.eps)},
         {"delta", fraction_string(r.delta)}};
  if (r.feasible) {
    j["k"] = r.k;
    j["ell"] = r.ell;
    j["m"] = r.m;
    j["factor"] = fraction_string(r.factor);
    j["factor_value"] = to_double(r.factor);
    j["m_positive"] = r.m_positive;
    j["h_threshold_coeff"] = fraction_string(r.h_threshold_coeff);
    j["h_threshold_coeff_value"] = to_double(r.h_threshold_coeff);
  }
  return j;
}

Json to_json(const GallagherResult& r) {
  Json j{{"mode", r.mode == EnumerationMode::exhaustive ? "exhaustive" : "sampled"},
         {"sum", r.sum},
         {"predicted", r.predicted},
         {"ratio", r.ratio},
         {"admissible_count", r.admissible_count},
         {"inspected", r.inspected}};
  if (r.mode == EnumerationMode::sampled) j["std_error"] = r.std_error;
  return j;
}

Json to_json(const EnumerationHeader& h) {
  Json j{{"mode", h.mode == EnumerationMode::exhaustive ? "exhaustive" : "sampled"},
         {"k", h.k},
         {"h_floor", h.h_floor},
         {"total_subsets", h.total_subsets}};
  if (h.mode == EnumerationMode::sampled) {
    j["samples"] = h.samples;
    j["seed"] = h.seed;
  }
  return j;
}

void write_csv(std::ostream& out, const GapDistribution& g) {
  out << "eta,count,P,poisson\n";
  for (std::size_t i = 0; i < g.eta_grid.size(); ++i)
    out << format_double(g.eta_grid[i]) << ',' << g.counts[i] << ',' << format_double(g.fraction(i)) << ','
        << format_double(poisson_model(g.eta_grid[i])) << '\n';
}

}  // namespace smallgaps
