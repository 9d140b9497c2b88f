#include <cmath>
#include <sstream>

#include "diskspec/cli.hpp"
#include "diskspec/grunsky.hpp"
#include "diskspec/identity_lab.hpp"
#include "diskspec/map_catalog.hpp"
#include "diskspec/spectra.hpp"

namespace diskspec::cli {

namespace {

using json = nlohmann::ordered_json;

const std::string& get(const Parameters& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw DomainError("missing parameter --" + key);
  return it->second;
}

double get_double(const Parameters& p, const std::string& key) {
  const std::string& s = get(p, key);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw DomainError("--" + key + ": expected a number, got '" + s + "'");
  return v;
}

int get_int(const Parameters& p, const std::string& key) {
  const double v = get_double(p, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw DomainError("--" + key + ": expected an integer");
  return static_cast<int>(v);
}

Complex get_complex(const Parameters& p, const std::string& key) {
  double re = 0, im = 0;
  if (!parse_complex(get(p, key), re, im)) throw DomainError("--" + key + ": expected a complex number");
  return {re, im};
}

std::vector<double> get_list(const Parameters& p, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(get(p, key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    Parameters one{{key, item}};
    out.push_back(get_double(one, key));
  }
  if (out.empty()) throw DomainError("--" + key + ": empty list");
  return out;
}

json cjson(Complex c) { return complex_json(c.real(), c.imag()); }

void flag_unconverged(CommandOutput& out, bool converged, const std::string& what) {
  if (!converged) out.flags.push_back("unconverged: " + what);
}

CommandOutput cmd_catalog(const Parameters&) {
  CommandOutput out;
  out.table.header = {"name", "spec", "class", "bounded", "sup_norm", "sup_norm_empirical", "becker_sup",
                      "becker_tail", "becker_valid"};
  json maps = json::array();
  for (const auto& name : catalog_names()) {
    const UnivalentMap m = catalog_get(name);
    json e;
    e["name"] = name;
    e["spec"] = m.spec();
    e["class"] = to_string(m.map_class());
    e["bounded"] = m.is_bounded();
    e["sup_norm"] = m.is_bounded() ? json(m.sup_norm()) : json(nullptr);
    e["sup_norm_empirical"] = m.sup_norm_empirical();
    std::vector<std::string> row{name, m.spec(), to_string(m.map_class()), m.is_bounded() ? "1" : "0",
                                 m.is_bounded() ? num(m.sup_norm()) : "inf", m.sup_norm_empirical() ? "1" : "0"};
    if (m.certificate()) {
      const auto& c = *m.certificate();
      e["certificate"] = {{"sup_value", c.sup_value}, {"tail_bound", c.tail_bound}, {"grid_size", c.grid_size},
                          {"valid", c.valid()}};
      row.insert(row.end(), {num(c.sup_value), num(c.tail_bound), c.valid() ? "1" : "0"});
    } else {
      row.insert(row.end(), {"", "", ""});
    }
    maps.push_back(e);
    out.table.rows.push_back(row);
  }
  out.results["maps"] = maps;
  return out;
}

CommandOutput cmd_means(const Parameters& p) {
  const UnivalentMap map = parse_map_spec(get(p, "map"));
  const Complex tau = get_complex(p, "tau");
  const MeansProfile prof = means_profile(map, tau, get_int(p, "kmin"), get_int(p, "kmax"));
  CommandOutput out;
  out.table.header = {"k", "r", "M", "error_estimate"};
  json rows = json::array();
  for (std::size_t i = 0; i < prof.levels.size(); ++i) {
    out.table.rows.push_back({std::to_string(prof.levels[i]), num(prof.radii[i]), num(prof.means[i]), num(prof.errors[i])});
    rows.push_back({{"k", prof.levels[i]}, {"r", prof.radii[i]}, {"M", prof.means[i]}, {"error_estimate", prof.errors[i]}});
  }
  out.results["map"] = map.spec();
  out.results["tau"] = cjson(tau);
  out.results["means"] = rows;
  out.results["converged"] = prof.converged;
  flag_unconverged(out, prof.converged, "integral means");
  return out;
}

CommandOutput cmd_spectrum(const Parameters& p) {
  const UnivalentMap map = parse_map_spec(get(p, "map"));
  const Complex tau = get_complex(p, "tau");
  const int lo = get_int(p, "klo"), hi = get_int(p, "khi");
  if (lo < 6 || hi > 20 || hi <= lo) throw DomainError("spectrum: k range must lie in [6, 20]");
  const MeansProfile prof = means_profile(map, tau, lo, hi);
  const SpectrumEstimate est = spectrum_from_profile(prof);
  CommandOutput out;
  out.table.header = {"k", "r", "log_M"};
  for (std::size_t i = 0; i < prof.levels.size(); ++i)
    out.table.rows.push_back({std::to_string(prof.levels[i]), num(prof.radii[i]), num(std::log(prof.means[i]))});
  out.results = {{"map", map.spec()},          {"tau", cjson(tau)},
                 {"beta_hat", est.beta_hat},   {"raw_slope", est.raw_slope},
                 {"stderr", est.stderr_slope}, {"levels_used", est.levels_used},
                 {"residual_norm", est.residual_norm}, {"converged", est.converged}};
  flag_unconverged(out, est.converged, "integral means");
  return out;
}

json ladder_json(const LadderReport& r) {
  json j;
  j["growth_exponent"] = r.growth_exponent;
  j["verdict"] = to_string(r.verdict);
  j["limit"] = r.limit ? json(*r.limit) : json(nullptr);
  j["cumulative"] = r.cumulative;
  j["converged"] = r.converged;
  return j;
}

CommandOutput cmd_bergman(const Parameters& p) {
  const UnivalentMap map = parse_map_spec(get(p, "map"));
  const Complex tau = get_complex(p, "tau");
  const double alpha = get_double(p, "alpha");
  const LadderReport rep = bergman_probe(map, tau, alpha, get_int(p, "kmax"));
  CommandOutput out;
  out.table.header = {"k", "R", "cumulative"};
  for (std::size_t i = 0; i < rep.levels.size(); ++i)
    out.table.rows.push_back({std::to_string(rep.levels[i]), num(rep.radii[i]), num(rep.cumulative[i])});
  out.results = ladder_json(rep);
  out.results["map"] = map.spec();
  out.results["tau"] = cjson(tau);
  out.results["alpha"] = alpha;
  flag_unconverged(out, rep.converged, "ladder circle means");
  return out;
}

CommandOutput identity_output(const IdentityReport& rep) {
  CommandOutput out;
  out.table.header = {"index", "z_re", "z_im", "zeta_re", "zeta_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "flagged"};
  std::size_t n_flagged = 0;
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    const auto [z, zeta] = rep.points[i];
    out.table.rows.push_back({std::to_string(i), num(z.real()), num(z.imag()), num(zeta.real()), num(zeta.imag()),
                              num(rep.lhs[i].real()), num(rep.lhs[i].imag()), num(rep.rhs[i].real()),
                              num(rep.rhs[i].imag()), num(rep.residuals[i]), rep.flagged[i] ? "1" : "0"});
    if (rep.flagged[i]) {
      ++n_flagged;
      out.flags.push_back("branch ambiguity at point " + std::to_string(i));
    }
  }
  out.results["identity"] = rep.identity_id;
  out.results["points"] = rep.points.size();
  out.results["max_residual"] = rep.max_residual;
  out.results["flagged"] = n_flagged;
  out.results["converged"] = rep.converged;
  if (rep.growth_slope) out.results["growth_slope"] = *rep.growth_slope;
  flag_unconverged(out, rep.converged, "identity quadrature");
  return out;
}

CommandOutput cmd_verify(const Parameters& p) {
  const std::string which = get(p, "identity");
  if (which == "prop31" || which == "prop32" || which == "kernels") {
    const auto pairs = random_pairs(get_int(p, "pairs"), get_double(p, "max-radius"),
                                    static_cast<std::uint64_t>(get_int(p, "seed")));
    if (which == "kernels") {
      CommandOutput out;
      out.table.header = {"index", "z_re", "z_im", "zeta_re", "zeta_im", "kernel_log_diff", "kernel_log_plus_diff"};
      double m1 = 0, m2 = 0;
      std::vector<KernelCheck> a(pairs.size()), b(pairs.size());
      parallel_for(pairs.size(), [&](std::size_t i) {
        a[i] = kernel_log(pairs[i].first, pairs[i].second);
        b[i] = kernel_log_plus(pairs[i].first, pairs[i].second);
      });
      bool conv = true;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [z, zeta] = pairs[i];
        m1 = std::max(m1, a[i].difference);
        m2 = std::max(m2, b[i].difference);
        conv = conv && a[i].detail.converged && b[i].detail.converged;
        out.table.rows.push_back({std::to_string(i), num(z.real()), num(z.imag()), num(zeta.real()), num(zeta.imag()),
                                  num(a[i].difference), num(b[i].difference)});
      }
      out.results = {{"identity", "kernels"}, {"points", pairs.size()}, {"kernel_log_max_difference", m1},
                     {"kernel_log_plus_max_difference", m2}, {"converged", conv}};
      flag_unconverged(out, conv, "kernel quadrature");
      return out;
    }
    const UnivalentMap map = parse_map_spec(get(p, "map"));
    CommandOutput out = identity_output(which == "prop31" ? verify_prop31(map, pairs) : verify_prop32(map, pairs));
    out.results["map"] = map.spec();
    return out;
  }
  const UnivalentMap map = parse_map_spec(get(p, "map"));
  if (which == "special") {
    std::vector<Complex> zs;
    for (int k = get_int(p, "kmin"); k <= get_int(p, "kmax"); ++k) zs.emplace_back(1.0 - std::ldexp(1.0, -k), 0.0);
    CommandOutput out = identity_output(verify_special(map, zs));
    out.results["map"] = map.spec();
    return out;
  }
  if (which == "lemma33") {
    const Lemma33Report rep = lemma33_sup(map, get_int(p, "density"), get_int(p, "refinements"));
    CommandOutput out;
    out.table.header = {"angles", "sup"};
    for (std::size_t i = 0; i < rep.densities.size(); ++i)
      out.table.rows.push_back({std::to_string(rep.densities[i]), num(rep.refinement_history[i])});
    out.results = {{"identity", "lemma33"},
                   {"map", map.spec()},
                   {"sup_estimate", rep.sup_estimate},
                   {"grid_points", rep.grid_points},
                   {"argmax_z", cjson(rep.argmax.first)},
                   {"argmax_zeta", cjson(rep.argmax.second)},
                   {"refinement_history", rep.refinement_history},
                   {"all_finite", rep.all_finite}};
    if (!rep.all_finite) out.flags.push_back("non-finite regular-part bracket on the grid");
    return out;
  }
  if (which == "reproducing") {
    const Complex zeta = get_complex(p, "zeta");
    std::optional<double> cluster;
    if (!map.singular_angles().empty()) cluster = map.singular_angles().front();
    const auto [area, line] = reproducing_check([&](Complex w) { return map.deriv(w); }, zeta, cluster);
    CommandOutput out;
    out.table.header = {"zeta_re", "zeta_im", "area_re", "area_im", "line_re", "line_im"};
    out.table.rows.push_back({num(zeta.real()), num(zeta.imag()), num(area.real()), num(area.imag()), num(line.real()),
                              num(line.imag())});
    out.results = {{"identity", "reproducing"}, {"map", map.spec()}, {"zeta", cjson(zeta)}, {"area", cjson(area)},
                   {"line", cjson(line)}, {"difference", std::abs(area - line)}, {"phi_zeta", cjson(map.eval(zeta))}};
    return out;
  }
  throw DomainError("verify: unknown identity '" + which + "'");
}

CommandOutput cmd_grunsky(const Parameters& p) {
  const UnivalentMap map = parse_map_spec(get(p, "map"));
  const int N = get_int(p, "N");
  const std::string rho_s = get(p, "rho");
  const GrunskyMatrix g = rho_s == "auto" ? extract_grunsky(map, N) : extract_grunsky(map, N, get_double(p, "rho"));
  const GrunskyNorm norm = grunsky_norm(g);
  CommandOutput out;
  out.table.header = {"row", "col", "re", "im"};
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      out.table.rows.push_back({std::to_string(i + 1), std::to_string(j + 1), num(g.c(i, j).real()), num(g.c(i, j).imag())});
  out.results = {{"map", map.spec()},
                 {"N", N},
                 {"sample_radius", g.sample_radius},
                 {"second_radius", g.second_radius},
                 {"coefficient_error_bound", g.coefficient_error_bound},
                 {"norm", norm.value},
                 {"iterations", norm.iterations},
                 {"converged", norm.converged}};
  if (!norm.converged) out.flags.push_back("power iteration did not converge");
  const int action_n = get_int(p, "action-n");
  if (action_n >= 0) {
    const ActionCrosscheck a = grunsky_action_crosscheck(map, action_n, {0.0, 0.3, Complex(-0.2, 0.25)});
    json rows = json::array();
    for (std::size_t i = 0; i < a.z_list.size(); ++i)
      rows.push_back({{"z", cjson(a.z_list[i])}, {"quadrature", cjson(a.quadrature[i])}, {"matrix_model", cjson(a.matrix_model[i])}});
    out.results["action"] = {{"n", action_n}, {"points", rows}, {"max_discrepancy", a.max_discrepancy}};
    flag_unconverged(out, a.converged, "action quadrature");
  }
  return out;
}

CommandOutput cmd_mz(const Parameters& p) {
  const UnivalentMap map = parse_map_spec(get(p, "map"));
  const double kappa = get_double(p, "kappa");
  const MZProfile prof = mz_exp_scan(map, kappa, get_list(p, "gamma"), get_int(p, "kmax"), get_int(p, "angles"));
  CommandOutput out;
  out.table.header = {"gamma", "k", "R", "cumulative"};
  json ladders = json::array();
  for (std::size_t g = 0; g < prof.gamma_grid.size(); ++g) {
    const auto& l = prof.ladders[g];
    for (std::size_t i = 0; i < l.levels.size(); ++i)
      out.table.rows.push_back({num(prof.gamma_grid[g]), std::to_string(l.levels[i]), num(l.radii[i]), num(l.cumulative[i])});
    json j = ladder_json(l);
    j["gamma"] = prof.gamma_grid[g];
    ladders.push_back(j);
  }
  out.results = {{"map", map.spec()}, {"kappa", kappa}, {"ladders", ladders},
                 {"last_finite_gamma", prof.last_finite ? json(*prof.last_finite) : json(nullptr)},
                 {"first_divergent_gamma", prof.first_divergent ? json(*prof.first_divergent) : json(nullptr)},
                 {"converged", prof.converged}};
  flag_unconverged(out, prof.converged, "J_kappa quadrature");
  return out;
}

CommandOutput cmd_jm_scan(const Parameters& p) {
  const UnivalentMap map = parse_map_spec(get(p, "map"));
  const JMScanResult res = jm_scan(map, default_tau_grid(), get_int(p, "klo"), get_int(p, "khi"));
  CommandOutput out;
  out.table.header = {"tau_re", "tau_im", "abs_tau", "arg_tau", "beta_measured", "raw_slope", "trivial_envelope", "C_empirical"};
  json entries = json::array();
  for (const auto& e : res.entries) {
    out.table.rows.push_back({num(e.tau.real()), num(e.tau.imag()), num(std::abs(e.tau)), num(std::arg(e.tau)),
                              num(e.beta_measured), num(e.raw_slope), num(1.0 - e.tau.real()), num(e.c_empirical)});
    entries.push_back({{"tau", cjson(e.tau)}, {"beta_measured", e.beta_measured}, {"raw_slope", e.raw_slope},
                       {"C_empirical", e.c_empirical}});
  }
  out.results = {{"map", map.spec()}, {"k_lo", res.k_lo}, {"k_hi", res.k_hi}, {"entries", entries},
                 {"sup_C_empirical", res.sup_c_empirical}, {"converged", res.converged}};
  flag_unconverged(out, res.converged, "integral means");
  return out;
}

CommandOutput cmd_gamma(const Parameters& p) {
  std::vector<int> ks;
  for (int k = get_int(p, "kmin"); k <= get_int(p, "kmax"); ++k) ks.push_back(k);
  const GammaAsymptotic g = gamma_kernel_asymptotic(get_double(p, "theta"), ks);
  CommandOutput out;
  out.table.header = {"k", "integral", "log_term", "ratio"};
  for (std::size_t i = 0; i < g.levels.size(); ++i)
    out.table.rows.push_back({std::to_string(g.levels[i]), num(g.integrals[i]), num(g.log_terms[i]), num(g.ratios[i])});
  out.results = {{"theta", g.theta}, {"target", g.target}, {"extrapolated", g.extrapolated},
                 {"extrapolated_relative_error", std::abs(g.extrapolated / g.target - 1.0)},
                 {"last_ratio", g.ratios.back()}, {"converged", g.converged}};
  flag_unconverged(out, g.converged, "Gamma-kernel quadrature");
  return out;
}

CommandOutput cmd_combinators(const Parameters& p) {
  const double bb = get_double(p, "bb");
  const double t = get_double(p, "t");
  const Complex tau = get_complex(p, "tau");
  CommandOutput out;
  const double mk = makarov_combinator(bb, t);
  const double bd = binder_combinator(bb, tau);
  out.table.header = {"combinator", "value"};
  out.table.rows = {{"makarov", num(mk)}, {"binder", num(bd)}};
  out.results = {{"B_b", bb}, {"t", t}, {"tau", cjson(tau)}, {"makarov", mk}, {"binder", bd}};
  return out;
}

}  // namespace

CommandOutput dispatch(const std::string& command, const Parameters& params) {
  if (command == "catalog") return cmd_catalog(params);
  if (command == "means") return cmd_means(params);
  if (command == "spectrum") return cmd_spectrum(params);
  if (command == "bergman") return cmd_bergman(params);
  if (command == "verify") return cmd_verify(params);
  if (command == "grunsky") return cmd_grunsky(params);
  if (command == "mz") return cmd_mz(params);
  if (command == "jm-scan") return cmd_jm_scan(params);
  if (command == "gamma-asymptotic") return cmd_gamma(params);
  if (command == "combinators") return cmd_combinators(params);
  throw DomainError("unknown command '" + command + "'");
}

}  // namespace diskspec::cli
