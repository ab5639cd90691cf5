#include "cli.hpp"

#include "lattice/finite_rank.hpp"
#include "lattice/free_resolvent.hpp"
#include "lattice/inverse_scatter.hpp"
#include "lattice/io.hpp"
#include "lattice/scattering.hpp"
#include "lattice/spectral_shift.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

namespace lattice::cli {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

std::string rational_str(const Rational& q) { return q.str(); }

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  std::string hash;

  json header() const {
    return {{"command", cfg.command}, {"version", library_version()}, {"config_hash", hash}, {"seed", cfg.seed}};
  }
  void emit(const std::string& path, const std::string& text) const {
    if (path.empty())
      out << text;
    else
      atomic_write(path, text);
  }
  void emit_json(const json& j) const { emit(cfg.output, j.dump(2) + "\n"); }
};

Potential require_potential(const RunConfig& c) {
  if (c.input.empty()) throw ValidationError(c.command + ": --input potential file is required");
  return load_potential(c.input);
}

Convention convention_or(const RunConfig& c, Convention fallback) {
  return c.convention ? convention_from_string(*c.convention) : fallback;
}

std::vector<double> energies(const RunConfig& c) {
  std::vector<double> out = c.lambdas;
  if (!c.lambda_grid.empty()) {
    double a, b;
    int n;
    char s1, s2;
    std::istringstream in(c.lambda_grid);
    if (!(in >> a >> s1 >> b >> s2 >> n) || s1 != ':' || s2 != ':' || n < 1 || !(b >= a))
      throw ValidationError("--lambda-grid must be a:b:n with a <= b and n >= 1");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  }
  if (out.empty()) throw ValidationError(c.command + ": give --lambda or --lambda-grid");
  return out;
}

double single_energy(const RunConfig& c) {
  const auto e = energies(c);
  if (e.size() != 1) throw ValidationError(c.command + ": expects a single energy");
  return e[0];
}

// ---------------------------------------------------------------------------

void cmd_resolvent(const Context& ctx) {
  const auto& c = ctx.cfg;
  if (c.dim < 1) throw ValidationError("resolvent: --dim is required");
  std::vector<int> off = c.offset.empty() ? std::vector<int>(c.dim, 0) : c.offset;
  if (static_cast<int>(off.size()) != c.dim) throw ValidationError("resolvent: --offset length must equal --dim");
  const LatticePoint k(off);
  const Convention conv = convention_or(c, Convention::standard);
  const double l = single_energy(c);
  EnergyPoint e;
  if (c.side == "off")
    e = EnergyPoint::off_axis(cplx(l, c.lambda_im), conv);
  else if (c.side == "plus" || c.side == "minus")
    e = c.side == "plus" ? EnergyPoint::plus(l, conv) : EnergyPoint::minus(l, conv);
  else
    throw ValidationError("resolvent: --side must be off, plus or minus");
  if (e.side != Side::off_axis && c.lambda_im != 0) throw ValidationError("resolvent: --lambda-im needs --side off");
  e.validate(c.dim);
  const cplx ls = e.standard(c.dim);
  const int sign = e.side == Side::minus ? -1 : 1;
  cplx v;
  double err = 0;
  if (c.method == "auto") {
    v = r0(k, e);
  } else if (c.method == "series") {
    const auto r = r0_series_detailed(k, ls);
    v = r.value;
    err = r.tail_bound;
  } else if (c.method == "quadrature") {
    const auto r = r0_quadrature(k, e, c.grid > 0 ? c.grid : 256);
    v = r.value;
    err = r.error;
  } else if (c.method == "closed_form") {
    if (c.dim != 1) throw ValidationError("resolvent: closed_form needs --dim 1");
    v = e.side == Side::off_axis ? r0_1d(off[0], ls) : r0_1d_boundary(off[0], ls.real(), sign);
  } else if (c.method == "boundary") {
    if (e.side == Side::off_axis) throw ValidationError("resolvent: boundary needs --side plus or minus");
    const auto r = r0_boundary_extrapolated(k, ls.real(), sign);
    v = r.value;
    err = r.residual;
  } else if (c.method == "nested") {
    if (e.side != Side::off_axis) throw ValidationError("resolvent: nested needs --side off");
    v = r0_nested(k, ls);
  } else {
    throw ValidationError("resolvent: unknown --method " + c.method);
  }
  if (ends_with(c.output, ".csv")) {
    std::ostringstream os;
    os.precision(17);
    os << "# command=resolvent version=" << library_version() << " config_hash=" << ctx.hash << " seed=" << c.seed
       << " side=" << c.side << " convention=" << to_string(conv) << "\n";
    os << "k,re_z,im_z,re_r0,im_r0,method,error_estimate\n";
    std::string ks;
    for (std::size_t i = 0; i < off.size(); ++i) ks += (i ? " " : "") + std::to_string(off[i]);
    os << ks << "," << e.lambda.real() << "," << e.lambda.imag() << "," << v.real() << "," << v.imag() << ","
       << c.method << "," << err << "\n";
    ctx.emit(c.output, os.str());
    return;
  }
  json j = ctx.header();
  j["dim"] = c.dim;
  j["offset"] = off;
  j["lambda"] = cjson(e.lambda);
  j["side"] = c.side;
  j["convention"] = to_string(conv);
  j["method"] = c.method;
  j["r0"] = cjson(v);
  j["error_estimate"] = err;
  ctx.emit_json(j);
}

json eigen_json(const EigenvalueRecord& r) {
  return {{"lambda", r.lambda},
          {"multiplicity", r.multiplicity},
          {"side", r.side == BandSide::above ? "above" : "below"},
          {"det_abs", r.det_abs},
          {"singular_count", r.singular_count},
          {"cluster_flag", r.cluster_flag}};
}

void cmd_spectrum(const Context& ctx) {
  const auto& c = ctx.cfg;
  const Potential v = require_potential(c);
  const Convention conv = convention_or(c, Convention::standard);
  json j = ctx.header();
  j["convention"] = to_string(conv);
  j["eigenvalues"] = json::array();
  j["unresolved"] = json::array();
  bool roots_ok = true, clusters = false;
  if (!v.empty()) {
    const auto s = find_discrete_eigenvalues(v, conv);
    for (const auto& r : s.eigenvalues) {
      j["eigenvalues"].push_back(eigen_json(r));
      roots_ok = roots_ok && r.det_abs <= 1e-9;
      clusters = clusters || r.cluster_flag;
    }
    for (const auto& [side, n] : s.unresolved)
      j["unresolved"].push_back({{"side", side == BandSide::above ? "above" : "below"}, {"count", n}});
  }
  j["checks"] = {{"determinant_roots", roots_ok}, {"cluster_flags", clusters}};
  if (c.oracle_l > 0) {
    const auto o = truncated_diagonalization_oracle(v, c.oracle_l, conv);
    j["oracle"] = {{"L", c.oracle_l},
                   {"eigenvalues", o.eigenvalues},
                   {"eigenvalues_2L", o.eigenvalues_2l},
                   {"convergence", o.convergence}};
  }
  ctx.emit_json(j);
}

void cmd_ssf(const Context& ctx) {
  const auto& c = ctx.cfg;
  const Potential v = require_potential(c);
  const Convention conv = convention_or(c, Convention::standard);
  auto grid = energies(c);
  std::sort(grid.begin(), grid.end());
  const auto prof = ssf_profile(v, grid, conv);
  if (ends_with(c.output, ".csv")) {
    std::ostringstream os;
    os.precision(17);
    os << "# command=ssf version=" << library_version() << " config_hash=" << ctx.hash << " seed=" << c.seed
       << " convention=" << to_string(conv) << "\n";
    os << "lambda,xi\n";
    for (std::size_t i = 0; i < prof.grid.size(); ++i) os << prof.grid[i] << "," << prof.xi[i] << "\n";
    ctx.emit(c.output, os.str());
    return;
  }
  json j = ctx.header();
  j["convention"] = to_string(conv);
  j["branch_anchor"] = prof.branch_anchor;
  j["lambda"] = prof.grid;
  j["xi"] = prof.xi;
  ctx.emit_json(j);
}

void cmd_moments(const Context& ctx) {
  const auto& c = ctx.cfg;
  const Convention conv = convention_or(c, Convention::centered);
  if (conv != Convention::centered)
    throw ValidationError("moments: the trace formulas are stated in the centered convention (band [-d/2, d/2]); "
                          "rerun with --convention centered");
  if (c.nmax < 1 || c.nmax > 5) throw ValidationError("moments: --nmax must be in 1..5");
  const Potential v = require_potential(c);
  const RationalPotential rv = RationalPotential::from_potential(v);
  const auto closed = closed_form_moments(rv, conv);
  const auto walk = walk_trace_moments(rv, c.nmax, conv);
  const auto rep = moment_identity(v, c.nmax, conv);
  json j = ctx.header();
  j["convention"] = to_string(conv);
  j["f_closed"] = json::array();
  j["f_walk"] = json::array();
  bool exact = true;
  for (int n = 0; n < c.nmax; ++n) {
    j["f_closed"].push_back(rational_str(closed[n]));
    j["f_walk"].push_back(rational_str(walk[n]));
    exact = exact && closed[n] == walk[n];
  }
  j["closed_equals_walk"] = exact;
  j["e_n"] = rep.e_n;
  j["corrected_sum"] = rep.corrected_sum;
  j["corrected_residual"] = rep.corrected_residual;
  j["literal_sum"] = rep.literal_sum;
  j["literal_residual"] = rep.literal_residual;
  j["xi_integral"] = rep.xi_integral;
  j["band_integral_error"] = rep.band_integral_error;
  json terms = json::array();
  for (const auto& t : rep.eigen_side_terms)
    terms.push_back({{"lambda", t.lambda}, {"multiplicity", t.multiplicity}, {"edge", t.edge}});
  j["eigenvalues"] = terms;
  ctx.emit_json(j);
}

void cmd_smatrix(const Context& ctx) {
  const auto& c = ctx.cfg;
  const Potential v = require_potential(c);
  const int d = v.dim();
  const Convention conv = convention_or(c, Convention::standard);
  const double l = single_energy(c) - convention_shift(conv, d);
  const int n = c.grid > 0 ? c.grid : default_grid_size(d);
  const auto grid = make_surface_grid(d, l, n);
  const auto panel = s_matrix(v, l, grid, c.allow_partial_chart);
  const cplx formula = det_s(v, l);
  const double xi = ssf(v, l, Convention::standard);
  if (!c.smat.empty()) write_smat(c.smat, panel);
  json j = ctx.header();
  j["lambda"] = l + convention_shift(conv, d);
  j["lambda_standard"] = l;
  j["grid"] = n;
  j["nodes"] = panel.grid.nodes.size();
  j["coverage"] = panel.grid.coverage;
  j["defect"] = panel.defect;
  j["detS"] = cjson(formula);
  // det S = e^{-2 pi i xi} fixes xi modulo 1; reported in (-1/2, 1/2].
  j["xi_from_detS"] = -std::arg(formula) / (2 * kPi);
  j["det_nystrom"] = cjson(panel.det_s);
  j["xi"] = xi;
  j["exp_minus_2pi_i_xi"] = cjson(std::exp(cplx(0, -2 * kPi * xi)));
  ctx.emit_json(j);
}

json layer_json(const LayerFit& f, const HpPotential* planted) {
  json vals = json::array();
  double err = 0;
  for (const auto& [n, x] : f.values) {
    vals.push_back({{"n", n.coords()}, {"v", x.convert_to<double>()}});
    if (planted) {
      auto it = planted->find(n);
      const hp::real t = it == planted->end() ? hp::real(0) : it->second;
      err = std::max(err, boost::multiprecision::abs(x - t).convert_to<double>());
    }
  }
  json j = {{"p", f.p},
            {"samples", f.samples},
            {"condition", f.condition},
            {"fit_residual", f.fit_residual},
            {"fit_ok", f.fit_ok},
            {"max_imag", f.max_imag},
            {"solve_residual", f.solve_residual},
            {"values", vals}};
  if (planted) j["asymptotic_error"] = err;
  return j;
}

int cmd_reconstruct(const Context& ctx) {
  const auto& c = ctx.cfg;
  if (c.digits < 30) throw ValidationError("reconstruct: --digits must be at least 30");
  hp::Precision guard(c.digits);
  ReconstructionConfig rc;
  rc.digits = c.digits;
  rc.refine = c.refine;
  rc.design.per_axis = c.per_axis;
  if (!c.ladder.empty()) rc.ladder = c.ladder;
  int d = 0, m = c.support_bound;
  BEvaluator b;
  std::optional<HpPotential> planted;
  std::shared_ptr<ForwardModel> model;
  std::shared_ptr<AngleDataTable> table;
  if (!c.data.empty()) {
    if (!c.input.empty()) throw ValidationError("reconstruct: give either --input or --data, not both");
    if (m < 0) throw ValidationError("reconstruct: --support-bound is required with --data");
    table = std::make_shared<AngleDataTable>(read_angle_data(c.data, c.digits));
    d = table->dim();
    rc.ladder = table->ladder();
    rc.samples = table->samples();
    b = table->evaluator();
  } else {
    const Potential v = require_potential(c);
    d = v.dim();
    if (m < 0) m = v.max_abs_coord();
    if (v.max_abs_coord() > m) throw ValidationError("reconstruct: potential exceeds --support-bound");
    planted = to_hp(RationalPotential::from_potential(v));
    model = std::make_shared<ForwardModel>(d, c.digits);
    b = [model, p = *planted](const hp::complex& z, const std::vector<double>& th, const std::vector<double>& thp) {
      return model->evaluate(p, z, th, thp).value;
    };
  }
  if (c.noise > 0) b = with_relative_noise(b, c.noise, c.seed);
  const auto res = reconstruct(b, d, m, rc);

  Potential outp(d);
  for (const auto& [n, x] : res.values) outp.set(n, x.convert_to<double>());
  if (!c.output.empty()) atomic_write(c.output, potential_to_json(outp));

  json j = ctx.header();
  j["dim"] = d;
  j["support_bound"] = m;
  j["digits"] = c.digits;
  j["ladder"] = rc.ladder;
  j["refine"] = c.refine;
  j["noise"] = c.noise;
  j["complete"] = res.complete;
  j["failure"] = res.failure;
  j["layers"] = json::array();
  for (const auto& f : res.layers) j["layers"].push_back(layer_json(f, planted ? &*planted : nullptr));
  j["refinements"] = json::array();
  for (const auto& r : res.refinements)
    j["refinements"].push_back(
        {{"iterations", r.iterations}, {"weighted_residual", r.weighted_residual}, {"last_step", r.last_step}});
  json vals = json::array();
  double max_err = 0;
  for (const auto& [n, x] : res.values) {
    json e = {{"n", n.coords()}, {"v", hp::to_string(x, 20)}};
    if (planted) {
      auto it = planted->find(n);
      const double err = boost::multiprecision::abs(x - (it == planted->end() ? hp::real(0) : it->second))
                             .convert_to<double>();
      e["error"] = err;
      max_err = std::max(max_err, err);
    }
    vals.push_back(e);
  }
  j["values"] = vals;
  if (planted) j["max_error"] = max_err;
  const std::string text = j.dump(2) + "\n";
  if (!c.diagnostics.empty())
    atomic_write(c.diagnostics, text);
  else
    ctx.out << text;
  return res.complete ? kOk : kNumerical;
}

// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool pass = true;
  std::string note;
};

int cmd_verify(const Context& ctx) {
  const auto& c = ctx.cfg;
  const Potential v = require_potential(c);
  const int d = v.dim();
  std::vector<Check> checks;
  auto guarded = [&](const std::string& name, double tol, const std::function<double()>& f) {
    Check ch{name, 0, tol, true, ""};
    try {
      ch.residual = f();
      ch.pass = ch.residual <= tol;
    } catch (const std::exception& e) {
      ch.pass = false;
      ch.residual = INFINITY;
      ch.note = e.what();
    }
    checks.push_back(ch);
  };

  guarded("trace_moments_exact", 0, [&] {
    const auto rv = RationalPotential::from_potential(v);
    const auto a = closed_form_moments(rv, Convention::centered);
    const auto b = walk_trace_moments(rv, 5, Convention::centered);
    double worst = 0;
    for (int n = 0; n < 5; ++n)
      if (a[n] != b[n]) worst = std::max(worst, std::abs(Rational(a[n] - b[n]).convert_to<double>()));
    return worst;
  });

  guarded("resolvent_series_vs_quadrature", 1e-10, [&] {
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0;
    for (int s = 0; s < 4; ++s) {
      std::vector<int> k(d);
      for (auto& x : k) x = static_cast<int>(rng() % 5) - 2;
      const double r = 2 * d + 0.5 + 2 * u(rng), phi = 2 * kPi * u(rng);
      const cplx z = std::polar(r, phi);
      const cplx a = r0_series(LatticePoint(k), z);
      const cplx b = r0_quadrature(LatticePoint(k), EnergyPoint::off_axis(z)).value;
      worst = std::max(worst, std::abs(a - b));
    }
    return worst;
  });

  std::vector<EigenvalueRecord> eig;
  if (!v.empty()) {
    guarded("eigenvalue_search", 0, [&] {
      eig = find_discrete_eigenvalues(v, Convention::standard).eigenvalues;
      double flags = 0;
      for (const auto& r : eig) flags += r.cluster_flag ? 1 : 0;
      return flags;
    });
    for (const auto& r : eig)
      guarded("ssf_jump_at_" + std::to_string(r.lambda), 1e-6,
              [&] { return std::abs(ssf_jump_check(v, r, Convention::standard) + r.multiplicity); });
  }

  guarded("moment_identity_corrected", 1e-4, [&] {
    MomentOptions mo;
    mo.band_integral = false;
    const auto rep = moment_identity(v, 5, Convention::centered, mo);
    double worst = 0;
    for (double x : rep.corrected_residual) worst = std::max(worst, x);
    return worst;
  });

  for (int k = 0; k < d; ++k) {
    const double l = k + 0.37;
    guarded("det_s_vs_ssf_at_" + std::to_string(l), c.tolerance, [&] {
      const double xi = ssf(v, l, Convention::standard);
      return std::abs(det_s(v, l) - std::exp(cplx(0, -2 * kPi * xi)));
    });
  }

  if (d <= 2) {
    const double l = d == 1 ? 0.37 : 0.5;
    guarded("smatrix_unitarity", 1e-8, [&] {
      const auto panel = s_matrix(v, l, make_surface_grid(d, l, 64));
      return panel.defect;
    });
    guarded("smatrix_det_vs_formula", c.tolerance, [&] {
      const auto panel = s_matrix(v, l, make_surface_grid(d, l, 64));
      return std::abs(panel.det_s - det_s(v, l));
    });
  }

  bool all = true;
  json arr = json::array();
  for (const auto& ch : checks) {
    all = all && ch.pass;
    json e = {{"name", ch.name}, {"residual", ch.residual}, {"tolerance", ch.tolerance}, {"pass", ch.pass}};
    if (!std::isfinite(ch.residual)) e["residual"] = nullptr;
    if (!ch.note.empty()) e["note"] = ch.note;
    arr.push_back(e);
  }
  json j = ctx.header();
  j["checks"] = arr;
  j["all_pass"] = all;
  ctx.emit_json(j);
  return all ? kOk : kNumerical;
}

}  // namespace

std::string config_json(const RunConfig& c) {
  json j = {{"command", c.command},
            {"input", c.input},
            {"convention", c.convention ? *c.convention : ""},
            {"lambdas", c.lambdas},
            {"lambda_grid", c.lambda_grid},
            {"lambda_im", c.lambda_im},
            {"side", c.side},
            {"grid", c.grid},
            {"digits", c.digits},
            {"tolerance", c.tolerance},
            {"seed", c.seed},
            {"dim", c.dim},
            {"offset", c.offset},
            {"method", c.method},
            {"nmax", c.nmax},
            {"oracle_l", c.oracle_l},
            {"support_bound", c.support_bound},
            {"ladder", c.ladder},
            {"per_axis", c.per_axis},
            {"refine", c.refine},
            {"noise", c.noise},
            {"data", c.data},
            {"allow_partial_chart", c.allow_partial_chart}};
  return j.dump();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral and scattering numerics for lattice Schroedinger operators", "latspec"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(library_version()));
  RunConfig c;
  std::string convention;
  auto common = [&](CLI::App* s) {
    s->add_option("--input", c.input, "Potential file (JSON)");
    s->add_option("--output", c.output, "Report path (stdout when omitted)");
    s->add_option("--convention", convention, "standard | centered");
    s->add_option("--lambda", c.lambdas, "Energy (repeatable)");
    s->add_option("--lambda-grid", c.lambda_grid, "a:b:n");
    s->add_option("--grid", c.grid, "Grid size");
    s->add_option("--digits", c.digits, "Decimal digits for high-precision work");
    s->add_option("--tolerance", c.tolerance, "Tolerance")->check(CLI::PositiveNumber);
    s->add_option("--seed", c.seed, "Seed for randomized sampling");
  };
  auto* res = app.add_subcommand("resolvent", "Free resolvent kernel r0(k, lambda)");
  common(res);
  res->add_option("--dim", c.dim)->required();
  res->add_option("--offset", c.offset)->delimiter(',');
  res->add_option("--lambda-im", c.lambda_im);
  res->add_option("--side", c.side, "off | plus | minus");
  res->add_option("--method", c.method, "auto | series | quadrature | closed_form | boundary | nested");
  auto* spec = app.add_subcommand("spectrum", "Discrete eigenvalues");
  common(spec);
  spec->add_option("--oracle", c.oracle_l, "Also run the truncated-box oracle with this L");
  auto* ssfc = app.add_subcommand("ssf", "Spectral shift function on a grid (CSV when --output ends in .csv)");
  common(ssfc);
  auto* mom = app.add_subcommand("moments", "Trace moments and the moment identity (centered convention)");
  common(mom);
  mom->add_option("--nmax", c.nmax);
  auto* smc = app.add_subcommand("smatrix", "On-shell S-matrix panel");
  common(smc);
  smc->add_option("--smat", c.smat, "Binary dump of S");
  smc->add_flag("--allow-partial-chart", c.allow_partial_chart);
  auto* rec = app.add_subcommand("reconstruct", "Potential from complex-energy scattering data");
  common(rec);
  rec->add_option("--data", c.data, "JSON-lines data table");
  rec->add_option("--support-bound", c.support_bound, "M with supp V in [-M, M]^d");
  rec->add_option("--ladder", c.ladder, "N values")->delimiter(',');
  rec->add_option("--per-axis", c.per_axis);
  rec->add_option("--noise", c.noise, "Relative noise injected into the data");
  rec->add_option("--diagnostics", c.diagnostics, "Diagnostics JSON path");
  bool no_refine = false;
  rec->add_flag("--no-refine", no_refine, "Layer recursion only");
  auto* ver = app.add_subcommand("verify", "Invariant suite");
  common(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (!convention.empty()) c.convention = convention;
  c.refine = !no_refine;

  try {
    std::string input_bytes;
    if (!c.input.empty()) input_bytes = read_file(c.input);
    if (!c.data.empty()) input_bytes += read_file(c.data);
    Context ctx{c, out, hex64(fnv1a64(config_json(c) + input_bytes))};
    if (c.command == "resolvent") cmd_resolvent(ctx);
    else if (c.command == "spectrum") cmd_spectrum(ctx);
    else if (c.command == "ssf") cmd_ssf(ctx);
    else if (c.command == "moments") cmd_moments(ctx);
    else if (c.command == "smatrix") cmd_smatrix(ctx);
    else if (c.command == "reconstruct") return cmd_reconstruct(ctx);
    else if (c.command == "verify") return cmd_verify(ctx);
    return kOk;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const ResourceError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"latspec"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lattice::cli
