#include "lattice/inverse_scatter.hpp"

#include "lattice/free_resolvent.hpp"
#include "lattice/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

namespace lattice {

using hp::complex;
using hp::real;

HpPotential to_hp(const Potential& v) {
  HpPotential out;
  for (const auto& [n, x] : v.entries())
    if (x != 0) out[n] = real(x);
  return out;
}

HpPotential to_hp(const RationalPotential& v) {
  HpPotential out;
  for (const auto& [n, x] : v.entries())
    if (x != 0) out[n] = hp::from_rational(x);
  return out;
}

Potential to_potential(int d, const HpPotential& v) {
  Potential p(d);
  for (const auto& [n, x] : v) p.set(n, x.convert_to<double>());
  return p;
}

// ---------------------------------------------------------------------------

std::vector<complex> zeta(const complex& z, const std::vector<double>& theta) {
  std::vector<complex> out;
  out.reserve(theta.size());
  for (double t : theta) {
    const complex w = z * real(t);
    if (w.im == 0 && boost::multiprecision::abs(w.re) >= 1)
      throw ValidationError("zeta: z theta_j lies on an arcsin cut");
    out.push_back(hp::asin(w) * real(2));
  }
  return out;
}

namespace {

// (s -+ i w)^2 = e^{-+2i arcsin w}, s = cos(arcsin w) = principal sqrt(1 - w^2).
std::vector<complex> phase(const complex& z, const std::vector<double>& theta, int sign) {
  std::vector<complex> out;
  out.reserve(theta.size());
  for (double t : theta) {
    const complex w = z * real(t);
    if (w.im == 0 && boost::multiprecision::abs(w.re) >= 1)
      throw ValidationError("zeta: z theta_j lies on an arcsin cut");
    const complex s = hp::sqrt(complex(real(1)) - w * w);
    const complex iw(-w.im, w.re);
    const complex f = sign < 0 ? s - iw : s + iw;
    out.push_back(f * f);
  }
  return out;
}

complex lattice_phase(const std::vector<complex>& e, const LatticePoint& n) {
  complex r(real(1));
  for (int j = 0; j < n.dim(); ++j)
    if (n[j]) r *= hp::pow(e[j], n[j]);
  return r;
}

std::string key_of(const real& x) { return hp::to_string(x, 40); }

}  // namespace

std::vector<complex> phase_minus(const complex& z, const std::vector<double>& theta) { return phase(z, theta, -1); }
std::vector<complex> phase_plus(const complex& z, const std::vector<double>& theta) { return phase(z, theta, +1); }

// ---------------------------------------------------------------------------

ForwardModel::ForwardModel(int d, int digits) : d_(d), digits_(digits) {
  if (d < 1) throw ValidationError("dimension must be >= 1");
  if (digits < 16) throw ValidationError("precision must be at least 16 digits");
}

const complex& ForwardModel::r0(const LatticePoint& k, const complex& w) const {
  const LatticePoint c = k.canonical();
  auto& table = cache_[{key_of(w.re), key_of(w.im)}];
  if (auto it = table.find(c); it != table.end()) return it->second;

  const double aw = hp::abs(w).convert_to<double>();
  if (!(aw > 2 * d_)) throw ValidationError("forward model: |z^2| must exceed 2d for the series");
  const int l1 = c.l1_norm();
  // Tail after S terms is at most (d/|w|)^{S+1} / (|w| - d); the leading term is >= 4^{-|k|} |w|^{-1-|k|}.
  const double target = (digits_ + 8) * std::log(10.0) + l1 * std::log(4.0) + (1 + l1) * std::log(aw);
  int S = l1;
  while ((S + 1) * std::log(aw / d_) + std::log(aw - d_) < target) ++S;

  auto& g = coeff_[c];
  if (static_cast<int>(g.size()) <= S) {
    const auto exact = cs_exact_series(c, S);
    g.clear();
    for (const auto& q : exact) g.push_back(hp::from_rational(q));
  }
  const complex inv = complex(real(1)) / w;
  complex pw = hp::pow(inv, l1 + 1), sum;
  for (int s = l1; s <= S; ++s) {
    if (g[s] != 0) sum += pw * g[s];
    pw *= inv;
  }
  return table.emplace(c, sum).first->second;
}

ForwardModel::Result ForwardModel::evaluate(const HpPotential& v, const complex& z, const std::vector<double>& theta,
                                            const std::vector<double>& theta_p,
                                            const std::vector<LatticePoint>& grad_sites) const {
  hp::Precision guard(digits_);
  if (static_cast<int>(theta.size()) != d_ || static_cast<int>(theta_p.size()) != d_)
    throw ValidationError("forward model: angle dimension mismatch");
  std::set<LatticePoint> us(grad_sites.begin(), grad_sites.end());
  for (const auto& [n, x] : v)
    if (x != 0) us.insert(n);
  Result res;
  res.gradient.assign(grad_sites.size(), complex());
  if (us.empty()) return res;
  const std::vector<LatticePoint> u(us.begin(), us.end());
  const auto n = static_cast<Eigen::Index>(u.size());

  const auto em = phase_minus(z, theta), ep = phase_plus(z, theta_p);
  const complex w = z * z;
  std::vector<real> vd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto it = v.find(u[i]);
    vd[i] = it == v.end() ? real(0) : it->second;
  }
  // Real embedding of I + G V.
  hp::Matrix e = hp::Matrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const complex& g = r0(u[i] - u[j], w);
      const real re = g.re * vd[j] + (i == j ? real(1) : real(0)), im = g.im * vd[j];
      e(i, j) = re;
      e(i, n + j) = -im;
      e(n + i, j) = im;
      e(n + i, n + j) = re;
    }
  hp::Matrix rhs(2 * n, 2);
  std::vector<complex> a(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a[i] = lattice_phase(em, u[i]);
    const complex b = lattice_phase(ep, u[i]);
    rhs(i, 0) = b.re;
    rhs(n + i, 0) = b.im;
    rhs(i, 1) = a[i].re;
    rhs(n + i, 1) = a[i].im;
  }
  Eigen::ColPivHouseholderQR<hp::Matrix> qr(e);
  if (qr.rank() < 2 * n) throw NumericalError("forward model: I + R0 V is singular");
  const hp::Matrix sol = qr.solve(rhs);
  for (Eigen::Index i = 0; i < n; ++i)
    if (vd[i] != 0) res.value += a[i] * complex(sol(i, 0), sol(n + i, 0)) * vd[i];
  for (std::size_t k = 0; k < grad_sites.size(); ++k) {
    const auto i = std::lower_bound(u.begin(), u.end(), grad_sites[k]) - u.begin();
    res.gradient[k] = complex(sol(i, 1), sol(n + i, 1)) * complex(sol(i, 0), sol(n + i, 0));
  }
  return res;
}

complex synth_forward_B(const HpPotential& v, int d, const complex& z, const std::vector<double>& theta,
                        const std::vector<double>& theta_p, int digits) {
  hp::Precision guard(digits);
  ForwardModel model(d, digits);
  return model.evaluate(v, z, theta, theta_p).value;
}

complex synth_forward_B(const Potential& v, cplx z, const std::vector<double>& theta,
                        const std::vector<double>& theta_p, int digits) {
  hp::Precision guard(digits);
  return synth_forward_B(to_hp(v), v.dim(), complex(z), theta, theta_p, digits);
}

// ---------------------------------------------------------------------------

AnglePair angle_pair_for(const std::vector<double>& t) {
  const int d = static_cast<int>(t.size());
  if (d < 1) throw ValidationError("empty t");
  for (double x : t)
    if (!(x < 0)) throw ValidationError("t_j must be negative");
  AnglePair out;
  if (d == 1) {
    if (std::abs(t[0] + 1) > 1e-15) throw ValidationError("d = 1 only admits t = -1");
    out.theta = {1.0};
    out.theta_prime = {-1.0};
    out.t = {-1.0};
    return out;
  }
  double A = 0;
  for (int j = 0; j + 1 < d; ++j) A -= t[j];
  const double a = -t[d - 1];
  if (!(A + a < 1 - 1e-12)) throw ValidationError("infeasible t: sum |t_j| must be < 1");
  // theta_j^2 = |t_j| x_j, theta'_j^2 = |t_j| / x_j with x_j = alpha (j < d), beta (j = d):
  // alpha A + beta a = 1 and A / alpha + a / beta = 1.
  const double bq = a * a - A * A - 1, disc = bq * bq - 4 * A * A;
  const double alpha = 2 * A / (-bq + std::sqrt(std::max(0.0, disc)));  // smaller root, stable form
  const double beta = (1 - alpha * A) / a;
  out.theta.resize(d);
  out.theta_prime.resize(d);
  out.t.resize(d);
  for (int j = 0; j < d; ++j) {
    const double x = j + 1 < d ? alpha : beta;
    out.theta[j] = std::sqrt(-t[j] * x);
    out.theta_prime[j] = -std::sqrt(-t[j] / x);
  }
  double s = 0, sp = 0;
  for (int j = 0; j < d; ++j) {
    s += out.theta[j] * out.theta[j];
    sp += out.theta_prime[j] * out.theta_prime[j];
  }
  for (int j = 0; j < d; ++j) {
    out.theta[j] /= std::sqrt(s);
    out.theta_prime[j] /= std::sqrt(sp);
    out.t[j] = out.theta[j] * out.theta_prime[j];
  }
  return out;
}

std::vector<AnglePair> design_samples(int d, const SampleDesign& design) {
  if (d == 1) return {angle_pair_for({-1.0})};
  if (design.per_axis < 1 || !(design.t_min > 0) || !(design.t_max >= design.t_min))
    throw ValidationError("invalid sample design");
  std::vector<double> axis(design.per_axis);
  for (int i = 0; i < design.per_axis; ++i)
    axis[i] = design.per_axis == 1
                  ? design.t_min
                  : design.t_min * std::pow(design.t_max / design.t_min, double(i) / (design.per_axis - 1));
  std::vector<AnglePair> out;
  std::vector<int> idx(d, 0);
  while (true) {
    std::vector<double> t(d);
    double sum = 0;
    for (int j = 0; j < d; ++j) {
      t[j] = -axis[idx[j]];
      sum += axis[idx[j]];
    }
    if (sum < 1 - 1e-12) out.push_back(angle_pair_for(t));
    int j = 0;
    while (j < d && ++idx[j] == design.per_axis) idx[j++] = 0;
    if (j == d) break;
  }
  return out;
}

std::vector<LatticePoint> layer_sites(int d, int m, int p) {
  std::vector<LatticePoint> out;
  for (const auto& n : box_points(d, m))
    if (n.coord_sum() == p) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------------------

complex fit_leading(const std::vector<double>& ladder, const std::vector<complex>& g, int order,
                    double* relative_residual) {
  const auto rows = static_cast<Eigen::Index>(ladder.size());
  if (rows != static_cast<Eigen::Index>(g.size())) throw ValidationError("fit: size mismatch");
  const int cols = std::min<int>(order + 1, static_cast<int>(rows));
  hp::Matrix a(rows, cols);
  hp::Vector re(rows), im(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const real inv = real(1) / real(ladder[i]);
    real pw = 1;
    for (int k = 0; k < cols; ++k) {
      a(i, k) = pw;
      pw *= inv;
    }
    re(i) = g[i].re;
    im(i) = g[i].im;
  }
  Eigen::ColPivHouseholderQR<hp::Matrix> qr(a);
  const hp::Vector cr = qr.solve(re), ci = qr.solve(im);
  const complex c0(cr(0), ci(0));
  if (relative_residual) {
    const real res = boost::multiprecision::sqrt(((a * cr - re).squaredNorm() + (a * ci - im).squaredNorm()) / rows);
    *relative_residual = real(res / boost::multiprecision::max(real(1), hp::abs(c0))).convert_to<double>();
  }
  return c0;
}

HpPotential solve_layer_monomials(int d, int m, int p, const std::vector<AnglePair>& samples,
                                  const std::vector<complex>& c, double* condition, double* residual) {
  const auto sites = layer_sites(d, m, p);
  HpPotential out;
  if (sites.empty()) return out;
  if (samples.size() != c.size()) throw ValidationError("layer solve: size mismatch");
  if (samples.size() < sites.size())
    throw NumericalError("layer " + std::to_string(p) + ": fewer samples than unknowns, request more samples");
  hp::Matrix a(samples.size(), sites.size());
  hp::Vector b(samples.size());
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t k = 0; k < sites.size(); ++k) {
      real mono = 1;
      for (int j = 0; j < d; ++j) {
        const real t = real(samples[s].theta[j]) * real(samples[s].theta_prime[j]);
        mono *= boost::multiprecision::pow(t, 2 * sites[k][j]);
      }
      a(s, k) = mono;
    }
    b(s) = c[s].re;
  }
  const auto ls = hp::least_squares(a, b);
  if (condition) *condition = ls.condition;
  if (residual) *residual = ls.residual;
  for (std::size_t k = 0; k < sites.size(); ++k) out[sites[k]] = ls.x(k);
  return out;
}

LayerFit layer_extract(const ReconstructionState& state, const BEvaluator& b, const std::vector<AnglePair>& samples,
                       const ReconstructionConfig& config) {
  hp::Precision guard(state.digits);
  LayerFit fit;
  fit.p = state.p;
  fit.samples = static_cast<int>(samples.size());
  if (layer_sites(state.d, state.m, state.p).empty()) return fit;
  ForwardModel model(state.d, state.digits);
  std::vector<complex> c;
  c.reserve(samples.size());
  for (const auto& s : samples) {
    std::vector<complex> g;
    for (double N : config.ladder) {
      const complex z(real(N), real(1));
      const complex known = model.evaluate(state.recovered, z, s.theta, s.theta_prime).value;
      const real scale = boost::multiprecision::pow(real(2 * N), 4 * state.p);
      g.push_back((b(z, s.theta, s.theta_prime) - known) * (real(1) / scale));
    }
    double r = 0;
    c.push_back(fit_leading(config.ladder, g, config.fit_order, &r));
    fit.fit_residual = std::max(fit.fit_residual, r);
    fit.max_imag = std::max(fit.max_imag, boost::multiprecision::abs(c.back().im).convert_to<double>());
  }
  fit.values = solve_layer_monomials(state.d, state.m, state.p, samples, c, &fit.condition, &fit.solve_residual);
  if (!(fit.condition <= config.condition_limit))
    throw NumericalError("layer " + std::to_string(state.p) + ": monomial system ill-conditioned (" +
                         std::to_string(fit.condition) + "), request more samples");
  fit.fit_ok = fit.fit_residual <= config.fit_tolerance;
  return fit;
}

// ---------------------------------------------------------------------------

namespace {

using SampleKey = std::tuple<double, double, std::vector<double>, std::vector<double>>;

SampleKey make_key(const complex& z, const std::vector<double>& th, const std::vector<double>& thp) {
  return {z.re.convert_to<double>(), z.im.convert_to<double>(), th, thp};
}

// Gauss-Newton on the sites with S(n) >= p against all (sample, N) data, rows weighted by 1/|B|.
RefineReport refine_layers(int d, int m, int p, HpPotential& v, const std::vector<AnglePair>& samples,
                           const ReconstructionConfig& config, const BEvaluator& b) {
  std::vector<LatticePoint> sites;
  for (const auto& n : box_points(d, m))
    if (n.coord_sum() >= p) sites.push_back(n);
  ForwardModel model(d, config.digits);
  struct Row {
    complex z;
    const AnglePair* s;
    complex data;
    real w;
  };
  std::vector<Row> rows;
  const real floor = boost::multiprecision::pow(real(10), -2 * config.digits);
  for (const auto& s : samples)
    for (double N : config.ladder) {
      const complex z(real(N), real(1));
      const complex data = b(z, s.theta, s.theta_prime);
      rows.push_back({z, &s, data, real(1) / boost::multiprecision::max(hp::abs(data), floor)});
    }
  const real stop = boost::multiprecision::pow(real(10), -(config.digits - 12));
  // Weighted residual norm and optionally the Jacobian at the current values.
  auto assemble = [&](const HpPotential& cur, hp::Matrix* jac, hp::Vector* rhs) {
    real sq = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto ev = model.evaluate(cur, rows[r].z, rows[r].s->theta, rows[r].s->theta_prime,
                                     jac ? sites : std::vector<LatticePoint>{});
      const complex res = (ev.value - rows[r].data) * rows[r].w;
      sq += hp::norm(res);
      if (!jac) continue;
      (*rhs)(2 * r) = -res.re;
      (*rhs)(2 * r + 1) = -res.im;
      for (std::size_t k = 0; k < sites.size(); ++k) {
        (*jac)(2 * r, k) = ev.gradient[k].re * rows[r].w;
        (*jac)(2 * r + 1, k) = ev.gradient[k].im * rows[r].w;
      }
    }
    return real(boost::multiprecision::sqrt(sq / rows.size()));
  };
  RefineReport rep;
  for (int it = 0; it < config.refine_iterations; ++it) {
    hp::Matrix jac(2 * rows.size(), sites.size());
    hp::Vector rhs(2 * rows.size());
    const real current = assemble(v, &jac, &rhs);
    rep.weighted_residual = current.convert_to<double>();
    const auto ls = hp::least_squares(jac, rhs);
    // Step halving keeps the iteration in the nearly linear regime.
    real scale = 1;
    HpPotential trial;
    bool accepted = false;
    for (int h = 0; h < 30 && !accepted; ++h, scale /= 2) {
      trial = v;
      for (std::size_t k = 0; k < sites.size(); ++k) trial[sites[k]] += scale * ls.x(k);
      try {
        const real next = assemble(trial, nullptr, nullptr);
        accepted = next < current || current == 0;
        if (accepted) rep.weighted_residual = next.convert_to<double>();
      } catch (const NumericalError&) {
      }
    }
    rep.iterations = it + 1;
    if (!accepted) break;
    real step = 0, size = 1;
    for (std::size_t k = 0; k < sites.size(); ++k) {
      step = boost::multiprecision::max(step, boost::multiprecision::abs(trial[sites[k]] - v[sites[k]]));
      size = boost::multiprecision::max(size, boost::multiprecision::abs(trial[sites[k]]));
    }
    v = std::move(trial);
    rep.last_step = step.convert_to<double>();
    if (step <= stop * size) break;
  }
  return rep;
}

}  // namespace

ReconstructionResult reconstruct(const BEvaluator& b, int d, int m, const ReconstructionConfig& config) {
  if (d < 1 || m < 0) throw ValidationError("reconstruct: need d >= 1 and M >= 0");
  if (config.digits < 30) throw ValidationError("reconstruct: precision must be at least 30 digits");
  if (config.ladder.empty()) throw ValidationError("reconstruct: empty N-ladder");
  for (double N : config.ladder)
    if (!(N * N > 2 * d + 1)) throw ValidationError("reconstruct: ladder values must satisfy |z_N^2| > 2d");
  hp::Precision guard(config.digits);
  const auto samples = config.samples.empty() ? design_samples(d, config.design) : config.samples;

  // Data are fetched once per (z, theta, theta').
  auto memo = std::make_shared<std::map<SampleKey, complex>>();
  BEvaluator cached = [memo, &b](const complex& z, const std::vector<double>& th, const std::vector<double>& thp) {
    const auto key = make_key(z, th, thp);
    auto it = memo->find(key);
    if (it == memo->end()) it = memo->emplace(key, b(z, th, thp)).first;
    return it->second;
  };

  ReconstructionResult out;
  ReconstructionState state{d, m, d * m, {}, config.digits};
  try {
    for (int p = d * m; p >= -d * m; --p) {
      state.p = p;
      LayerFit fit = layer_extract(state, cached, samples, config);
      // Under refinement a layer whose 1/N fit failed starts from zero instead of the unreliable estimate.
      for (const auto& [n, x] : fit.values) state.recovered[n] = config.refine && !fit.fit_ok ? real(0) : x;
      out.layers.push_back(fit);
      if (config.refine) {
        out.refinements.push_back(refine_layers(d, m, p, state.recovered, samples, config, cached));
      } else if (!fit.fit_ok) {
        throw NumericalError("layer " + std::to_string(p) + ": fit residual " + std::to_string(fit.fit_residual) +
                             " above tolerance");
      }
    }
    out.complete = true;
  } catch (const NumericalError& e) {
    out.failure = e.what();
  }
  out.values = state.recovered;
  out.potential = to_potential(d, state.recovered);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

real json_real(const nlohmann::json& j) {
  if (j.is_string()) return hp::parse_real(j.get<std::string>());
  if (j.is_number()) return real(j.get<double>());
  throw ValidationError("expected a number or a decimal string");
}

complex json_complex(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw ValidationError(std::string(what) + " must be [re, im]");
  return {json_real(j[0]), json_real(j[1])};
}

std::vector<double> json_angles(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ValidationError(std::string(what) + " must be a non-empty array");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw ValidationError(std::string(what) + " entries must be numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

std::vector<ComplexAngleData> read_angle_data(const std::string& path, int digits) {
  hp::Precision guard(digits);
  std::istringstream in(read_file(path));
  std::vector<ComplexAngleData> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      for (const char* key : {"z", "theta", "theta_prime", "B"})
        if (!j.contains(key)) throw ValidationError(std::string("missing field ") + key);
      ComplexAngleData r{json_complex(j["z"], "z"), json_angles(j["theta"], "theta"),
                         json_angles(j["theta_prime"], "theta_prime"), json_complex(j["B"], "B")};
      if (r.theta.size() != r.theta_prime.size()) throw ValidationError("theta and theta_prime differ in length");
      for (std::size_t k = 0; k < r.theta.size(); ++k)
        if (!(r.theta[k] > 0) || !(r.theta_prime[k] < 0))
          throw ValidationError("theta must be positive and theta_prime negative componentwise");
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

void write_angle_data(const std::string& path, const std::vector<ComplexAngleData>& data, int digits) {
  std::string text;
  for (const auto& r : data) {
    nlohmann::json j;
    j["z"] = {hp::to_string(r.z.re, digits), hp::to_string(r.z.im, digits)};
    j["theta"] = r.theta;
    j["theta_prime"] = r.theta_prime;
    j["B"] = {hp::to_string(r.value.re, digits), hp::to_string(r.value.im, digits)};
    text += j.dump() + "\n";
  }
  atomic_write(path, text);
}

AngleDataTable::AngleDataTable(std::vector<ComplexAngleData> data) : data_(std::move(data)) {
  if (data_.empty()) throw ValidationError("empty data table");
  for (const auto& r : data_)
    if (r.theta.size() != data_[0].theta.size()) throw ValidationError("data table mixes dimensions");
}

int AngleDataTable::dim() const { return static_cast<int>(data_[0].theta.size()); }

BEvaluator AngleDataTable::evaluator() const {
  auto index = std::make_shared<std::map<SampleKey, complex>>();
  for (const auto& r : data_) index->emplace(make_key(r.z, r.theta, r.theta_prime), r.value);
  return [index](const complex& z, const std::vector<double>& th, const std::vector<double>& thp) {
    auto it = index->find(make_key(z, th, thp));
    if (it == index->end())
      throw ValidationError("data table has no record for z = " + hp::to_string(z.re, 17) + " + " +
                            hp::to_string(z.im, 17) + "i at the requested angles");
    return it->second;
  };
}

std::vector<double> AngleDataTable::ladder() const {
  std::set<double> n;
  for (const auto& r : data_) {
    if (r.z.im != 1) throw ValidationError("data table: z must be of the form N + i");
    n.insert(r.z.re.convert_to<double>());
  }
  return {n.begin(), n.end()};
}

std::vector<AnglePair> AngleDataTable::samples() const {
  std::set<std::pair<std::vector<double>, std::vector<double>>> seen;
  std::vector<AnglePair> out;
  for (const auto& r : data_)
    if (seen.insert({r.theta, r.theta_prime}).second) {
      AnglePair a{r.theta, r.theta_prime, {}};
      for (std::size_t j = 0; j < r.theta.size(); ++j) a.t.push_back(r.theta[j] * r.theta_prime[j]);
      out.push_back(std::move(a));
    }
  return out;
}

std::vector<ComplexAngleData> synthesize_table(const HpPotential& v, int d, const ReconstructionConfig& config) {
  hp::Precision guard(config.digits);
  const auto samples = config.samples.empty() ? design_samples(d, config.design) : config.samples;
  ForwardModel model(d, config.digits);
  std::vector<ComplexAngleData> out;
  for (const auto& s : samples)
    for (double N : config.ladder) {
      const complex z(real(N), real(1));
      out.push_back({z, s.theta, s.theta_prime, model.evaluate(v, z, s.theta, s.theta_prime).value});
    }
  return out;
}

BEvaluator with_relative_noise(BEvaluator b, double eta, std::uint64_t seed) {
  return [b = std::move(b), eta, seed](const complex& z, const std::vector<double>& th, const std::vector<double>& thp) {
    // Noise depends only on (seed, z, angles), not on the call order.
    std::string bytes(reinterpret_cast<const char*>(&seed), sizeof seed);
    auto put = [&](double x) { bytes.append(reinterpret_cast<const char*>(&x), sizeof x); };
    put(z.re.convert_to<double>());
    put(z.im.convert_to<double>());
    for (double x : th) put(x);
    for (double x : thp) put(x);
    std::mt19937_64 rng(fnv1a64(bytes));
    std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(2.0));
    const double gr = g(rng), gi = g(rng);
    const complex noise(real(eta * gr), real(eta * gi));
    return b(z, th, thp) * (complex(real(1)) + noise);
  };
}

}  // namespace lattice
