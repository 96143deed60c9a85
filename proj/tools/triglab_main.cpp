// triglab: batch driver for the synthesis laboratory.
//
// Subcommands: synth, indicator, steppoly, pqpair, decompose, menshov,
// density-demo, verify, run. Every job writes its artifacts (coefficient
// files, certificates, reports, CSV metrics) plus a manifest entry, and
// `verify` re-checks any output directory from the files alone.
//
// Exit codes: 0 success, 1 contract failure (failing clause named),
// 2 configuration errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "triglab/constructors.hpp"
#include "triglab/decompose.hpp"
#include "triglab/density.hpp"
#include "triglab/io.hpp"
#include "triglab/kernels.hpp"
#include "triglab/maximal.hpp"
#include "triglab/special_product.hpp"
#include "triglab/synth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace triglab;

namespace {

struct GlobalOpts {
  std::string out = "out";
  bool strict = false;
  std::int64_t grid = 4096;
  std::uint64_t seed = 1;
};

json cert_to_json(const Certificate& c) {
  json j;
  j["subject"] = c.subject;
  j["grid"] = c.grid_size;
  j["slack"] = c.slack;
  j["pass"] = c.pass();
  json clauses = json::array();
  for (const auto& cl : c.clauses) {
    json e;
    e["name"] = cl.name;
    e["bound"] = cl.bound;
    e["measured"] = cl.measured;
    e["pass"] = cl.pass;
    e["note"] = cl.note;
    clauses.push_back(e);
  }
  j["clauses"] = clauses;
  return j;
}

// exit 1 on failed clause (or over-consumption in strict mode), naming it
int finish_job(const GlobalOpts& g, const Certificate& cert) {
  for (const auto& cl : cert.clauses) {
    if (!cl.pass) {
      std::cout << "FAIL clause " << cl.name << ": measured "
                << io::format_double(cl.measured) << " vs bound "
                << io::format_double(cl.bound) << "\n";
      return 1;
    }
    if (g.strict && cl.bound > 0 && cl.measured / cl.bound > 0.5) {
      std::cout << "FAIL (strict) clause " << cl.name << ": consumed "
                << io::format_double(cl.measured / cl.bound) << " of its bound\n";
      return 1;
    }
  }
  std::cout << "pass (" << cert.clauses.size() << " clauses)\n";
  return 0;
}

class Manifest {
 public:
  explicit Manifest(const std::string& dir) : dir_(dir) {
    fs::create_directories(dir);
    fs::path p = fs::path(dir) / "manifest.json";
    if (fs::exists(p)) {
      doc_ = json::parse(io::read_file(p.string()));
    } else {
      doc_["format"] = "triglab-manifest-v1";
      doc_["jobs"] = json::array();
    }
  }
  void add_job(const std::string& name, const std::string& kind, json params,
               json artifacts) {
    json j;
    j["name"] = name;
    j["kind"] = kind;
    j["params"] = std::move(params);
    j["artifacts"] = std::move(artifacts);
    // replace a same-named job if present
    auto& jobs = doc_["jobs"];
    for (auto& e : jobs)
      if (e["name"] == name) {
        e = j;
        save();
        return;
      }
    jobs.push_back(j);
    save();
  }
  const json& doc() const { return doc_; }

 private:
  void save() { io::write_file((fs::path(dir_) / "manifest.json").string(), doc_.dump(2) + "\n"); }
  std::string dir_;
  json doc_;
};

std::string job_dir(const GlobalOpts& g, const std::string& name) {
  fs::path p = fs::path(g.out) / name;
  fs::create_directories(p);
  return p.string();
}

void write_report(const std::string& dir, const json& report) {
  io::write_file((fs::path(dir) / "report.json").string(), report.dump(2) + "\n");
}

// ---------------------------------------------------------------- synth ---

struct SynthArgs {
  std::string name = "synth";
  std::string kind = "analytic";
  double epsilon = 0.5;
  double gamma = 0.5;
  double delta = 0.5;
  double c_target = 4.0;
  double rho_tol = 0.0, coeff_cap = 0.0;  // expert overrides
  std::int64_t budget = 4096;
};

int run_synth(const GlobalOpts& g, const SynthArgs& a, Manifest& mf) {
  synth::FlatContract con;
  synth::SynthOptions opt;
  opt.degree_budget = a.budget;
  opt.seed = g.seed;
  if (a.kind == "analytic") {
    if (!(a.epsilon > 0.0 && a.epsilon < 2.0))
      fail(ErrorCode::InvalidEpsilon, "epsilon must be in (0,2)");
    con.kind = synth::SpectrumKind::Analytic;
    con.rho_tol = a.rho_tol > 0 ? a.rho_tol : a.epsilon;
    con.coeff_cap = a.coeff_cap > 0 ? a.coeff_cap : a.epsilon;
  } else if (a.kind == "bilateral") {
    con.kind = synth::SpectrumKind::Bilateral;
    con.rho_tol = a.delta;
    con.coeff_cap = a.delta;
    con.gamma = a.gamma;
    con.c_target = a.c_target;
  } else {
    fail(ErrorCode::InvalidParams, "kind must be analytic or bilateral");
  }
  auto r = synth::synthesize_flat(con, opt);
  std::string dir = job_dir(g, a.name);

  json rep;
  rep["job"] = a.name;
  rep["kind"] = "synth-" + a.kind;
  json params;
  params["epsilon"] = a.epsilon;
  params["gamma"] = a.gamma;
  params["delta"] = a.delta;
  params["c_target"] = a.c_target;
  params["rho_tol"] = con.rho_tol;
  params["coeff_cap"] = con.coeff_cap;
  params["budget"] = a.budget;
  params["seed"] = g.seed;
  rep["resolved_params"] = params;
  rep["success"] = r.success;
  rep["largest_degree_tried"] = r.largest_degree_tried;
  rep["iterations"] = r.iterations;
  rep["kernels"] = kernels::active().name;
  if (!r.success) {
    rep["failure"] = r.failure_reason;
    write_report(dir, rep);
    mf.add_job(a.name, "synth-" + a.kind, params, {{"report", "report.json"}});
    std::cout << "FAIL synthesis: " << r.failure_reason << "\n";
    return 1;
  }
  rep["coefficients"] = r.h.term_count();
  rep["certificate"] = cert_to_json(r.cert);
  io::write_file((fs::path(dir) / "h.coeffs").string(), io::coeffs_to_text(r.h));
  io::write_file((fs::path(dir) / "certificate.txt").string(), r.cert.to_text());
  write_report(dir, rep);
  json arts;
  arts["coeffs"] = "h.coeffs";
  arts["certificate"] = "certificate.txt";
  arts["report"] = "report.json";
  mf.add_job(a.name, "synth-" + a.kind, params, arts);
  return finish_job(g, r.cert);
}

int verify_synth(const std::string& dir, const json& job) {
  const auto& p = job["params"];
  synth::FlatContract con;
  std::string kind = job["kind"];
  con.kind = kind == "synth-analytic" ? synth::SpectrumKind::Analytic
                                      : synth::SpectrumKind::Bilateral;
  con.rho_tol = p["rho_tol"];
  con.coeff_cap = p["coeff_cap"];
  con.gamma = p["gamma"];
  con.c_target = p["c_target"];
  TrigPoly h = io::coeffs_from_text(
      io::read_file((fs::path(dir) / "h.coeffs").string()));
  std::int64_t grid = next_pow2(std::max<std::int64_t>(4096, 4 * h.degree() + 2));
  grid = std::min<std::int64_t>(grid, 1 << 20);
  Certificate cert = synth::verify_flat_contract(h, con, grid);
  for (const auto& cl : cert.clauses)
    if (!cl.pass) {
      std::cout << "verify FAIL: " << std::string(job["name"]) << " clause " << cl.name << "\n";
      return 1;
    }
  return 0;
}

// ------------------------------------------------------------ indicator ---

struct IndicatorArgs {
  std::string name = "indicator";
  double arc_start = 0.0;
  double arc_length = kPi / 2;
  double delta = 0.25;
  double flat_rho = 0.0, flat_cap = 0.0;
  std::int64_t flat_budget = 1 << 15;
};

json indicator_params(const GlobalOpts& g, const IndicatorArgs& a) {
  json p;
  p["arc_start"] = a.arc_start;
  p["arc_length"] = a.arc_length;
  p["delta"] = a.delta;
  p["flat_rho"] = a.flat_rho;
  p["flat_cap"] = a.flat_cap;
  p["flat_budget"] = a.flat_budget;
  p["grid"] = g.grid;
  p["seed"] = g.seed;
  return p;
}

int run_indicator(const GlobalOpts& g, const IndicatorArgs& a, Manifest& mf) {
  constructors::FlatWiring w;
  w.rho_tol = a.flat_rho;
  w.coeff_cap = a.flat_cap;
  w.budget = a.flat_budget;
  w.seed = g.seed;
  auto res = constructors::indicator_polynomial(Arc{a.arc_start, a.arc_length},
                                                a.delta, w, g.grid);
  std::string dir = job_dir(g, a.name);
  io::write_file((fs::path(dir) / "P.factored").string(), io::factored_to_text(res.P));
  if (res.expanded)
    io::write_file((fs::path(dir) / "P.coeffs").string(), io::coeffs_to_text(*res.expanded));
  io::write_file((fs::path(dir) / "certificate.txt").string(), res.cert.to_text());
  json rep;
  rep["job"] = a.name;
  rep["kind"] = "indicator";
  rep["resolved_params"] = indicator_params(g, a);
  rep["dilation"] = res.r;
  rep["hstar_sup"] = res.hstar_sup;
  rep["certificate"] = cert_to_json(res.cert);
  write_report(dir, rep);
  json arts;
  arts["factored"] = "P.factored";
  if (res.expanded) arts["coeffs"] = "P.coeffs";
  arts["certificate"] = "certificate.txt";
  arts["report"] = "report.json";
  mf.add_job(a.name, "indicator", indicator_params(g, a), arts);
  return finish_job(g, res.cert);
}

GridMask auto_quiet_mask(const StepFunction& phi, std::int64_t G, double collar);

// Re-derive the indicator/steppoly certificate clauses from the factored file.
int verify_factored_transfer(const std::string& dir, const json& job) {
  ProductPoly P = io::factored_from_text(
      io::read_file((fs::path(dir) / "P.factored").string()));
  const auto& p = job["params"];
  std::int64_t G = p["grid"];
  double delta = p["delta"];
  std::string kind = job["kind"];

  if (P.spec_lo() < 0 && !P.empty()) {
    std::cout << "verify FAIL: " << std::string(job["name"]) << " clause spec_nonneg\n";
    return 1;
  }
  SampledFunction pv = SampledFunction::from_cvec(G, P.eval_grid(G));
  double rho_meas;
  if (kind == "indicator") {
    StepFunction ind = StepFunction::arc_indicator(p["arc_start"], p["arc_length"],
                                                   {1.0, 0.0});
    rho_meas = rho(pv, ind.sample(G));
  } else {
    StepFunction phi = io::step_from_text(
        io::read_file((fs::path(dir) / "phi.step").string()));
    rho_meas = rho(pv, phi.sample(G));
  }
  if (!(rho_meas <= delta * (1.0 + 1e-9))) {
    std::cout << "verify FAIL: " << std::string(job["name"]) << " clause rho (measured "
              << rho_meas << " vs " << delta << ")\n";
    return 1;
  }

  // Re-derive the off-neighborhood transfer bound from the stored factors:
  // each term is scale * g(t) h(r t) with g at dilation 1, so
  // sum_terms |scale| (|g| ||h*|| + 2 g* ||h^||) majorizes the maximal
  // function of P outside the widened arc.
  std::vector<double> total(static_cast<std::size_t>(G), 0.0);
  for (const auto& term : P.terms()) {
    const TrigPoly* gf = nullptr;
    const TrigPoly* hf = nullptr;
    for (const auto& f : term.factors) {
      if (f.dilation == 1 && !gf)
        gf = &f.poly;
      else
        hf = &f.poly;
    }
    if (!gf || !hf) return 0;  // not a transfer-shaped term; rho check stands
    double hstar = maximal_sup(*hf);
    double hcap = hf->coeff_sup();
    CVec gv = eval_grid_folded(*gf, G);
    auto gstar = maximal_at_grid(*gf, G);
    double gl1 = gf->coeff_l1();
    double sc = std::abs(term.scale);
    for (std::int64_t j = 0; j < G; ++j) {
      std::size_t s = static_cast<std::size_t>(j);
      total[s] += sc * (std::hypot(gv.re[s], gv.im[s]) * hstar +
                        2.0 * std::min(gstar[s], gl1) * hcap);
    }
  }
  if (kind == "indicator") {
    double lo = wrap_angle(static_cast<double>(p["arc_start"]) - delta);
    double hilen = static_cast<double>(p["arc_length"]) + 2.0 * delta;
    double worst = 0.0;
    for (std::int64_t j = 0; j < G; ++j) {
      double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
      if (wrap_angle(t - lo) < hilen) continue;
      worst = std::max(worst, total[static_cast<std::size_t>(j)]);
    }
    if (!(worst <= delta * (1.0 + 1e-9))) {
      std::cout << "verify FAIL: " << std::string(job["name"])
                << " clause offset_transfer (measured " << worst << ")\n";
      return 1;
    }
  } else {
    // steppoly: the quiet-set clause against the collar mask
    StepFunction phi = io::step_from_text(
        io::read_file((fs::path(dir) / "phi.step").string()));
    GridMask U = auto_quiet_mask(phi, G, p["collar"]);
    std::vector<double> quiet(static_cast<std::size_t>(G), 0.0);
    for (std::int64_t j = 0; j < G; ++j)
      if (U.in[static_cast<std::size_t>(j)])
        quiet[static_cast<std::size_t>(j)] = total[static_cast<std::size_t>(j)];
    double q = rho_to_zero(quiet, G);
    if (!(q <= delta * (1.0 + 1e-9))) {
      std::cout << "verify FAIL: " << std::string(job["name"])
                << " clause quiet_maximal (measured " << q << ")\n";
      return 1;
    }
  }
  return 0;
}

// ------------------------------------------------------------- steppoly ---

struct StepPolyArgs {
  std::string name = "steppoly";
  std::string phi_file;
  double delta = 0.9;
  double u_collar = -1.0;  // default delta
  double flat_rho = 0.0, flat_cap = 0.0;
  std::int64_t flat_budget = 1 << 15;
};

GridMask auto_quiet_mask(const StepFunction& phi, std::int64_t G, double collar) {
  GridMask U = GridMask::empty(G);
  for (std::int64_t j = 0; j < G; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(G);
    bool quiet = true;
    // inside the collar of any nonzero arc counts as loud
    if (phi.at(t) != cplx(0.0, 0.0)) {
      quiet = false;
    } else {
      for (double d = -collar; d <= collar && quiet; d += collar / 4.0)
        if (phi.at(t + d) != cplx(0.0, 0.0)) quiet = false;
    }
    U.in[static_cast<std::size_t>(j)] = quiet ? 1 : 0;
  }
  return U;
}

int run_steppoly(const GlobalOpts& g, const StepPolyArgs& a, Manifest& mf) {
  StepFunction phi = a.phi_file.empty()
                         ? StepFunction::arc_indicator(0.0, kPi, {1.0, 0.0})
                         : io::step_from_text(io::read_file(a.phi_file));
  double collar = a.u_collar > 0 ? a.u_collar : a.delta;
  GridMask U = auto_quiet_mask(phi, g.grid, collar);
  constructors::FlatWiring w;
  w.rho_tol = a.flat_rho;
  w.coeff_cap = a.flat_cap;
  w.budget = a.flat_budget;
  w.seed = g.seed;
  auto res = constructors::step_polynomial(phi, U, a.delta, w, g.grid);
  std::string dir = job_dir(g, a.name);
  io::write_file((fs::path(dir) / "P.factored").string(), io::factored_to_text(res.P));
  io::write_file((fs::path(dir) / "phi.step").string(), io::step_to_text(phi));
  io::write_file((fs::path(dir) / "certificate.txt").string(), res.cert.to_text());
  json rep;
  rep["job"] = a.name;
  rep["kind"] = "steppoly";
  json params;
  params["delta"] = a.delta;
  params["grid"] = g.grid;
  params["seed"] = g.seed;
  params["collar"] = collar;
  params["flat_rho"] = a.flat_rho;
  params["flat_cap"] = a.flat_cap;
  rep["resolved_params"] = params;
  rep["pieces"] = res.pieces.size();
  rep["certificate"] = cert_to_json(res.cert);
  write_report(dir, rep);
  json arts;
  arts["factored"] = "P.factored";
  arts["phi"] = "phi.step";
  arts["certificate"] = "certificate.txt";
  arts["report"] = "report.json";
  mf.add_job(a.name, "steppoly", params, arts);
  return finish_job(g, res.cert);
}

// --------------------------------------------------------------- pqpair ---

struct PqArgs {
  std::string name = "pqpair";
  std::string psi_file;
  double a = 0.5;
  double delta = 0.9;
  double gamma = 0.0;  // > 0 switches to the U-norm variant
  double c_target = 4.0;
  double flat_rho = 0.0, flat_cap = 0.0;
  std::int64_t flat_budget = 1 << 15;
};

int run_pqpair(const GlobalOpts& g, const PqArgs& a, Manifest& mf) {
  StepFunction psi = a.psi_file.empty()
                         ? StepFunction::arc_indicator(1.0, 1.0, {0.2, 0.0})
                         : io::step_from_text(io::read_file(a.psi_file));
  GridMask U = GridMask::full(g.grid);
  for (std::int64_t j = 0; j < g.grid; ++j) {
    double t = kTwoPi * static_cast<double>(j) / static_cast<double>(g.grid);
    if (std::abs(psi.at(t)) >= a.a) U.in[static_cast<std::size_t>(j)] = 0;
  }
  constructors::FlatWiring w;
  w.rho_tol = a.flat_rho;
  w.coeff_cap = a.flat_cap;
  w.budget = a.flat_budget;
  w.seed = g.seed;
  constructors::PQPair pq =
      a.gamma > 0 ? constructors::pq_pair_u(psi, U, a.a, a.gamma, a.delta,
                                            a.c_target, w, g.grid)
                  : constructors::pq_pair(psi, U, a.a, a.delta, w, g.grid);
  std::string dir = job_dir(g, a.name);
  io::write_file((fs::path(dir) / "P.factored").string(), io::factored_to_text(pq.P));
  io::write_file((fs::path(dir) / "Q.coeffs").string(), io::coeffs_to_text(pq.Q));
  io::write_file((fs::path(dir) / "psi.step").string(), io::step_to_text(psi));
  io::write_file((fs::path(dir) / "certificate.txt").string(), pq.cert.to_text());
  json rep;
  rep["job"] = a.name;
  rep["kind"] = a.gamma > 0 ? "pqpair-u" : "pqpair";
  json params;
  params["a"] = a.a;
  params["delta"] = a.delta;
  params["gamma"] = a.gamma;
  params["c_target"] = a.c_target;
  params["grid"] = g.grid;
  params["seed"] = g.seed;
  rep["resolved_params"] = params;
  rep["fejer_degree"] = pq.fejer_degree;
  rep["certificate"] = cert_to_json(pq.cert);
  write_report(dir, rep);
  json arts;
  arts["factored"] = "P.factored";
  arts["q_coeffs"] = "Q.coeffs";
  arts["psi"] = "psi.step";
  arts["certificate"] = "certificate.txt";
  arts["report"] = "report.json";
  mf.add_job(a.name, rep["kind"], params, arts);
  return finish_job(g, pq.cert);
}

int verify_pqpair(const std::string& dir, const json& job) {
  const auto& p = job["params"];
  std::int64_t G = p["grid"];
  double a = p["a"];
  double delta = p["delta"];
  ProductPoly P = io::factored_from_text(
      io::read_file((fs::path(dir) / "P.factored").string()));
  TrigPoly Q = io::coeffs_from_text(io::read_file((fs::path(dir) / "Q.coeffs").string()));
  StepFunction psi = io::step_from_text(io::read_file((fs::path(dir) / "psi.step").string()));
  if (!P.empty() && P.spec_lo() < 0) {
    std::cout << "verify FAIL: " << std::string(job["name"]) << " clause spec_nonneg\n";
    return 1;
  }
  SampledFunction pv = SampledFunction::from_cvec(G, P.eval_grid(G));
  CVec qv = eval_grid_folded(Q, G);
  SampledFunction psis = psi.sample(G);
  std::string kind = job["kind"];
  if (kind == "pqpair") {
    SampledFunction sum(G, {0.0, 0.0});
    for (std::int64_t j = 0; j < G; ++j) {
      std::size_t s = static_cast<std::size_t>(j);
      sum.v[s] = pv.v[s] + qv.at(s);
    }
    if (!(rho(sum, psis) <= delta * (1 + 1e-9))) {
      std::cout << "verify FAIL: " << std::string(job["name"]) << " clause rho_sum\n";
      return 1;
    }
    if (!(sup_norm(Q) <= a * (1 + 1e-9))) {
      std::cout << "verify FAIL: " << std::string(job["name"]) << " clause q_sup\n";
      return 1;
    }
  } else {
    double gamma = p["gamma"];
    double c_target = p["c_target"];
    SampledFunction diff(G, {0.0, 0.0});
    for (std::int64_t j = 0; j < G; ++j) {
      std::size_t s = static_cast<std::size_t>(j);
      diff.v[s] = pv.v[s] + qv.at(s) - psis.v[s];
    }
    if (!(measure_above(diff, delta) <= c_target * gamma * (1 + 1e-9))) {
      std::cout << "verify FAIL: " << std::string(job["name"]) << " clause levelset_sum\n";
      return 1;
    }
    if (!(u_norm(Q, G) <= a / gamma * (1 + 1e-9))) {
      std::cout << "verify FAIL: " << std::string(job["name"]) << " clause u_norm_q\n";
      return 1;
    }
  }
  return 0;
}

// ------------------------------------------------------------ decompose ---

struct DecomposeArgs {
  std::string name = "decompose";
  std::string input_file;  // empty = half-circle indicator target
  double epsilon = 0.25;
  int rounds = 4;
  bool menshov = false;
  double gamma = 0.5;
  double c_target = 4.0;
};

SampledFunction decompose_target(const DecomposeArgs& a, std::int64_t G) {
  if (!a.input_file.empty()) return io::sampled_from_text(io::read_file(a.input_file));
  SampledFunction f(G, {0.0, 0.0});
  for (std::int64_t j = 0; j < G / 2; ++j) f.v[static_cast<std::size_t>(j)] = {1.0, 0.0};
  return f;
}

json round_to_json(const decompose::RoundRecord& r) {
  json e;
  e["n"] = r.n;
  e["rho_target"] = r.rho_target;
  e["a"] = r.a;
  e["step_arcs"] = r.step_arcs;
  e["rho_step"] = r.rho_step;
  e["rho_s_zero"] = r.rho_s_zero;
  e["quiet_co_measure"] = r.quiet_co_measure;
  e["mu_hypothesis"] = r.mu_hypothesis;
  e["mu_bound_pass"] = r.mu_bound_pass;
  e["fejer_degree"] = r.fejer_degree;
  e["rho_q_quiet"] = r.rho_q_quiet;
  e["residual_rho"] = r.residual_rho;
  e["p_min_freq"] = r.p_min_freq;
  e["q_sup"] = r.q_sup;
  e["q_bound"] = r.q_bound;
  e["clause_i"] = r.clause_i;
  e["clause_ii"] = r.clause_ii;
  e["clause_iii"] = r.clause_iii;
  e["pstar_quiet_rho"] = r.pstar_quiet_rho;
  e["pstar_global_rho"] = r.pstar_global_rho;
  e["achieved_c"] = r.achieved_c;
  e["u_norm_q"] = r.u_norm_q;
  return e;
}

int run_decompose(const GlobalOpts& g, const DecomposeArgs& a, Manifest& mf) {
  SampledFunction f = decompose_target(a, g.grid);
  decompose::EngineOptions eo;
  eo.epsilon = a.epsilon;
  eo.rounds = a.rounds;
  eo.seed = g.seed;
  eo.menshov = a.menshov;
  eo.gamma = a.gamma;
  eo.c_target = a.c_target;
  auto rep = decompose::analytic_decompose(f, eo);

  std::string dir = job_dir(g, a.name);
  io::write_file((fs::path(dir) / "input.sf").string(), io::sampled_to_text(f));
  std::ostringstream csv;
  csv << "n,rho_target,residual_rho,q_sup,q_bound,quiet_co_measure,pstar_quiet_rho,"
         "achieved_c,u_norm_q\n";
  json rounds = json::array();
  for (std::size_t k = 0; k < rep.rounds.size(); ++k) {
    const auto& r = rep.rounds[k];
    rounds.push_back(round_to_json(r));
    csv << r.n << "," << io::format_double(r.rho_target) << ","
        << io::format_double(r.residual_rho) << "," << io::format_double(r.q_sup)
        << "," << io::format_double(r.q_bound) << ","
        << io::format_double(r.quiet_co_measure) << ","
        << io::format_double(r.pstar_quiet_rho) << ","
        << io::format_double(r.achieved_c) << "," << io::format_double(r.u_norm_q)
        << "\n";
    std::string num = std::to_string(r.n);
    io::write_file((fs::path(dir) / ("P" + num + ".coeffs")).string(),
                   io::coeffs_to_text(rep.P[k]));
    io::write_file((fs::path(dir) / ("Q" + num + ".coeffs")).string(),
                   io::coeffs_to_text(rep.Q[k]));
    io::write_file((fs::path(dir) / ("S" + num + ".step")).string(),
                   io::step_to_text(rep.S[k]));
  }
  io::write_file((fs::path(dir) / "rounds.csv").string(), csv.str());
  if (rep.complete) {
    io::write_file((fs::path(dir) / "gsum.coeffs").string(), io::coeffs_to_text(rep.p_sum));
    io::write_file((fs::path(dir) / "qsum.coeffs").string(), io::coeffs_to_text(rep.q_sum));
  }

  json out;
  out["job"] = a.name;
  out["kind"] = a.menshov ? "menshov" : "decompose";
  json params;
  params["epsilon"] = a.epsilon;
  params["rounds"] = a.rounds;
  params["grid"] = g.grid;
  params["seed"] = g.seed;
  params["gamma"] = a.gamma;
  params["c_target"] = a.c_target;
  out["resolved_params"] = params;
  out["complete"] = rep.complete;
  out["all_clauses_pass"] = rep.all_round_clauses_pass();
  out["q_sum_sup"] = rep.q_sum_sup;
  out["failure"] = rep.failure;
  out["rounds"] = rounds;
  write_report(dir, out);
  json arts;
  arts["report"] = "report.json";
  arts["csv"] = "rounds.csv";
  arts["input"] = "input.sf";
  arts["rounds_emitted"] = rep.rounds.size();
  mf.add_job(a.name, out["kind"], params, arts);

  if (!rep.complete || !rep.all_round_clauses_pass()) {
    std::cout << "FAIL: " << (rep.failure.empty() ? "round clauses" : rep.failure)
              << "\n";
    return 1;
  }
  std::cout << "pass (" << rep.rounds.size() << " rounds, ||sum Q|| = "
            << io::format_double(rep.q_sum_sup) << ")\n";
  return 0;
}

int verify_decompose(const std::string& dir, const json& job) {
  const auto& p = job["params"];
  SampledFunction f = io::sampled_from_text(io::read_file((fs::path(dir) / "input.sf").string()));
  int rounds = static_cast<int>(job["artifacts"]["rounds_emitted"]);
  decompose::DecompositionReport rep;
  rep.grid = f.G;
  rep.opt.epsilon = p["epsilon"];
  rep.opt.menshov = job["kind"] == "menshov";
  rep.opt.gamma = p["gamma"];
  rep.opt.c_target = p["c_target"];
  for (int n = 1; n <= rounds; ++n) {
    rep.P.push_back(io::coeffs_from_text(
        io::read_file((fs::path(dir) / ("P" + std::to_string(n) + ".coeffs")).string())));
    rep.Q.push_back(io::coeffs_from_text(
        io::read_file((fs::path(dir) / ("Q" + std::to_string(n) + ".coeffs")).string())));
    decompose::RoundRecord rec;
    rec.n = n;
    rec.rho_target = std::pow(4.0, -n);
    rec.a = static_cast<double>(p["epsilon"]) * std::pow(2.0, -n);
    rep.rounds.push_back(rec);
  }
  for (int n = 1; n <= rounds; ++n) {
    Certificate cert = decompose::verify_round(f, rep, n);
    for (const auto& cl : cert.clauses)
      if (!cl.pass) {
        std::cout << "verify FAIL: " << std::string(job["name"]) << " round " << n << " clause "
                  << cl.name << "\n";
        return 1;
      }
  }
  return 0;
}

// --------------------------------------------------------- density demo ---

struct DensityArgs {
  std::string name = "density";
  std::string input_file;
  std::int64_t s = -3;
  std::int64_t degree = 64;  // random input degree when no file given
  std::string n_list = "8,16,32,64";
};

int run_density(const GlobalOpts& g, const DensityArgs& a, Manifest& mf) {
  TrigPoly f;
  if (!a.input_file.empty()) {
    f = io::coeffs_from_text(io::read_file(a.input_file));
  } else {
    std::mt19937_64 rng(g.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::pair<std::int64_t, cplx>> terms;
    for (std::int64_t n = -a.degree; n <= a.degree; ++n)
      terms.emplace_back(n, n == a.s ? cplx{1.0, 0.0} : cplx{0.3 * u(rng), 0.3 * u(rng)});
    f = TrigPoly::from_terms(std::move(terms));
  }

  std::vector<std::int64_t> Ns;
  {
    std::istringstream is(a.n_list);
    std::string tok;
    while (std::getline(is, tok, ',')) Ns.push_back(std::stoll(tok));
  }

  std::string dir = job_dir(g, a.name);
  std::ostringstream csv;
  csv << "N,sup_error,tail_bound,filter_vs_direct\n";
  Certificate cert;
  cert.subject = "density_demo";
  cert.grid_size = g.grid;
  for (std::int64_t N : Ns) {
    TrigPoly F = density::modulated_average(f, a.s, N);
    // identity check against the defining N-term sum at grid nodes
    double iddiff = 0.0;
    for (std::int64_t j = 0; j < 64; ++j) {
      double t = kTwoPi * static_cast<double>(j) / 64.0;
      iddiff = std::max(iddiff, std::abs(eval(F, t) -
                                         density::modulated_average_direct(f, a.s, N, t)));
    }
    TrigPoly target = TrigPoly::monomial(a.s, f.coeff(a.s));
    double sup_err = sup_norm(F - target);
    double tail = density::congruence_tail(f, a.s, N);
    csv << N << "," << io::format_double(sup_err) << "," << io::format_double(tail)
        << "," << io::format_double(iddiff) << "\n";
    cert.add("identity_N" + std::to_string(N), 1e-12 * (1.0 + f.coeff_l1()), iddiff,
             "filter vs direct summation");
    cert.add("tail_N" + std::to_string(N), tail, sup_err, "sup error vs coefficient tail");
  }
  io::write_file((fs::path(dir) / "error_vs_N.csv").string(), csv.str());
  io::write_file((fs::path(dir) / "f.coeffs").string(), io::coeffs_to_text(f));
  io::write_file((fs::path(dir) / "certificate.txt").string(), cert.to_text());
  json rep;
  rep["job"] = a.name;
  rep["kind"] = "density-demo";
  json params;
  params["s"] = a.s;
  params["n_list"] = a.n_list;
  params["seed"] = g.seed;
  rep["resolved_params"] = params;
  rep["certificate"] = cert_to_json(cert);
  write_report(dir, rep);
  json arts;
  arts["csv"] = "error_vs_N.csv";
  arts["coeffs"] = "f.coeffs";
  arts["certificate"] = "certificate.txt";
  arts["report"] = "report.json";
  mf.add_job(a.name, "density-demo", params, arts);
  return finish_job(g, cert);
}

int verify_density(const std::string& dir, const json& job) {
  TrigPoly f = io::coeffs_from_text(io::read_file((fs::path(dir) / "f.coeffs").string()));
  const auto& p = job["params"];
  std::int64_t s = p["s"];
  std::string nlist = p["n_list"];
  std::istringstream is(nlist);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::int64_t N = std::stoll(tok);
    TrigPoly F = density::modulated_average(f, s, N);
    for (std::int64_t j = 0; j < 16; ++j) {
      double t = kTwoPi * static_cast<double>(j) / 16.0 + 0.05;
      if (std::abs(eval(F, t) - density::modulated_average_direct(f, s, N, t)) >
          1e-11 * (1.0 + f.coeff_l1())) {
        std::cout << "verify FAIL: " << std::string(job["name"]) << " identity at N=" << N << "\n";
        return 1;
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------- verify ---

int run_verify(const std::string& out_dir) {
  fs::path mpath = fs::path(out_dir) / "manifest.json";
  if (!fs::exists(mpath)) {
    std::cout << "no manifest at " << mpath.string() << "\n";
    return 2;
  }
  json m = json::parse(io::read_file(mpath.string()));
  int rc = 0;
  for (const auto& job : m["jobs"]) {
    std::string kind = job["kind"];
    std::string dir = (fs::path(out_dir) / std::string(job["name"])).string();
    int r = 0;
    if (kind == "synth-analytic" || kind == "synth-bilateral") {
      if (job["artifacts"].contains("coeffs")) r = verify_synth(dir, job);
    } else if (kind == "indicator" || kind == "steppoly") {
      r = verify_factored_transfer(dir, job);
    } else if (kind == "pqpair" || kind == "pqpair-u") {
      r = verify_pqpair(dir, job);
    } else if (kind == "decompose" || kind == "menshov") {
      r = verify_decompose(dir, job);
    } else if (kind == "density-demo") {
      r = verify_density(dir, job);
    }
    if (r == 0)
      std::cout << "verified " << std::string(job["name"]) << " (" << kind << ")\n";
    rc = std::max(rc, r);
  }
  return rc;
}

// ------------------------------------------------------------------ run ---

// Flat key = value sections:  [kind name] followed by key = value lines.
struct ConfigJob {
  std::string kind, name;
  std::map<std::string, std::string> kv;
};

std::vector<ConfigJob> parse_config(const std::string& text) {
  std::vector<ConfigJob> jobs;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto strip = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      std::size_t b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(ErrorCode::BadFile, "config line " + std::to_string(lineno) + ": missing ]");
      std::string inner = strip(line.substr(1, line.size() - 2));
      std::size_t sp = inner.find(' ');
      ConfigJob j;
      j.kind = sp == std::string::npos ? inner : inner.substr(0, sp);
      j.name = sp == std::string::npos ? inner : strip(inner.substr(sp + 1));
      jobs.push_back(j);
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos || jobs.empty())
      fail(ErrorCode::BadFile, "config line " + std::to_string(lineno) + ": expected key = value");
    jobs.back().kv[strip(line.substr(0, eq))] = strip(line.substr(eq + 1));
  }
  return jobs;
}

int run_config(GlobalOpts g, const std::string& path, Manifest& mf) {
  auto jobs = parse_config(io::read_file(path));
  int rc = 0;
  for (const auto& j : jobs) {
    GlobalOpts gj = g;
    auto get = [&](const std::string& k, const std::string& dflt) {
      auto it = j.kv.find(k);
      return it == j.kv.end() ? dflt : it->second;
    };
    gj.seed = std::stoull(get("seed", std::to_string(g.seed)));
    gj.grid = std::stoll(get("grid", std::to_string(g.grid)));
    int r = 0;
    if (j.kind == "synth") {
      SynthArgs a;
      a.name = j.name;
      a.kind = get("kind", "analytic");
      a.epsilon = std::stod(get("epsilon", "0.5"));
      a.gamma = std::stod(get("gamma", "0.5"));
      a.delta = std::stod(get("delta", "0.5"));
      a.c_target = std::stod(get("c_target", "4"));
      a.budget = std::stoll(get("budget", "4096"));
      r = run_synth(gj, a, mf);
    } else if (j.kind == "indicator") {
      IndicatorArgs a;
      a.name = j.name;
      a.arc_start = std::stod(get("arc_start", "0"));
      a.arc_length = std::stod(get("arc_length", std::to_string(kPi / 2)));
      a.delta = std::stod(get("delta", "0.25"));
      a.flat_rho = std::stod(get("flat_rho", "0"));
      a.flat_cap = std::stod(get("flat_cap", "0"));
      a.flat_budget = std::stoll(get("flat_budget", "32768"));
      r = run_indicator(gj, a, mf);
    } else if (j.kind == "steppoly") {
      StepPolyArgs a;
      a.name = j.name;
      a.phi_file = get("phi", "");
      a.delta = std::stod(get("delta", "0.9"));
      a.flat_rho = std::stod(get("flat_rho", "0"));
      a.flat_cap = std::stod(get("flat_cap", "0"));
      a.flat_budget = std::stoll(get("flat_budget", "32768"));
      r = run_steppoly(gj, a, mf);
    } else if (j.kind == "pqpair") {
      PqArgs a;
      a.name = j.name;
      a.psi_file = get("psi", "");
      a.a = std::stod(get("a", "0.5"));
      a.delta = std::stod(get("delta", "0.9"));
      a.gamma = std::stod(get("gamma", "0"));
      a.c_target = std::stod(get("c_target", "4"));
      a.flat_rho = std::stod(get("flat_rho", "0"));
      a.flat_cap = std::stod(get("flat_cap", "0"));
      a.flat_budget = std::stoll(get("flat_budget", "32768"));
      r = run_pqpair(gj, a, mf);
    } else if (j.kind == "decompose" || j.kind == "menshov") {
      DecomposeArgs a;
      a.name = j.name;
      a.input_file = get("input", "");
      a.epsilon = std::stod(get("epsilon", "0.25"));
      a.rounds = std::stoi(get("rounds", "4"));
      a.menshov = j.kind == "menshov";
      a.gamma = std::stod(get("gamma", "0.5"));
      a.c_target = std::stod(get("c_target", "4"));
      r = run_decompose(gj, a, mf);
    } else if (j.kind == "density-demo") {
      DensityArgs a;
      a.name = j.name;
      a.input_file = get("input", "");
      a.s = std::stoll(get("s", "-3"));
      a.degree = std::stoll(get("degree", "64"));
      a.n_list = get("n_list", "8,16,32,64");
      r = run_density(gj, a, mf);
    } else {
      fail(ErrorCode::BadFile, "unknown job kind: " + j.kind);
    }
    rc = std::max(rc, r);
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trigonometric-polynomial synthesis laboratory"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--out", g.out, "output directory");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--grid", g.grid, "measurement grid (dyadic)");
  app.add_flag("--strict", g.strict, "fail certificates that consume over half a bound");

  SynthArgs sa;
  auto* synth_cmd = app.add_subcommand("synth", "flat polynomial synthesis");
  synth_cmd->add_option("--name", sa.name);
  synth_cmd->add_option("--kind", sa.kind, "analytic|bilateral");
  synth_cmd->add_option("--epsilon", sa.epsilon);
  synth_cmd->add_option("--gamma", sa.gamma);
  synth_cmd->add_option("--delta", sa.delta);
  synth_cmd->add_option("--c-target", sa.c_target);
  synth_cmd->add_option("--budget", sa.budget);
  synth_cmd->add_option("--rho-tol", sa.rho_tol);
  synth_cmd->add_option("--coeff-cap", sa.coeff_cap);

  IndicatorArgs ia;
  auto* ind_cmd = app.add_subcommand("indicator", "indicator polynomial");
  ind_cmd->add_option("--name", ia.name);
  ind_cmd->add_option("--arc-start", ia.arc_start);
  ind_cmd->add_option("--arc-length", ia.arc_length);
  ind_cmd->add_option("--delta", ia.delta);
  ind_cmd->add_option("--flat-rho", ia.flat_rho);
  ind_cmd->add_option("--flat-cap", ia.flat_cap);
  ind_cmd->add_option("--flat-budget", ia.flat_budget);

  StepPolyArgs spa;
  auto* sp_cmd = app.add_subcommand("steppoly", "step polynomial");
  sp_cmd->add_option("--name", spa.name);
  sp_cmd->add_option("--phi", spa.phi_file);
  sp_cmd->add_option("--delta", spa.delta);
  sp_cmd->add_option("--collar", spa.u_collar);
  sp_cmd->add_option("--flat-rho", spa.flat_rho);
  sp_cmd->add_option("--flat-cap", spa.flat_cap);
  sp_cmd->add_option("--flat-budget", spa.flat_budget);

  PqArgs pa;
  auto* pq_cmd = app.add_subcommand("pqpair", "analytic + uniform corrector pair");
  pq_cmd->add_option("--name", pa.name);
  pq_cmd->add_option("--psi", pa.psi_file);
  pq_cmd->add_option("--a", pa.a);
  pq_cmd->add_option("--delta", pa.delta);
  pq_cmd->add_option("--gamma", pa.gamma, "> 0 switches to the U-norm variant");
  pq_cmd->add_option("--c-target", pa.c_target);
  pq_cmd->add_option("--flat-rho", pa.flat_rho);
  pq_cmd->add_option("--flat-cap", pa.flat_cap);
  pq_cmd->add_option("--flat-budget", pa.flat_budget);

  DecomposeArgs da;
  auto* dec_cmd = app.add_subcommand("decompose", "induction engine");
  dec_cmd->add_option("--name", da.name);
  dec_cmd->add_option("--input", da.input_file);
  dec_cmd->add_option("--epsilon", da.epsilon);
  dec_cmd->add_option("--rounds", da.rounds);

  DecomposeArgs ma;
  ma.name = "menshov";
  ma.menshov = true;
  auto* men_cmd = app.add_subcommand("menshov", "U-norm induction engine");
  men_cmd->add_option("--name", ma.name);
  men_cmd->add_option("--input", ma.input_file);
  men_cmd->add_option("--epsilon", ma.epsilon);
  men_cmd->add_option("--rounds", ma.rounds);
  men_cmd->add_option("--gamma", ma.gamma);
  men_cmd->add_option("--c-target", ma.c_target);

  DensityArgs dna;
  auto* den_cmd = app.add_subcommand("density-demo", "modulated-average demo");
  den_cmd->add_option("--name", dna.name);
  den_cmd->add_option("--input", dna.input_file);
  den_cmd->add_option("--s", dna.s);
  den_cmd->add_option("--degree", dna.degree);
  den_cmd->add_option("--n-list", dna.n_list);

  std::string verify_dir;
  auto* ver_cmd = app.add_subcommand("verify", "re-check artifacts in a directory");
  ver_cmd->add_option("--dir", verify_dir, "directory with manifest.json");

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "execute a config of jobs");
  run_cmd->add_option("--config", config_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ver_cmd->parsed()) return run_verify(verify_dir.empty() ? g.out : verify_dir);
    Manifest mf(g.out);
    if (synth_cmd->parsed()) return run_synth(g, sa, mf);
    if (ind_cmd->parsed()) return run_indicator(g, ia, mf);
    if (sp_cmd->parsed()) return run_steppoly(g, spa, mf);
    if (pq_cmd->parsed()) return run_pqpair(g, pa, mf);
    if (dec_cmd->parsed()) return run_decompose(g, da, mf);
    if (men_cmd->parsed()) return run_decompose(g, ma, mf);
    if (den_cmd->parsed()) return run_density(g, dna, mf);
    if (run_cmd->parsed()) return run_config(g, config_path, mf);
  } catch (const Error& e) {
    std::cout << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::BadFile ? 2 : 1;
  } catch (const std::exception& e) {
    std::cout << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
