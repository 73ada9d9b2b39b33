#include "brokenline/cli.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "brokenline/aux1d.hpp"
#include "brokenline/fem.hpp"
#include "brokenline/special.hpp"
#include "brokenline/spin_orbit.hpp"
#include "brokenline/variational.hpp"

namespace brokenline {

using ojson = nlohmann::ordered_json;

namespace {

enum class Kind { num, angle, integer, str, nums, angles, ints };

struct Key {
  std::string name;
  Kind kind;
  nlohmann::json def;  // null with required=false means "auto"
  bool required = false;
};

const std::map<std::string, std::vector<Key>>& schema() {
  static const std::map<std::string, std::vector<Key>> s = [] {
    const nlohmann::json quarter = pi / 4;
    const nlohmann::json null = nullptr;
    std::map<std::string, std::vector<Key>> t;
    t["gap"] = {{"tau", Kind::num, null, true}, {"m", Kind::num, 1.0}, {"omega", Kind::angle, quarter}};
    t["spin-orbit"] = {{"tau", Kind::num, null, true}, {"m", Kind::num, 1.0}, {"omega", Kind::angle, quarter},
                       {"lo", Kind::num, -3.0}, {"hi", Kind::num, 3.0}};
    t["critical-angle"] = {{"tau", Kind::nums, null, true}, {"N", Kind::ints, nlohmann::json::array({1})},
                           {"m", Kind::num, 1.0}};
    t["testfn"] = {{"tau", Kind::num, null, true}, {"m", Kind::num, 1.0}, {"omega", Kind::angle, null, true},
                   {"N", Kind::integer, 1}, {"L", Kind::num, null}};
    t["aux1d"] = {{"tau", Kind::num, null, true}, {"m", Kind::num, 1.0}, {"gamma", Kind::nums, null, true}};
    t["weyl"] = {{"tau", Kind::num, null, true}, {"m", Kind::num, 1.0}, {"omega", Kind::angle, quarter},
                 {"lambda", Kind::num, 1.5}, {"n", Kind::ints, nlohmann::json::array({4, 8, 16, 32})}};
    t["deficiency"] = {{"tau", Kind::num, null, true}, {"m", Kind::num, 1.0}, {"omega", Kind::angle, quarter},
                       {"r", Kind::nums, null, true}, {"theta", Kind::angles, null, true}};
    t["fem-count"] = {{"tau", Kind::num, null, true}, {"m", Kind::num, 1.0}, {"omega", Kind::angle, null, true},
                      {"mesh", Kind::str, "auto"}, {"bc", Kind::str, "dirichlet"},
                      {"R", Kind::num, 10.0}, {"h", Kind::num, 0.5}, {"grading", Kind::num, 0.5},
                      {"x0", Kind::num, null}, {"x1", Kind::num, null}, {"Y", Kind::num, null},
                      {"inner_cells", Kind::integer, 4}, {"k", Kind::integer, 6},
                      {"margin", Kind::num, null}, {"sigma", Kind::num, null}, {"export", Kind::str, ""}};
    t["sweep"] = {{"quantity", Kind::str, null, true}, {"tau", Kind::nums, null, true},
                  {"m", Kind::nums, nlohmann::json::array({1.0})}, {"omega", Kind::angles, nlohmann::json::array({pi / 4})},
                  {"N", Kind::ints, nlohmann::json::array({1})}, {"gamma", Kind::nums, nlohmann::json::array({1.0})}};
    return t;
  }();
  return s;
}

// accepted in a config file or on the command line but not part of the artifact
bool is_run_option(const std::string& k) { return k == "output" || k == "threads"; }

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidParameter("not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidParameter("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw InvalidParameter("empty list element in '" + s + "'");
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) throw InvalidParameter("empty list");
  return out;
}

ojson scalar(const nlohmann::json& v, Kind k, const std::string& name) {
  auto bad = [&] { return InvalidParameter("bad value for '" + name + "': " + v.dump()); };
  switch (k) {
    case Kind::num:
    case Kind::nums:
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return parse_number(v.get<std::string>());
      throw bad();
    case Kind::angle:
    case Kind::angles:
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return parse_angle(v.get<std::string>());
      throw bad();
    case Kind::integer:
    case Kind::ints: {
      const double d = v.is_number() ? v.get<double>() : v.is_string() ? parse_number(v.get<std::string>()) : NAN;
      if (!std::isfinite(d) || d != std::floor(d) || std::abs(d) > 1e9) throw bad();
      return static_cast<long long>(d);
    }
    case Kind::str:
      if (v.is_string()) return v.get<std::string>();
      throw bad();
  }
  throw bad();
}

ojson convert(const nlohmann::json& v, const Key& key) {
  const bool list = key.kind == Kind::nums || key.kind == Kind::angles || key.kind == Kind::ints;
  if (v.is_null()) {
    if (key.required) throw InvalidParameter("'" + key.name + "' is required");
    if (!key.def.is_null()) throw InvalidParameter("'" + key.name + "' cannot be null");
    return nullptr;
  }
  if (!list) return scalar(v, key.kind, key.name);
  ojson arr = ojson::array();
  if (v.is_array()) {
    for (const auto& e : v) arr.push_back(scalar(e, key.kind, key.name));
  } else if (v.is_string()) {
    for (const auto& e : split(v.get<std::string>())) arr.push_back(scalar(e, key.kind, key.name));
  } else {
    arr.push_back(scalar(v, key.kind, key.name));
  }
  if (arr.empty()) throw InvalidParameter("'" + key.name + "' is an empty list");
  return arr;
}

std::string csv_header(const ojson& config) { return "# config=" + config.dump() + "\n"; }

std::string row(std::initializer_list<std::string> cells) {
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty()) s += ',';
    s += c;
  }
  return s + "\n";
}

std::string F(double x) { return format_double(x); }
std::string I(long long x) { return std::to_string(x); }

// Runs tasks on a worker pool; rows come back in task order.
std::string run_pool(std::vector<std::function<std::string()>>& tasks, int threads) {
  std::vector<std::string> out(tasks.size());
  std::vector<std::exception_ptr> errs(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < tasks.size();) {
      try {
        out[i] = tasks[i]();
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  std::string s;
  for (auto& r : out) s += r;
  return s;
}

PhysParams params_of(const ojson& c) {
  const double omega = c.contains("omega") && !c["omega"].is_null() ? c["omega"].get<double>() : pi / 4;
  return make_params(c["tau"].get<double>(), c["m"].get<double>(), omega);
}

ojson energy_json(const EnergyBreakdown& e) {
  ojson j;
  j["jump_sq"] = e.jump_sq;
  j["l2_sq"] = e.l2_sq;
  j["gradx_sq"] = e.gradx_sq;
  j["grady_sq"] = e.grady_sq;
  j["form"] = e.form;
  j["form_gap"] = e.form_gap;
  j["bound_gap"] = e.bound_gap;
  j["mode_form_gap"] = e.mode_form_gap;
  return j;
}

std::string cmd_gap(const ojson& c) {
  const auto p = params_of(c);
  const auto d = derived_constants(p);
  ojson j;
  j["config"] = c;
  j["a"] = d.a;
  j["b"] = d.b;
  j["eps_tau"] = d.eps_tau;
  j["eps_tau_sq"] = d.eps_tau * d.eps_tau;
  j["kappa0"] = d.kappa0;
  j["kappa_tau"] = d.kappa_tau;
  j["c_tau"] = d.c_tau;
  return j.dump(2) + "\n";
}

std::string cmd_spin_orbit(const ojson& c) {
  const auto p = params_of(c);
  std::string s = csv_header(c) + "lambda,multiplicity,residual\n";
  for (const auto& r : spectrum_in_window(p, c["lo"].get<double>(), c["hi"].get<double>()))
    s += row({F(r.lambda), I(r.multiplicity), F(r.residual)});
  return s;
}

std::string cmd_critical_angle(const ojson& c, int threads) {
  std::vector<std::function<std::string()>> tasks;
  const double m = c["m"].get<double>();
  for (const auto& t : c["tau"])
    for (const auto& n : c["N"]) {
      const double tau = t.get<double>();
      const int N = static_cast<int>(n.get<long long>());
      tasks.push_back([=] {
        const auto mx = critical_angle_maximize(make_params(tau, m, pi / 4), N);
        return row({F(tau), I(N), F(critical_angle_closed(tau, N)), F(mx.omega_star), F(mx.L_star)});
      });
    }
  return csv_header(c) + "tau,N,omega_star,omega_star_maximized,L_star\n" + run_pool(tasks, threads);
}

std::string cmd_testfn(const ojson& c) {
  const auto p = params_of(c);
  const int N = static_cast<int>(c["N"].get<long long>());
  const double L = c["L"].is_null() ? critical_angle_maximize(p, N).L_star : c["L"].get<double>();
  const auto fam = make_family(p, N, L);
  ojson j;
  j["config"] = c;
  j["L"] = L;
  j["d"] = fam.d();
  j["kappa0"] = fam.kappa0();
  j["strip_angle"] = strip_angle(p, N, L);
  j["energy"] = energy_json(energy_breakdown(fam));
  return j.dump(2) + "\n";
}

std::string cmd_aux1d(const ojson& c, int threads) {
  const auto p = params_of(c);
  std::vector<std::function<std::string()>> tasks;
  for (const auto& g : c["gamma"]) {
    const double gamma = g.get<double>();
    tasks.push_back([=] {
      const auto r = ground_state(p, gamma);
      return row({F(gamma), F(r.k_gamma), F(r.E_gamma), F(r.deficit)});
    });
  }
  return csv_header(c) + "gamma,k_gamma,E_gamma,gap_minus_E\n" + run_pool(tasks, threads);
}

std::string cmd_weyl(const ojson& c, int threads) {
  const auto p = params_of(c);
  const double lambda = c["lambda"].get<double>();
  std::vector<std::function<std::string()>> tasks;
  for (const auto& n : c["n"]) {
    const int nn = static_cast<int>(n.get<long long>());
    tasks.push_back([=] {
      const auto w = weyl_sequence(p, lambda, nn);
      return row({I(nn), F(w.residual), F(w.norm_sq)});
    });
  }
  return csv_header(c) + "n,residual,norm_sq\n" + run_pool(tasks, threads);
}

std::string cmd_deficiency(const ojson& c, int threads) {
  const auto p = params_of(c);
  const DeficiencyField field(p);
  std::vector<std::function<std::string()>> tasks;
  for (const auto& r : c["r"])
    for (const auto& t : c["theta"]) {
      const double rr = r.get<double>(), th = t.get<double>();
      tasks.push_back([&field, rr, th] {
        std::string s;
        for (int sign : {1, -1}) {
          const Vec2c v = field(sign, rr, th);
          s += row({F(rr), F(th), I(sign), F(v(0).real()), F(v(0).imag()), F(v(1).real()), F(v(1).imag())});
        }
        return s;
      });
    }
  return csv_header(c) + "# lambda_star=" + F(field.lambda()) + "\n" +
         "r,theta,sign,re0,im0,re1,im1\n" + run_pool(tasks, threads);
}

std::string cmd_fem_count(const ojson& c) {
  const auto p = params_of(c);
  CountOptions o;
  const std::string mesh = c["mesh"], bc = c["bc"];
  if (bc != "dirichlet" && bc != "neumann") throw InvalidParameter("bc must be dirichlet or neumann");
  if (mesh != "auto" && mesh != "disk" && mesh != "strip") throw InvalidParameter("mesh must be auto, disk or strip");
  o.mesh.bc = bc == "dirichlet" ? BoundaryCondition::dirichlet : BoundaryCondition::neumann;
  o.mesh.R = c["R"];
  o.mesh.h = c["h"];
  o.mesh.grading = c["grading"];
  o.mesh.inner_cells = static_cast<int>(c["inner_cells"].get<long long>());
  o.k = static_cast<int>(c["k"].get<long long>());
  if (!c["margin"].is_null()) o.margin = c["margin"];
  if (!c["sigma"].is_null()) o.sigma = c["sigma"];
  o.export_prefix = c["export"];
  if (mesh == "auto") {
    o.auto_mesh = true;
    o.mesh = resolve_mesh_options(p, o);
  }
  o.auto_mesh = false;
  if (mesh == "disk") o.mesh.kind = MeshKind::disk;
  if (mesh == "strip") {
    o.mesh.kind = MeshKind::strip;
    if (c["x0"].is_null() || c["x1"].is_null() || c["Y"].is_null()) {
      CountOptions a = o;
      a.auto_mesh = true;
      if (!(p.tau < 0) || !(p.omega < 0.05)) throw InvalidParameter("automatic strip extent needs tau < 0 and omega < 0.05");
      const auto am = resolve_mesh_options(p, a);
      o.mesh.x0 = am.x0, o.mesh.x1 = am.x1, o.mesh.Y = am.Y;
    }
  }
  if (o.mesh.kind == MeshKind::strip) {
    if (!c["x0"].is_null()) o.mesh.x0 = c["x0"];
    if (!c["x1"].is_null()) o.mesh.x1 = c["x1"];
    if (!c["Y"].is_null()) o.mesh.Y = c["Y"];
  }
  const auto rep = count_bound_states(p, o);
  ojson j;
  j["config"] = c;
  const ojson body = to_json(rep);
  for (const auto& [k, v] : body.items()) j[k] = v;
  return j.dump(2) + "\n";
}

std::string cmd_sweep(const ojson& c, int threads) {
  const std::string q = c["quantity"];
  std::vector<std::function<std::string()>> tasks;
  std::string header;
  if (q == "gap") {
    header = "tau,m,a,b,eps_tau,kappa0,kappa_tau,c_tau\n";
    for (const auto& t : c["tau"])
      for (const auto& m : c["m"]) {
        const double tau = t, mm = m;
        tasks.push_back([=] {
          const auto d = derived_constants(make_params(tau, mm, pi / 4));
          return row({F(tau), F(mm), F(d.a), F(d.b), F(d.eps_tau), F(d.kappa0), F(d.kappa_tau), F(d.c_tau)});
        });
      }
  } else if (q == "principal") {
    header = "tau,omega,lambda_star,residual\n";
    for (const auto& t : c["tau"])
      for (const auto& w : c["omega"]) {
        const double tau = t, om = w;
        tasks.push_back([=] {
          const auto r = principal_eigenvalue(make_params(tau, 1.0, om));
          return row({F(tau), F(om), F(r.lambda), F(r.residual)});
        });
      }
  } else if (q == "critical-angle") {
    header = "tau,m,N,omega_star,omega_star_maximized,L_star\n";
    for (const auto& t : c["tau"])
      for (const auto& m : c["m"])
        for (const auto& n : c["N"]) {
          const double tau = t, mm = m;
          const int N = static_cast<int>(n.get<long long>());
          tasks.push_back([=] {
            const auto mx = critical_angle_maximize(make_params(tau, mm, pi / 4), N);
            return row({F(tau), F(mm), I(N), F(critical_angle_closed(tau, N)), F(mx.omega_star), F(mx.L_star)});
          });
        }
  } else if (q == "aux1d") {
    header = "tau,m,gamma,k_gamma,E_gamma,gap_minus_E\n";
    for (const auto& t : c["tau"])
      for (const auto& m : c["m"])
        for (const auto& g : c["gamma"]) {
          const double tau = t, mm = m, gamma = g;
          tasks.push_back([=] {
            const auto p = make_params(tau, mm, pi / 4);
            const auto r = ground_state(p, gamma);
            return row({F(tau), F(mm), F(gamma), F(r.k_gamma), F(r.E_gamma), F(r.deficit)});
          });
        }
  } else if (q == "certificate") {
    header = "tau,m,omega,N,certified,L,form_gap,bound_gap\n";
    for (const auto& t : c["tau"])
      for (const auto& m : c["m"])
        for (const auto& w : c["omega"])
          for (const auto& n : c["N"]) {
            const double tau = t, mm = m, om = w;
            const int N = static_cast<int>(n.get<long long>());
            tasks.push_back([=] {
              const auto cert = bound_state_certificate(make_params(tau, mm, om), N);
              return row({F(tau), F(mm), F(om), I(N), I(cert.certified ? 1 : 0), F(cert.L),
                          F(cert.energy.form_gap), F(cert.energy.bound_gap)});
            });
          }
  } else {
    throw InvalidParameter("unknown sweep quantity '" + q + "' (gap, principal, critical-angle, aux1d, certificate)");
  }
  return csv_header(c) + header + run_pool(tasks, threads);
}

int default_threads() {
  if (const char* e = std::getenv("BROKENLINE_THREADS")) {
    const int n = std::atoi(e);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_angle(const std::string& s) {
  for (const std::string suffix : {"deg", "d"}) {
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0)
      return parse_number(s.substr(0, s.size() - suffix.size())) * pi / 180;
  }
  return parse_number(s);
}

ojson resolve_config(const nlohmann::json& raw_in) {
  if (!raw_in.is_object()) throw InvalidParameter("config must be a JSON object");
  const nlohmann::json& raw =
      (!raw_in.contains("subcommand") && raw_in.contains("config") && raw_in["config"].is_object()) ? raw_in["config"]
                                                                                                   : raw_in;
  if (!raw.contains("subcommand") || !raw["subcommand"].is_string()) throw InvalidParameter("no subcommand given");
  const std::string sub = raw["subcommand"];
  const auto it = schema().find(sub);
  if (it == schema().end()) throw InvalidParameter("unknown subcommand '" + sub + "'");
  for (const auto& [k, v] : raw.items()) {
    if (k == "subcommand" || is_run_option(k)) continue;
    bool known = false;
    for (const auto& key : it->second) known = known || key.name == k;
    if (!known) throw InvalidParameter("unknown key '" + k + "' for subcommand " + sub);
  }
  ojson c;
  c["subcommand"] = sub;
  for (const auto& key : it->second) c[key.name] = convert(raw.contains(key.name) ? raw[key.name] : key.def, key);
  return c;
}

std::string execute(const ojson& c, int threads) {
  const std::string sub = c["subcommand"];
  if (sub == "gap") return cmd_gap(c);
  if (sub == "spin-orbit") return cmd_spin_orbit(c);
  if (sub == "critical-angle") return cmd_critical_angle(c, threads);
  if (sub == "testfn") return cmd_testfn(c);
  if (sub == "aux1d") return cmd_aux1d(c, threads);
  if (sub == "weyl") return cmd_weyl(c, threads);
  if (sub == "deficiency") return cmd_deficiency(c, threads);
  if (sub == "fem-count") return cmd_fem_count(c);
  if (sub == "sweep") return cmd_sweep(c, threads);
  throw InvalidParameter("unknown subcommand '" + sub + "'");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral toolkit for the Dirac operator with a delta-shell interaction on a broken line"};
  std::string config_path, output;
  int threads = 0;
  app.add_option("--config", config_path, "JSON config file (or a report embedding one); flags override it");
  app.add_option("-o,--output", output, "write the artifact here instead of stdout");
  app.add_option("--threads", threads, "worker count for sweeps (default: $BROKENLINE_THREADS or all cores)");
  app.require_subcommand(0, 1);
  std::map<std::string, std::map<std::string, std::string>> flags;
  for (const auto& [sub, keys] : schema()) {
    auto* sc = app.add_subcommand(sub);
    sc->set_help_flag("--help", "show the keys of this subcommand");  // -h would clash with --h
    for (const auto& key : keys) sc->add_option("--" + key.name, flags[sub][key.name]);
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    nlohmann::json raw = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InvalidParameter("cannot read config file " + config_path);
      raw = nlohmann::json::parse(in);
      if (raw.is_object() && !raw.contains("subcommand") && raw.contains("config")) raw = raw["config"];
    }
    if (!raw.is_object()) throw InvalidParameter("config must be a JSON object");
    const auto subs = app.get_subcommands();
    if (!subs.empty()) {
      const std::string sub = subs.front()->get_name();
      if (raw.contains("subcommand") && raw["subcommand"] != sub) {
        // switching subcommand: keep only the keys the new one understands
        nlohmann::json kept = nlohmann::json::object();
        for (const auto& key : schema().at(sub))
          if (raw.contains(key.name)) kept[key.name] = raw[key.name];
        raw = kept;
      }
      raw["subcommand"] = sub;
      for (const auto& key : schema().at(sub)) {
        auto* opt = subs.front()->get_option("--" + key.name);
        if (opt->count() > 0) raw[key.name] = flags[sub][key.name];
      }
    }
    if (output.empty() && raw.contains("output") && raw["output"].is_string()) output = raw["output"];
    if (threads <= 0 && raw.contains("threads") && raw["threads"].is_number_integer()) threads = raw["threads"];
    if (threads <= 0) threads = default_threads();

    const ojson config = resolve_config(raw);
    const std::string text = execute(config, threads);
    if (output.empty()) {
      out << text;
      out.flush();
    } else {
      std::ofstream f(output, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + output);
      f << text;
      if (!f.flush()) throw std::runtime_error("write failed for " + output);
    }
    return 0;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: bad config: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceFailure& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace brokenline
