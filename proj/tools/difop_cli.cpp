// Batch front end: validate a problem description, run one computation and
// write a JSON report. Exit codes: 0 success, 1 validation failure (or a
// failed comparison check), 2 configuration error.

#include <chrono>
#include <iostream>

#include "CLI11.hpp"
#include "config.hpp"
#include "difop/comparison.hpp"

using namespace difop;
using cfg::json;

namespace {

struct ValidationFailed {
  json report;
};

std::string field_name(const Field& f) {
  return f.is_rational() ? "rationals" : "fp:" + std::to_string(f.characteristic());
}

json failures_json(const ValidationReport& r) {
  json out = json::array();
  for (const auto& f : r) out.push_back({{"check", f.check}, {"witness", f.witness}, {"expected", f.expected}, {"got", f.got}});
  return out;
}

std::vector<int> caps_from_flag(int cap) {
  if (cap < 2) return {cap};
  return {cap - 2, cap};
}

class Runner {
 public:
  Runner(cfg::ProblemConfig c, std::string command) : cfg_(std::move(c)), command_(std::move(command)) {}

  json run() {
    validate_all();
    if (command_ == "validate") return head();
    if (command_ == "cohomology") return betti(Side::Cochain);
    if (command_ == "homology") return betti(Side::Chain);
    if (command_ == "cup") return cup_report();
    if (command_ == "cap") return cap_report();
    if (command_ == "compare") return compare_report();
    if (command_ == "symmetric") return symmetric_report();
    throw cfg::ConfigError("unknown command '" + command_ + "'");
  }

  bool all_checks_passed() const { return checks_ok_; }

 private:
  cfg::ProblemConfig cfg_;
  std::string command_;
  std::shared_ptr<CrossedProduct> e_;
  BimoduleSpec module_;
  std::unique_ptr<TermComplex> complex_;  // X over finite A, Z over S(V)
  bool checks_ok_ = true;

  const cfg::Params& params() const { return cfg_.params; }

  json head() const {
    json j;
    j["command"] = command_;
    j["field"] = field_name(cfg_.field());
    j["mode"] = cfg_.symmetric ? "symmetric" : "finite";
    j["module"] = module_name();
    j["valid"] = true;
    j["failures"] = json::array();
    return j;
  }

  std::string module_name() const {
    if (cfg_.symmetric) return "regular";
    switch (cfg_.module_kind) {
      case cfg::ModuleKind::Regular: return "regular";
      case cfg::ModuleKind::Trivial: return "trivial";
      case cfg::ModuleKind::Algebra: return "algebra";
      case cfg::ModuleKind::Explicit: return "explicit";
    }
    return "";
  }

  bool regular() const { return cfg_.symmetric || cfg_.module_kind == cfg::ModuleKind::Regular; }

  void validate_all() {
    ValidationReport rep;
    auto add = [&rep](const ValidationReport& r) { rep.insert(rep.end(), r.begin(), r.end()); };
    if (cfg_.symmetric) {
      add(validate_symmetric(cfg_.sym));
      if (rep.empty()) {
        e_ = build_symmetric(cfg_.sym);
        complex_ = std::make_unique<ZComplex>(e_);
      }
    } else {
      const auto& d = cfg_.data;
      add(validate_algebra(d.algebra));
      add(validate_lie(d.lie));
      if (!d.subalgebra.ground_field) add(validate_subalgebra(d.algebra, d.subalgebra));
      if (rep.empty()) add(validate_action(d.algebra, d.lie, d.action, d.subalgebra));
      if (rep.empty()) add(validate_presentation(d));
      if (rep.empty()) {
        try {
          switch (cfg_.module_kind) {
            case cfg::ModuleKind::Regular: module_ = BimoduleSpec::regular_module(); break;
            case cfg::ModuleKind::Trivial: module_ = fx::trivial_module(d); break;
            case cfg::ModuleKind::Algebra: module_ = BimoduleSpec::algebra_itself(d.algebra); break;
            case cfg::ModuleKind::Explicit: module_ = cfg_.module; break;
          }
          add(validate_bimodule(d, module_));
        } catch (const std::invalid_argument& ex) {
          rep.push_back({"module", ex.what(), "", ""});
        }
      }
      if (rep.empty()) {
        e_ = CrossedProduct::from_data(d);
        complex_ = std::make_unique<XComplex>(e_);
      }
    }
    if (!rep.empty()) {
      json j = head();
      j["valid"] = false;
      j["failures"] = failures_json(rep);
      throw ValidationFailed{j};
    }
  }

  // -- rendering ---------------------------------------------------------------

  std::string render_input(const Input& in) const {
    std::string out;
    for (std::size_t i = 0; i < in.word.size(); ++i) {
      if (i) out += cfg_.symmetric ? "^" : "|";
      out += cfg_.symmetric ? e_->base().name(pexp::unit(static_cast<std::size_t>(in.word[i]))) : e_->base().name(in.word[i]);
    }
    out += " ; ";
    for (std::size_t i = 0; i < in.wedge.size(); ++i) {
      if (i) out += "^";
      out += e_->lie().label(in.wedge[i]);
    }
    return out;
  }

  json cochain_table(const Cochain& phi, std::size_t degree) const {
    json out = json::array();
    for (const auto& in : complex_->degree_inputs(degree)) {
      Element v = phi(in);
      if (!v.is_zero()) out.push_back({{"input", render_input(in)}, {"value", e_->render(v)}});
    }
    return out;
  }

  json chain_table(const Chain& c) const {
    json out = json::array();
    for (const auto& [in, v] : c)
      if (!v.is_zero()) out.push_back({{"input", render_input(in)}, {"value", e_->render(v)}});
    return out;
  }

  json truncation_json(const TruncationReport& r) const {
    json j;
    j["caps"] = r.caps;
    j["shift"] = r.shift;
    json degrees = json::array();
    for (std::size_t n = 0; n < r.kernel.size(); ++n)
      degrees.push_back({{"degree", n},
                         {"kernel", r.kernel[n]},
                         {"boundary", r.boundary[n]},
                         {"residual", r.residual[n]},
                         {"lower_bound", r.lower_bound[n]},
                         {"stable", static_cast<bool>(r.stable[n])}});
    j["degrees"] = degrees;
    return j;
  }

  std::vector<Input> inputs_up_to(std::size_t n) const {
    std::vector<Input> out;
    for (std::size_t k = 0; k <= n; ++k) {
      auto v = complex_->degree_inputs(k);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  /// Inputs of the X complex used as supports for random cochains.
  std::vector<Input> x_inputs(std::size_t n) const {
    if (!cfg_.symmetric) return inputs_up_to(n);
    std::vector<Input> out;
    for (std::size_t k = 0; k <= n; ++k) {
      auto v = polynomial_x_inputs(*e_, k, 2);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  // -- commands -------------------------------------------------------------------

  json betti(Side side) {
    json j = head();
    j["n_max"] = params().n_max;
    if (regular()) {
      j["truncation"] = truncation_json(truncated_betti(*complex_, side, params().n_max, params().caps));
    } else {
      j["betti"] = side == Side::Cochain ? betti_cohomology(*complex_, module_, params().n_max)
                                         : betti_homology(*complex_, module_, params().n_max);
    }
    return j;
  }

  json symmetric_report() {
    if (!cfg_.symmetric) throw cfg::ConfigError("command 'symmetric' needs a 'symmetric' block");
    auto rep = weyl_homology_driver(cfg_.sym, params().n_max, params().caps);
    json j = head();
    j["n_max"] = params().n_max;
    j["cohomology"] = truncation_json(rep.cohomology);
    j["homology"] = truncation_json(rep.homology);
    return j;
  }

  json cup_report() {
    std::mt19937_64 rng(params().seed);
    const std::size_t n1 = params().degree_left, n2 = params().degree_right;
    auto all = inputs_up_to(n1 + n2);
    auto p = random_cochain(*e_, all, n1, rng, params().value_cap);
    auto q = random_cochain(*e_, all, n2, rng, params().value_cap);
    GradedCochain prod = cfg_.symmetric ? star_cup(e_, p, q) : cup(e_, p, q);
    json j = head();
    j["seed"] = params().seed;
    j["degrees"] = {n1, n2};
    j["left"] = cochain_table(p.eval, n1);
    j["right"] = cochain_table(q.eval, n2);
    j["product"] = cochain_table(prod.eval, n1 + n2);
    json checks = json::object();
    if (!cfg_.symmetric) {
      auto oracle = theta_bar_cochain(bar_cup(e_, vartheta_bar<Element>(e_, p.eval, n1), vartheta_bar<Element>(e_, q.eval, n2)));
      checks["bar_oracle"] = pass(!first_difference(prod.eval, oracle, complex_->degree_inputs(n1 + n2)));
    }
    auto lhs = graded_coboundary(*complex_, prod);
    auto rhs = graded_sum(cfg_.symmetric ? star_cup(e_, graded_coboundary(*complex_, p), q) : cup(e_, graded_coboundary(*complex_, p), q),
                          cfg_.symmetric ? star_cup(e_, p, graded_coboundary(*complex_, q)) : cup(e_, p, graded_coboundary(*complex_, q)),
                          sign_of(static_cast<int>(n1)));
    checks["leibniz"] = pass(!first_difference(lhs.eval, rhs.eval, complex_->degree_inputs(n1 + n2 + 1)));
    j["checks"] = checks;
    return j;
  }

  json cap_report() {
    std::mt19937_64 rng(params().seed);
    const std::size_t n = params().degree_left + params().degree_right, n2 = params().degree_right;
    auto all = inputs_up_to(n);
    std::vector<Input> top;
    for (const auto& in : all)
      if (in.degree() == n) top.push_back(in);
    auto c = random_chain(*e_, top, rng, params().value_cap);
    auto q = random_cochain(*e_, all, n2, rng, params().value_cap);
    Chain r = cfg_.symmetric ? star_cap(e_, c, q) : cap(e_, c, q);
    json j = head();
    j["seed"] = params().seed;
    j["degrees"] = {n, n2};
    j["chain"] = chain_table(c);
    j["cochain"] = cochain_table(q.eval, n2);
    j["result"] = chain_table(r);
    json checks = json::object();
    if (!cfg_.symmetric) {
      auto viaBar = vartheta_chain(*e_, bar_cap(e_, theta_chain(c), vartheta_bar<Element>(e_, q.eval, n2)));
      checks["bar_oracle"] = pass(chains_equal(r, viaBar));
    }
    j["checks"] = checks;
    return j;
  }

  std::string pass(bool ok) {
    checks_ok_ = checks_ok_ && ok;
    return ok ? "pass" : "fail";
  }

  json compare_report() {
    json j = head();
    j["seed"] = params().seed;
    json checks = json::object();
    std::mt19937_64 rng(params().seed);
    const std::size_t trials = params().trials;
    if (cfg_.symmetric) {
      ZComplex& z = static_cast<ZComplex&>(*complex_);
      XComplex x(e_);
      bool dd = true;
      for (std::size_t n = 1; n <= 3; ++n)
        dd = dd && regular_dd_defects(z, Side::Cochain, n).empty() && regular_dd_defects(z, Side::Chain, n).empty();
      checks["dd_zero"] = pass(dd);
      auto xin = x_inputs(3);
      auto zin = inputs_up_to(3);
      bool gc = true, gch = true, f1 = true, f2 = true;
      for (std::size_t t = 0; t < trials; ++t) {
        std::size_t n1 = t % 3, n2 = (t / 3) % 2;
        auto p = random_cochain(*e_, xin, n1, rng), q = random_cochain(*e_, xin, n2, rng);
        gc = gc && !first_difference(coboundary(z, gamma_bar_cochain(p).eval), gamma_bar_cochain(graded_coboundary(x, p)).eval,
                                     z.degree_inputs(n1 + 1));
        f1 = f1 && !first_difference(gamma_bar_cochain(cup(e_, p, q)).eval,
                                     star_cup(e_, gamma_bar_cochain(p), gamma_bar_cochain(q)).eval, z.degree_inputs(n1 + n2));
        auto c = random_chain(*e_, zin, rng);
        gch = gch && chains_equal(gamma_bar_chain(boundary(z, c)), boundary(x, gamma_bar_chain(c)));
        std::vector<Input> src;
        for (const auto& in : zin)
          if (in.degree() >= n2) src.push_back(in);
        auto cc = random_chain(*e_, src, rng);
        f2 = f2 && chains_equal(cap(e_, gamma_bar_chain(cc), q), gamma_bar_chain(star_cap(e_, cc, gamma_bar_cochain(q))));
      }
      checks["gamma_cochain_map"] = pass(gc);
      checks["gamma_chain_map"] = pass(gch);
      checks["f1"] = pass(f1);
      checks["f2"] = pass(f2);
      j["checks"] = checks;
      return j;
    }

    auto all = inputs_up_to(3);
    bool rc = true, rch = true, van = true, cupo = true, capo = true;
    for (std::size_t t = 0; t < trials; ++t) {
      const std::size_t n = t % 4;
      auto phi = random_cochain(*e_, all, n, rng);
      rc = rc && !first_difference(theta_bar_cochain(vartheta_bar<Element>(e_, phi.eval, n)), phi.eval,
                                   complex_->degree_inputs(n));
      auto c = random_chain(*e_, all, rng);
      rch = rch && chains_equal(vartheta_chain(*e_, theta_chain(c)), c);
      const std::size_t n1 = t % 2, n2 = (t / 2) % 2;
      auto p = random_cochain(*e_, all, n1, rng), q = random_cochain(*e_, all, n2, rng);
      auto oracle = theta_bar_cochain(bar_cup(e_, vartheta_bar<Element>(e_, p.eval, n1), vartheta_bar<Element>(e_, q.eval, n2)));
      cupo = cupo && !first_difference(cup(e_, p, q).eval, oracle, complex_->degree_inputs(n1 + n2));
      std::vector<Input> src;
      for (const auto& in : all)
        if (in.degree() >= n2) src.push_back(in);
      auto ch = random_chain(*e_, src, rng);
      capo = capo && chains_equal(cap(e_, ch, q),
                                  vartheta_chain(*e_, bar_cap(e_, theta_chain(ch), vartheta_bar<Element>(e_, q.eval, n2))));
    }
    auto abar = e_->base().complement();
    const std::size_t van_max = abar.size() + e_->lie_dim() <= 4 ? 3 : 2;
    for (std::size_t n = 0; n <= van_max; ++n) {
      auto phi = random_cochain(*e_, all, n, rng);
      auto v = vartheta_bar<Element>(e_, phi.eval, n);
      for (const auto& t : special_tensors(abar, e_->lie_dim(), n))
        if (!is_ordered_special(t)) van = van && v.eval(t).is_zero();
    }
    checks["roundtrip_cochains"] = pass(rc);
    checks["roundtrip_chains"] = pass(rch);
    checks["vartheta_off_ordered_zero"] = pass(van);
    checks["cup_bar_oracle"] = pass(cupo);
    checks["cap_bar_oracle"] = pass(capo);

    const auto& d = cfg_.data;
    const std::size_t n_max = std::min<std::size_t>(params().n_max, 3);
    if (!regular()) {
      if (d.algebra.dim == 1 && d.cocycle.is_zero() && cfg_.module_kind == cfg::ModuleKind::Trivial) {
        bool ok = true;
        for (std::size_t n = 1; n <= n_max; ++n)
          ok = ok && ::difop::detail::mat_equal(assemble(*complex_, module_, Side::Cochain, n), ce::cochain_matrix(d.lie, n, d.field)) &&
               ::difop::detail::mat_equal(assemble(*complex_, module_, Side::Chain, n), ce::chain_matrix(d.lie, n, d.field));
        checks["ce_oracle_matrices"] = pass(ok);
      }
      if (d.lie.dim == 0 && d.subalgebra.ground_field) {
        bool ok = true;
        for (std::size_t n = 1; n <= n_max; ++n)
          ok = ok && ::difop::detail::mat_equal(assemble(*complex_, module_, Side::Cochain, n), bar::cochain_matrix(d.algebra, module_, n, d.field)) &&
               ::difop::detail::mat_equal(assemble(*complex_, module_, Side::Chain, n), bar::chain_matrix(d.algebra, module_, n, d.field));
        checks["bar_oracle_matrices"] = pass(ok);
      }
      bool dd = true;
      for (std::size_t n = 1; n < n_max; ++n) {
        auto c1 = assemble(*complex_, module_, Side::Cochain, n), c2 = assemble(*complex_, module_, Side::Cochain, n + 1);
        auto h1 = assemble(*complex_, module_, Side::Chain, n), h2 = assemble(*complex_, module_, Side::Chain, n + 1);
        dd = dd && c2.multiply(c1).is_zero() && h1.multiply(h2).is_zero();
      }
      checks["dd_zero"] = pass(dd);
    } else {
      bool dd = true;
      for (std::size_t n = 1; n <= n_max; ++n)
        dd = dd && regular_dd_defects(*complex_, Side::Cochain, n).empty() && regular_dd_defects(*complex_, Side::Chain, n).empty();
      checks["dd_zero"] = pass(dd);
    }
    j["checks"] = checks;
    return j;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hochschild (co)homology of differential operator rings via small complexes"};
  std::string config_path, command, out_path, field;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> nmax;
  std::optional<int> cap;
  app.add_option("--config", config_path, "problem description (JSON)")->required();
  app.add_option("--command", command, "validate|cohomology|homology|cup|cap|compare|symmetric")
      ->required()
      ->check(CLI::IsMember({"validate", "cohomology", "homology", "cup", "cap", "compare", "symmetric"}));
  app.add_option("--out", out_path, "write the full JSON report here");
  app.add_option("--seed", seed, "random seed for cup/cap/compare");
  app.add_option("--nmax", nmax, "highest degree");
  app.add_option("--cap", cap, "filtration cap; caps {cap-2, cap} are compared");
  app.add_option("--field", field, "rationals | fp:<p>");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  json report;
  int status = 0;
  try {
    auto config = cfg::load_config(config_path, field.empty() ? std::nullopt : std::optional<std::string>(field));
    if (seed) config.params.seed = *seed;
    if (nmax) {
      if (*nmax > 6) throw cfg::ConfigError("--nmax: at most 6");
      config.params.n_max = *nmax;
    }
    if (cap) {
      if (*cap < 0) throw cfg::ConfigError("--cap: must be non-negative");
      config.params.caps = caps_from_flag(*cap);
    }
    Runner runner(std::move(config), command);
    report = runner.run();
    if (!runner.all_checks_passed()) status = 1;
  } catch (const ValidationFailed& v) {
    report = v.report;
    status = 1;
  } catch (const cfg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = report.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return 2;
    }
    out << text;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << command << ": " << (report.value("valid", false) ? "valid" : "invalid");
  if (report.contains("betti")) std::cout << ", betti " << report["betti"].dump();
  if (report.contains("checks")) std::cout << ", checks " << report["checks"].dump();
  if (report.contains("failures") && !report["failures"].empty()) std::cout << ", " << report["failures"].size() << " failure(s)";
  std::cout << " [" << secs << " s]\n";
  if (out_path.empty()) std::cout << text;
  return status;
}
