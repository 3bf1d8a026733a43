// losr: command-line front end for the LOSR certification engine.
//
// Exit codes: 0 = feasible / valid, 2 = certified infeasible, 1 = error.
// All output is deterministic JSON on stdout; diagnostics go to stderr.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "losr/inequalities.hpp"
#include "losr/io.hpp"
#include "losr/quantum.hpp"

namespace {

using namespace losr;

constexpr int kExitFeasible = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    throw IoError("parse error in '" + path + "': " + e.what());
  }
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write '" + out_path + "'");
  out << j.dump(2) << "\n";
}

/// Parse a noise value given either as an exact rational ("17/20") or as a
/// decimal literal (converted exactly to its dyadic rational value).
RootTwo parse_noise(const std::string& s) {
  if (s.find('/') != std::string::npos || s.find('.') == std::string::npos) {
    try {
      return RootTwo(Rational(s));
    } catch (const std::exception&) {
      throw IoError("malformed noise value: '" + s + "'");
    }
  }
  double v = 0;
  try {
    v = std::stod(s);
  } catch (const std::exception&) {
    throw IoError("malformed noise value: '" + s + "'");
  }
  return RootTwo(detail::rational_from_double(v));
}

std::vector<Inflation> representatives(const Scenario& scn, int order,
                                       unsigned long long max_raw_wirings) {
  std::vector<Inflation> out;
  for (const auto& cls : enumerate_inflations(scn, order, max_raw_wirings).classes)
    out.push_back(Inflation(&scn, order, cls.representative.wiring()));
  return out;
}

Json certificate_summary(const Certificate& cert) {
  return Json{{"num_duals", cert.duals.size()},
              {"num_witness_terms", cert.witness_coeffs.size()},
              {"verification_value", cert.verification_value.str()}};
}

int run_inflations(int n, int order, unsigned long long max_raw_wirings) {
  const Scenario scn = canonical_scenario(n, ghz_party_specs(n));
  const auto enumeration = enumerate_inflations(scn, order, max_raw_wirings);
  Json j;
  j["type"] = "inflations";
  j["n"] = n;
  j["order"] = order;
  j["raw_wiring_count"] = enumeration.raw_wiring_count;
  j["num_classes"] = enumeration.classes.size();
  Json classes = Json::array();
  for (const auto& cls : enumeration.classes)
    classes.push_back({{"multiplicity", cls.multiplicity},
                       {"raw_wirings", cls.raw_wirings},
                       {"wiring", cls.representative.wiring()}});
  j["classes"] = std::move(classes);
  emit(j, "");
  return kExitFeasible;
}

int run_oracle(const std::string& family, int n, const std::string& noise,
               int m, const std::string& out_path) {
  Json doc;
  if (family == "ghz") {
    doc = behavior_to_json(ghz_behavior<RootTwo>(n, parse_noise(noise)));
  } else if (family == "w") {
    if (n != 3) throw IoError("the W oracle is tripartite; use --n 3");
    doc = behavior_to_json(w_behavior(m));
  } else if (family == "lhvm") {
    if (n != 3) throw IoError("the LHVM oracle is tripartite; use --n 3");
    doc = behavior_to_json(svetlichny_lhvm_behavior<RootTwo>());
  } else {
    throw IoError("unknown family '" + family + "' (expected ghz|w|lhvm)");
  }
  emit(doc, out_path);
  return kExitFeasible;
}

int run_certify(const std::string& behavior_path, int order, bool exact,
                const std::string& cert_out, const CertifyOptions& base_opt,
                unsigned long long max_raw_wirings) {
  const Json doc = load_json(behavior_path);
  if (behavior_mode(doc) == "float")
    throw IoError(
        "certify requires an exactly nonsignalling rational-mode behavior; "
        "float-mode input is rejected rather than silently rationalized");
  const auto p = behavior_from_json_exact(doc);
  const Scenario scn = canonical_scenario(p.num_parties(), p.parties());
  const auto inflations = representatives(scn, order, max_raw_wirings);
  CertifyOptions opt = base_opt;
  opt.exact = exact;
  const auto res = certify(scn, p, inflations, opt);

  Json j;
  j["type"] = "certify_result";
  j["verdict"] = res.verdict == Verdict::Infeasible ? "infeasible" : "feasible";
  j["order"] = order;
  j["num_inflations"] = inflations.size();
  j["num_rows"] = res.num_rows;
  j["num_vars"] = res.num_vars;
  j["local_decomposition"] = res.local_decomposition;
  j["lp_iterations"] = res.iterations;
  if (res.certificate) j["certificate"] = certificate_summary(*res.certificate);
  emit(j, "");

  if (res.certificate && !cert_out.empty())
    emit(certificate_to_json(*res.certificate), cert_out);
  return res.verdict == Verdict::Infeasible ? kExitInfeasible : kExitFeasible;
}

int run_verify(const std::string& cert_path, const std::string& behavior_path,
               int order, unsigned long long max_raw_wirings) {
  const auto cert = certificate_from_json(load_json(cert_path));
  const auto p = behavior_from_json_exact(load_json(behavior_path));
  const Scenario scn = canonical_scenario(p.num_parties(), p.parties());
  const auto inflations = representatives(scn, order, max_raw_wirings);
  const auto sys = compile(scn, p, inflations);

  bool valid = false;
  std::string reason;
  try {
    valid = verify_certificate(cert, sys, &p);
    if (!valid) reason = "exact certificate conditions are violated";
  } catch (const CertifyError& e) {
    reason = e.what();
  }

  Json j;
  j["type"] = "verify_result";
  j["valid"] = valid;
  if (valid)
    j["verification_value"] = cert.verification_value.str();
  else
    j["reason"] = reason;
  emit(j, "");
  return valid ? kExitFeasible : kExitError;
}

int run_sweep(const std::string& family, int n, int order, double tol,
              const std::string& cert_out, const CertifyOptions& opt) {
  if (family != "ghz") throw IoError("sweep supports only --family ghz");
  const auto sweep = sweep_noise(n, order, tol, opt);
  Json j;
  j["type"] = "sweep_result";
  j["family"] = family;
  j["n"] = n;
  j["order"] = order;
  j["tol"] = tol;
  j["noise_feasible"] = sweep.noise_feasible;
  j["noise_infeasible"] = sweep.noise_infeasible;
  j["fidelity_feasible"] = sweep.fidelity_feasible;
  j["fidelity_infeasible"] = sweep.fidelity_infeasible;
  j["queries"] = sweep.queries;
  j["certificate"] = certificate_summary(sweep.certificate);
  emit(j, "");
  if (!cert_out.empty()) emit(certificate_to_json(sweep.certificate), cert_out);
  return kExitFeasible;
}

int run_eval(const std::string& inequality, const std::string& behavior_path,
             int m) {
  const Json doc = load_json(behavior_path);
  const bool exact_mode = behavior_mode(doc) == "rational";
  const auto b = behavior_from_json_float(doc);
  const int n = b.num_parties();

  Json j;
  j["type"] = "eval_result";
  j["inequality"] = inequality;
  if (inequality == "ghz") {
    j["slack"] = ghz_inequality_slack(b, n);
    j["i_bell_conditioned"] = i_bell_conditioned(b, collective_charlie_event(n));
    j["i_same"] = i_same(b, n);
    if (exact_mode) {
      const auto be = behavior_from_json_exact(doc);
      j["slack_exact"] = ghz_inequality_slack(be, n).str();
    }
  } else if (inequality == "bell") {
    j["i_bell_conditioned"] = i_bell_conditioned(b, collective_charlie_event(n));
  } else if (inequality == "same") {
    j["i_same"] = i_same(b, n);
  } else if (inequality == "bkp") {
    // Tripartite behaviors are scored on the steered pair: condition on the
    // last party outputting 0 at its rectilinear input 0.
    std::optional<ParityEvent> cond;
    if (n >= 3) cond = ParityEvent{{{n - 1, 0}}, +1};
    j["m"] = m;
    j["bkp_score"] = bkp_score(b, m, cond);
    j["conditioned_on_last_party"] = cond.has_value();
  } else {
    throw IoError("unknown inequality '" + inequality +
                  "' (expected ghz|bkp|same|bell)");
  }
  emit(j, "");
  return kExitFeasible;
}

int run_demo_shared_bit(int n) {
  const auto res = certify_shared_bit(n);
  Json j;
  j["type"] = "shared_bit_demo";
  j["n"] = n;
  j["num_rows"] = res.num_rows;
  j["num_vars"] = res.num_vars;
  j["verdict"] = res.verdict == Verdict::Infeasible ? "infeasible" : "feasible";
  if (res.certificate) {
    j["certificate"] = certificate_to_json(*res.certificate);
    j["note"] =
        "the pairwise 1/2-correlated chain admits no single joint source; "
        "the certificate multipliers above prove it exactly";
  }
  emit(j, "");
  return res.verdict == Verdict::Infeasible ? kExitInfeasible : kExitFeasible;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"losr: certification of genuine LOSR multipartite nonlocality"};
  app.require_subcommand(1);

  unsigned long long max_raw_wirings = 1'000'000ULL;
  long long max_lp_vars = 1'000'000;
  long long seed = 0;  // reserved; every code path is deterministic
  app.add_option("--max-raw-wirings", max_raw_wirings,
                 "cap on raw nonfanout wirings during enumeration");
  app.add_option("--max-lp-vars", max_lp_vars, "cap on LP variables");
  app.add_option("--seed", seed, "reserved (all computations are deterministic)");

  // inflations
  auto* sc_infl = app.add_subcommand("inflations", "enumerate nonfanout inflations");
  int infl_n = 3, infl_order = 2;
  sc_infl->add_option("--n", infl_n, "number of parties")->required();
  sc_infl->add_option("--order", infl_order, "inflation order K")->required();

  // oracle
  auto* sc_oracle = app.add_subcommand("oracle", "emit a quantum/model behavior");
  std::string oracle_family, oracle_noise = "1", oracle_out;
  int oracle_n = 3, oracle_m = 2;
  sc_oracle->add_option("--family", oracle_family, "ghz|w|lhvm")->required();
  sc_oracle->add_option("--n", oracle_n, "number of parties");
  sc_oracle->add_option("--noise", oracle_noise,
                        "GHZ visibility p (rational or decimal)");
  sc_oracle->add_option("--m", oracle_m, "number of BKP settings (W family)");
  sc_oracle->add_option("--out", oracle_out, "output file (default stdout)");

  // certify
  auto* sc_cert = app.add_subcommand("certify", "decide (N-1)-partite realizability");
  std::string cert_behavior, cert_out;
  int cert_order = 2;
  bool cert_exact = false;
  sc_cert->add_option("--behavior", cert_behavior, "behavior JSON file")->required();
  sc_cert->add_option("--order", cert_order, "inflation order K")->required();
  sc_cert->add_flag("--exact", cert_exact,
                    "use exact arithmetic for feasible verdicts too");
  sc_cert->add_option("--cert-out", cert_out, "write the certificate here");

  // verify
  auto* sc_verify = app.add_subcommand("verify", "check a certificate exactly");
  std::string verify_cert, verify_behavior;
  int verify_order = 2;
  sc_verify->add_option("--cert", verify_cert, "certificate JSON file")->required();
  sc_verify->add_option("--behavior", verify_behavior, "behavior JSON file")->required();
  sc_verify->add_option("--order", verify_order, "inflation order K")->required();

  // sweep
  auto* sc_sweep = app.add_subcommand("sweep", "bisect the noise threshold");
  std::string sweep_family = "ghz", sweep_cert_out;
  int sweep_n = 3, sweep_order = 2;
  double sweep_tol = 0.002;
  sc_sweep->add_option("--family", sweep_family, "behavior family (ghz)");
  sc_sweep->add_option("--n", sweep_n, "number of parties")->required();
  sc_sweep->add_option("--order", sweep_order, "inflation order K")->required();
  sc_sweep->add_option("--tol", sweep_tol, "bracket width tolerance")->required();
  sc_sweep->add_option("--cert-out", sweep_cert_out,
                       "write the threshold certificate here");

  // eval
  auto* sc_eval = app.add_subcommand("eval", "evaluate a closed-form inequality");
  std::string eval_ineq, eval_behavior;
  int eval_m = 2;
  sc_eval->add_option("--inequality", eval_ineq, "ghz|bkp|same|bell")->required();
  sc_eval->add_option("--behavior", eval_behavior, "behavior JSON file")->required();
  sc_eval->add_option("--m", eval_m, "number of BKP settings");

  // demo
  auto* sc_demo = app.add_subcommand("demo", "built-in demonstrations");
  auto* sc_demo_sb = sc_demo->add_subcommand(
      "shared-bit", "N-way shared randomness vs pairwise sources");
  int demo_n = 4;
  sc_demo_sb->add_option("--n", demo_n, "chain length")->required();
  sc_demo->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  CertifyOptions opt;
  opt.max_lp_vars = max_lp_vars;

  try {
    if (*sc_infl) return run_inflations(infl_n, infl_order, max_raw_wirings);
    if (*sc_oracle)
      return run_oracle(oracle_family, oracle_n, oracle_noise, oracle_m, oracle_out);
    if (*sc_cert)
      return run_certify(cert_behavior, cert_order, cert_exact, cert_out, opt,
                         max_raw_wirings);
    if (*sc_verify)
      return run_verify(verify_cert, verify_behavior, verify_order, max_raw_wirings);
    if (*sc_sweep)
      return run_sweep(sweep_family, sweep_n, sweep_order, sweep_tol,
                       sweep_cert_out, opt);
    if (*sc_eval) return run_eval(eval_ineq, eval_behavior, eval_m);
    if (*sc_demo_sb) return run_demo_shared_bit(demo_n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
