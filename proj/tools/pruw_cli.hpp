// Copyright 2026 The pruw authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Kept in a header so tests can drive run_cli with
// in-memory streams.

#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <memory>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pruw/pruw.hpp"

namespace pruw::cli {

/// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kMismatch = 1;
inline constexpr int kConfigError = 2;

/// Resolved settings for every command (unused fields keep their defaults).
struct RunConfig {
  int scheme_case = 1;
  std::size_t n = 6;
  std::size_t p = 12;
  std::size_t b = 3;
  std::vector<std::size_t> b_list{1, 2, 3, 4, 6};
  double r = 0.25;
  double r_prime = 0.25;
  std::size_t pr = 3;
  std::uint64_t q = kDefaultModulus;
  std::uint64_t seed = 1;
  std::size_t rounds = 1;
  std::size_t users = 1;
  std::string out;
  bool oracle = false;
  bool sweep_b = false;
};

/// Errors caused by what the caller asked for, as opposed to failed checks.
inline bool is_config_error(Errc c) noexcept {
  switch (c) {
    case Errc::invalid_case:
    case Errc::inadmissible_n:
    case Errc::config_error:
    case Errc::infeasible_enumeration:
    case Errc::invalid_b:
    case Errc::malformed_snapshot:
      return true;
    default:
      return false;
  }
}

namespace detail {

inline SchemeParams params_of(const RunConfig& c) {
  return SchemeParams::from_rates(scheme_from_int(c.scheme_case), c.n, c.p, c.b, c.r,
                                  c.r_prime, c.q);
}

inline void header(std::ostream& os, const std::string& cmd, const RunConfig& c,
                   const SchemeParams& p) {
  os << "# pruw " << cmd << " case=" << c.scheme_case << " N=" << p.num_databases()
     << " P=" << p.num_subpackets() << " B=" << p.num_segments() << " ell=" << p.ell()
     << " r=" << c.r << " r'=" << c.r_prime << " Pr=" << p.uplink_count()
     << " Pr'=" << p.downlink_count() << " q=" << p.modulus() << " seed=" << c.seed;
  if (cmd == "simulate") os << " rounds=" << c.rounds << " users=" << c.users;
  os << '\n';
}

/// Opens `path` for writing, creating parent directories.
inline std::ofstream open_out(const std::filesystem::path& path,
                              std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, mode);
  PRUW_ENFORCE(f.good(), Errc::config_error, "cannot write " + path.string());
  return f;
}

inline std::vector<LocalUpdate> updates_for(const World& w, std::size_t users,
                                            std::mt19937_64& rng) {
  std::vector<LocalUpdate> ups;
  for (std::size_t u = 0; u < users; ++u)
    ups.push_back(random_local_update(w.params, w.cfg.field(), rng));
  return ups;
}

}  // namespace detail

/// Runs `rounds` rounds, writes transcript.txt and costs.json under c.out
/// (a directory), and verifies the full model against the oracle.
inline int cmd_simulate(const RunConfig& c, std::ostream& out) {
  SchemeParams p = detail::params_of(c);
  detail::header(out, "simulate", c, p);
  World w = make_world(p, c.seed);
  std::mt19937_64 rng(pruw::detail::stream_seed(c.seed, 4));

  const std::filesystem::path dir = c.out.empty() ? "pruw-sim" : c.out;
  std::ofstream transcript = detail::open_out(dir / "transcript.txt");
  transcript << "# pruw transcript v1\n";
  detail::header(transcript, "simulate", c, p);

  std::size_t read_mismatches = 0;
  std::optional<CostReport> report;
  for (std::size_t i = 0; i < c.rounds; ++i) {
    auto ups = detail::updates_for(w, c.users, rng);
    RoundTranscript t = run_round(w, ups);
    write_transcript(transcript, t);
    read_mismatches += t.read_mismatches;
    report = measure_round(t, p, w.databases);
    out << "round " << t.round << ": " << t.reads.size() << " reads, " << t.writes.size()
        << " writes, " << t.read_mismatches << " read mismatches\n";
  }
  VerifyReport v = verify_world(w);
  out << "verify: " << v.checked << " subpackets checked, " << v.mismatches.size()
      << " mismatches\n";
  if (report) {
    std::ofstream costs = detail::open_out(dir / "costs.json");
    costs << cost_report_json(*report, p).dump(2) << '\n';
  }
  out << "wrote " << (dir / "transcript.txt").string() << '\n';
  return v.ok() && read_mismatches == 0 ? kOk : kMismatch;
}

/// Leakage curve for uniform sparse sets; with `oracle`, every row is also
/// checked against brute-force mutual information.
inline int cmd_leakage(const RunConfig& c, std::ostream& out) {
  out << "# pruw leakage P=" << c.p << " Pr=" << c.pr << " B=";
  for (std::size_t i = 0; i < c.b_list.size(); ++i) out << (i ? "," : "") << c.b_list[i];
  out << " oracle=" << (c.oracle ? "on" : "off") << '\n';
  auto rows = leakage_curve(c.p, c.pr, c.b_list);

  bool ok = true;
  if (c.oracle) {
    auto base = PatternDistribution::uniform(c.p, 1, c.pr);
    for (const auto& row : rows) {
      auto d = base.with_segments(row.segments);
      auto within = brute_force_mi(d, PermutationMode::within_only);
      auto both = brute_force_mi(d, PermutationMode::within_and_inter);
      bool hat_ok = within.exact && row.h_hat.exact ? *within.exact == *row.h_hat.exact
                                                    : within.bits == row.h_hat.bits;
      bool tilde_ok = both.exact && row.h_tilde.exact ? *both.exact == *row.h_tilde.exact
                                                      : both.bits == row.h_tilde.bits;
      out << "oracle B=" << row.segments << ": hat " << (hat_ok ? "equal" : "MISMATCH")
          << ", tilde " << (tilde_ok ? "equal" : "MISMATCH") << '\n';
      ok = ok && hat_ok && tilde_ok;
    }
  }
  if (c.out.empty()) {
    write_leakage_csv(out, rows);
  } else {
    std::ofstream f = detail::open_out(c.out);
    write_leakage_csv(f, rows);
    out << "wrote " << c.out << '\n';
  }
  return ok ? kOk : kMismatch;
}

/// One measured round against the closed forms. With `sweep_b`, repeats for
/// every divisor B < P and also requires identical communication costs.
inline int cmd_costs(const RunConfig& c, std::ostream& out) {
  std::vector<std::size_t> bs{c.b};
  if (c.sweep_b) {
    bs.clear();
    for (std::size_t b = 1; b < c.p; ++b)
      if (c.p % b == 0) bs.push_back(b);
  }
  nlohmann::json all = nlohmann::json::array();
  bool ok = true;
  std::optional<CostReport> first;
  for (std::size_t b : bs) {
    RunConfig cb = c;
    cb.b = b;
    SchemeParams p = detail::params_of(cb);
    detail::header(out, "costs", cb, p);
    World w = make_world(p, c.seed);
    std::mt19937_64 rng(pruw::detail::stream_seed(c.seed, 4));
    auto ups = detail::updates_for(w, std::max<std::size_t>(c.users, 1), rng);
    CostReport rep = measure_round(run_round(w, ups), p, w.databases);
    bool same = !first || (rep.read == first->read && rep.write == first->write);
    if (!first) first = rep;
    out << "read " << (rep.read == rep.read_formula ? "equal" : "MISMATCH") << ", write "
        << (rep.write == rep.write_formula ? "equal" : "MISMATCH") << ", storage "
        << (rep.storage_matches() ? "equal" : "MISMATCH") << ", storage total "
        << rep.storage_formula.total() << ' ' << rep.storage_order << '\n';
    if (!same) out << "communication cost changed with B=" << b << '\n';
    ok = ok && rep.costs_match() && rep.storage_matches() && same;
    all.push_back(cost_report_json(rep, p));
  }
  const nlohmann::json doc = all.size() == 1 ? all[0] : all;
  if (c.out.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    std::ofstream f = detail::open_out(c.out);
    f << doc.dump(2) << '\n';
    out << "wrote " << c.out << '\n';
  }
  return ok ? kOk : kMismatch;
}

/// Initializes a world, checks that every subpacket decodes, and saves the
/// databases and permutations as a binary snapshot.
inline int cmd_init(const RunConfig& c, std::ostream& out) {
  SchemeParams p = detail::params_of(c);
  detail::header(out, "init", c, p);
  World w = make_world(p, c.seed);
  VerifyReport v = verify_world(w);
  const std::string path = c.out.empty() ? "world.snap" : c.out;
  {
    std::ofstream f = detail::open_out(path, std::ios::out | std::ios::binary);
    write_snapshot(f, Snapshot{p, w.cfg, c.seed, w.permutations, w.databases});
  }
  out << "verify: " << v.checked << " subpackets checked, " << v.mismatches.size()
      << " mismatches\nwrote " << path << '\n';
  return v.ok() ? kOk : kMismatch;
}

/// Oracle-checked rounds for all four schemes at their smallest N.
inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  bool ok = true;
  for (int k = 1; k <= 4; ++k) {
    RunConfig ck = c;
    ck.scheme_case = k;
    ck.n = minimal_databases(scheme_from_int(k));
    SchemeParams p = detail::params_of(ck);
    World w = make_world(p, c.seed);
    std::mt19937_64 rng(pruw::detail::stream_seed(c.seed, 4));
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < c.rounds; ++i) {
      auto ups = detail::updates_for(w, c.users, rng);
      mismatches += run_round(w, ups).read_mismatches;
    }
    VerifyReport v = verify_world(w);
    mismatches += v.mismatches.size();
    CostReport rep = measure_round(run_round(w, detail::updates_for(w, 1, rng)), p,
                                   w.databases);
    bool costs = rep.costs_match() && rep.storage_matches();
    out << "case " << k << " N=" << ck.n << ": " << mismatches << " mismatches, costs "
        << (costs ? "equal" : "MISMATCH") << '\n';
    ok = ok && mismatches == 0 && costs;
  }
  return ok ? kOk : kMismatch;
}

namespace detail {

inline void add_scheme_options(CLI::App& cmd, RunConfig& c) {
  cmd.add_option("--case", c.scheme_case, "Scheme 1..4")->capture_default_str();
  cmd.add_option("--N", c.n, "Number of databases")->capture_default_str();
  cmd.add_option("--P", c.p, "Number of subpackets")->capture_default_str();
  cmd.add_option("--B", c.b, "Number of segments")->capture_default_str();
  cmd.add_option("--r", c.r, "Uplink sparsification rate")->capture_default_str();
  cmd.add_option("--r-prime", c.r_prime, "Downlink sparsification rate")
      ->capture_default_str();
  cmd.add_option("--q", c.q, "Field modulus (prime)")->capture_default_str();
  cmd.add_option("--seed", c.seed, "Random seed")->capture_default_str();
}

}  // namespace detail

/// Command tree bound to one RunConfig.
class CommandLine {
 public:
  CommandLine() {
    app_.require_subcommand(1);

    sim_ = app_.add_subcommand("simulate", "Run rounds and verify against the oracle");
    detail::add_scheme_options(*sim_, c_);
    sim_->add_option("--rounds", c_.rounds, "Rounds to run")->capture_default_str();
    sim_->add_option("--users", c_.users, "Users per round")->capture_default_str();
    sim_->add_option("--out", c_.out, "Output directory (default pruw-sim)");

    leak_ = app_.add_subcommand("leakage", "Index leakage for uniform sparse sets");
    leak_->add_option("--P", c_.p, "Number of subpackets")->capture_default_str();
    leak_->add_option("--Pr", c_.pr, "Sparse set size")->capture_default_str();
    leak_->add_option("--B", c_.b_list, "Segment counts")->delimiter(',');
    leak_->add_flag("--oracle", c_.oracle, "Cross-check with brute-force mutual information");
    leak_->add_option("--out", c_.out, "CSV path (default stdout)");

    costs_ = app_.add_subcommand("costs", "Measured costs against closed forms");
    detail::add_scheme_options(*costs_, c_);
    costs_->add_option("--users", c_.users, "Users in the measured round")
        ->capture_default_str();
    costs_->add_flag("--sweep-b", c_.sweep_b, "Repeat for every divisor B < P");
    costs_->add_option("--out", c_.out, "JSON path (default stdout)");

    init_ = app_.add_subcommand("init", "Initialize databases and save a snapshot");
    detail::add_scheme_options(*init_, c_);
    init_->add_option("--out", c_.out, "Snapshot path (default world.snap)");

    verify_ = app_.add_subcommand("verify", "Oracle checks for all schemes");
    verify_->add_option("--P", c_.p, "Number of subpackets")->capture_default_str();
    verify_->add_option("--B", c_.b, "Number of segments")->capture_default_str();
    verify_->add_option("--r", c_.r, "Uplink sparsification rate")->capture_default_str();
    verify_->add_option("--r-prime", c_.r_prime, "Downlink sparsification rate")
        ->capture_default_str();
    verify_->add_option("--rounds", c_.rounds, "Rounds per scheme")->capture_default_str();
    verify_->add_option("--users", c_.users, "Users per round")->capture_default_str();
    verify_->add_option("--seed", c_.seed, "Random seed")->capture_default_str();

    for (auto* sub : commands())
      sub->add_option("--config", config_, "key = value file; flags take precedence");
  }

  void parse(std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());
    app_.parse(args);
  }

  int run(std::ostream& out) const {
    if (sim_->parsed()) return cmd_simulate(c_, out);
    if (leak_->parsed()) return cmd_leakage(c_, out);
    if (costs_->parsed()) return cmd_costs(c_, out);
    if (init_->parsed()) return cmd_init(c_, out);
    return cmd_verify(c_, out);
  }

  const std::string& config_path() const { return config_; }
  std::string help() const { return app_.help(); }

 private:
  std::vector<CLI::App*> commands() { return {sim_, leak_, costs_, init_, verify_}; }

  CLI::App app_{"Private read-update-write simulator", "pruw"};
  RunConfig c_;
  std::string config_;
  CLI::App* sim_ = nullptr;
  CLI::App* leak_ = nullptr;
  CLI::App* costs_ = nullptr;
  CLI::App* init_ = nullptr;
  CLI::App* verify_ = nullptr;
};

inline bool given_on_command_line(const std::vector<std::string>& args,
                                  const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

/// `--key=value` arguments for every config file entry not already given
/// as a flag.
inline std::vector<std::string> config_args(const std::string& path,
                                            const std::vector<std::string>& given) {
  std::ifstream f(path);
  PRUW_ENFORCE(f.good(), Errc::config_error, "cannot read config file " + path);
  std::vector<std::string> out;
  for (const auto& item : CLI::ConfigINI().from_config(f)) {
    if (item.name == "++" || item.name == "--" || item.inputs.empty()) continue;
    if (item.name == "config" || given_on_command_line(given, "--" + item.name)) continue;
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i)
      value += (i ? "," : "") + item.inputs[i];
    out.push_back("--" + item.name + "=" + value);
  }
  return out;
}

/// Parses argv and runs one command. Returns the process exit status.
/// Settings resolve as defaults, then the --config file, then flags.
inline int run_cli(int argc, const char* const* argv, std::ostream& out,
                   std::ostream& err) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  auto cl = std::make_unique<CommandLine>();
  try {
    cl->parse(args);
    if (!cl->config_path().empty()) {
      std::vector<std::string> merged{args.front()};
      auto from_file = config_args(cl->config_path(), args);
      merged.insert(merged.end(), from_file.begin(), from_file.end());
      merged.insert(merged.end(), args.begin() + 1, args.end());
      cl = std::make_unique<CommandLine>();
      cl->parse(merged);
    }
  } catch (const CLI::CallForHelp&) {
    out << cl->help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return e.get_exit_code() == 0 ? kOk : kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    return cl->run(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_config_error(e.code()) ? kConfigError : kMismatch;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace pruw::cli
