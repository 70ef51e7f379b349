#include "blackout/cli.hpp"

#include <sys/resource.h>

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "blackout/error.hpp"
#include "blackout/evaluation.hpp"
#include "blackout/learner.hpp"
#include "blackout/server.hpp"
#include "blackout/simulator.hpp"
#include "blackout/sokoban.hpp"
#include "blackout/trace.hpp"

namespace blackout::cli {

namespace {

/// Input problems surface as exit status 2.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write '" + path + "'");
}

pddl::Domain load_domain(const std::string& path) { return pddl::parse_domain(read_file(path)); }

double peak_rss_mb() {
  rusage usage{};
  getrusage(RUSAGE_SELF, &usage);
  return static_cast<double>(usage.ru_maxrss) / 1024.0;  // KiB on Linux
}

pddl::Problem load_problem(const std::string& path, const pddl::Domain& domain) {
  const std::string text = read_file(path);
  if (std::filesystem::path(path).extension() == ".sok") {
    auto level = sokoban::parse_level(text, std::filesystem::path(path).stem().string());
    return sokoban::compile_level(level, domain.name);
  }
  return pddl::parse_problem(text, domain);
}

int cmd_learn(const std::string& domain_path, const std::vector<std::string>& trace_paths, int stage,
              const std::string& out_path, std::ostream& out) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const pddl::Domain domain = load_domain(domain_path);
  std::vector<trace::Trajectory> traces;
  for (const auto& p : trace_paths) traces.push_back(trace::parse_trace(read_file(p), domain));
  const auto t_parse = clock::now();

  auto seconds = [](auto a, auto b) { return std::chrono::duration<double>(b - a).count(); };
  learn::CandidateModel model = learn::step1_successful(traces, domain);
  auto t_prev = clock::now();
  out << "stage 1: " << seconds(t_parse, t_prev) << " s\n";
  if (stage >= 2) {
    learn::Step2Result s2 = learn::step2_failed(traces, domain, std::move(model));
    auto now = clock::now();
    out << "stage 2: " << seconds(t_prev, now) << " s (" << s2.records.size() << " failed actions)\n";
    t_prev = now;
    if (stage >= 3) {
      learn::Step3Result s3 = learn::step3_invariants(traces, domain, std::move(s2.model), s2.records);
      now = clock::now();
      out << "stage 3: " << seconds(t_prev, now) << " s (" << s3.invariants.size() << " invariants)\n";
      for (const auto& d : s3.diagnostics) out << "diagnostic: " << d << "\n";
      model = std::move(s3.model);
    } else {
      model = std::move(s2.model);
    }
  }
  write_file(out_path, pddl::print_domain(model.to_domain(domain)));
  out << "total: " << seconds(t0, clock::now()) << " s (parse " << seconds(t0, t_parse) << " s)\n";
  out << "peak memory: " << peak_rss_mb() << " MB\n";
  return 0;
}

int cmd_simulate(const std::string& domain_path, const std::string& problem_path, const std::string& plan_path,
                 const std::string& out_path, bool stop_on_failure, std::ostream& out) {
  const pddl::Domain domain = load_domain(domain_path);
  const pddl::Problem problem = load_problem(problem_path, domain);
  const auto plan = pddl::parse_plan(read_file(plan_path));
  const trace::Trajectory t = sim::run_plan(problem, plan, domain, stop_on_failure);
  write_file(out_path, trace::write_trace(t));
  out << t.size() << " transitions, " << t.failure_count() << " failed, goal "
      << (sim::satisfies(t.final_state(), problem.goal) ? "reached" : "not reached") << "\n";
  return 0;
}

int cmd_play(const std::string& domain_path, const std::string& level_path, const std::string& moves,
             const std::string& out_path, std::ostream& out) {
  const pddl::Domain domain = load_domain(domain_path);
  const pddl::Problem problem = load_problem(level_path, domain);
  trace::Trajectory t(problem.objects, problem.init);
  for (char c : moves) {
    std::optional<sokoban::Direction> dir;
    switch (std::tolower(static_cast<unsigned char>(c))) {
      case 'u': dir = sokoban::Direction::kUp; break;
      case 'd': dir = sokoban::Direction::kDown; break;
      case 'l': dir = sokoban::Direction::kLeft; break;
      case 'r': dir = sokoban::Direction::kRight; break;
      case ' ':
      case '\n':
      case '\t':
      case ',': continue;
      default: throw InputError(std::string("unknown move '") + c + "' (use u, d, l, r)");
    }
    auto action = sokoban::resolve_intent(t.final_state(), *dir, domain, problem);
    auto r = sim::step(t.final_state(), action, domain);
    if (r.ok)
      t.append_ok(std::move(action), std::move(r.next));
    else
      t.append_failed(std::move(action));
  }
  write_file(out_path, trace::write_trace(t));
  out << t.size() << " transitions, " << t.failure_count() << " failed, goal "
      << (sim::satisfies(t.final_state(), problem.goal) ? "reached" : "not reached") << "\n";
  return 0;
}

// Several models are reported one after another, e.g. the output of each
// learning stage.
int cmd_eval(const std::string& truth_path, const std::vector<std::string>& model_paths, const std::string& format,
             std::ostream& out) {
  const pddl::Domain truth = load_domain(truth_path);
  std::vector<eval::ProficiencyReport> reports;
  for (const auto& path : model_paths) reports.push_back(eval::report(load_domain(path), truth));
  if (format == "json") {
    if (reports.size() == 1) {
      out << eval::format_json(reports.front());
    } else {
      nlohmann::json all = nlohmann::json::array();
      for (std::size_t i = 0; i < reports.size(); ++i)
        all.push_back({{"model", model_paths[i]}, {"report", nlohmann::json::parse(eval::format_json(reports[i]))}});
      out << all.dump(2) << "\n";
    }
    return 0;
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports.size() > 1) out << (i ? "\n" : "") << "model: " << model_paths[i] << "\n";
    out << eval::format_text(reports[i]);
  }
  return 0;
}

int cmd_export_fama(const std::string& in_path, const std::string& out_path, const std::string& domain_path,
                    std::ostream& out) {
  const std::string text = read_file(in_path);
  const trace::Trajectory t =
      domain_path.empty() ? trace::parse_trace(text) : trace::parse_trace(text, load_domain(domain_path));
  write_file(out_path, trace::write_fama(t));
  out << "kept " << (t.size() - t.failure_count()) << " of " << t.size() << " transitions\n";
  return 0;
}

int cmd_compile_level(const std::string& in_path, const std::string& out_path, const std::string& domain_path,
                      std::ostream& out) {
  const pddl::Domain domain = load_domain(domain_path);
  const pddl::Problem problem = load_problem(in_path, domain);
  write_file(out_path, pddl::print_problem(problem, domain));
  out << problem.objects.size() << " objects, " << problem.init.size() << " init atoms\n";
  return 0;
}

int cmd_serve(const std::string& domain_path, const std::string& levels_dir, const std::string& bind,
              const std::string& static_dir, std::ostream& out) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw InputError("--bind expects HOST:PORT");
  const std::string host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw InputError("invalid port in '" + bind + "'");
  }
  pddl::Domain domain = load_domain(domain_path);
  auto levels = server::load_levels(levels_dir, domain);
  if (levels.empty()) throw InputError("no .sok levels in '" + levels_dir + "'");
  server::SessionManager sessions(std::move(domain), std::move(levels));
  server::Api api(sessions);
  server::HttpServer http(api, static_dir);
  port = http.bind(host, port);
  out << "serving " << sessions.levels().size() << " levels on http://" << host << ":" << port << "\n" << std::flush;
  http.listen();
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn player action models from Sokoban play traces and score per-mechanic proficiency"};
  app.require_subcommand(1);

  std::string domain, out_path, problem, plan, truth, format = "text", levels, bind = "127.0.0.1:8080";
  std::string static_dir, in_path, level, moves;
  std::vector<std::string> traces, models;
  int stage = 3;
  bool stop_on_failure = false;

  auto* learn = app.add_subcommand("learn", "Learn an action model from traces");
  learn->add_option("--domain", domain, "Domain signature (PDDL)")->required();
  learn->add_option("--stage", stage, "Last stage to run (1, 2 or 3)")->check(CLI::Range(1, 3));
  learn->add_option("--out", out_path, "Output model (PDDL)")->required();
  learn->add_option("traces", traces, "Trace files")->required();

  auto* simulate = app.add_subcommand("simulate", "Execute a plan and record its trace");
  simulate->add_option("--domain", domain)->required();
  simulate->add_option("--problem", problem, "PDDL problem or .sok level")->required();
  simulate->add_option("--plan", plan, "Plan file, one (action args...) per line")->required();
  simulate->add_option("--out", out_path)->required();
  simulate->add_flag("--stop-on-failure", stop_on_failure);

  auto* play = app.add_subcommand("play", "Replay keypresses (u/d/l/r) on a level and record the trace");
  play->add_option("--domain", domain)->required();
  play->add_option("--level", level, ".sok level or PDDL problem")->required();
  play->add_option("--moves", moves, "Keypress string, e.g. \"rrdlu\"")->required();
  play->add_option("--out", out_path)->required();

  auto* evaluate = app.add_subcommand("eval", "Score a learned model against the ground truth");
  evaluate->add_option("--truth", truth)->required();
  evaluate->add_option("--model", models, "Learned model(s); repeat to compare")->required();
  evaluate->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  auto* serve = app.add_subcommand("serve", "Serve the play API");
  serve->add_option("--domain", domain)->required();
  serve->add_option("--levels", levels, "Directory of .sok levels")->required();
  serve->add_option("--bind", bind, "HOST:PORT");
  serve->add_option("--static", static_dir, "Directory of client files to serve at /");

  auto* fama = app.add_subcommand("export-fama", "Strip failed actions for failure-free learners");
  fama->add_option("in", in_path)->required();
  fama->add_option("out", out_path)->required();
  fama->add_option("--domain", domain, "Validate against this domain");

  auto* compile = app.add_subcommand("compile-level", "Convert a .sok level to a PDDL problem");
  compile->add_option("in", in_path)->required();
  compile->add_option("out", out_path)->required();
  compile->add_option("--domain", domain)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*learn) return cmd_learn(domain, traces, stage, out_path, out);
    if (*simulate) return cmd_simulate(domain, problem, plan, out_path, stop_on_failure, out);
    if (*play) return cmd_play(domain, level, moves, out_path, out);
    if (*evaluate) return cmd_eval(truth, models, format, out);
    if (*serve) return cmd_serve(domain, levels, bind, static_dir, out);
    if (*fama) return cmd_export_fama(in_path, out_path, domain, out);
    if (*compile) return cmd_compile_level(in_path, out_path, domain, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace blackout::cli
