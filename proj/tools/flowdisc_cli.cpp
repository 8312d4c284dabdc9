#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "flowdisc/errors.hpp"
#include "flowdisc/io.hpp"
#include "flowdisc/rng.hpp"

using namespace flowdisc;
namespace fs = std::filesystem;

namespace {

constexpr const char* kOutDirEnv = "FLOWDISC_OUT_DIR";

std::string out_dir_from_env() {
  const char* dir = std::getenv(kOutDirEnv);
  return dir ? dir : "";
}

// Writes to `out`, else to $FLOWDISC_OUT_DIR/default_name, else to stdout.
void emit(const std::string& out, const std::string& default_name, const std::string& text) {
  std::string path = out;
  if (path.empty()) {
    const std::string dir = out_dir_from_env();
    if (dir.empty()) {
      std::cout << text;
      return;
    }
    fs::create_directories(dir);
    path = (fs::path(dir) / default_name).string();
  }
  write_text_file(path, text);
  std::cerr << "wrote " << path << "\n";
}

std::vector<int> run_colorer(const std::string& kind, const SignedVectorSequence& seq, DiscMode mode, int limit) {
  if (kind == "brute") return color_brute_force(seq, mode, limit);
  return make_colorer(kind)(seq);
}

std::vector<Rational> scalar_values(const SignedVectorSequence& seq) {
  if (seq.m != 1) throw ValidationError("m: game values must be one-dimensional (m = 1)");
  std::vector<Rational> values;
  for (const auto& v : seq.vectors) values.push_back(v[0]);
  return values;
}

SignedVectorSequence scalar_sequence(const std::vector<Rational>& values) {
  SignedVectorSequence seq;
  seq.m = 1;
  for (const auto& v : values) seq.vectors.push_back({v});
  return seq;
}

// Ternary entries, or Beck-Fiala vectors with integer numerators scaled to l1-norm 1.
SignedVectorSequence random_vectors(const std::string& kind, int n, int m, std::uint64_t seed) {
  if (kind == "two-sparse") return to_sequence(random_two_sparse(n, m, seed), m);
  Rng rng(seed, "instance-gen");
  SignedVectorSequence seq;
  seq.m = m;
  for (int j = 0; j < n; ++j) {
    std::vector<Rational> v(m);
    if (kind == "ternary") {
      for (auto& x : v) x = static_cast<long>(rng.uniform_int(-1, 1));
    } else {
      Rational l1 = 0;
      for (auto& x : v) {
        x = static_cast<long>(rng.uniform_int(-4, 4));
        l1 += abs(x);
      }
      if (l1 > 1) {
        for (auto& x : v) x /= l1;
      }
    }
    seq.vectors.push_back(std::move(v));
  }
  return seq;
}

Json bench_run(const std::string& kind, const SchedulingInstance& inst, const std::string& colorer) {
  if (kind == "maxflow") return maxflow_result_to_json(inst, full_round_maxflow(inst, make_colorer(colorer)));
  auto res = full_round_totalflow(inst, make_colorer(colorer));
  return totalflow_result_to_json(inst, res, schedule_from_integral(inst, res.y));
}

// Runs `count` jobs on a pool of `workers` threads. Results land in slot id,
// so the output order never depends on scheduling. The first exception is
// rethrown after all workers finish.
std::vector<Json> run_pool(int count, int workers, const std::function<Json(int)>& job) {
  std::vector<Json> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int id = next++; id < count; id = next++) {
      try {
        results[id] = job(id);
      } catch (...) {
        errors[id] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < std::max(1, workers); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prefix-discrepancy rounding for flow-time scheduling on unrelated machines"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  std::string out;
  app.add_option("--seed", seed, "Seed for every random stream")->capture_default_str();
  app.add_option("--out,-o", out, "Output file (default: $FLOWDISC_OUT_DIR/<name>, else stdout)");

  const std::vector<std::string> colorers{"brute", "greedy", "floating", "paired", "auto"};
  std::string colorer = "auto";
  int brute_limit = kBruteForceLimit;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate instances, vector sequences and hard game instances");
  std::string gen_kind = "instance";
  RandomInstanceParams params;
  std::string vector_kind = "two-sparse";
  int hard_k = 4;
  std::string base_path;
  int copies = 2;
  std::string period = "1";
  gen->add_option("--kind", gen_kind, "instance, vectors, hard or periodic")
      ->check(CLI::IsMember({"instance", "vectors", "hard", "periodic"}))
      ->capture_default_str();
  gen->add_option("--n", params.n, "Jobs or vectors")->check(CLI::NonNegativeNumber)->capture_default_str();
  gen->add_option("--m", params.m, "Machines or dimension")->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--p-lo", params.p_lo)->capture_default_str();
  gen->add_option("--p-hi", params.p_hi)->capture_default_str();
  gen->add_option("--r-lo", params.r_lo)->capture_default_str();
  gen->add_option("--r-hi", params.r_hi)->capture_default_str();
  gen->add_option("--inf-prob", params.infinity_prob, "Chance of an infinite processing time")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  gen->add_option("--vector-kind", vector_kind, "two-sparse, ternary or beck-fiala")
      ->check(CLI::IsMember({"two-sparse", "ternary", "beck-fiala"}))
      ->capture_default_str();
  gen->add_option("--k", hard_k, "Tree parameter of the hard game instance")->capture_default_str();
  gen->add_option("--base", base_path, "Base instance for --kind periodic")->check(CLI::ExistingFile);
  gen->add_option("--copies", copies)->check(CLI::PositiveNumber)->capture_default_str();
  gen->add_option("--period", period, "Rational release spacing between copies")->capture_default_str();

  // maxflow / totalflow
  std::string instance_path;
  auto* maxflow = app.add_subcommand("maxflow", "Round the assignment LP for maximum flow time");
  maxflow->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
  maxflow->add_option("--colorer", colorer)->check(CLI::IsMember(colorers))->capture_default_str();

  auto* totalflow = app.add_subcommand("totalflow", "Round the time-indexed LP for total flow time");
  std::optional<int> horizon;
  totalflow->add_option("--instance", instance_path)->required()->check(CLI::ExistingFile);
  totalflow->add_option("--colorer", colorer)->check(CLI::IsMember(colorers))->capture_default_str();
  totalflow->add_option("--horizon", horizon, "Slots in the time-indexed LP")->check(CLI::PositiveNumber);

  // color
  std::string vectors_path;
  std::string mode_text = "prefix";
  auto* color = app.add_subcommand("color", "Color a vector sequence and report its discrepancy");
  color->add_option("--vectors", vectors_path)->required()->check(CLI::ExistingFile);
  color->add_option("--mode", mode_text, "prefix, interval or one-sided")
      ->check(CLI::IsMember({"prefix", "interval", "one-sided"}))
      ->capture_default_str();
  color->add_option("--colorer", colorer)->check(CLI::IsMember(colorers))->capture_default_str();
  color->add_option("--limit", brute_limit, "Largest n for brute force")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // game
  auto* game = app.add_subcommand("game", "Play the one-dimensional maker-breaker game");
  std::optional<int> game_hard_k;
  std::string maker_kind = "pairing";
  std::string breaker_kind = "random";
  std::string starter = "breaker";
  bool maker_wait = false, breaker_wait = false;
  double wait_prob = 0.0;
  std::string trace_path;
  game->add_option("--values", vectors_path, "One-dimensional vector file")->check(CLI::ExistingFile);
  game->add_option("--hard-k", game_hard_k, "Play on the hard instance for this k")->check(CLI::PositiveNumber);
  game->add_option("--maker", maker_kind)
      ->check(CLI::IsMember({"pairing", "pairing-signed", "greedy"}))
      ->capture_default_str();
  game->add_option("--breaker", breaker_kind)->check(CLI::IsMember({"tree", "random"}))->capture_default_str();
  game->add_option("--starter", starter)->check(CLI::IsMember({"maker", "breaker"}))->capture_default_str();
  game->add_flag("--maker-wait", maker_wait, "Maker may pass");
  game->add_flag("--breaker-wait", breaker_wait, "Breaker may pass");
  game->add_option("--wait-prob", wait_prob, "Random breaker pass probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  game->add_option("--trace", trace_path, "CSV move trace");
  auto* game_sources = game->add_option_group("source");
  game_sources->add_option(game->get_option("--values"));
  game_sources->add_option(game->get_option("--hard-k"));
  game_sources->require_option(1);

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Move between 2-sparse vectors and max-flow instances");
  std::string reduce_action = "roundtrip";
  std::string assignment_path;
  reduce->add_option("--action", reduce_action, "instance, signs or roundtrip")
      ->check(CLI::IsMember({"instance", "signs", "roundtrip"}))
      ->capture_default_str();
  reduce->add_option("--vectors", vectors_path)->required()->check(CLI::ExistingFile);
  reduce->add_option("--assignment", assignment_path, "File with an \"assignment\" array (for signs)")
      ->check(CLI::ExistingFile);

  // sdp
  auto* sdp = app.add_subcommand("sdp", "Block instances, SDP vectors and Gaussian tail estimates");
  std::string sdp_action = "choose-r";
  std::string delta_text = "1/2";
  std::optional<int> r_override;
  std::string solution_path;
  std::uint64_t samples = 100000;
  int shards = 8;
  int sdp_n = 4, sdp_m = 2;
  sdp->add_option("--action", sdp_action, "choose-r, build, color, verify or mc")
      ->check(CLI::IsMember({"choose-r", "build", "color", "verify", "mc"}))
      ->capture_default_str();
  sdp->add_option("--delta", delta_text, "Rational slack delta > 0")->capture_default_str();
  sdp->add_option("--r", r_override, "Block size (default: choose_r)")->check(CLI::PositiveNumber);
  sdp->add_option("--n", sdp_n)->check(CLI::PositiveNumber)->capture_default_str();
  sdp->add_option("--m", sdp_m)->check(CLI::PositiveNumber)->capture_default_str();
  sdp->add_option("--vectors", vectors_path)->check(CLI::ExistingFile);
  sdp->add_option("--solution", solution_path)->check(CLI::ExistingFile);
  sdp->add_option("--samples", samples)->check(CLI::PositiveNumber)->capture_default_str();
  sdp->add_option("--shards", shards)->check(CLI::PositiveNumber)->capture_default_str();

  // bench / summarize
  auto* bench = app.add_subcommand("bench", "Seeded batch of rounding runs with a summary table");
  std::string bench_kind = "maxflow";
  int count = 10;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string bench_dir;
  bench->add_option("--kind", bench_kind)->check(CLI::IsMember({"maxflow", "totalflow"}))->capture_default_str();
  bench->add_option("--count", count)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--n", params.n)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--m", params.m)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--p-hi", params.p_hi)->capture_default_str();
  bench->add_option("--r-hi", params.r_hi)->capture_default_str();
  bench->add_option("--colorer", colorer)->check(CLI::IsMember(colorers))->capture_default_str();
  bench->add_option("--workers", workers)->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--dir", bench_dir, "Result directory (default: $FLOWDISC_OUT_DIR, else bench_out)");

  auto* summarize_cmd = app.add_subcommand("summarize", "Tabulate result files of one kind");
  std::vector<std::string> result_paths;
  std::string csv_path;
  summarize_cmd->add_option("results", result_paths, "Result JSON files")->check(CLI::ExistingFile);
  summarize_cmd->add_option("--csv", csv_path, "Also write the CSV table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) {
      params.seed = stream_seed(seed, "instance-gen");
      Json j;
      if (gen_kind == "instance") {
        j = instance_to_json(gen_random_instance(params));
      } else if (gen_kind == "vectors") {
        j = sequence_to_json(random_vectors(vector_kind, params.n, params.m, seed));
      } else if (gen_kind == "hard") {
        j = sequence_to_json(scalar_sequence(breaker_hard_instance(hard_k)));
      } else {
        if (base_path.empty()) throw ValidationError("--base: required for --kind periodic");
        j = instance_to_json(
            gen_periodic_instance(instance_from_json(read_json_file(base_path)), copies, parse_rational(period)));
      }
      emit(out, gen_kind + ".json", dump_json(j));
    } else if (maxflow->parsed()) {
      const auto inst = instance_from_json(read_json_file(instance_path));
      const auto res = full_round_maxflow(inst, make_colorer(colorer));
      emit(out, "maxflow.json", dump_json(maxflow_result_to_json(inst, res)));
    } else if (totalflow->parsed()) {
      const auto inst = instance_from_json(read_json_file(instance_path));
      const auto res = full_round_totalflow(inst, make_colorer(colorer), horizon);
      emit(out, "totalflow.json", dump_json(totalflow_result_to_json(inst, res, schedule_from_integral(inst, res.y))));
    } else if (color->parsed()) {
      auto seq = sequence_from_json(read_json_file(vectors_path));
      const DiscMode mode = parse_disc_mode(mode_text);
      seq.signs = run_colorer(colorer, seq, mode, brute_limit);
      Json j = sequence_to_json(seq);
      j["colorer"] = colorer;
      j["report"] = report_to_json(discrepancy(seq, mode));
      emit(out, "color.json", dump_json(j));
    } else if (game->parsed()) {
      std::vector<Rational> values;
      Strategy breaker;
      if (game_hard_k) {
        values = breaker_hard_instance(*game_hard_k);
      } else {
        values = scalar_values(sequence_from_json(read_json_file(vectors_path)));
      }
      if (breaker_kind == "tree") {
        if (!game_hard_k) throw ValidationError("--breaker tree: needs --hard-k");
        breaker = make_tree_breaker(*game_hard_k);
      } else {
        breaker = make_random_breaker(stream_seed(seed, "tournament"), wait_prob);
      }
      GameOptions options;
      options.starter = starter == "maker" ? Player::Maker : Player::Breaker;
      options.maker_may_wait = maker_wait;
      options.breaker_may_wait = breaker_wait;
      // The plain pairing rule is only defined on +-1 values; elsewhere it reads sign(v).
      const bool unit = std::all_of(values.begin(), values.end(), [](const Rational& v) { return abs(v) == 1; });
      if (maker_kind == "pairing" && !unit) maker_kind = "pairing-signed";
      const auto res = play_game(values, make_maker(maker_kind), breaker, options);
      if (!trace_path.empty()) write_text_file(trace_path, game_trace_csv(res));
      Json j{{"n", values.size()},
             {"maker", maker_kind},
             {"breaker", breaker_kind},
             {"starter", starter},
             {"moves", res.history.size()},
             {"payoff", rational_to_json(res.payoff)},
             {"draw_stop", res.draw_stop},
             {"colors", res.colors}};
      emit(out, "game.json", dump_json(j));
    } else if (reduce->parsed()) {
      const auto seq = sequence_from_json(read_json_file(vectors_path));
      const auto vs = from_sequence(seq);
      Json j;
      if (reduce_action == "instance") {
        j = instance_to_json(vectors_to_maxflow_instance(vs, seq.m));
      } else if (reduce_action == "signs") {
        if (assignment_path.empty()) throw ValidationError("--assignment: required for --action signs");
        const auto inst = vectors_to_maxflow_instance(vs, seq.m);
        auto signed_seq = to_sequence(vs, seq.m);
        signed_seq.signs = signs_from_assignment(inst, vs, assignment_from_json(read_json_file(assignment_path)));
        j = sequence_to_json(signed_seq);
        j["report"] = report_to_json(discrepancy(signed_seq, DiscMode::OneSidedInterval));
      } else {
        j = roundtrip_to_json(roundtrip_check(vs, seq.m));
      }
      emit(out, "reduce.json", dump_json(j));
    } else if (sdp->parsed()) {
      const Rational delta = parse_rational(delta_text);
      if (delta <= 0) throw ValidationError("--delta: must be positive");
      Json j;
      if (sdp_action == "choose-r") {
        j = Json{{"delta", rational_to_json(delta)},
                 {"n", sdp_n},
                 {"m", sdp_m},
                 {"r", choose_r(to_double(delta), sdp_n, sdp_m)}};
      } else if (sdp_action == "mc") {
        const int r = r_override.value_or(choose_r(to_double(delta), sdp_n, sdp_m));
        const auto mc = gaussian_measure_mc(r, to_double(delta), sdp_n, sdp_m, samples, seed, shards);
        j = Json{{"delta", rational_to_json(delta)},
                 {"n", sdp_n},
                 {"m", sdp_m},
                 {"r", r},
                 {"samples", mc.samples},
                 {"exceed", mc.exceed},
                 {"fraction", mc.fraction},
                 {"target", mc.target},
                 {"slack", mc.slack},
                 {"within", mc.within}};
      } else {
        if (vectors_path.empty()) throw ValidationError("--vectors: required for --action " + sdp_action);
        const auto seq = sequence_from_json(read_json_file(vectors_path));
        if (sdp_action == "verify") {
          if (solution_path.empty()) throw ValidationError("--solution: required for --action verify");
          const auto w = sdp_solution_from_json(read_json_file(solution_path));
          const auto d = sdp_prefix_discrepancy(seq, w);
          const Rational limit = (1 + delta) * (1 + delta);
          j = Json{{"r", w.r},
                   {"squared", rational_to_json(d.squared)},
                   {"row", d.row},
                   {"prefix", d.prefix},
                   {"limit_squared", rational_to_json(limit)},
                   {"within", d.squared <= limit}};
        } else {
          const int r = r_override.value_or(choose_r(to_double(delta), seq.n(), seq.m));
          const auto blocks = build_block_instance(seq, r);
          if (sdp_action == "build") {
            j = sequence_to_json(blocks.blocks);
          } else {
            const auto signs = color_blocks_in_K(blocks, delta, brute_limit);
            if (!signs) throw ValidationError("no block coloring keeps every prefix in K");
            j = sdp_solution_to_json(signs_to_sdp_vectors(*signs, r));
          }
        }
      }
      emit(out, "sdp.json", dump_json(j));
    } else if (bench->parsed()) {
      std::string dir = bench_dir.empty() ? out_dir_from_env() : bench_dir;
      if (dir.empty()) dir = "bench_out";
      fs::create_directories(dir);
      Rng seeds(seed, "instance-gen");
      std::vector<RandomInstanceParams> runs(count, params);
      for (auto& p : runs) p.seed = seeds.next();
      const auto results = run_pool(count, workers, [&](int id) {
        return bench_run(bench_kind, gen_random_instance(runs[id]), colorer);
      });
      for (int id = 0; id < count; ++id) {
        write_text_file((fs::path(dir) / ("run_" + std::to_string(id) + ".json")).string(), dump_json(results[id]));
      }
      const auto s = summarize(results);
      write_text_file((fs::path(dir) / "summary.csv").string(), summary_csv(s));
      write_text_file((fs::path(dir) / "summary.txt").string(), summary_table(s));
      std::cout << summary_table(s);
      if (!s.all_ok) return 2;
    } else if (summarize_cmd->parsed()) {
      std::vector<Json> results;
      for (const auto& path : result_paths) results.push_back(read_json_file(path));
      const auto s = summarize(results);
      if (!csv_path.empty()) write_text_file(csv_path, summary_csv(s));
      emit(out, "summary.txt", summary_table(s));
      if (!s.all_ok) return 2;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
