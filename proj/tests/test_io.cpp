#include "doctest.h"

#include <filesystem>

#include "flowdisc/errors.hpp"
#include "flowdisc/io.hpp"

using namespace flowdisc;

namespace {

Rational q(long a, long b = 1) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

std::string error_of(const Json& j, SchedulingInstance (*read)(const Json&)) {
  try {
    read(j);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("rationals travel as canonical strings") {
  CHECK(rational_to_json(q(6, 4)) == Json("3/2"));
  CHECK(rational_to_json(Rational(2)) == Json("2/1"));
  CHECK(rational_from_json(Json("3/2"), "x") == q(3, 2));
  CHECK(rational_from_json(Json("7"), "x") == 7);
  CHECK(rational_from_json(Json("-1/3"), "x") == q(-1, 3));
  CHECK_THROWS_AS(rational_from_json(Json(1.5), "x"), ValidationError);
  CHECK_THROWS_AS(rational_from_json(Json("1/0"), "x"), ValidationError);
}

TEST_CASE("instance JSON round-trips byte for byte") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomInstanceParams params;
    params.n = 6;
    params.m = 3;
    params.infinity_prob = 0.3;
    params.seed = seed;
    auto inst = gen_random_instance(params);
    const std::string first = dump_json(instance_to_json(inst));
    const auto back = instance_from_json(Json::parse(first));
    CHECK(dump_json(instance_to_json(back)) == first);
    CHECK(back.n() == inst.n());
    for (int j = 0; j < inst.n(); ++j) {
      CHECK(back.jobs[j].release == inst.jobs[j].release);
      for (int i = 0; i < inst.m; ++i) {
        CHECK(back.finite(i, j) == inst.finite(i, j));
        if (inst.finite(i, j)) CHECK(back.p(i, j) == inst.p(i, j));
      }
    }
  }
}

TEST_CASE("instance errors name the offending field") {
  auto j = Json::parse(R"({"m": 2, "jobs": [{"r": "0", "p": ["1", "2"]}, {"r": "1", "p": ["1", "x"]}]})");
  CHECK(error_of(j, instance_from_json).find("jobs[1].p[1]") != std::string::npos);

  j = Json::parse(R"({"m": 2, "jobs": [{"p": ["1", "2"]}]})");
  CHECK(error_of(j, instance_from_json).find("jobs[0].r") != std::string::npos);

  j = Json::parse(R"({"jobs": []})");
  CHECK(error_of(j, instance_from_json).find("m") != std::string::npos);

  j = Json::parse(R"({"m": 2, "jobs": [{"r": "0", "p": ["-1", "2"]}]})");
  CHECK_THROWS_AS(instance_from_json(j), ValidationError);

  j = Json::parse(R"({"m": 2, "jobs": [{"r": "0", "p": ["1"]}]})");
  CHECK_THROWS_AS(instance_from_json(j), ValidationError);
}

TEST_CASE("vector sequences round-trip with and without signs") {
  SignedVectorSequence seq;
  seq.m = 3;
  seq.vectors = {{q(1, 2), 0, q(-1, 3)}, {0, 1, 0}};
  auto text = dump_json(sequence_to_json(seq));
  CHECK(text.find("signs") == std::string::npos);
  auto back = sequence_from_json(Json::parse(text));
  CHECK(back.vectors == seq.vectors);
  CHECK(dump_json(sequence_to_json(back)) == text);

  seq.signs = {1, -1};
  text = dump_json(sequence_to_json(seq));
  back = sequence_from_json(Json::parse(text));
  CHECK(back.signs == seq.signs);
  CHECK(dump_json(sequence_to_json(back)) == text);

  auto bad = Json::parse(R"({"m": 2, "vectors": [["1", "0"], ["0", 2]]})");
  try {
    sequence_from_json(bad);
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("vectors[1][1]") != std::string::npos);
  }
}

TEST_CASE("SDP solutions keep their sign matrix") {
  SdpSolution w;
  w.r = 3;
  w.signs = {{1, -1, 1}, {-1, -1, 1}};
  const auto text = dump_json(sdp_solution_to_json(w));
  const auto back = sdp_solution_from_json(Json::parse(text));
  CHECK(back.r == 3);
  CHECK(back.signs == w.signs);
  CHECK(dump_json(sdp_solution_to_json(back)) == text);
  CHECK_THROWS_AS(sdp_solution_from_json(Json::parse(R"({"r": 2, "w": [[1, 0]]})")), ValidationError);
  CHECK_THROWS_AS(sdp_solution_from_json(Json::parse(R"({"r": 2, "w": [[1]]})")), ValidationError);
}

TEST_CASE("game trace CSV has one row per move") {
  GameResult res;
  res.history.push_back({Player::Breaker, Move::color(2, 1), q(1, 2)});
  res.history.push_back({Player::Maker, Move::pass(), q(1, 2)});
  res.history.push_back({Player::Maker, Move::color(0, -1), 1});
  CHECK(game_trace_csv(res) ==
        "turn,player,index_or_wait,sign,max_prefix_after\n"
        "1,breaker,2,1,1/2\n"
        "2,maker,wait,0,1/2\n"
        "3,maker,0,-1,1/1\n");
}

TEST_CASE("maxflow results summarize and round-trip their assignment") {
  RandomInstanceParams params;
  params.n = 5;
  params.m = 2;
  params.seed = 3;
  auto inst = gen_random_instance(params);
  auto res = full_round_maxflow(inst, make_colorer("auto"));
  auto j = maxflow_result_to_json(inst, res);
  CHECK(j["kind"] == "maxflow");
  CHECK(assignment_from_json(j).assign == res.assignment.assign);
  CHECK(j["bound_ok"] == true);

  auto s = summarize({j, j});
  CHECK(s.kind == "maxflow");
  CHECK(s.rows.size() == 2);
  CHECK(s.all_ok);
  const auto csv = summary_csv(s);
  CHECK(csv.rfind("id,n,m,T_star,level_D,bound,T_final,bound_ok\n", 0) == 0);
  CHECK(summary_table(s).find("all bounds hold") != std::string::npos);

  auto broken = j;
  broken["bound_ok"] = false;
  CHECK_FALSE(summarize({j, broken}).all_ok);
}

TEST_CASE("summaries reject mixed kinds") {
  auto inst = gen_random_instance({});
  auto mf = maxflow_result_to_json(inst, full_round_maxflow(inst, make_colorer("auto")));
  auto tf_res = full_round_totalflow(inst, make_colorer("auto"));
  auto tf = totalflow_result_to_json(inst, tf_res, schedule_from_integral(inst, tf_res.y));
  CHECK(tf["kind"] == "totalflow");
  CHECK(summarize({tf}).kind == "totalflow");
  CHECK_THROWS_AS(summarize({mf, tf}), ValidationError);
  CHECK_THROWS_AS(summarize({Json{{"kind", "other"}}}), ValidationError);
  CHECK(summarize({}).rows.empty());
}

TEST_CASE("files are written and read back unchanged") {
  const auto dir = std::filesystem::temp_directory_path() / "flowdisc_test_io";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "inst.json").string();
  auto inst = gen_random_instance({});
  const auto text = dump_json(instance_to_json(inst));
  write_text_file(path, text);
  CHECK(dump_json(read_json_file(path)) == text);
  write_text_file(path, "{ not json");
  CHECK_THROWS_AS(read_json_file(path), ValidationError);
  CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), ValidationError);
  std::filesystem::remove_all(dir);
}
