#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "fteval/errors.hpp"
#include "fteval/report.hpp"
#include "test_support.hpp"

using namespace fteval;
using fteval::testing::TempDir;
using fteval::testing::write_fixture_set;
using nlohmann::json;

namespace {

MetricReport table_report(const std::string& name, std::map<std::string, MetricValue> values) {
  MetricReport r;
  r.name = name;
  r.aggregate = std::move(values);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("round6 and format6") {
  CHECK(round6(0.98585786437626904) == 0.985858);
  CHECK(round6(48.130803608679102) == 48.1308);
  CHECK(round6(0.0) == 0.0);
  CHECK(round6(123456789.0) == 123457000.0);
  CHECK(format6(48.130803608679102) == "48.1308");
  CHECK(format6(2.0) == "2");
}

TEST_CASE("metric catalog directions") {
  CHECK(metric_info("psnr").direction == Direction::kHigher);
  CHECK(metric_info("ssim").direction == Direction::kHigher);
  CHECK(metric_info("fid").direction == Direction::kLower);
  CHECK(metric_info("m_lmd").direction == Direction::kLower);
  CHECK(metric_info("f_lmd").direction == Direction::kLower);
  CHECK(metric_info("lse_c").direction == Direction::kHigher);
  CHECK(metric_info("lse_d").direction == Direction::kLower);
  CHECK(metric_info("adfd").direction == Direction::kHigher);
  CHECK(metric_info("lse_c").label == "SyncNet");
  CHECK_THROWS(metric_info("bogus"));
}

TEST_CASE("manifest parsing") {
  TempDir dir;
  SUBCASE("relative paths resolve against the manifest directory") {
    const json doc = {{"entries", {{{"id", "a"}, {"gen_landmarks", "x.jsonl"},
                                     {"gt_landmarks", "/abs/y.jsonl"}}}}};
    const auto m = parse_manifest(doc, dir.path());
    CHECK(m.entries[0].gen_landmarks == dir.path() / "x.jsonl");
    CHECK(m.entries[0].gt_landmarks == std::filesystem::path("/abs/y.jsonl"));
    CHECK(m.name == "run");
  }
  SUBCASE("invalid manifests") {
    CHECK_THROWS_AS(parse_manifest(json{{"entries", json::array()}}, dir.path()), InputError);
    CHECK_THROWS_AS(parse_manifest(json{{"entries", {{{"id", "a"}, {"gen_landmarks", "x"}}}}},
                                   dir.path()),
                    InputError);
    CHECK_THROWS_AS(parse_manifest(json{{"entries", {{{"id", "a"}}}}}, dir.path()), InputError);
    CHECK_THROWS_AS(
        parse_manifest(json{{"entries", {{{"id", "a"}, {"gen_frames", "x"}, {"gt_frames", "y"}},
                                         {{"id", "a"}, {"gen_frames", "x"}, {"gt_frames", "y"}}}}},
                       dir.path()),
        InputError);
    CHECK_THROWS_AS(parse_manifest(json{{"options", {{"colour", 1}}},
                                        {"entries", {{{"id", "a"}, {"gen_frames", "x"},
                                                      {"gt_frames", "y"}}}}},
                                   dir.path()),
                    InputError);
  }
  SUBCASE("options") {
    const json doc = {{"name", "m"},
                      {"options", {{"w1", 2.0}, {"mismatch", "truncate"}, {"max_offset", 7},
                                   {"width", 100}, {"height", 80}}},
                      {"entries", {{{"id", "a"}, {"gen_frames", "x"}, {"gt_frames", "y"}}}}};
    const auto m = parse_manifest(doc, dir.path());
    CHECK(m.name == "m");
    CHECK(m.options.weights.w1 == 2.0);
    CHECK(m.options.mismatch == MismatchPolicy::kTruncate);
    CHECK(m.options.max_offset == 7);
    CHECK(m.options.csv.width == 100);
  }
}

TEST_CASE("landmark-only entry marks other metrics absent") {
  TempDir dir;
  write_fixture_set(dir.path(), 1);
  EvaluationManifest m;
  m.entries.push_back({.id = "lm", .gen_landmarks = dir / "clip0/gen.jsonl",
                       .gt_landmarks = dir / "clip0/gt.jsonl"});
  const auto report = evaluate(m);
  const auto& e = report.entries[0];
  CHECK(e.metrics.at("adfd").is_number());
  CHECK(e.metrics.at("m_lmd").is_number());
  CHECK(e.metrics.at("f_lmd").is_number());
  for (const auto* key : {"psnr", "ssim", "fid", "lse_c", "lse_d"}) {
    CHECK_FALSE(e.metrics.at(key).present());
    CHECK_FALSE(report.aggregate.at(key).present());
  }
  const auto j = to_json(report);
  CHECK(j["aggregate"]["psnr"] == "absent");
  CHECK(j["entries"][0]["metrics"]["fid"] == "absent");
  CHECK(report.metric_set() == std::set<std::string>{"adfd", "f_lmd", "m_lmd"});
}

TEST_CASE("identity entry") {
  TempDir dir;
  write_fixture_set(dir.path(), 1);
  const auto d = dir / "clip0";
  EvaluationManifest m;
  m.entries.push_back({.id = "same", .gen_landmarks = d / "gt.jsonl", .gt_landmarks = d / "gt.jsonl",
                       .gen_frames = d / "gt_frames", .gt_frames = d / "gt_frames",
                       .gen_features = d / "gt.ftev", .gt_features = d / "gt.ftev",
                       .audio_embed = d / "audio.ftev", .visual_embed = d / "audio.ftev"});
  const auto r = evaluate(m);
  const auto& mv = r.entries[0].metrics;
  CHECK(mv.at("adfd").value() == 1.0);
  CHECK(mv.at("m_lmd").value() == 0.0);
  CHECK(mv.at("f_lmd").value() == 0.0);
  CHECK(mv.at("ssim").value() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mv.at("psnr").state() == MetricValue::State::kIdentical);
  CHECK(mv.at("fid").value() <= 1e-4);
  CHECK(r.entries[0].details["sync"]["best_offset"] == 0);
  CHECK(to_json(r)["aggregate"]["psnr"] == "identical");
}

TEST_CASE("aggregate is the arithmetic mean and failed entries are isolated") {
  TempDir dir;
  auto doc = write_fixture_set(dir.path(), 2);
  doc["entries"].push_back({{"id", "broken"},
                            {"gen_landmarks", "missing.jsonl"},
                            {"gt_landmarks", "clip0/gt.jsonl"}});
  const auto r = evaluate(parse_manifest(doc, dir.path()));
  REQUIRE(r.entries.size() == 3);
  CHECK(r.entries[2].error.has_value());
  CHECK(r.entries[2].error->cls == EntryError::Class::kInput);
  for (const auto& info : metric_catalog()) {
    const auto& a = r.entries[0].metrics.at(info.key);
    const auto& b = r.entries[1].metrics.at(info.key);
    CHECK_FALSE(r.entries[2].metrics.at(info.key).present());
    if (a.is_number() && b.is_number()) {
      CHECK(r.aggregate.at(info.key).value() == (a.value() + b.value()) / 2.0);
      CHECK(r.support.at(info.key) == 2);
    }
  }
  CHECK(to_json(r)["entries"][2]["status"] == "error");
}

TEST_CASE("all entries failing is an error") {
  EvaluationManifest m;
  m.entries.push_back({.id = "x", .gen_landmarks = "/nope/a.jsonl", .gt_landmarks = "/nope/b.jsonl"});
  CHECK_THROWS_AS(evaluate(m), InputError);
}

TEST_CASE("evaluation is independent of the job count") {
  TempDir dir;
  const auto m = parse_manifest(write_fixture_set(dir.path(), 6), dir.path());
  const auto serial = dump_report(evaluate(m, 1));
  CHECK(dump_report(evaluate(m, 4)) == serial);
  CHECK(dump_report(evaluate(m, 16)) == serial);
  CHECK(dump_report(evaluate(m, 1)) == serial);
}

TEST_CASE("report JSON round-trips") {
  TempDir dir;
  const auto m = parse_manifest(write_fixture_set(dir.path(), 2), dir.path());
  const auto text = dump_report(evaluate(m));
  const auto back = report_from_json(json::parse(text));
  CHECK(back.name == "fixture");
  CHECK(back.entries.size() == 2);
  CHECK(render_table({back}, TableFormat::kCsv).find("fixture,") != std::string::npos);
}

TEST_CASE("table bolding follows metric direction") {
  const auto a = table_report("A", {{"psnr", MetricValue::number(32.1)},
                                     {"fid", MetricValue::number(20.0)},
                                     {"m_lmd", MetricValue::number(2.0)},
                                     {"f_lmd", MetricValue::number(3.5)}});
  const auto b = table_report("B", {{"psnr", MetricValue::number(30.5)},
                                     {"fid", MetricValue::number(12.25)},
                                     {"m_lmd", MetricValue::number(2.5)},
                                     {"f_lmd", MetricValue::number(3.0)}});
  const auto md = lines_of(render_table({a, b}, TableFormat::kMarkdown));
  REQUIRE(md.size() == 4);
  CHECK(md[0] == "| Method | PSNR↑ | M/F-LMD↓ | FID↓ |");
  CHECK(md[2] == "| A | **32.1** | **2**/3.5 | 20 |");
  CHECK(md[3] == "| B | 30.5 | 2.5/**3** | **12.25** |");

  const auto j = json::parse(render_table({a, b}, TableFormat::kJson));
  CHECK(j["rows"][0]["best"] == json({"psnr", "m_lmd"}));
  CHECK(j["rows"][1]["best"] == json({"f_lmd", "fid"}));

  const auto csv = lines_of(render_table({a, b}, TableFormat::kCsv));
  CHECK(csv[0] == "method,psnr,m_lmd,f_lmd,fid");
  CHECK(csv[1] == "A,32.1,2,3.5,20");
}

TEST_CASE("table ties, single rows and identical PSNR") {
  const auto a = table_report("A", {{"ssim", MetricValue::number(0.9)},
                                     {"psnr", MetricValue::identical()}});
  const auto b = table_report("B", {{"ssim", MetricValue::number(0.9000001)},
                                     {"psnr", MetricValue::number(40.0)}});
  const auto md = lines_of(render_table({a, b}, TableFormat::kMarkdown));
  CHECK(md[2] == "| A | **identical** | **0.9** |");
  CHECK(md[3] == "| B | 40 | **0.9** |");

  const auto single = lines_of(render_table({b}, TableFormat::kMarkdown));
  CHECK(single[2] == "| B | **40** | **0.9** |");
}

TEST_CASE("table rejects reports with different metric sets") {
  const auto a = table_report("A", {{"psnr", MetricValue::number(1)}, {"fid", MetricValue::number(1)}});
  const auto b = table_report("B", {{"psnr", MetricValue::number(1)}, {"adfd", MetricValue::number(1)}});
  try {
    render_table({a, b}, TableFormat::kMarkdown);
    FAIL("expected an error");
  } catch (const PreconditionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("adfd") != std::string::npos);
    CHECK(msg.find("fid") != std::string::npos);
    CHECK(msg.find("psnr") == std::string::npos);
  }
}

TEST_CASE("CSV table values match JSON to formatting precision") {
  const auto a = table_report("A", {{"adfd", MetricValue::number(0.123456789)},
                                     {"lse_c", MetricValue::number(7.654321987)}});
  const auto csv = lines_of(render_table({a}, TableFormat::kCsv));
  const auto j = json::parse(render_table({a}, TableFormat::kJson));
  std::istringstream row(csv[1]);
  // Columns follow catalog order: lse_c comes before adfd.
  CHECK(csv[0] == "method,lse_c,adfd");
  std::string name, lse_text, adfd_text;
  std::getline(row, name, ',');
  std::getline(row, lse_text, ',');
  std::getline(row, adfd_text, ',');
  CHECK(std::stod(adfd_text) == j["rows"][0]["values"]["adfd"].get<double>());
  CHECK(std::stod(lse_text) == j["rows"][0]["values"]["lse_c"].get<double>());
}
