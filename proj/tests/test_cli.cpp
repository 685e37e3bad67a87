#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

#include "fixtures.hpp"
#include "fteval/ingest.hpp"
#include "test_support.hpp"

using fteval::testing::TempDir;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(FTEVAL_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (const auto n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("synth then score landmarks") {
  TempDir dir;
  REQUIRE(cli("synth landmarks --seed 3 --frames 20 --drift-amplitude 4 --out " +
              q(dir / "gt.jsonl")).code == 0);
  REQUIRE(cli("synth landmarks --seed 3 --frames 20 --drift-amplitude 4 --jitter 2 --out " +
              q(dir / "gen.jsonl")).code == 0);

  const auto same = cli("adfd --gen " + q(dir / "gt.jsonl") + " --gt " + q(dir / "gt.jsonl"));
  REQUIRE(same.code == 0);
  CHECK(json::parse(same.out)["score"] == 1.0);

  const auto r = cli("adfd --gen " + q(dir / "gen.jsonl") + " --gt " + q(dir / "gt.jsonl"));
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["score"].get<double>() < 1.0);
  CHECK(j["per_frame_spatial"].size() == 20);

  const auto w = cli("--w1 0.5 adfd --gen " + q(dir / "gen.jsonl") + " --gt " + q(dir / "gt.jsonl"));
  CHECK(json::parse(w.out)["score"].get<double>() ==
        doctest::Approx(0.5 * j["score"].get<double>()).epsilon(1e-5));

  const auto l = cli("lmd --gen " + q(dir / "gen.jsonl") + " --gt " + q(dir / "gt.jsonl") +
                     " --format csv");
  REQUIRE(l.code == 0);
  CHECK(l.out.rfind("key,value\n", 0) == 0);
  CHECK(l.out.find("m_lmd,") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(cli("").code == 1);
  CHECK(cli("adfd --gen a.jsonl").code == 1);
  CHECK(cli("frobnicate").code == 1);
  CHECK(cli("adfd --gen /nonexistent.jsonl --gt /nonexistent.jsonl").code == 2);

  cli("synth landmarks --frames 10 --out " + q(dir / "ten.jsonl"));
  cli("synth landmarks --frames 12 --out " + q(dir / "twelve.jsonl"));
  CHECK(cli("adfd --gen " + q(dir / "twelve.jsonl") + " --gt " + q(dir / "ten.jsonl")).code == 3);
  const auto t = cli("--mismatch truncate adfd --gen " + q(dir / "twelve.jsonl") + " --gt " +
                     q(dir / "ten.jsonl"));
  CHECK(t.code == 0);
  CHECK(json::parse(t.out)["warnings"].size() == 1);

  std::ofstream(dir / "bad.jsonl") << "{\"frame\": 0}\n";
  CHECK(cli("adfd --gen " + q(dir / "bad.jsonl") + " --gt " + q(dir / "ten.jsonl")).code == 2);
  CHECK(cli("--version").code == 0);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("fid, sync, psnr and ssim subcommands") {
  TempDir dir;
  REQUIRE(cli("synth features --seed 1 --rows 2000 --dim 8 --out " + q(dir / "a.ftev")).code == 0);
  REQUIRE(cli("synth features --seed 2 --rows 2000 --dim 8 --mean 3,4,0,0,0,0,0,0 --out " +
              q(dir / "b.ftev")).code == 0);
  const auto f = cli("fid --gen " + q(dir / "a.ftev") + " --gt " + q(dir / "b.ftev"));
  REQUIRE(f.code == 0);
  CHECK(json::parse(f.out)["fid"].get<double>() == doctest::Approx(25.0).epsilon(0.1));

  std::ofstream(dir / "s1.json") << R"({"mean": [0, 0], "cov": [[4, 0], [0, 4]]})";
  std::ofstream(dir / "s2.json") << R"({"mean": [0, 0], "cov": [[1, 0], [0, 1]]})";
  const auto st = cli("fid --gen-stats " + q(dir / "s1.json") + " --gt-stats " + q(dir / "s2.json"));
  CHECK(json::parse(st.out)["fid"] == 2.0);
  CHECK(cli("fid --gen " + q(dir / "a.ftev")).code == 1);

  REQUIRE(cli("synth embeddings --seed 4 --count 100 --dim 64 --shift -7 --audio-out " +
              q(dir / "au.ftev") + " --visual-out " + q(dir / "vi.ftev")).code == 0);
  const auto s = cli("sync --audio " + q(dir / "au.ftev") + " --visual " + q(dir / "vi.ftev"));
  REQUIRE(s.code == 0);
  CHECK(json::parse(s.out)["best_offset"] == -7);

  REQUIRE(cli("synth frames --seed 1 --count 3 --width 32 --height 32 --out " + q(dir / "f1")).code == 0);
  REQUIRE(cli("synth frames --seed 2 --count 3 --width 32 --height 32 --out " + q(dir / "f2")).code == 0);
  const auto p = json::parse(cli("psnr --gen " + q(dir / "f1") + " --gt " + q(dir / "f1")).out);
  CHECK(p["mean_db"] == "identical");
  const auto ss = json::parse(cli("ssim --gen " + q(dir / "f1") + " --gt " + q(dir / "f2")).out);
  CHECK(ss["mean"].get<double>() < 0.5);
  CHECK(cli("ssim --gen " + q(dir / "f1") + " --gt " + q(dir / "missing")).code == 2);
}

TEST_CASE("eval and table") {
  TempDir dir;
  const auto doc = fteval::testing::write_fixture_set(dir.path(), 3);
  std::ofstream(dir / "manifest.json") << doc.dump(2);

  const auto one = cli("eval --manifest " + q(dir / "manifest.json") + " --out " + q(dir / "r1.json"));
  REQUIRE(one.code == 0);
  const auto eight = cli("--jobs 8 eval --manifest " + q(dir / "manifest.json"));
  REQUIRE(eight.code == 0);
  CHECK(fteval::read_file_bytes(dir / "r1.json") == eight.out);

  auto other = doc;
  other["name"] = "other";
  other["entries"].erase(0);
  std::ofstream(dir / "other.json") << other.dump();
  REQUIRE(cli("eval --manifest " + q(dir / "other.json") + " --out " + q(dir / "r2.json")).code == 0);

  const auto md = cli("table " + q(dir / "r1.json") + " " + q(dir / "r2.json"));
  REQUIRE(md.code == 0);
  CHECK(md.out.rfind("| Method | PSNR↑ | SSIM↑ | M/F-LMD↓ | FID↓ | SyncNet↑ | ADFD↑ |", 0) == 0);
  CHECK(md.out.find("| fixture |") != std::string::npos);
  CHECK(md.out.find("| other |") != std::string::npos);

  const auto csv = cli("--format csv table " + q(dir / "r1.json"));
  CHECK(csv.out.rfind("method,psnr,ssim,m_lmd,f_lmd,fid,lse_c,lse_d,adfd\n", 0) == 0);

  const auto single = cli("eval --name solo --gen-landmarks " + q(dir / "clip0/gen.jsonl") +
                          " --gt-landmarks " + q(dir / "clip0/gt.jsonl"));
  REQUIRE(single.code == 0);
  const auto j = json::parse(single.out);
  CHECK(j["name"] == "solo");
  CHECK(j["aggregate"]["fid"] == "absent");

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(cli("eval --manifest " + q(dir / "broken.json")).code == 2);
  CHECK(cli("table " + q(dir / "r1.json") + " " + q(dir / "missing.json")).code == 2);
}

TEST_CASE("CSV landmarks need geometry") {
  TempDir dir;
  cli("--width 128 --height 128 synth landmarks --frames 4 --points 8 --out " + q(dir / "a.csv"));
  CHECK(cli("--scheme generic --mouth-indices 6,7 lmd --gen " + q(dir / "a.csv") + " --gt " +
            q(dir / "a.csv")).code == 2);
  const auto ok = cli("--width 128 --height 128 --scheme generic --mouth-indices 6,7 lmd --gen " +
                      q(dir / "a.csv") + " --gt " + q(dir / "a.csv"));
  REQUIRE(ok.code == 0);
  CHECK(json::parse(ok.out)["m_lmd"] == 0.0);
  CHECK(cli("--width 128 --height 128 lmd --gen " + q(dir / "a.csv") + " --gt " +
            q(dir / "a.csv")).code == 3);
}
