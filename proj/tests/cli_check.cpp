// Spawns the command-line binary and checks its contract: exit codes, output
// shapes, schema validity of JSON reports, and byte-identical replay under a
// fixed seed. argv[1] = path to the binary, argv[2] = project source dir.
#include <sys/wait.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "schema_check.hpp"

using nlohmann::json;

namespace {

int failures = 0;

void expect(bool cond, const std::string& label) {
  if (!cond) {
    std::fprintf(stderr, "FAIL: %s\n", label.c_str());
    ++failures;
  }
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

RunResult run(const std::string& cli, const std::string& args, int idx) {
  const std::string out_path = "cli_stdout_" + std::to_string(idx) + ".txt";
  const std::string err_path = "cli_stderr_" + std::to_string(idx) + ".txt";
  const std::string cmd =
      "\"" + cli + "\" " + args + " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  std::remove(out_path.c_str());
  std::remove(err_path.c_str());
  return r;
}

json parse_or_fail(const std::string& text, const std::string& label) {
  try {
    return json::parse(text);
  } catch (const std::exception& e) {
    expect(false, label + ": output is not valid JSON: " + e.what());
    return json();
  }
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <cli-binary> <source-dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const std::string src = argv[2];

  const json bound_schema =
      json::parse(slurp(src + "/schemas/bound_report.schema.json"));
  const json verify_schema =
      json::parse(slurp(src + "/schemas/verify_report.schema.json"));
  expect(!bound_schema.is_null(), "bound schema loads");
  expect(!verify_schema.is_null(), "verify schema loads");

  // --- bound: spiked profile, worked value 0.08 ---
  {
    const RunResult r =
        run(cli, "bound --profile spiked:4,2,2.0,1.0 --I 1,2 --n 100", 1);
    expect(r.code == 0, "bound spiked exits 0 (got " + std::to_string(r.code) +
                            ": " + r.err + ")");
    const json doc = parse_or_fail(r.out, "bound spiked");
    std::string err;
    expect(testkit::schema_validate(doc, bound_schema, &err),
           "bound spiked report matches schema: " + err);
    if (doc.contains("value") && doc["value"].is_number()) {
      expect(std::abs(doc["value"].get<double>() - 0.08) < 1e-12,
             "bound spiked value is 0.08");
    } else {
      expect(false, "bound spiked value field present and numeric");
    }
  }

  // --- bound: decay profile, single projector ---
  {
    const RunResult r =
        run(cli, "bound --profile poly:1.0 --d 10 --n 1000 --single", 2);
    expect(r.code == 0, "bound poly --single exits 0: " + r.err);
    const json doc = parse_or_fail(r.out, "bound poly");
    std::string err;
    expect(testkit::schema_validate(doc, bound_schema, &err),
           "bound poly report matches schema: " + err);
    expect(doc.contains("value") && doc["value"].is_number() &&
               std::abs(doc["value"].get<double>() - 0.1) < 1e-12,
           "bound poly --single value is 0.1");
  }

  // --- bound: usage errors exit 2 ---
  expect(run(cli, "bound --profile spiked:4,2,2.0,1.0 --I 1,2", 3).code == 2,
         "bound without --n exits 2");
  expect(run(cli, "bound --profile wedge:1 --I 1 --n 10", 4).code == 2,
         "bound with unknown profile kind exits 2");
  expect(run(cli, "bound --profile spiked:4,2,2.0,1.0 --n 10", 5).code == 2,
         "bound without --I exits 2");

  // --- verify: named suite passes and emits a schema-valid report ---
  {
    const RunResult r = run(cli, "verify lemma-a1", 6);
    expect(r.code == 0, "verify lemma-a1 exits 0: " + r.err);
    const json doc = parse_or_fail(r.out, "verify lemma-a1");
    std::string err;
    expect(testkit::schema_validate(doc, verify_schema, &err),
           "verify report matches schema: " + err);
    if (doc.contains("all_pass")) {
      expect(doc["all_pass"].get<bool>(), "verify lemma-a1 all_pass true");
    }
  }
  expect(run(cli, "verify no-such-suite", 7).code == 2,
         "verify with unknown suite exits 2");

  // --- simulate: byte-identical replay under a fixed seed ---
  {
    const std::string args =
        "simulate --model pca --profile explicit:2,1 --n 60 --reps 200 "
        "--seed 7 --out ";
    const RunResult a = run(cli, args + "cli_sim_a.csv", 8);
    const RunResult b = run(cli, args + "cli_sim_b.csv", 9);
    expect(a.code == 0 && b.code == 0, "simulate runs exit 0");
    const std::string fa = slurp("cli_sim_a.csv");
    const std::string fb = slurp("cli_sim_b.csv");
    expect(!fa.empty(), "simulate wrote output");
    expect(fa == fb, "same seed gives byte-identical simulate output");
    expect(fa.rfind("n,mean,se,n_times_mean\n", 0) == 0,
           "simulate CSV has the risk-grid header");
    std::remove("cli_sim_a.csv");
    std::remove("cli_sim_b.csv");
  }

  // --- simulate: n-grid emits one row per grid point ---
  {
    const RunResult r = run(cli,
                            "simulate --model pca --profile explicit:3,2,1 "
                            "--n-grid 50,100 --reps 50 --seed 3",
                            10);
    expect(r.code == 0, "simulate n-grid exits 0: " + r.err);
    int lines = 0;
    for (char c : r.out) lines += c == '\n';
    expect(lines == 3, "simulate n-grid emits header plus two rows");
  }

  // --- simulate: noiseless denoising model reports exactly zero risk ---
  {
    const RunResult r = run(cli,
                            "simulate --model denoise --profile explicit:1,0 "
                            "--sigma 0 --n 1 --reps 100 --seed 5",
                            11);
    expect(r.code == 0, "simulate denoise exits 0: " + r.err);
    expect(r.out == "n,mean,se,n_times_mean\n1,0,0,0\n",
           "noiseless denoise risk row is exactly zero (got: " + r.out + ")");
  }

  // --- simulate: usage error ---
  expect(run(cli, "simulate --model pca --profile explicit:2,1 --reps 10", 12)
                 .code == 2,
         "simulate without --n/--n-grid exits 2");

  if (failures == 0) {
    std::printf("cli contract: all checks passed\n");
    return 0;
  }
  std::printf("cli contract: %d check(s) failed\n", failures);
  return 1;
}
