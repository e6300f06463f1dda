// tests/test_cli.cc
//
// Drives the installed command-line binary end to end at tiny scale:
// gen-corpus -> train -> eval -> export-attn.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

int Run(const std::string& cmd) {
  return std::system((cmd + " > cli_test_out.log 2>&1").c_str());
}

}  // namespace

TEST_CASE("cli: gen-corpus, train, eval, export-attn") {
  const std::string bin = VCAMKIT_BIN;
  fs::remove_all("cli_work");
  fs::create_directories("cli_work");
  {
    std::ofstream cfg("cli_work/cfg.txt");
    cfg << "variant = mt_vcam\nn_train = 8\nn_test = 2\nsteps = 2\n"
           "batch_size = 2\nsingle_thread = 1\nseed = 4\n";
  }

  REQUIRE(Run(bin + " gen-corpus --config cli_work/cfg.txt --out cli_work/corpus"
                    " --seed 4") == 0);
  CHECK(fs::exists("cli_work/corpus/train.manifest"));
  CHECK(fs::exists("cli_work/corpus/corpus.meta"));

  REQUIRE(Run(bin + " train --config cli_work/cfg.txt --data cli_work/corpus"
                    " --out cli_work/ckpt") == 0);
  CHECK(fs::exists("cli_work/ckpt/model.cfg"));

  REQUIRE(Run(bin + " eval --ckpt cli_work/ckpt --data cli_work/corpus"
                    " --report cli_work/report.tsv") == 0);
  CHECK(fs::exists("cli_work/report.tsv"));
  CHECK(fs::exists("cli_work/report.tsv.jsonl"));
  CHECK(fs::exists("cli_work/report_pr.tsv"));

  REQUIRE(Run(bin + " export-attn --ckpt cli_work/ckpt --data cli_work/corpus"
                    " --example ov000000 --out cli_work/attn") == 0);
  CHECK(fs::exists("cli_work/attn/ov000000.track0.attn.pgm"));
  CHECK(fs::exists("cli_work/attn/ov000000.track1.attn.vct"));
  CHECK(fs::exists("cli_work/attn/ov000000.overlap.txt"));

  // a non-attention checkpoint refuses to export maps
  {
    std::ofstream cfg("cli_work/cfg_audio.txt");
    cfg << "variant = mt_audio\nsteps = 0\nbatch_size = 2\nsingle_thread = 1\n";
  }
  REQUIRE(Run(bin + " train --config cli_work/cfg_audio.txt --data cli_work/corpus"
                    " --out cli_work/ckpt_audio") == 0);
  CHECK(Run(bin + " export-attn --ckpt cli_work/ckpt_audio --data cli_work/corpus"
                  " --example ov000000 --out cli_work/attn2") != 0);

  fs::remove_all("cli_work");
  fs::remove("cli_test_out.log");
}
