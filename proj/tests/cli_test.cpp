#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

CliResult run(const std::string& args) {
  std::string cmd = quote(COLEX_CLI) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) {
  return quote(std::string(COLEX_TEST_DATA) + "/" + name);
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(COLEX_GOLDEN) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "colex_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path) << text;
}

}  // namespace

TEST(Cli, GoldenOutputs) {
  struct Case {
    std::string args, file;
  } cases[] = {
      {"order " + data("sample.aut"), "sample_order.txt"},
      {"order " + data("sample.aut") + " --order label", "sample_order_label.txt"},
      {"order " + data("cycle.aut"), "cycle_order.txt"},
      {"chains " + data("sample.aut"), "sample_chains.txt"},
      {"bwt " + data("sample.aut") + " --chains " + data("sample_chains.txt"), "sample_bwt.txt"},
      {"validate " + data("sample.aut"), "sample_validate.txt"},
      {"determinize " + data("sample.aut"), "sample_determinize.txt"},
  };
  for (const auto& c : cases) {
    CliResult r = run(c.args);
    EXPECT_EQ(r.exit_code, 0) << c.args;
    EXPECT_EQ(r.out, golden(c.file)) << c.args;
  }
}

TEST(Cli, OrderReportsWidth) {
  CliResult r = run("order " + data("sample.aut"));
  EXPECT_EQ(r.out.substr(0, 8), "width 2\n");
}

TEST(Cli, NormalizeIsIdentityOnSample) {
  CliResult r = run("normalize " + data("sample.aut"));
  EXPECT_EQ(r.exit_code, 0);
  auto out = scratch("norm.aut");
  write(out, r.out);
  CliResult again = run("normalize " + quote(out.string()));
  EXPECT_EQ(again.out, r.out);
}

TEST(Cli, IndexPipelineMatchesMembership) {
  auto idx = scratch("sample.idx");
  CliResult build = run("index build " + data("sample.aut") + " -o " + quote(idx.string()));
  ASSERT_EQ(build.exit_code, 0);
  EXPECT_NE(build.out.find("core_bits=50"), std::string::npos) << build.out;

  CliResult ab = run("query " + quote(idx.string()) + " ab");
  EXPECT_EQ(ab.exit_code, 0);
  EXPECT_EQ(ab.out.substr(0, ab.out.find('\n')), "count=1 member=true");

  // Every word of length <= 6 against the language ab(aa)*(bb)*.
  std::vector<std::string> words = {""};
  for (std::size_t begin = 0, len = 0; len < 6; ++len) {
    std::size_t end = words.size();
    for (std::size_t i = begin; i < end; ++i)
      for (char c : {'a', 'b'}) words.push_back(words[i] + c);
    begin = end;
  }
  auto in_language = [](const std::string& w) {
    if (w.size() < 2 || w.compare(0, 2, "ab") != 0) return false;
    std::size_t i = 2, as = 0, bs = 0;
    while (i < w.size() && w[i] == 'a') ++i, ++as;
    while (i < w.size() && w[i] == 'b') ++i, ++bs;
    return i == w.size() && as % 2 == 0 && bs % 2 == 0;
  };
  // The sample is deterministic, so a word reaches one state exactly when it
  // is a prefix of ab a^k b^m with k even whenever m > 0.
  auto reached = [](const std::string& w) {
    const std::string ab = "ab";
    if (w.size() <= 2) return ab.compare(0, w.size(), w) == 0 ? 1 : 0;
    if (w.compare(0, 2, ab) != 0) return 0;
    std::size_t i = 2, as = 0, bs = 0;
    while (i < w.size() && w[i] == 'a') ++i, ++as;
    while (i < w.size() && w[i] == 'b') ++i, ++bs;
    return i == w.size() && (bs == 0 || as % 2 == 0) ? 1 : 0;
  };
  for (const auto& w : words) {
    CliResult q = run("query " + quote(idx.string()) + " " + quote(w));
    ASSERT_EQ(q.exit_code, 0) << w;
    std::string expect = "count=" + std::to_string(reached(w)) +
                         " member=" + (in_language(w) ? "true" : "false");
    ASSERT_EQ(q.out.substr(0, q.out.find('\n')), expect) << "'" << w << "'";
  }
}

TEST(Cli, BinaryBwtRoundTrip) {
  for (std::string kind : {"nfa", "dfa"}) {
    auto bin = scratch("sample." + kind);
    CliResult enc = run("bwt " + data("sample.aut") + " --format binary --kind " + kind +
                  " -o " + quote(bin.string()));
    ASSERT_EQ(enc.exit_code, 0) << kind;
    CliResult dec = run("decode " + quote(bin.string()));
    ASSERT_EQ(dec.exit_code, 0) << kind;
    auto decoded = scratch("decoded_" + kind + ".aut");
    write(decoded, dec.out);
    CliResult eq = run("equiv " + data("sample.aut") + " " + quote(decoded.string()));
    EXPECT_EQ(eq.out, "equivalent=true\n") << kind;
  }
}

TEST(Cli, EquivAndMember) {
  EXPECT_EQ(run("equiv " + data("sample.aut") + " " + data("sample.aut")).out,
            "equivalent=true\n");
  EXPECT_EQ(run("equiv " + data("sample.aut") + " " + data("cycle.aut")).out,
            "equivalent=false\n");
  EXPECT_EQ(run("member " + data("sample.aut") + " ab").out, "member=true\n");
  EXPECT_EQ(run("member " + data("sample.aut") + " aba").out, "member=false\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("frobnicate").exit_code, 2);
  EXPECT_EQ(run("order").exit_code, 2);
  EXPECT_EQ(run("order /nonexistent/file.aut").exit_code, 2);
  EXPECT_EQ(run("bwt " + data("sample.aut") + " --format yaml").exit_code, 2);

  auto nfa = scratch("nfa.aut");
  write(nfa, "nfa 3 2 1\nstart 0\nfinals 1 2\nedge 0 1 0\nedge 0 2 0\n");
  EXPECT_EQ(run("order " + quote(nfa.string())).exit_code, 1);
  EXPECT_EQ(run("order " + quote(nfa.string()) + " --order label").exit_code, 0);

  auto broken = scratch("broken.aut");
  write(broken, "nfa 3 1 1\nstart 0\nfinals 0\nedge 0 99 0\n");
  EXPECT_EQ(run("validate " + quote(broken.string())).exit_code, 1);

  auto loop = scratch("loop.aut");
  write(loop, "nfa 2 2 1\nstart 0\nfinals 1\nedge 0 1 0\nedge 1 0 0\n");
  CliResult v = run("validate " + quote(loop.string()));
  EXPECT_EQ(v.exit_code, 1);
  EXPECT_NE(v.out.find("(iii)"), std::string::npos) << v.out;
  EXPECT_EQ(run("order " + quote(loop.string())).exit_code, 1);
  EXPECT_EQ(run("normalize " + quote(loop.string())).exit_code, 0);

  auto junk = scratch("junk.idx");
  write(junk, "not an index");
  EXPECT_EQ(run("query " + quote(junk.string()) + " ab").exit_code, 1);
}
