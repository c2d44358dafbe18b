#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = RELCAUSAL_CLI_PATH;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "relcausal_cli_out.txt";
    const std::string cmd = kCli + " " + args + " > " + out.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out);
    std::ostringstream buf;
    buf << in.rdbuf();
    r.stdout_text = buf.str();
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("demo self-verifies") {
    const RunResult r = run("demo");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("stim-collider") != std::string::npos);
    CHECK(r.stdout_text.find("[FAIL]") == std::string::npos);
}

TEST_CASE("simulate writes deterministic csv and prints the true graph") {
    const fs::path a = temp_file("sim_a.csv");
    const fs::path b = temp_file("sim_b.csv");
    const RunResult ra = run("simulate --fixture stim-chain -n 100 --seed 7 -o " + a.string());
    const RunResult rb = run("simulate --fixture stim-chain -n 100 --seed 7 -o " + b.string());
    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).rfind("S:stimulus,X1:feature,X2:feature\n", 0) == 0);
    CHECK(ra.stdout_text.find("S -> X1") != std::string::npos);

    const RunResult rc = run("simulate --fixture stim-chain -n 100 --seed 8 -o " + a.string());
    CHECK(rc.exit_code == 0);
    CHECK(slurp(a) != slurp(b));
}

TEST_CASE("simulate hides latent columns but reports them in the graph") {
    const fs::path out = temp_file("sim_fig1.csv");
    const RunResult r =
        run("simulate --fixture resp-hidden-fig1 -n 50 --seed 1 -o " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(slurp(out).rfind("X1:feature,X2:feature,R:response\n", 0) == 0);
    CHECK(r.stdout_text.find("H hidden") != std::string::npos);
}

TEST_CASE("simulate exit codes: unknown fixture, unwritable path") {
    CHECK(run("simulate --fixture nope -n 10 --seed 1 -o /tmp/x.csv").exit_code == 1);
    CHECK(run("simulate --fixture stim-chain -n 10 --seed 1 -o /no/such/dir/x.csv")
              .exit_code == 2);
    CHECK(run("simulate -n 10 --seed 1 -o /tmp/x.csv").exit_code == 1);
}

TEST_CASE("analyze oracle mode reproduces the deduction scenarios") {
    const fs::path json_a = temp_file("sec41_a.json");
    const fs::path json_b = temp_file("sec41_b.json");
    const RunResult a = run("analyze --oracle-fixture stim-sec41 -o " + json_a.string());
    const RunResult b = run("analyze --oracle-fixture stim-sec41 -o " + json_b.string());
    CHECK(a.exit_code == 0);
    CHECK(slurp(json_a) == slurp(json_b));
    CHECK(a.stdout_text.find("consistent structures (1)") != std::string::npos);
    CHECK(a.stdout_text.find("X2 -> X1") != std::string::npos);

    const RunResult c = run("analyze --oracle-fixture resp-sec42");
    CHECK(c.exit_code == 0);
    CHECK(c.stdout_text.find("consistent structures (2)") != std::string::npos);
    CHECK(c.stdout_text.find("X1: direct-cause") != std::string::npos);
}

TEST_CASE("analyze data mode is deterministic end to end") {
    const fs::path csv = temp_file("an_data.csv");
    REQUIRE(run("simulate --fixture stim-collider -n 20000 --seed 5 -o " + csv.string())
                .exit_code == 0);
    const fs::path j1 = temp_file("an_a.json");
    const fs::path j2 = temp_file("an_b.json");
    const RunResult r1 = run("analyze --data " + csv.string() + " --alpha 0.01 -o " +
                             j1.string());
    const RunResult r2 = run("analyze --data " + csv.string() + " --alpha 0.01 -o " +
                             j2.string());
    CHECK(r1.exit_code == 0);
    CHECK(slurp(j1) == slurp(j2));
    CHECK(r1.stdout_text.find("statistical") != std::string::npos);
}

TEST_CASE("analyze accepts an scm spec through the oracle path") {
    const fs::path spec = temp_file("an_spec.scm");
    {
        std::ofstream out(spec);
        out << "[experiment]\nkind = stimulus\n\n[S]\nrole = stimulus\nmechanism = discrete\n"
               "cardinality = 2\nrow = 0.5 0.5\n\n[X1]\nrole = feature\nparents = S\n"
               "mechanism = linear\nweights = S:1\nnoise_variance = 1\nintercept = 0\n\n"
               "[X2]\nrole = feature\nparents = X1\nmechanism = linear\nweights = X1:1\n"
               "noise_variance = 1\nintercept = 0\n";
    }
    const RunResult r = run("analyze --oracle-scm " + spec.string());
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("decoding relevant:   X1") != std::string::npos);
}

TEST_CASE("enumerate reproduces the deduction counts") {
    const fs::path s41 = temp_file("stmts41.txt");
    {
        std::ofstream out(s41);
        out << "S X1 : dep\nS X2 : indep\nS X2 | X1 : dep\n";
    }
    const RunResult a = run("enumerate --vars S:stimulus,X1:feature,X2:feature "
                            "--statements " + s41.string() +
                            " --randomized-root S --sufficiency");
    CHECK(a.exit_code == 0);
    CHECK(a.stdout_text.find("consistent structures: 1") != std::string::npos);

    const fs::path s42 = temp_file("stmts42.txt");
    {
        std::ofstream out(s42);
        out << "X1 R : dep\nX2 R : dep\nX2 R | X1 : indep\n";
    }
    const RunResult b = run("enumerate --vars X1:feature,X2:feature,R:response "
                            "--statements " + s42.string() +
                            " --no-outgoing-to-features R --sufficiency");
    CHECK(b.exit_code == 0);
    CHECK(b.stdout_text.find("consistent structures: 2") != std::string::npos);
    CHECK(b.stdout_text.find("shared edges: X1 -> R") != std::string::npos);

    const RunResult c = run("enumerate --vars A:feature,B:feature,C:feature");
    CHECK(c.exit_code == 0);
    CHECK(c.stdout_text.find("consistent structures: 25") != std::string::npos);
}

TEST_CASE("enumerate rejects contradictions and over-cap variable lists") {
    const fs::path bad = temp_file("stmts_bad.txt");
    {
        std::ofstream out(bad);
        out << "A B : dep\nB A : indep\n";
    }
    CHECK(run("enumerate --vars A:feature,B:feature --statements " + bad.string())
              .exit_code == 1);

    std::string vars = "V0:feature";
    for (int i = 1; i < 8; ++i) vars += ",V" + std::to_string(i) + ":feature";
    CHECK(run("enumerate --vars " + vars).exit_code == 3);
}

TEST_CASE("calibrate stays in band and reports the rate") {
    const RunResult fisher = run("calibrate fisher-z --trials 500 --alpha 0.01 --seed 1");
    CHECK(fisher.exit_code == 0);
    CHECK(fisher.stdout_text.find("type-I error") != std::string::npos);
    const RunResult g = run("calibrate g-test --trials 2000 --alpha 0.01 --seed 1 --given 1");
    CHECK(g.exit_code == 0);
    CHECK(run("calibrate wat --trials 500").exit_code == 1);
    CHECK(run("calibrate fisher-z --trials 50").exit_code == 1);
}

}  // TEST_SUITE
