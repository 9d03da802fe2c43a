#include <doctest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "config.hpp"

using namespace simplab;
using namespace simplab::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "simplab");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(SIMPLAB_TEST_DATA) + "/" + name; }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing") {
    Config c;
    CHECK(c.weights.weight_add == 1);
    CHECK(c.seed == 1);
    apply_config_file(c, "# settings\nweights = 2,3,1\nbudget=5,100,100\ntrials=4\nseed=9\nformat=json\ncheck=true\n");
    CHECK(c.weights.weight_add == 2);
    CHECK(c.weights.weight_mul == 3);
    CHECK(c.weights.weight_neg == 1);
    CHECK(c.budget.max_iterations == 5);
    CHECK(c.trials == 4);
    CHECK(c.seed == 9);
    CHECK(c.format == OutputFormat::Json);
    CHECK(c.check);
    CHECK_THROWS_AS(apply_config_file(c, "weights=0,1,0\n"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_file(c, "colour=blue\n"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_file(c, "trials=0\n"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_file(c, "seed\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_weights("1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_format("yaml"), std::invalid_argument);
    try {
        apply_config_file(c, "\n\nformat=xml\n");
    } catch (const std::invalid_argument& e) {
        CHECK(contains(e.what(), "line 3"));
    }
}

TEST_CASE("simplify command") {
    const auto r = invoke({"simplify", "x*w + y*z + x*z + y*w"});
    CHECK(r.code == kSuccess);
    CHECK(contains(r.out, "best_cost: 3\n"));
    CHECK(contains(r.out, "original_cost: 7\n"));
    CHECK(contains(r.out, "saturated: true\n"));
    CHECK(contains(r.out, "status: simplified\n"));

    const auto m = invoke({"simplify", "(x+y)*(w+z)"});
    CHECK(m.code == kSuccess);
    CHECK(contains(m.out, "already minimal (within budget)"));

    const auto corpus = invoke({"--format", "json", "simplify", "x*(y+x)+x^2*(y+1+x)+3*(x+3)"});
    CHECK(corpus.code == kSuccess);
    CHECK(contains(corpus.out, "\"best_cost\": 7"));
    CHECK(contains(corpus.out, "\"original_cost\": 10"));

    const auto csv = invoke({"simplify", "2+3", "--format", "csv"});
    CHECK(contains(csv.out, "\"5\",0,0,true,saturated"));

    const auto bad = invoke({"simplify", "x+*y"});
    CHECK(bad.code == kUsageError);
    CHECK(contains(bad.err, "offset 2"));

    const auto rules = invoke({"simplify", "x*y+x*z", "--rules", data("extra.rules")});
    CHECK(rules.code == kSuccess);
    CHECK(contains(rules.out, "best_cost: 2\n"));

    const auto weights = invoke({"simplify", "(-x)", "--weights", "1,1,5"});
    CHECK(contains(weights.out, "best_cost: 1\n"));

    const auto budget = invoke({"simplify", "x*(y+z)*(w+1)", "--budget", "1,1000,1000"});
    CHECK(contains(budget.out, "stop: iteration-limit\n"));
}

TEST_CASE("eval command") {
    CHECK(invoke({"eval", "(x+y)*(w+z)", "--var", "x=1", "--var", "y=2", "--var", "w=3", "--var", "z=4"}).out == "21\n");
    CHECK(invoke({"eval", "x-5", "--var", "x=-2"}).out == "-7\n");
    const auto unbound = invoke({"eval", "x+q", "--var", "x=1"});
    CHECK(unbound.code == kUsageError);
    CHECK(contains(unbound.err, "'q'"));
    CHECK(invoke({"eval", "x", "--var", "x"}).code == kUsageError);
    CHECK(invoke({"eval", "x*x", "--var", "x=4611686018427387846", "--modulus", "4611686018427387847"}).out == "1\n");
}

TEST_CASE("perm and det commands") {
    for (const char* a : {"naive", "expand", "subset-dp", "ryser", "perm_ryser"}) {
        const auto r = invoke({"perm", data("m2.txt"), "--algorithm", a, "--check"});
        CHECK(r.code == kSuccess);
        CHECK(r.out == "10\n");
    }
    CHECK(invoke({"perm", data("identity5.txt"), "--algorithm", "subset-dp"}).out == "1\n");
    const auto guard = invoke({"perm", data("ones13.txt"), "--algorithm", "naive"});
    CHECK(guard.code == kGuardViolation);
    CHECK(contains(guard.err, "limit 12"));
    CHECK(invoke({"perm", data("m2.txt"), "--algorithm", "magic"}).code == kUsageError);
    CHECK(invoke({"perm", data("missing.txt")}).code == kUsageError);
    CHECK(invoke({"perm", data("m2.txt"), "--algorithm", "expand", "--row", "3"}).code == kUsageError);

    CHECK(invoke({"det", data("m2.txt"), "--algorithm", "elimination", "--check"}).out == "-2\n");
    CHECK(invoke({"det", data("m2.txt"), "--algorithm", "cofactor", "--row", "2"}).out == "-2\n");
    CHECK(invoke({"det", data("identity50.txt")}).out == "1\n");
    CHECK(invoke({"det", data("equal_rows5.txt"), "--algorithm", "cofactor"}).out == "0\n");

    const auto skipped = invoke({"--check", "det", data("identity50.txt")});
    CHECK(skipped.code == kSuccess);
    CHECK(contains(skipped.err, "skipped"));

    const auto json = invoke({"perm", data("m2.txt"), "--format", "json", "--check"});
    CHECK(contains(json.out, "\"value\": \"10\""));
    CHECK(contains(json.out, "\"check\": \"passed\""));
}

TEST_CASE("bench command") {
    const auto empty = invoke({"bench", "--algorithm", "perm_ryser", "--sizes", ""});
    CHECK(empty.code == kSuccess);
    CHECK(empty.out == "algorithm,n,rep,wall_seconds,digest\n");

    const auto r = invoke({"bench", "--algorithm", "perm_ryser", "--sizes", "3..5", "--reps", "2", "--summary"});
    CHECK(r.code == kSuccess);
    CHECK(contains(r.out, "perm_ryser,5,1,"));
    CHECK(contains(r.out, "# ratio n=5/n=4: "));

    CHECK(invoke({"bench", "--algorithm", "perm_naive", "--sizes", "12..13"}).code == kGuardViolation);
    CHECK(invoke({"bench", "--algorithm", "perm_naive", "--sizes", "5..3"}).code == kUsageError);
    CHECK(invoke({"bench", "--algorithm", "perm_naive", "--sizes", "a"}).code == kUsageError);
}

TEST_CASE("fib and recur commands") {
    CHECK(invoke({"fib", "10"}).out == "55\n");
    CHECK(invoke({"fib", "10", "--method", "naive"}).out == "55\n");
    CHECK(invoke({"fib", "70", "--method", "binet", "--check"}).out == invoke({"fib", "70"}).out);
    const auto capped = invoke({"fib", "71", "--method", "binet"});
    CHECK(capped.code == kGuardViolation);
    CHECK(invoke({"fib", "31", "--method", "naive"}).code == kGuardViolation);
    CHECK(invoke({"fib", "5", "--method", "guess"}).code == kUsageError);
    CHECK(invoke({"fib", "10", "--method", "naive", "--count-ops"}).out == "value: 55\ncalls: 109\nop_count: 54\n");

    CHECK(invoke({"recur", "f(n) = f_1 + 1; f(0)=0", "100", "--method", "naive", "--count-ops"}).out ==
          "value: 100\ncalls: 101\nop_count: 100\n");
    CHECK(invoke({"recur", "f(n) = f_1 + 1; f(0)=0", "-1"}).code == kGuardViolation);
    CHECK(invoke({"recur", "f(n) = f_1 +; f(0)=0", "3"}).code == kUsageError);
}

TEST_CASE("rules dump and usage errors") {
    const auto dump = invoke({"rules", "dump"});
    CHECK(dump.code == kSuccess);
    CHECK(contains(dump.out, "(?a*(?b+?c)) => ((?a*?b)+(?a*?c))"));
    CHECK(invoke({}).code == kUsageError);
    CHECK(invoke({"frobnicate"}).code == kUsageError);
    CHECK(invoke({"--trials", "0", "simplify", "x"}).code == kUsageError);
    CHECK(invoke({"--help"}).code == kSuccess);
}

TEST_CASE("config file precedence") {
    const std::string path = std::string(SIMPLAB_TEST_BINARY_DIR) + "/cli_test.conf";
    {
        std::ofstream f(path);
        f << "format=json\nweights=1,1,5\n";
    }
    const auto from_file = invoke({"--config", path, "simplify", "(-x)"});
    CHECK(contains(from_file.out, "\"best_cost\": 1"));
    const auto flag_wins = invoke({"--config", path, "--format", "text", "--weights", "1,1,0", "simplify", "(-x)"});
    CHECK(contains(flag_wins.out, "best_cost: 0\n"));
    CHECK(invoke({"--config", data("missing.conf"), "simplify", "x"}).code == kUsageError);
}

}  // TEST_SUITE
