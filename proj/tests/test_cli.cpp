#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "discrete_clt/json_io.hpp"
#include "discrete_clt/psi_family.hpp"
#include "discrete_clt/stable_sum.hpp"
#include "discrete_clt/zero_bias.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace dclt;
using nlohmann::json;

namespace {

struct CmdResult {
  int status = -1;
  std::string out;
};

CmdResult run_cmd(const std::string& command) {
  CmdResult r;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int wait_status = pclose(pipe);
  r.status = WIFEXITED(wait_status) ? WEXITSTATUS(wait_status) : -1;
  return r;
}

CmdResult cli(const std::string& args) {
  return run_cmd(std::string("\"") + DCLT_CLI_PATH + "\" " + args);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream is(line);
  std::string cell;
  while (std::getline(is, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::string write_temp_components(const json& j) {
  const std::string path = "cli_test_components.json";
  std::ofstream os(path);
  os << j.dump();
  return path;
}

}  // namespace

TEST_CASE("json round trip is bit exact") {
  std::mt19937_64 gen(314);
  std::uniform_real_distribution<double> u(1e-20, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> w;
    StableSum total;
    for (int k = 0; k < 12; ++k) {
      w.push_back(u(gen));
      total.add(w.back());
    }
    for (double& x : w) x /= total.value();
    const IntDist d =
        IntDist::from_parts(-5 + trial, std::move(w), u(gen) * 1e-14);

    const json serialized = json::parse(to_json(d).dump());
    const IntDist back = int_dist_from_json(serialized);

    CHECK(back.min_support() == d.min_support());
    CHECK(back.tail_mass() == d.tail_mass());
    REQUIRE(back.support_size() == d.support_size());
    for (std::int64_t i = d.min_support(); i <= d.max_support(); ++i) {
      CHECK(back.pmf(i) == d.pmf(i));  // bitwise, not approximate
    }
  }
}

TEST_CASE("csv primitives enforce the contract") {
  CHECK(csv_number(0.5) == "0.5");
  CHECK(std::stod(csv_number(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(csv_number(6.0668786137257951e-17)) ==
        6.0668786137257951e-17);
  CHECK_THROWS_AS(csv_number(std::numeric_limits<double>::infinity()),
                  std::logic_error);
  CHECK_THROWS_AS(csv_number(std::nan("")), std::logic_error);

  std::ostringstream os;
  CsvWriter w(os, {"a", "b"});
  w.row({"1", "2"});
  CHECK(os.str() == "a,b\n1,2\n");
  CHECK_THROWS_AS(w.row({"1"}), std::logic_error);
  CHECK_THROWS_AS(w.row({"1", "x,y"}), std::logic_error);
}

TEST_CASE("component set json accepts both shapes") {
  const json dist = {{"offset", 0}, {"weights", {0.5, 0.5}}, {"tail_mass", 0.0}};
  const json wrapped = {{"components", json::array({dist, dist})}};
  const json bare = json::array({dist, dist, dist});

  CHECK(component_set_from_json(wrapped).size() == 2);
  CHECK(component_set_from_json(bare).size() == 3);
  CHECK_THROWS_AS(component_set_from_json(json::array()),
                  std::invalid_argument);
  CHECK_THROWS(component_set_from_json(json{{"weights", 1}}));
}

TEST_CASE("cli psi reports the symmetric unit law") {
  const CmdResult r = cli("psi --mu 0 --sigma2 1");
  REQUIRE(r.status == 0);
  const json rep = json::parse(r.out);
  CHECK(rep.at("metadata").at("kappa") == 0);
  CHECK(rep.at("metadata").at("pi_kappa").get<double>() ==
        doctest::Approx(1.0 / (2.0 * std::exp(1.0) - 3.0)).epsilon(1e-12));
  const json& pmf = rep.at("pmf");
  const std::int64_t offset = pmf.at("offset").get<std::int64_t>();
  const double at_zero = pmf.at("weights").at(static_cast<std::size_t>(-offset))
                             .get<double>();
  CHECK(at_zero == doctest::Approx(1.0 / (2.0 * std::exp(1.0) - 3.0))
                       .epsilon(1e-12));
  // var_S = sigma2 + (sigma2 + kappa - mu) * pi_kappa
  const double pi0 = rep.at("metadata").at("pi_kappa").get<double>();
  CHECK(rep.at("metadata").at("var_S").get<double>() ==
        doctest::Approx(1.0 + pi0).epsilon(1e-14));
}

TEST_CASE("cli sweep emits the pinned grid") {
  const CmdResult r = cli("sweep --bernoulli --n 5,10,20,50 --p 0.1:0.9:0.1");
  REQUIRE(r.status == 0);
  const std::vector<std::string> lines = split_lines(r.out);
  REQUIRE(lines.size() == 37);  // header + 4 n-values x 9 p-values
  const std::vector<std::string> header = split_cells(lines[0]);
  REQUIRE(header == sweep_columns());

  const std::size_t actual_col = 5, cor43_col = 6;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::vector<std::string> cells = split_cells(lines[k]);
    REQUIRE(cells.size() == header.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].empty()) continue;  // absent optional bound
      CHECK(std::isfinite(std::stod(cells[c])));
    }
    CHECK(std::stod(cells[actual_col]) <=
          std::stod(cells[cor43_col]) + 1e-12);
  }
}

TEST_CASE("cli stein-check battery holds") {
  const CmdResult r =
      cli("stein-check --mu 0.3 --sigma2 2 --random-sets 1000 --seed 7");
  REQUIRE(r.status == 0);
  const json rep = json::parse(r.out);
  CHECK(rep.at("holds").get<bool>());
  CHECK(rep.at("ratio").get<double>() <= 1.0 + 1e-10);
  CHECK(rep.at("A").is_null());
  CHECK(rep.at("random_sets") == 1000);

  const CmdResult one =
      cli("stein-check --mu 0.3 --sigma2 2 --set 1,2,5 --complement");
  REQUIRE(one.status == 0);
  const json orep = json::parse(one.out);
  CHECK(orep.at("A").at("complement").get<bool>());
  CHECK(orep.at("A").at("members") == json::array({1, 2, 5}));
  CHECK(orep.at("holds").get<bool>());
}

TEST_CASE("cli zero-bias output is a distribution") {
  // kappa = mu - sigma2 puts the family law at the exact fixed point.
  const CmdResult r = cli("zero-bias --mu 1.0 --sigma2 1.0 --kappa 0");
  REQUIRE(r.status == 0);
  const json rep = json::parse(r.out);
  const IntDist zb = int_dist_from_json(rep.at("zero_bias"));
  StableSum mass;
  for (std::int64_t i = zb.min_support(); i <= zb.max_support(); ++i) {
    CHECK(zb.pmf(i) >= 0.0);
    mass.add(zb.pmf(i));
  }
  CHECK(mass.value() + zb.tail_mass() == doctest::Approx(1.0).epsilon(1e-12));

  const IntDist in = int_dist_from_json(rep.at("input"));
  for (std::int64_t i = in.min_support(); i <= in.max_support(); ++i) {
    CHECK(zb.pmf(i) == doctest::Approx(in.pmf(i)).epsilon(1e-8).scale(1.0));
  }
}

TEST_CASE("cli bound consumes a component file") {
  const json dist = {{"offset", 0}, {"weights", {0.7, 0.3}}, {"tail_mass", 0.0}};
  const std::string path =
      write_temp_components({{"components", json::array({dist, dist, dist, dist})}});

  const CmdResult r = cli("bound --components " + path);
  REQUIRE(r.status == 0);
  const json rep = json::parse(r.out);
  CHECK(rep.at("mu").get<double>() == doctest::Approx(1.2).epsilon(1e-14));
  CHECK(rep.at("kappa") == 2);
  CHECK(rep.at("dplus_exact").size() == 4);
  CHECK(rep.at("actual_tv").get<double>() <=
        rep.at("cor43_bound").get<double>());

  const CmdResult c = cli("bound --components " + path + " --format csv");
  REQUIRE(c.status == 0);
  const std::vector<std::string> lines = split_lines(c.out);
  REQUIRE(lines.size() == 2);
  const std::vector<std::string> cells = split_cells(lines[1]);
  REQUIRE(cells.size() == sweep_columns().size());
  CHECK(cells[0] == "4");
  CHECK(cells[1].size() == 16);  // content hash in place of a single p
  std::remove(path.c_str());
}

TEST_CASE("cli simulate agrees with the closed form") {
  const CmdResult r = cli(
      "simulate --mu 0.3 --sigma2 2 --seed 5 --replicas 4000 --stop hit_down");
  REQUIRE(r.status == 0);
  const json rep = json::parse(r.out);
  const double est = rep.at("result").at("estimate").get<double>();
  const double se = rep.at("result").at("std_error").get<double>();
  const double exact = rep.at("closed_form").get<double>();
  CHECK(std::abs(est - exact) <= 3.0 * se);
  CHECK(rep.at("result").at("seed") == 5);
  CHECK(rep.at("result").at("replicas") == 4000);
}

TEST_CASE("cli reruns are byte identical") {
  const std::string sweep_args = "sweep --bernoulli --n 8 --p 0.25,0.5";
  const CmdResult a = cli(sweep_args);
  const CmdResult b = cli(sweep_args);
  REQUIRE(a.status == 0);
  CHECK(a.out == b.out);

  const std::string sim_args =
      "simulate --mu 1.2 --sigma2 0.9 --seed 77 --replicas 200";
  const CmdResult c = cli(sim_args);
  const CmdResult d = cli(sim_args);
  REQUIRE(c.status == 0);
  CHECK(c.out == d.out);

  const CmdResult e = cli("simulate --mu 1.2 --sigma2 0.9 --seed 78 --replicas 200");
  CHECK(e.out != c.out);
}

TEST_CASE("cli exit codes distinguish failure modes") {
  CHECK(cli("psi --mu 0 --sigma2 1 --no-such-flag").status != 0);
  CHECK(cli("nonsense").status != 0);
  CHECK(cli("psi --mu 0 --sigma2 -1").status == 1);
  CHECK(cli("psi --mu 0 --sigma2 1 --format csv").status == 1);
  CHECK(cli("sweep --bernoulli --n 5 --p 1.5").status == 1);
  CHECK(cli("sweep --bernoulli --n 5 --p 0.2 --format json").status == 1);
  CHECK(cli("bound --components no_such_file.json").status == 1);

  const CmdResult capped = run_cmd(std::string("DISCRETE_CLT_SUPPORT_CAP=10 \"") +
                                   DCLT_CLI_PATH +
                                   "\" sweep --bernoulli --n 40 --p 0.5");
  CHECK(capped.status == 3);
  const CmdResult bad_cap = run_cmd(
      std::string("DISCRETE_CLT_SUPPORT_CAP=banana \"") + DCLT_CLI_PATH +
      "\" psi --mu 0 --sigma2 1");
  CHECK(bad_cap.status == 1);
}

TEST_CASE("cli writes to an output file when asked") {
  const std::string path = "cli_test_out.json";
  const CmdResult r =
      cli("psi --mu 0.4 --sigma2 1.3 --output " + path);
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream is(path);
  REQUIRE(is.good());
  json rep;
  is >> rep;
  CHECK(rep.at("metadata").at("mu").get<double>() == 0.4);
  std::remove(path.c_str());
}
