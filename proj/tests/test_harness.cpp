#include "ustatboot/harness/config.hpp"
#include "ustatboot/harness/experiments.hpp"
#include "ustatboot/harness/output.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace ustatboot::harness;
using nlohmann::json;

namespace {

ExperimentConfig small(Experiment e) {
  ExperimentConfig c = default_config(e);
  c.n = 30;
  c.p = 4;
  c.replications = 6;
  c.bootstrap_b = 40;
  c.z_draws = 200;
  c.plugin_reps = 1;
  c.grid_points = 20;
  if (e == Experiment::MaximalIneqScaling) c.n_grid = {20, 40};
  return c;
}

std::string csv_of(const ExperimentOutput& o) {
  std::ostringstream s;
  write_csv(s, o.table);
  return s.str();
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("experiment names round trip") {
    for (Experiment e : all_experiments()) CHECK(parse_experiment(experiment_name(e)) == e);
    CHECK(all_experiments().size() == 8);
    CHECK_THROWS_AS(parse_experiment("nope"), ConfigError);
  }

  TEST_CASE("defaults") {
    const ExperimentConfig pp = default_config(Experiment::PpPlot);
    CHECK(pp.n == 200);
    CHECK(pp.p == 40);
    CHECK(pp.bootstrap_b == 200);
    CHECK(pp.model.family == "contaminated_normal");
    CHECK(pp.model.epsilon == 0.2);
    CHECK(pp.model.nu == 1.5);
    CHECK(pp.alpha_grid.front() == doctest::Approx(0.01));
    CHECK(pp.alpha_grid.back() == doctest::Approx(0.99));
    const ExperimentConfig nh = default_config(Experiment::NaiveVsHajek);
    CHECK(nh.model.family == "elliptic_t");
    CHECK(nh.model.nu == 8.0);
    CHECK(default_config(Experiment::Coverage).n == 500);
    for (Experiment e : all_experiments()) CHECK_NOTHROW(validate(default_config(e)));
  }

  TEST_CASE("json round trip and rejection of unknown keys") {
    for (Experiment e : all_experiments()) {
      const ExperimentConfig c = default_config(e);
      const json j = to_json(c);
      CHECK(to_json(parse_config(j, e)) == j);
      CHECK(to_json(parse_config(j, std::nullopt)) == j);
    }
    CHECK_THROWS_AS(parse_config(json{{"bogus", 1}}, Experiment::PpPlot), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"model", {{"colour", "red"}}}}, Experiment::PpPlot),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"n", "many"}}, Experiment::PpPlot), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"experiment", "coverage"}}, Experiment::PpPlot),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(json::object(), std::nullopt), ConfigError);
    const ExperimentConfig c =
        parse_config(json{{"n", 50}, {"model", {{"v_kind", "d2"}}}}, Experiment::PpPlot);
    CHECK(c.n == 50);
    CHECK(c.model.v_kind == "d2");
    CHECK(c.model.epsilon == 0.2);
  }

  TEST_CASE("validation") {
    ExperimentConfig c = default_config(Experiment::PpPlot);
    c.replications = 0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = default_config(Experiment::PpPlot);
    c.alpha_grid = {0.5, 1.0};
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = default_config(Experiment::PpPlot);
    c.model.v_kind = "equicorrelation";
    c.model.rho = 1.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = default_config(Experiment::PpPlot);
    c.model.family = "elliptic_t";
    c.model.nu = 3.0;
    CHECK_THROWS_AS(validate(c), ConfigError);
    c = default_config(Experiment::MaximalIneqScaling);
    c.n_grid = {100};
    CHECK_THROWS_AS(validate(c), ConfigError);
    CHECK_THROWS_AS(build_kernel("spearman", 3), ConfigError);
  }

  TEST_CASE("helpers") {
    CHECK(loglog_slope({1, 2, 4}, {1, 0.5, 0.25}) == doctest::Approx(-1.0));
    CHECK(loglog_slope({10, 100}, {3, 30}) == doctest::Approx(1.0));
    CHECK(std::isnan(loglog_slope({1, 2}, {0, 1})));
    CHECK(empirical_cdf({1, 2, 3, 4}, 2.5) == 0.5);
    CHECK(empirical_cdf({1, 2, 3, 4}, 4.0) == 1.0);
    CHECK(empirical_cdf({1, 2, 3, 4}, 0.0) == 0.0);
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(meta_path("a/b.csv") == "a/b.csv.meta.json");
  }

  TEST_CASE("csv writer") {
    CsvTable t{{"a", "b"}, {{1.0, 0.5}, {2.0, NAN}}};
    std::ostringstream s;
    write_csv(s, t);
    CHECK(s.str() == "a,b\n1,0.5\n2,nan\n");
    CHECK(t.column("b") == 1);
    CHECK(t.values("a") == std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(t.column("c"), std::out_of_range);
  }

  TEST_CASE("meta sidecar") {
    const ExperimentConfig c = default_config(Experiment::TestSize);
    const json m = build_meta(c, json{{"x", 1}}, 1.5);
    CHECK(m.at("seed") == c.seed);
    CHECK(m.at("csv_schema") == kCsvSchemaVersion);
    CHECK(m.at("config") == to_json(c));
    CHECK(m.at("wall_time_seconds") == 1.5);
    CHECK(m.at("versions").contains("eigen"));
    CHECK(m.at("summary").at("x") == 1);
  }

  TEST_CASE("every experiment runs and is deterministic") {
    for (Experiment e : all_experiments()) {
      CAPTURE(experiment_name(e));
      const ExperimentConfig c = small(e);
      const ExperimentOutput a = run_experiment(c);
      const ExperimentOutput b = run_experiment(c);
      CHECK(csv_of(a) == csv_of(b));
      CHECK(a.summary == b.summary);
      CHECK_FALSE(a.table.header.empty());
      CHECK_FALSE(a.table.rows.empty());
      for (const auto& row : a.table.rows) CHECK(row.size() == a.table.header.size());
      ExperimentConfig w = c;
      w.workers = 3;
      CHECK(csv_of(run_experiment(w)) == csv_of(a));
    }
  }

  TEST_CASE("pp and coverage curves") {
    ExperimentConfig c = small(Experiment::PpPlot);
    c.replications = 1;
    const ExperimentOutput one = run_pp_plot(c);
    for (double v : one.table.values("coverage")) CHECK((v == 0.0 || v == 1.0));
    c.replications = 20;
    for (Experiment e : {Experiment::PpPlot, Experiment::Coverage}) {
      ExperimentConfig cc = small(e);
      cc.replications = 20;
      const ExperimentOutput o = run_experiment(cc);
      const std::string col = e == Experiment::PpPlot ? "coverage" : "coverage_all";
      const auto v = o.table.values(col);
      CHECK(std::is_sorted(v.begin(), v.end()));
    }
    ExperimentConfig cov = small(Experiment::Coverage);
    const ExperimentOutput o = run_coverage(cov);
    const auto all = o.table.values("coverage_all");
    const auto off = o.table.values("coverage_off");
    CHECK(all.size() == off.size());
  }

  TEST_CASE("test size sweep") {
    ExperimentConfig c = small(Experiment::TestSize);
    c.replications = 30;
    c.alpha_grid = {0.05, 0.2, 0.5};
    const ExperimentOutput o = run_test_size(c);
    for (const std::string col : {"empirical_size_cov", "empirical_size_kendall"}) {
      const auto v = o.table.values(col);
      CHECK(std::is_sorted(v.begin(), v.end()));
    }
  }

  TEST_CASE("threshold eval on a diagonal truth") {
    ExperimentConfig c = small(Experiment::ThresholdEval);
    c.model.band = 0;
    c.n = 100;
    c.replications = 20;
    const ExperimentOutput o = run_threshold_eval(c);
    CHECK(o.summary.at("zeta_p") == 1.0);
    CHECK(o.summary.at("spectral_violations") == 0);
    CHECK(o.summary.at("frobenius_violations") == 0);
  }

  TEST_CASE("constant kernel remainder vanishes") {
    ExperimentConfig c = small(Experiment::MaximalIneqScaling);
    c.kernel = "constant";
    const ExperimentOutput o = run_maximal_ineq_scaling(c);
    for (double v : o.table.values("mean_sup_V")) CHECK(v == 0.0);
    for (double v : o.table.values("mean_sup_W")) CHECK(v == 0.0);

    ExperimentConfig s = small(Experiment::MaximalIneqScaling);
    s.p = 1;
    s.n_grid = {20, 80, 320};
    s.replications = 40;
    const auto w = run_maximal_ineq_scaling(s).table.values("mean_sup_V");
    CHECK(w.back() < w.front());
  }
}
