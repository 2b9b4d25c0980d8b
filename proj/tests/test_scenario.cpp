#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "choreo/errors.hpp"
#include "choreo/scenario.hpp"
#include "doctest.h"

using namespace choreo;

namespace {

nlohmann::json fast(const char* name, int steps) {
    nlohmann::json cfg = preset_config(name);
    cfg["tracker"]["steps"] = steps;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("preset configs are deterministic and validated") {
    for (const auto& name : preset_names()) {
        nlohmann::json a = preset_config(name);
        nlohmann::json b = preset_config(name);
        CHECK(a.dump() == b.dump());
        CHECK(a.contains("curve"));
        CHECK(a.contains("family"));
        CHECK(a.contains("tracker"));
        CHECK(a.contains("seed"));
    }
    CHECK_THROWS_AS(preset_config("no-such-preset"), ConfigError);
}

TEST_CASE("pencil scenario produces a full report") {
    const ScenarioResult r = run_scenario(fast("sec7-2", 600));
    REQUIRE(r.exit_code == 0);
    const nlohmann::json& rep = r.report;
    CHECK(rep["error"].is_null());
    CHECK(rep["version"] == "0.1.0");
    CHECK(rep["curve_type"] == "type_i");
    CHECK(rep["basis"] == "complex_orientation");
    CHECK(rep["components"].size() == 2);

    CHECK(rep["divisor"]["degree"] == 3);
    CHECK(rep["divisor"]["n_real"] == 3);
    CHECK(rep["divisor"]["purely_real"] == true);

    CHECK(rep["c"].size() == 2);
    CHECK(std::abs(rep["c"]["0"].get<int>()) == 1);
    CHECK(rep["c"]["0"].get<int>() == rep["c"]["1"].get<int>());

    bool saw_law = false, saw_th1a = false;
    for (const auto& v : rep["verdicts"]) {
        if (v["id"] == "Sec3_3") {
            saw_law = true;
            CHECK(v["applicable"] == true);
            CHECK(v["satisfied"] == true);
        }
        if (v["id"] == "Th1a") {
            saw_th1a = true;
            CHECK(v["applicable"] == true);
            CHECK(v["satisfied"] == true);
        }
    }
    CHECK(saw_law);
    CHECK(saw_th1a);

    CHECK(rep["abel_jacobi_residual"].is_number());
    CHECK(rep["transversality_margin"].get<double>() > 1e-3);
    CHECK(rep["diagnostics"]["max_residual"].get<double>() < 1e-8);
    CHECK(rep["all_applicable_satisfied"] == true);
    CHECK(rep["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("reports are byte-identical across repeated runs") {
    const nlohmann::json cfg = fast("sec7-2", 600);
    const ScenarioResult a = run_scenario(cfg);
    const ScenarioResult b = run_scenario(cfg);
    CHECK(a.exit_code == 0);
    CHECK(a.report.dump() == b.report.dump());
}

TEST_CASE("output paths change report files but not the config hash") {
    nlohmann::json cfg = fast("sec7-2", 600);
    const std::string h0 = run_scenario(cfg).report["config_hash"];
    cfg["outputs"] = {{"report", "scn_rep.json"},
                      {"trajectory", "scn_traj.csv"},
                      {"plot", "scn_plot.svg"}};
    const ScenarioResult r = run_scenario(cfg);
    REQUIRE(r.exit_code == 0);
    CHECK(r.report["config_hash"] == h0);

    const std::string rep = slurp("scn_rep.json");
    CHECK(rep == r.report.dump(2) + "\n");

    const std::string csv = slurp("scn_traj.csv");
    CHECK(csv.rfind("t,point_id,class,x_re,x_im,y_re,y_im,z_re,z_im,component_id,angle_lift\n",
                    0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 601);

    const std::string svg = slurp("scn_plot.svg");
    CHECK(svg.find("<svg") != std::string::npos);

    std::remove("scn_rep.json");
    std::remove("scn_traj.csv");
    std::remove("scn_plot.svg");
}

TEST_CASE("invalid configs exit with code 4") {
    auto code = [](const nlohmann::json& cfg) { return run_scenario(cfg).exit_code; };
    nlohmann::json good = fast("sec7-2", 100);

    nlohmann::json missing = good;
    missing.erase("curve");
    CHECK(code(missing) == 4);

    nlohmann::json extra = good;
    extra["surprise"] = 1;
    CHECK(code(extra) == 4);

    nlohmann::json bad_kind = good;
    bad_kind["family"] = {{"kind", "waltz"}};
    CHECK(code(bad_kind) == 4);

    nlohmann::json bad_steps = good;
    bad_steps["tracker"]["steps"] = "many";
    CHECK(code(bad_steps) == 4);

    nlohmann::json bad_check = good;
    bad_check["checks"] = {"Th9z"};
    CHECK(code(bad_check) == 4);

    nlohmann::json bad_override = good;
    bad_override["curve_type_override"] = "type_iii";
    CHECK(code(bad_override) == 4);

    const nlohmann::json err = run_scenario(missing).report["error"];
    CHECK(err["kind"] == "config_error");
    CHECK(err["t"].is_null());
}

TEST_CASE("tangent start line exits with code 3") {
    // The horizontal line through the top of the oval is tangent there, so
    // the start divisor is non-simple.
    const double xt = -1.0 / std::sqrt(3.0);
    const double yt = std::sqrt(xt * xt * xt - xt);
    nlohmann::json cfg = fast("sec7-2", 100);
    cfg["family"] = {{"kind", "line_pencil"},
                     {"center", {0.7, yt}},
                     {"theta0", std::acos(-1.0) / 2.0}};
    const ScenarioResult r = run_scenario(cfg);
    CHECK(r.exit_code == 3);
    CHECK(r.report["error"]["kind"] == "non_simple_start");
}

TEST_CASE("type II pencil ends in a discriminant hit with exit code 2") {
    const ScenarioResult r = run_scenario(fast("typeII-pencil", 400));
    CHECK(r.exit_code == 2);
    const nlohmann::json& err = r.report["error"];
    CHECK(err["kind"] == "discriminant_hit");
    const double t = err["t"].get<double>();
    CHECK(t >= 0.0);
    CHECK(t <= std::acos(-1.0));
    CHECK(!r.report.contains("c"));
}

TEST_CASE("checks filter trims the verdict list") {
    nlohmann::json cfg = fast("sec7-2", 600);
    cfg["checks"] = {"Sec3_3"};
    const ScenarioResult r = run_scenario(cfg);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.report["verdicts"].size() == 1);
    CHECK(r.report["verdicts"][0]["id"] == "Sec3_3");
}

TEST_CASE("seed regenerates the random perturbation directions") {
    const nlohmann::json a = preset_config("thm3-null", 7);
    const nlohmann::json b = preset_config("thm3-null", 9);
    CHECK(a["family"]["G0"].dump() == b["family"]["G0"].dump());
    CHECK(a["family"]["R1"].dump() != b["family"]["R1"].dump());
    CHECK(preset_config("thm3-null", 7).dump() == a.dump());
}
