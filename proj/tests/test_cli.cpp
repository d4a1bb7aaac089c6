#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "coarsekit/io.hpp"

using namespace coarsekit;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string out_path = "cli_stdout.tmp";
    std::string cmd = std::string(COARSEKIT_BIN) + " " + args + " > " +
                      out_path + " 2> cli_stderr.tmp";
    int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

void write_line_kernel(const std::string& path) {
    auto s = QuasiNormedSpace::make(1, 1.0);
    PointSet pts{s, {"(0)", "(1)", "(2)"}, {Vec{0.0}, Vec{1.0}, Vec{2.0}}};
    io::save_file(path, io::to_json(distance_kernel(pts)));
}

void write_indefinite_kernel(const std::string& path) {
    KernelMatrix B;
    B.labels = {"a", "b"};
    B.entries.resize(2, 2);
    B.entries << 0.0, -1.0, -1.0, 0.0;
    io::save_file(path, io::to_json(B));
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run("").code == 1);
    CHECK(run("no-such-command").code == 1);
    CHECK(run("kernel check --mode nd").code == 1);  // missing file
}

TEST_CASE("kernel check passes and fails with the right exit codes") {
    write_line_kernel("cli_line.json");
    auto ok = run("kernel check --mode nd cli_line.json --no-meta");
    CHECK(ok.code == 0);
    auto rep = io::json::parse(ok.out);
    CHECK(rep.at("command") == "kernel check nd");
    CHECK(rep.at("verdicts")[0].at("passed") == true);
    CHECK_FALSE(rep.contains("wall_time"));

    write_indefinite_kernel("cli_bad.json");
    auto bad = run("kernel check --mode nd cli_bad.json --no-meta");
    CHECK(bad.code == 2);
    auto brep = io::json::parse(bad.out);
    CHECK(brep.at("certificates").size() == 1);

    // the emitted certificate is accepted back by witness-validate
    io::save_file("cli_witness.json",
                  {{"c", brep.at("certificates")[0].at("certificate")}});
    auto wv = run("witness-validate --mode nd --kernel cli_bad.json "
                  "--witness cli_witness.json --no-meta");
    CHECK(wv.code == 0);
}

TEST_CASE("malformed input exits 1") {
    std::ofstream bad("cli_malformed.json");
    bad << "{ nope";
    bad.close();
    CHECK(run("kernel check --mode nd cli_malformed.json").code == 1);
    CHECK(run("kernel check --mode nd cli_absent.json").code == 1);
}

TEST_CASE("reports are byte-identical under --no-meta") {
    write_line_kernel("cli_line.json");
    auto a = run("kernel check --mode nd cli_line.json --no-meta");
    auto b = run("kernel check --mode nd cli_line.json --no-meta");
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
    // without --no-meta the wall time field appears
    auto c = run("kernel check --mode nd cli_line.json");
    CHECK(io::json::parse(c.out).contains("wall_time"));
}

TEST_CASE("space grid writes a loadable sample") {
    auto r = run("space grid --dim 1 --q 2 --radius 2 --step 1 "
                 "--out cli_grid.json --no-meta");
    CHECK(r.code == 0);
    auto ps = io::pointset_from_json(io::load_file("cli_grid.json"));
    CHECK(ps.size() == 5);
    CHECK_NOTHROW(ps.validate());
}

TEST_CASE("kernel transform and embed chain together") {
    write_line_kernel("cli_line.json");
    auto t = run("kernel transform --op power --a 0.5 cli_line.json "
                 "--out cli_snow.json --no-meta");
    CHECK(t.code == 0);
    auto K = io::kernel_from_json(io::load_file("cli_snow.json"));
    CHECK(K.entries(0, 2) == doctest::Approx(std::sqrt(2.0)));

    auto e = run("embed --from nd --basepoint \"(0)\" cli_snow.json "
                 "--out cli_embed.json --csv cli_embed.csv --no-meta");
    CHECK(e.code == 0);
    auto E = io::embedding_from_json(io::load_file("cli_embed.json"));
    CHECK(E.dist2(0, 2) == doctest::Approx(std::sqrt(2.0)));
    std::ifstream csv("cli_embed.csv");
    CHECK(csv.good());

    // embedding an indefinite kernel fails with a certificate, exit 2
    write_indefinite_kernel("cli_bad.json");
    auto f = run("embed --from nd --basepoint a cli_bad.json "
                 "--out cli_none.json --no-meta");
    CHECK(f.code == 2);
}

TEST_CASE("moduli subcommand computes a profile") {
    run("space grid --dim 1 --q 2 --radius 2 --step 1 --out cli_grid.json");
    auto s = QuasiNormedSpace::make(1, 2.0);
    auto grid = sample_grid(s, 2, 1.0);
    auto ms = evaluate_map(grid, gaussian_sphere_model().as_sqdist(), 1e-8);
    io::save_file("cli_image.json", io::to_json(ms.image));

    auto r = run("moduli --sample cli_grid.json --image cli_image.json "
                 "--thresholds 1,2,4 --out cli_prof.json --csv cli_prof.csv "
                 "--no-meta");
    CHECK(r.code == 0);
    auto j = io::load_file("cli_prof.json");
    CHECK(j.at("thresholds").size() == 3);
    double phi1 = j.at("phi")[0].get<double>();
    CHECK(phi1 ==
          doctest::Approx(std::sqrt(2.0 * (1.0 - std::exp(-1.0)))).epsilon(1e-9));
}

TEST_CASE("glue subcommand validates a family built from a sample") {
    auto s = QuasiNormedSpace::make(1, 2.0);
    PointSet pts{s, {"(0)", "(3)"}, {Vec{0.0}, Vec{3.0}}};
    io::save_file("cli_pair.json", io::to_json(pts));
    auto fam = build_scale_family(gaussian_sphere_model(), pts, 0.5, 1, 1e-10);
    io::save_file("cli_family.json", io::to_json(fam));

    auto r = run("glue --family cli_family.json --sample cli_pair.json "
                 "--basepoint \"(0)\" --out cli_glued.json --no-meta");
    CHECK(r.code == 0);
    auto rep = io::json::parse(r.out);
    bool any_pass = false;
    for (const auto& v : rep.at("verdicts"))
        if (v.at("passed") == true) any_pass = true;
    CHECK(any_pass);
}

TEST_CASE("pipeline c2u runs end to end") {
    auto r = run("pipeline c2u --dim 1 --q 2 --radius 4 --step 1 "
                 "--map gaussian --out cli_pipe.json --no-meta");
    CHECK(r.code == 0);
    auto j = io::load_file("cli_pipe.json");
    CHECK(j.at("passed") == true);
    CHECK(j.at("stages").size() == 5);
}
