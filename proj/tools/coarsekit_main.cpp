#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <iostream>

#include "coarsekit/acceptance.hpp"
#include "coarsekit/io.hpp"

using namespace coarsekit;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;
constexpr int kExitInconclusive = 3;

/// FNV-1a over file bytes, for the input digest in reports.
std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return "unreadable";
    std::uint64_t h = 14695981039346656037ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

struct Report {
    json j;
    bool no_meta = false;
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    bool any_failed = false;
    bool any_inconclusive = false;

    explicit Report(const std::string& command) {
        j["command"] = command;
        j["inputs"] = json::object();
        j["verdicts"] = json::array();
        j["certificates"] = json::array();
    }
    void input(const std::string& path) { j["inputs"][path] = file_digest(path); }
    void verdict(const std::string& name, bool passed, json details = json::object()) {
        j["verdicts"].push_back(
            {{"check", name}, {"passed", passed}, {"details", std::move(details)}});
        if (!passed) any_failed = true;
    }
    void inconclusive(const std::string& name, const std::string& why) {
        j["verdicts"].push_back(
            {{"check", name}, {"passed", false}, {"inconclusive", true},
             {"details", {{"reason", why}}}});
        any_inconclusive = true;
    }
    void certificate(json c) { j["certificates"].push_back(std::move(c)); }

    int finish() {
        if (!no_meta) {
            auto dt = std::chrono::steady_clock::now() - start;
            j["wall_time"] =
                std::chrono::duration<double>(dt).count();
        }
        std::cout << j.dump(2) << "\n";
        int rc = kExitOk;
        if (any_inconclusive) rc = kExitInconclusive;
        if (any_failed) rc = kExitFailed;
        std::cerr << (rc == kExitOk ? "ok" : rc == kExitFailed ? "FAILED"
                                                               : "inconclusive")
                  << ": " << j["command"].get<std::string>() << "\n";
        return rc;
    }
};

double default_tol(const KernelMatrix& k, double flag_tol) {
    if (flag_tol > 0.0) return flag_tol;
    return 1e-9 * std::max(1.0, k.max_abs());
}

SqDistKernel map_by_name(const std::string& name) {
    if (name == "gaussian") return gaussian_sphere_model().as_sqdist();
    if (name == "identity")
        return [](std::span<const double> x, std::span<const double> y) {
            return euclid_dist2(x, y);
        };
    if (name.rfind("file:", 0) == 0) {
        auto j = io::load_file(name.substr(5));
        std::string kind = j.at("kind").get<std::string>();
        double scale = j.value("scale", 1.0);
        auto inner = map_by_name(kind);
        return [inner, scale](std::span<const double> x,
                              std::span<const double> y) {
            return scale * scale * inner(x, y);
        };
    }
    throw CLI::ValidationError("--map", "unknown map " + name);
}

std::vector<double> parse_thresholds(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw CLI::ValidationError("--thresholds", "empty list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coarsekit: executable kernel/embedding checks for coarse and "
                 "uniform embeddability"};
    app.require_subcommand(1);

    bool no_meta = false;
    int threads = 0;
    app.add_flag("--no-meta", no_meta, "omit wall time from the report");
    app.add_option("--threads", threads, "worker threads (0 = auto)");

    // ---- space grid
    auto* sp = app.add_subcommand("space", "sample spaces");
    auto* sp_grid = sp->add_subcommand("grid", "integer grid sample");
    int dim = 1, radius = 2;
    double q = 2.0, step = 1.0;
    std::size_t cap = 5000;
    std::string out_path, csv_path;
    sp_grid->add_option("--dim", dim)->required();
    sp_grid->add_option("--q", q)->required();
    sp_grid->add_option("--radius", radius)->required();
    sp_grid->add_option("--step", step)->required();
    sp_grid->add_option("--cap", cap);
    sp_grid->add_option("--out", out_path)->required();

    // ---- kernel check / transform
    auto* kn = app.add_subcommand("kernel", "kernel matrix operations");
    auto* kn_check = kn->add_subcommand("check", "definiteness verdict");
    std::string mode, in_path;
    double tol = 0.0;
    kn_check->add_option("--mode", mode, "pd|nd")->required();
    kn_check->add_option("--tol", tol);
    kn_check->add_option("file", in_path)->required();
    auto* kn_tr = kn->add_subcommand("transform", "exp / snowflake transforms");
    std::string op;
    double t_param = 1.0, a_param = 0.5;
    kn_tr->add_option("--op", op, "exp|power")->required();
    kn_tr->add_option("--t", t_param);
    kn_tr->add_option("--a", a_param);
    kn_tr->add_option("file", in_path);
    kn_tr->add_option("--out", out_path)->required();

    // ---- embed
    auto* em = app.add_subcommand("embed", "realize kernels as coordinates");
    std::string from, basepoint;
    em->add_option("--from", from, "nd|pd")->required();
    em->add_option("--basepoint", basepoint);
    em->add_option("--tol", tol);
    em->add_option("in", in_path)->required();
    em->add_option("--out", out_path)->required();
    em->add_option("--csv", csv_path);

    // ---- moduli
    auto* mo = app.add_subcommand("moduli", "empirical phi/omega profile");
    std::string sample_path, image_path, thresholds_csv;
    mo->add_option("--sample", sample_path)->required();
    mo->add_option("--image", image_path)->required();
    mo->add_option("--thresholds", thresholds_csv)->required();
    mo->add_option("--out", out_path);
    mo->add_option("--csv", csv_path);

    // ---- glue
    auto* gl = app.add_subcommand("glue", "Dadarlat-Guentner gluing");
    std::string family_path;
    gl->add_option("--family", family_path)->required();
    gl->add_option("--sample", sample_path)->required();
    gl->add_option("--basepoint", basepoint)->required();
    gl->add_option("--out", out_path);

    // ---- pipeline c2u
    auto* pl = app.add_subcommand("pipeline", "proof pipelines");
    auto* pl_c2u = pl->add_subcommand("c2u", "coarse to strong uniform");
    std::string map_name = "gaussian";
    int window_radius = 3;
    pl_c2u->add_option("--dim", dim);
    pl_c2u->add_option("--q", q);
    pl_c2u->add_option("--radius", radius);
    pl_c2u->add_option("--step", step);
    pl_c2u->add_option("--map", map_name, "gaussian|identity|file:prog.json");
    pl_c2u->add_option("--window-radius", window_radius);
    pl_c2u->add_option("--tol", tol);
    pl_c2u->add_option("--out", out_path);

    // ---- witness-validate
    auto* wv = app.add_subcommand("witness-validate",
                                  "check a definiteness-failure certificate");
    std::string witness_path;
    wv->add_option("--mode", mode, "pd|nd")->required();
    wv->add_option("--kernel", in_path)->required();
    wv->add_option("--witness", witness_path)->required();
    wv->add_option("--tol", tol);

    // ---- demo
    auto* de = app.add_subcommand("demo", "run the full verification suite");

    // let --no-meta / --threads appear after the subcommand too
    for (auto* sub : app.get_subcommands(nullptr)) {
        sub->fallthrough();
        for (auto* s2 : sub->get_subcommands(nullptr)) s2->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (sp_grid->parsed()) {
            Report rep("space grid");
            rep.no_meta = no_meta;
            auto ps = sample_grid(QuasiNormedSpace::make(dim, q), radius, step,
                                  cap);
            io::save_file(out_path, io::to_json(ps));
            rep.verdict("grid_written", true,
                        {{"points", ps.size()}, {"out", out_path}});
            return rep.finish();
        }

        if (kn_check->parsed()) {
            Report rep("kernel check " + mode);
            rep.no_meta = no_meta;
            rep.input(in_path);
            auto K = io::kernel_from_json(io::load_file(in_path));
            double use_tol = default_tol(K, tol);
            DefinitenessVerdict v = mode == "pd"
                                        ? is_positive_definite(K, use_tol)
                                        : is_negative_definite(K, use_tol);
            rep.verdict(mode + "_definite", v.passed,
                        {{"extremal_eigenvalue", v.extremal_eigenvalue},
                         {"tolerance", use_tol}});
            if (v.certificate) rep.certificate(io::to_json(v));
            return rep.finish();
        }

        if (kn_tr->parsed()) {
            Report rep("kernel transform " + op);
            rep.no_meta = no_meta;
            rep.input(in_path);
            auto K = io::kernel_from_json(io::load_file(in_path));
            KernelMatrix out = op == "exp" ? schoenberg_exp(K, t_param)
                                           : snowflake_power(K, a_param);
            io::save_file(out_path, io::to_json(out));
            rep.verdict("transform_written", true, {{"out", out_path}});
            return rep.finish();
        }

        if (em->parsed()) {
            Report rep("embed " + from);
            rep.no_meta = no_meta;
            rep.input(in_path);
            auto K = io::kernel_from_json(io::load_file(in_path));
            double use_tol = default_tol(K, tol);
            try {
                EmbeddingCoordinates e =
                    from == "pd" ? feature_map_from_pd(K, use_tol)
                                 : embedding_from_nd(
                                       K,
                                       basepoint.empty() ? K.labels.front()
                                                         : basepoint,
                                       use_tol);
                io::save_file(out_path, io::to_json(e));
                if (!csv_path.empty()) {
                    std::ofstream f(csv_path);
                    f << io::to_csv(e);
                }
                rep.verdict("embedding_written", true,
                            {{"dim", e.dim()}, {"out", out_path}});
            } catch (const DefinitenessError& err) {
                rep.verdict("definiteness_precondition", false,
                            {{"error", err.what()}});
                rep.certificate(io::to_json(err.verdict));
            }
            return rep.finish();
        }

        if (mo->parsed()) {
            Report rep("moduli");
            rep.no_meta = no_meta;
            rep.input(sample_path);
            rep.input(image_path);
            MappedSample ms;
            ms.source = io::pointset_from_json(io::load_file(sample_path));
            ms.image = io::embedding_from_json(io::load_file(image_path));
            ms.validate();
            auto prof = empirical_moduli(ms, parse_thresholds(thresholds_csv));
            rep.j["profile"] = io::to_json(prof);
            if (!out_path.empty()) io::save_file(out_path, io::to_json(prof));
            if (!csv_path.empty()) {
                std::ofstream f(csv_path);
                f << io::to_csv(prof);
            }
            rep.verdict("profile_computed", true,
                        {{"thresholds", prof.thresholds.size()}});
            return rep.finish();
        }

        if (gl->parsed()) {
            Report rep("glue");
            rep.no_meta = no_meta;
            rep.input(family_path);
            rep.input(sample_path);
            auto fam = io::family_from_json(io::load_file(family_path));
            auto sample = io::pointset_from_json(io::load_file(sample_path));
            auto res = dg_glue(fam, sample, basepoint);
            rep.verdict("upper_bound", res.upper_ok,
                        {{"max_excess", res.max_upper_excess}});
            rep.verdict("lower_bound", res.lower_ok,
                        {{"max_deficit", res.max_lower_deficit}});
            rep.verdict("rho1_envelope", res.rho1_ok);
            if (!res.passed)
                rep.certificate({{"kind", "glue_bounds"},
                                 {"max_upper_excess", res.max_upper_excess},
                                 {"max_lower_deficit", res.max_lower_deficit}});
            if (!out_path.empty())
                io::save_file(out_path, io::to_json(res.glued));
            return rep.finish();
        }

        if (pl_c2u->parsed()) {
            Report rep("pipeline c2u");
            rep.no_meta = no_meta;
            auto space = QuasiNormedSpace::make(dim, q);
            auto sample = sample_grid(space, radius, step);
            PipelineConfig cfg;
            cfg.window_radius = window_radius;
            if (tol > 0.0) cfg.tol = tol;
            auto res = pipeline_coarse_to_strong_uniform(
                space, sample, map_by_name(map_name), cfg);
            for (const auto& st : res.stages) {
                rep.verdict(st.stage, st.passed, st.details);
                if (st.certificate) rep.certificate(io::to_json(*st.certificate));
            }
            rep.j["pipeline"] = io::to_json(res);
            if (!out_path.empty()) io::save_file(out_path, io::to_json(res));
            return rep.finish();
        }

        if (wv->parsed()) {
            Report rep("witness-validate " + mode);
            rep.no_meta = no_meta;
            rep.input(in_path);
            rep.input(witness_path);
            auto K = io::kernel_from_json(io::load_file(in_path));
            auto wj = io::load_file(witness_path);
            auto cv = wj.at("c").get<std::vector<double>>();
            Eigen::VectorXd c(static_cast<Eigen::Index>(cv.size()));
            for (std::size_t i = 0; i < cv.size(); ++i)
                c(static_cast<Eigen::Index>(i)) = cv[i];
            double use_tol = tol > 0.0 ? tol : 1e-12;
            bool valid = mode == "nd" ? witness_validate_nd(K, c, use_tol)
                                      : witness_validate_pd(K, c, use_tol);
            rep.verdict("witness_valid", valid,
                        {{"quadratic_form", c.dot(K.entries * c)},
                         {"coefficient_sum", c.sum()}});
            return rep.finish();
        }

        if (de->parsed()) {
            Report rep("demo");
            rep.no_meta = no_meta;
            auto results = acceptance::run_all();
            for (const auto& r : results) {
                rep.verdict("criterion_" + std::to_string(r.id), r.passed,
                            {{"name", r.name}, {"detail", r.detail}});
                std::cerr << (r.passed ? "PASS" : "FAIL") << " criterion "
                          << r.id << ": " << r.name << " (" << r.detail
                          << ")\n";
            }
            return rep.finish();
        }
    } catch (const nlohmann::json::parse_error& e) {
        std::cerr << "malformed JSON: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    std::cerr << "no subcommand\n";
    return kExitUsage;
}
