#include "coarsekit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace coarsekit::io {

namespace {

json num_or_inf(double v) {
    if (std::isinf(v)) return json("inf");
    return json(v);
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const auto n = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = n == 0 ? 0 : static_cast<Eigen::Index>(j[0].size());
    Eigen::MatrixXd m(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(j[i].size()) != cols)
            throw std::invalid_argument("ragged matrix in JSON");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(i, c) = j[i][c].get<double>();
    }
    return m;
}

}  // namespace

json to_json(const PointSet& ps) {
    json j;
    j["dim"] = ps.space.dim;
    j["p"] = ps.space.p;
    j["q"] = ps.space.q;
    j["labels"] = ps.labels;
    j["points"] = ps.points;
    return j;
}

PointSet pointset_from_json(const json& j) {
    PointSet ps;
    ps.space = QuasiNormedSpace::make(j.at("dim").get<int>(),
                                      j.at("q").get<double>());
    ps.labels = j.at("labels").get<std::vector<std::string>>();
    ps.points = j.at("points").get<std::vector<Vec>>();
    ps.validate();
    return ps;
}

json to_json(const KernelMatrix& k) {
    json j;
    j["labels"] = k.labels;
    j["matrix"] = matrix_to_json(k.entries);
    return j;
}

KernelMatrix kernel_from_json(const json& j) {
    KernelMatrix k;
    k.labels = j.at("labels").get<std::vector<std::string>>();
    k.entries = matrix_from_json(j.at("matrix"));
    k.validate();
    return k;
}

json to_json(const EmbeddingCoordinates& e) {
    json j;
    j["labels"] = e.labels;
    j["dim"] = e.dim();
    j["vectors"] = matrix_to_json(e.vectors);
    return j;
}

EmbeddingCoordinates embedding_from_json(const json& j) {
    EmbeddingCoordinates e;
    e.labels = j.at("labels").get<std::vector<std::string>>();
    e.vectors = matrix_from_json(j.at("vectors"));
    e.validate();
    return e;
}

std::string to_csv(const EmbeddingCoordinates& e) {
    std::ostringstream os;
    os.precision(17);
    os << "label";
    for (int c = 0; c < e.dim(); ++c) os << ",v" << c;
    os << "\n";
    for (std::size_t i = 0; i < e.size(); ++i) {
        os << e.labels[i];
        for (Eigen::Index c = 0; c < e.vectors.cols(); ++c)
            os << "," << e.vectors(static_cast<Eigen::Index>(i), c);
        os << "\n";
    }
    return os.str();
}

json to_json(const ModulusProfile& p) {
    json j;
    j["thresholds"] = p.thresholds;
    json phi = json::array(), omega = json::array();
    for (double v : p.phi) phi.push_back(num_or_inf(v));
    for (double v : p.omega) omega.push_back(num_or_inf(v));
    j["phi"] = std::move(phi);
    j["omega"] = std::move(omega);
    j["count_ge"] = p.count_ge;
    j["count_le"] = p.count_le;
    return j;
}

std::string to_csv(const ModulusProfile& p) {
    std::ostringstream os;
    os.precision(17);
    os << "t,phi,omega,count_ge,count_le\n";
    for (std::size_t i = 0; i < p.thresholds.size(); ++i) {
        os << p.thresholds[i] << ",";
        if (std::isinf(p.phi[i]))
            os << "inf";
        else
            os << p.phi[i];
        os << "," << p.omega[i] << "," << p.count_ge[i] << "," << p.count_le[i]
           << "\n";
    }
    return os.str();
}

json to_json(const DefinitenessVerdict& v) {
    json j;
    j["kind"] = v.kind == DefinitenessKind::PD ? "pd" : "nd";
    j["passed"] = v.passed;
    j["extremal_eigenvalue"] = v.extremal_eigenvalue;
    j["tolerance"] = v.tolerance;
    if (v.certificate) {
        json c = json::array();
        for (Eigen::Index i = 0; i < v.certificate->size(); ++i)
            c.push_back((*v.certificate)(i));
        j["certificate"] = std::move(c);
    }
    return j;
}

json to_json(const ScaleFamily& f) {
    json j;
    j["delta"] = f.delta;
    j["delta_fraction"] = f.delta_fraction;
    j["n_max"] = f.n_max;
    json scales = json::array();
    for (const auto& e : f.scales) {
        json s;
        s["n"] = e.n;
        s["a"] = e.a;
        s["s"] = e.s;
        s["source"] = to_json(e.map.source);
        s["image"] = to_json(e.map.image);
        scales.push_back(std::move(s));
    }
    j["scales"] = std::move(scales);
    return j;
}

ScaleFamily family_from_json(const json& j) {
    ScaleFamily f;
    f.delta = j.at("delta").get<double>();
    f.delta_fraction = j.at("delta_fraction").get<double>();
    f.n_max = j.at("n_max").get<int>();
    for (const auto& s : j.at("scales")) {
        ScaleEntry e;
        e.n = s.at("n").get<int>();
        e.a = s.at("a").get<double>();
        e.s = s.at("s").get<double>();
        e.map.source = pointset_from_json(s.at("source"));
        e.map.image = embedding_from_json(s.at("image"));
        e.map.validate();
        f.scales.push_back(std::move(e));
    }
    return f;
}

json to_json(const StageReport& r) {
    json j;
    j["stage"] = r.stage;
    j["passed"] = r.passed;
    j["details"] = r.details;
    if (!r.note.empty()) j["note"] = r.note;
    if (r.certificate) j["certificates"] = json::array({to_json(*r.certificate)});
    return j;
}

json to_json(const PipelineResult& r) {
    json j;
    j["passed"] = r.passed;
    json stages = json::array();
    for (const auto& s : r.stages) stages.push_back(to_json(s));
    j["stages"] = std::move(stages);
    j["holder_exponent"] = r.holder_exponent;
    if (r.assembly) {
        j["embedding"] = to_json(r.assembly->embedding);
        j["profile"] = to_json(r.assembly->profile);
    }
    return j;
}

json load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw std::runtime_error("cannot open " + path);
    return json::parse(in);  // throws parse_error with byte position
}

void save_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out.good()) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace coarsekit::io
