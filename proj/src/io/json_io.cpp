#include "pellab/io/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pellab::io {

using nlohmann::json;
using ellipticity::ComplexMatrix;
using ellipticity::MatrixField;
using semigroup::FaceLabel;
using semigroup::GridDomain;

namespace {

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.contains("d") || !j.contains("entries"))
        throw StructuralError("matrix document needs \"d\" and \"entries\"");
    const int d = j.at("d").get<int>();
    ComplexMatrix m(d);
    const auto& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != d)
        throw StructuralError("matrix document: wrong number of rows");
    for (int i = 0; i < d; ++i) {
        if (static_cast<int>(rows[i].size()) != d)
            throw StructuralError("matrix document: ragged rows");
        for (int k = 0; k < d; ++k) {
            const auto& cell = rows[i][k];
            if (!cell.is_array() || cell.size() != 2)
                throw StructuralError("matrix entry must be [re, im]");
            m(i, k) = cxd(cell[0].get<double>(), cell[1].get<double>());
            if (!std::isfinite(m(i, k).real()) || !std::isfinite(m(i, k).imag()))
                throw StructuralError("matrix entry is not finite");
        }
    }
    return m;
}

FaceLabel label_from_string(const std::string& s) {
    if (s == "dirichlet") return FaceLabel::Dirichlet;
    if (s == "neumann") return FaceLabel::Neumann;
    throw StructuralError("unknown boundary label: " + s);
}

FaceLabel side_label(const json& boundary, const char* side, FaceLabel fallback) {
    if (!boundary.contains(side)) return fallback;
    return label_from_string(boundary.at(side).get<std::string>());
}

GridDomain domain_from_json(const json& j) {
    const int dim = j.value("dim", 1);
    const double h = j.at("h").get<double>();
    const json boundary = j.value("boundary", json::object());
    const FaceLabel def = FaceLabel::Dirichlet;
    const FaceLabel left = side_label(boundary, "left", def);
    const FaceLabel right = side_label(boundary, "right", def);

    GridDomain domain =
        dim == 1 ? GridDomain(j.at("n").get<int>(), h, left, right)
                 : GridDomain(j.at("mask").get<std::vector<std::string>>(), h, left, right,
                              side_label(boundary, "bottom", def),
                              side_label(boundary, "top", def));

    if (j.contains("gamma")) {
        for (const auto& face : j.at("gamma")) {
            std::size_t cell;
            if (face.contains("cell")) {
                cell = face.at("cell").get<std::size_t>();
            } else {
                const auto idx = domain.active_index(face.at("i").get<int>(),
                                                     face.at("j").get<int>());
                if (!idx) throw StructuralError("gamma face refers to an inactive node");
                cell = *idx;
            }
            domain.relabel_face(cell, face.value("axis", 0), face.at("direction").get<int>(),
                                FaceLabel::Dirichlet);
        }
    }
    return domain;
}

MatrixField field_from_json(const json& j, const GridDomain& domain) {
    if (j.is_string()) {
        const json doc = json::parse(read_file(j.get<std::string>()));
        return field_from_json(doc, domain);
    }
    if (j.contains("entries"))
        return MatrixField(matrix_from_json(j), domain.n_cells());
    if (!j.contains("default"))
        throw StructuralError("field document needs \"default\" or \"entries\"");
    MatrixField field(matrix_from_json(j.at("default")), domain.n_cells());
    if (j.contains("cells")) {
        for (const auto& [key, value] : j.at("cells").items()) {
            std::size_t cell;
            const auto comma = key.find(',');
            if (comma == std::string::npos) {
                cell = static_cast<std::size_t>(std::stoul(key));
            } else {
                const int i = std::stoi(key.substr(0, comma));
                const int jj = std::stoi(key.substr(comma + 1));
                const auto idx = domain.active_index(i, jj);
                if (!idx)
                    throw StructuralError("field cell " + key + " is not an active node");
                cell = *idx;
            }
            field.set_cell(cell, matrix_from_json(value));
        }
    }
    return field;
}

rvec potential_from_json(const json& j, const GridDomain& domain) {
    const std::size_t n = domain.n_cells();
    if (j.is_null()) return rvec(n, 0.0);
    if (j.is_number()) return rvec(n, j.get<double>());
    const std::string kind = j.value("kind", "constant");
    if (kind == "constant") return rvec(n, j.value("value", 0.0));
    if (kind == "table") {
        rvec v = j.at("values").get<rvec>();
        if (v.size() != n) throw StructuralError("potential table size mismatch");
        return v;
    }
    if (kind == "inverse_distance") {
        const double scale = j.value("scale", 1.0);
        std::vector<double> origin =
            j.value("origin", std::vector<double>(domain.space_dim(), 0.0));
        rvec v(n);
        for (std::size_t c = 0; c < n; ++c) {
            const auto x = domain.coordinates(c);
            double dist2 = 0.0;
            for (int a = 0; a < domain.space_dim(); ++a) dist2 += sqr(x[a] - origin[a]);
            v[c] = scale / std::sqrt(dist2);
        }
        return v;
    }
    throw StructuralError("unknown potential kind: " + kind);
}

cvec data_from_json(const json& j, const GridDomain& domain) {
    const std::size_t n = domain.n_cells();
    const std::string kind = j.value("kind", "sin");
    if (kind == "sin") {
        const double Lx = (domain.nx() + 1) * domain.h();
        const double Ly = (domain.ny() + 1) * domain.h();
        cvec f(n);
        for (std::size_t c = 0; c < n; ++c) {
            const auto x = domain.coordinates(c);
            double val = std::sin(3.141592653589793238462643383279 * x[0] / Lx);
            if (domain.space_dim() == 2)
                val *= std::sin(3.141592653589793238462643383279 * x[1] / Ly);
            f[c] = val;
        }
        return f;
    }
    if (kind == "gauss") {
        const double width = j.value("width", 0.1);
        std::vector<double> center =
            j.value("center", std::vector<double>(domain.space_dim(),
                                                  0.5 * (domain.nx() + 1) * domain.h()));
        cvec f(n);
        for (std::size_t c = 0; c < n; ++c) {
            const auto x = domain.coordinates(c);
            double d2 = 0.0;
            for (int a = 0; a < domain.space_dim(); ++a) d2 += sqr(x[a] - center[a]);
            f[c] = std::exp(-d2 / (width * width));
        }
        return f;
    }
    if (kind == "table") {
        const rvec re = j.at("re").get<rvec>();
        rvec im(re.size(), 0.0);
        if (j.contains("im")) im = j.at("im").get<rvec>();
        if (re.size() != n || im.size() != n)
            throw StructuralError("data table size mismatch");
        cvec f(n);
        for (std::size_t c = 0; c < n; ++c) f[c] = cxd(re[c], im[c]);
        return f;
    }
    throw StructuralError("unknown data kind: " + kind);
}

}  // namespace

ComplexMatrix parse_matrix(const std::string& json_text) {
    return matrix_from_json(json::parse(json_text));
}

ComplexMatrix load_matrix(const std::string& path) { return parse_matrix(read_file(path)); }

Problem parse_problem(const std::string& json_text) {
    const json j = json::parse(json_text);
    GridDomain domain = domain_from_json(j);
    MatrixField A = field_from_json(j.at("A"), domain);
    rvec V = potential_from_json(j.value("V", json()), domain);
    const double phase = j.value("phase", 0.0);
    MatrixField B = j.contains("B") ? field_from_json(j.at("B"), domain) : A;
    rvec W = j.contains("W") ? potential_from_json(j.at("W"), domain) : V;
    cvec f = data_from_json(j.value("f", json::object()), domain);
    cvec g = j.contains("g") ? data_from_json(j.at("g"), domain) : f;
    return Problem{std::move(domain), std::move(A), std::move(V), phase,
                   std::move(B), std::move(W), std::move(f), std::move(g)};
}

Problem load_problem(const std::string& path) { return parse_problem(read_file(path)); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StructuralError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw StructuralError("cannot write file: " + path);
    out << content;
}

std::string csv_embedding(const semigroup::EmbeddingReport& rep) {
    std::string s = "value,fp_norm,gq_norm,ratio,T_max,tail_estimate\n";
    s += fmt17(rep.value) + "," + fmt17(rep.fp_norm) + "," + fmt17(rep.gq_norm) + "," +
         fmt17(rep.ratio) + "," + fmt17(rep.T_max) + "," + fmt17(rep.tail_estimate) + "\n";
    return s;
}

std::string csv_flow(const semigroup::FlowTrace& trace) {
    std::string s = "times,E,dE_numeric,I1,I2,integrand_lower\n";
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        s += fmt17(trace.times[k]) + "," + fmt17(trace.E[k]) + "," +
             fmt17(trace.dE_numeric[k]) + "," + fmt17(trace.I1[k]) + "," +
             fmt17(trace.I2[k]) + "," + fmt17(trace.integrand_lower[k]) + "\n";
    return s;
}

std::string csv_truncation(const semigroup::TruncationTable& table) {
    std::string s = "n,e_grad,e_pot\n";
    for (std::size_t k = 0; k < table.n.size(); ++k)
        s += fmt17(table.n[k]) + "," + fmt17(table.e_grad[k]) + "," + fmt17(table.e_pot[k]) +
             "\n";
    return s;
}

std::string csv_convexity(const bellman::ConvexityCertificate& cert) {
    std::string s =
        "seed,n_samples,branch,c_hess,c_gz,c_ge,argmin_zeta_re,argmin_zeta_im,argmin_eta_re,"
        "argmin_eta_im\n";
    for (const auto& b : cert.branches)
        s += std::to_string(cert.seed) + "," + std::to_string(cert.n_samples) + "," +
             bellman::to_string(b.branch) + "," + fmt17(b.c_hess) + "," + fmt17(b.c_gz) + "," +
             fmt17(b.c_ge) + "," + fmt17(b.worst_zeta.real()) + "," +
             fmt17(b.worst_zeta.imag()) + "," + fmt17(b.worst_eta.real()) + "," +
             fmt17(b.worst_eta.imag()) + "\n";
    return s;
}

}  // namespace pellab::io
