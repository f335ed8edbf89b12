#include "weyl/io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace weyl {

namespace {

const char kMagic[8] = {'W', 'E', 'Y', 'L', '0', '0', '0', '1'};

void put_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& os, double v) {
    static_assert(sizeof(double) == 8);
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

double get_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

void write_header(std::ostream& os, std::uint32_t N, std::uint32_t d, std::uint32_t k,
                  std::uint32_t method) {
    os.write(kMagic, 8);
    put_u32(os, N);
    put_u32(os, d);
    put_u32(os, k);
    put_u32(os, method);
    const char zeros[8] = {0};
    os.write(zeros, 8);
}

std::string verdict_str(Verdict v) { return to_string(v); }

Json phase_point_json(const PhasePoint& z) {
    Json a = Json::array();
    for (double c : z.coords) a.push_back(c);
    return a;
}

Json multi_index_json(const MultiIndex& g) {
    Json a = Json::array();
    for (int e : g.entries) a.push_back(e);
    return a;
}

}  // namespace

Json to_json(const FockMatrix& m) {
    Json j;
    j["N"] = m.N;
    j["d"] = m.d;
    j["k"] = m.k;
    j["method"] = to_string(m.method);
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.entries.rows(); ++r)
        for (Eigen::Index c = 0; c < m.entries.cols(); ++c) {
            Json pair = Json::array();
            pair.push_back(m.entries(r, c).real());
            pair.push_back(m.entries(r, c).imag());
            rows.push_back(std::move(pair));
        }
    j["entries"] = std::move(rows);
    if (m.quadrature) {
        const QuadratureConfig& q = *m.quadrature;
        j["quadrature"] = Json{{"box_x", q.box_x},
                               {"box_xi", q.box_xi},
                               {"xi_grid", q.xi_grid},
                               {"gh_order", q.gh_order},
                               {"taper_fraction", q.taper_fraction}};
    }
    return j;
}

FockMatrix fock_from_json(const Json& j) {
    FockMatrix m;
    m.N = j.at("N").get<int>();
    m.d = j.at("d").get<int>();
    m.k = j.at("k").get<int>();
    std::string method = j.at("method").get<std::string>();
    if (method == "MONOMIAL") m.method = Method::Monomial;
    else if (method == "KERNEL_QUADRATURE") m.method = Method::KernelQuadrature;
    else if (method == "EXPONENTIAL") m.method = Method::Exponential;
    else if (method == "COMMUTATOR") m.method = Method::Commutator;
    else if (method == "TOEPLITZ") m.method = Method::Toeplitz;
    else if (method == "TOEPLITZ_SYMBOL") m.method = Method::ToeplitzSymbol;
    else throw IoError("unknown method tag: " + method);
    Eigen::Index side = 1;
    for (int i = 0; i < m.d; ++i) side *= m.N;
    side *= m.k;
    const Json& entries = j.at("entries");
    if (static_cast<Eigen::Index>(entries.size()) != side * side)
        throw IoError("entry count does not match N^d*k");
    m.entries.resize(side, side);
    Eigen::Index idx = 0;
    for (const auto& pair : entries) {
        m.entries(idx / side, idx % side) = Complex(pair.at(0).get<double>(),
                                                    pair.at(1).get<double>());
        ++idx;
    }
    return m;
}

void write_fock_binary(const FockMatrix& m, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_header(os, static_cast<std::uint32_t>(m.N), static_cast<std::uint32_t>(m.d),
                 static_cast<std::uint32_t>(m.k), static_cast<std::uint32_t>(m.method));
    for (Eigen::Index r = 0; r < m.entries.rows(); ++r)
        for (Eigen::Index c = 0; c < m.entries.cols(); ++c) {
            put_f64(os, m.entries(r, c).real());
            put_f64(os, m.entries(r, c).imag());
        }
    if (!os) throw IoError("write failed for " + path);
}

FockMatrix read_fock_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw IoError("bad magic in " + path);
    FockMatrix m;
    m.N = static_cast<int>(get_u32(is));
    m.d = static_cast<int>(get_u32(is));
    m.k = static_cast<int>(get_u32(is));
    std::uint32_t method = get_u32(is);
    if (method < 1 || method > 6) throw IoError("bad method code in " + path);
    m.method = static_cast<Method>(method);
    char reserved[8];
    is.read(reserved, 8);
    Eigen::Index side = 1;
    for (int i = 0; i < m.d; ++i) side *= m.N;
    side *= m.k;
    m.entries.resize(side, side);
    for (Eigen::Index r = 0; r < side; ++r)
        for (Eigen::Index c = 0; c < side; ++c) {
            double re = get_f64(is);
            double im = get_f64(is);
            m.entries(r, c) = Complex(re, im);
        }
    if (!is) throw IoError("truncated file " + path);
    return m;
}

void write_sampled_binary(const SampledSymbol& s, const std::string& path) {
    s.validate();
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    write_header(os, static_cast<std::uint32_t>(s.points_per_axis),
                 static_cast<std::uint32_t>(s.d), 1u,
                 static_cast<std::uint32_t>(Method::ToeplitzSymbol));
    for (const Complex& v : s.values) {
        put_f64(os, v.real());
        put_f64(os, v.imag());
    }
    Json meta;
    meta["half_width"] = s.half_width;
    meta["points_per_axis"] = s.points_per_axis;
    meta["d"] = s.d;
    meta["spacing"] = s.spacing();
    write_text_file(path + ".meta.json", meta.dump(2) + "\n");
}

SampledSymbol read_sampled_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw IoError("bad magic in " + path);
    SampledSymbol s;
    s.points_per_axis = static_cast<int>(get_u32(is));
    s.d = static_cast<int>(get_u32(is));
    get_u32(is);  // k
    std::uint32_t method = get_u32(is);
    if (method != static_cast<std::uint32_t>(Method::ToeplitzSymbol))
        throw IoError("not a sampled-symbol container: " + path);
    char reserved[8];
    is.read(reserved, 8);
    Json meta = Json::parse(read_text_file(path + ".meta.json"));
    s.half_width = meta.at("half_width").get<double>();
    s.values.resize(s.expected_size());
    for (auto& v : s.values) {
        double re = get_f64(is);
        double im = get_f64(is);
        v = Complex(re, im);
    }
    if (!is) throw IoError("truncated file " + path);
    s.validate();
    return s;
}

Json to_json(const SupEstimate& e) {
    Json j;
    j["half_widths"] = e.half_widths;
    j["sups"] = e.sups;
    j["verdict"] = to_string(e.verdict);
    j["last_ratio"] = e.last_ratio;
    return j;
}

Json to_json(const OscillationProfile& p) {
    Json j;
    j["direction"] = p.direction + 1;  // 1-based in reports
    Json shifts = Json::array();
    for (const auto& z : p.shifts) shifts.push_back(phase_point_json(z));
    j["shifts"] = std::move(shifts);
    j["norms"] = p.norms;
    j["basis_size"] = p.N;
    j["restriction_size"] = p.M;
    return j;
}

Json to_json(const CriterionVerdict& v) {
    Json j;
    j["verdict"] = verdict_str(v.verdict);
    j["c_estimate"] = v.c_estimate;
    j["max_ratio"] = v.max_ratio;
    Json ev = Json::array();
    for (const auto& row : v.evidence) {
        Json r;
        r["z"] = phase_point_json(row.z);
        r["norm"] = row.norm;
        r["ratio"] = row.ratio;
        ev.push_back(std::move(r));
    }
    j["evidence"] = std::move(ev);
    j["caveats"] = v.caveats;
    return j;
}

Json to_json(const BCSpectrumTable& t) {
    Json j;
    j["potential"] = t.potential;
    j["half_widths"] = t.half_widths;
    j["grid"] = t.grid;
    j["levels"] = t.levels;
    Json rows = Json::array();
    for (size_t li = 0; li < t.eigenvalues.size(); ++li)
        for (int bc = 0; bc < 2; ++bc)
            for (int lvl = 0; lvl < t.levels; ++lvl) {
                Json r;
                r["L"] = t.half_widths[li];
                r["bc"] = bc == 0 ? "DIRICHLET" : "NEUMANN";
                r["level"] = lvl;
                r["eigenvalue"] = t.eigenvalues[li][static_cast<size_t>(bc)][static_cast<size_t>(lvl)];
                rows.push_back(std::move(r));
            }
    j["rows"] = std::move(rows);
    j["discrepancy_at_largest"] = t.discrepancy_at_largest;
    j["verdict"] = verdict_str(t.verdict);
    return j;
}

Json to_json(const DiagnosticsReport& r) {
    Json j;
    j["schema"] = "weyl-lab-report/1";
    j["symbol"] = r.symbol_text;
    j["d"] = r.d;
    j["k"] = r.k;
    if (r.simple_criterion) {
        const auto& s = *r.simple_criterion;
        Json sj;
        sj["verdict"] = verdict_str(s.verdict);
        Json rows = Json::array();
        for (const auto& row : s.rows) {
            Json rr;
            rr["gamma"] = multi_index_json(row.gamma);
            rr["estimate"] = to_json(row.estimate);
            rows.push_back(std::move(rr));
        }
        sj["rows"] = std::move(rows);
        if (s.witness) sj["witness"] = multi_index_json(*s.witness);
        if (!s.note.empty()) sj["note"] = s.note;
        j["simple_criterion"] = std::move(sj);
    }
    if (r.oscillation_criterion) {
        const auto& o = *r.oscillation_criterion;
        Json oj;
        oj["verdict"] = verdict_str(o.verdict);
        Json dirs = Json::array();
        for (const auto& v : o.directions) dirs.push_back(to_json(v));
        oj["directions"] = std::move(dirs);
        if (!o.note.empty()) oj["note"] = o.note;
        j["oscillation_criterion"] = std::move(oj);
    }
    if (r.m_infty_one) {
        const auto& m = *r.m_infty_one;
        Json mj;
        mj["verdict"] = verdict_str(m.verdict);
        mj["skipped"] = m.skipped;
        Json rows = Json::array();
        for (const auto& row : m.rows) {
            Json rr;
            rr["alpha"] = multi_index_json(row.alpha);
            rr["estimate"] = row.estimate.estimate;
            rr["converged"] = row.estimate.converged;
            rr["grid_change"] = row.estimate.grid_change;
            rr["box_change"] = row.estimate.box_change;
            rows.push_back(std::move(rr));
        }
        mj["rows"] = std::move(rows);
        if (!m.note.empty()) mj["note"] = m.note;
        j["m_infty_one"] = std::move(mj);
    }
    if (r.cv_bound) {
        const auto& c = *r.cv_bound;
        Json cj;
        cj["verdict"] = verdict_str(c.verdict);
        cj["ran"] = c.ran;
        cj["cutoffs"] = c.cutoffs;
        cj["norms"] = c.norms;
        cj["max_derivative_sup"] = c.max_derivative_sup;
        cj["final_increase"] = c.final_increase;
        cj["plateau"] = c.plateau;
        if (!c.note.empty()) cj["note"] = c.note;
        j["cv_bound"] = std::move(cj);
    }
    if (r.bc_sensitivity) j["bc_sensitivity"] = to_json(*r.bc_sensitivity);
    j["overall"] = verdict_str(r.overall);
    j["caveats"] = r.caveats;
    return j;
}

std::string bc_table_csv(const BCSpectrumTable& t, const std::string& config_comment) {
    std::ostringstream os;
    os.precision(15);
    if (!config_comment.empty()) os << "# config: " << config_comment << "\n";
    os << "L,bc,level,eigenvalue\n";
    for (size_t li = 0; li < t.eigenvalues.size(); ++li)
        for (int bc = 0; bc < 2; ++bc)
            for (int lvl = 0; lvl < t.levels; ++lvl)
                os << t.half_widths[li] << "," << (bc == 0 ? "DIRICHLET" : "NEUMANN") << "," << lvl
                   << "," << t.eigenvalues[li][static_cast<size_t>(bc)][static_cast<size_t>(lvl)]
                   << "\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open " + path + " for writing");
    os << content;
    if (!os) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

}  // namespace weyl
