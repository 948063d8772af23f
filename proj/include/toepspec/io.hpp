#ifndef TOEPSPEC_IO_HPP
#define TOEPSPEC_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "toepspec/classify.hpp"
#include "toepspec/hokalman.hpp"

namespace toepspec {

using nlohmann::json;

// ---------------------------------------------------------------------------
// formatting

inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Complex number as "re+imj", e.g. "1.5-0.25j".
inline std::string fmt_complex_j(cplx c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gj", c.real(), c.imag());
    return buf;
}

// ---------------------------------------------------------------------------
// atomic file output: write to a temp file, rename on success, so failures
// leave no partial files behind.

inline void atomic_write_file(const std::filesystem::path& path,
                              const std::string& content) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.good()) {
            out.close();
            fs::remove(tmp);
            throw Error("failed while writing " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// JSON: complex scalars as [re, im]; matrices either with explicit dims and
// flat row-major data (realizations) or as nested rows (coefficient windows).

inline json complex_to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("expected complex number as [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const Mat& m) {
    json data = json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Mat matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
        !j.contains("data"))
        throw ParseError("expected matrix object with rows/cols/data");
    const Index rows = j["rows"].get<Index>();
    const Index cols = j["cols"].get<Index>();
    if (rows < 0 || cols < 0 || !j["data"].is_array() ||
        j["data"].size() != static_cast<size_t>(rows * cols))
        throw ParseError("matrix data length does not match dims");
    Mat m(rows, cols);
    size_t k = 0;
    for (Index i = 0; i < rows; ++i)
        for (Index jj = 0; jj < cols; ++jj) m(i, jj) = complex_from_json(j["data"][k++]);
    return m;
}

inline json matrix_to_json_rows(const Mat& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Mat matrix_from_json_rows(const json& j, Index rows, Index cols) {
    if (!j.is_array() || j.size() != static_cast<size_t>(rows))
        throw ParseError("expected nested matrix rows");
    Mat m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || row.size() != static_cast<size_t>(cols))
            throw ParseError("matrix row has wrong length");
        for (Index k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(row[static_cast<size_t>(k)]);
    }
    return m;
}

inline Coeffs coeffs_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected coefficient array");
    Coeffs out;
    for (const json& c : j) out.push_back(complex_from_json(c));
    return out;
}

inline json coeffs_to_json(const Coeffs& c) {
    json out = json::array();
    for (const cplx& x : c) out.push_back(complex_to_json(x));
    return out;
}

// Symbol schema:
// {"m": int, "entries": [[{"num": [[re,im],...], "den": [[re,im],...],
//                          "den_factored": {"leading": [re,im],
//                                           "factors": [{"pole": [re,im],
//                                                        "multiplicity": int}]}}]]}
inline RationalMatrix symbol_from_json(const json& j) {
    if (!j.is_object() || !j.contains("m") || !j.contains("entries"))
        throw ParseError("symbol JSON needs keys m and entries");
    const int m = j["m"].get<int>();
    if (m <= 0) throw ParseError("symbol m must be positive");
    const json& rows = j["entries"];
    if (!rows.is_array() || rows.size() != static_cast<size_t>(m))
        throw ParseError("symbol entries must be an m x m grid");
    std::vector<RationalScalar> entries;
    for (const json& row : rows) {
        if (!row.is_array() || row.size() != static_cast<size_t>(m))
            throw ParseError("symbol entries must be an m x m grid");
        for (const json& e : row) {
            if (!e.is_object() || !e.contains("num") || !e.contains("den"))
                throw ParseError("symbol entry needs num and den");
            std::optional<FactoredDen> factored;
            if (e.contains("den_factored") && !e["den_factored"].is_null()) {
                const json& f = e["den_factored"];
                FactoredDen fd;
                fd.leading = f.contains("leading") ? complex_from_json(f["leading"])
                                                   : cplx(1.0);
                if (!f.contains("factors") || !f["factors"].is_array())
                    throw ParseError("den_factored needs a factors array");
                for (const json& fac : f["factors"]) {
                    const int mult = fac.at("multiplicity").get<int>();
                    if (mult <= 0) throw ParseError("factor multiplicity must be positive");
                    fd.factors.push_back({complex_from_json(fac.at("pole")), mult});
                }
                factored = std::move(fd);
            }
            entries.emplace_back(coeffs_from_json(e["num"]), coeffs_from_json(e["den"]),
                                 std::move(factored));
        }
    }
    return RationalMatrix(m, std::move(entries));
}

inline json symbol_to_json(const RationalMatrix& sym) {
    json rows = json::array();
    for (int i = 0; i < sym.m; ++i) {
        json row = json::array();
        for (int j2 = 0; j2 < sym.m; ++j2) {
            const RationalScalar& e = sym.at(i, j2);
            json entry{{"num", coeffs_to_json(e.num())}, {"den", coeffs_to_json(e.den())}};
            if (e.den_factored()) {
                json factors = json::array();
                for (const RootCluster& f : e.den_factored()->factors)
                    factors.push_back(json{{"pole", complex_to_json(f.value)},
                                           {"multiplicity", f.multiplicity}});
                entry["den_factored"] = json{
                    {"leading", complex_to_json(e.den_factored()->leading)},
                    {"factors", factors}};
            }
            row.push_back(entry);
        }
        rows.push_back(row);
    }
    return json{{"m", sym.m}, {"entries", rows}};
}

inline json realization_to_json(const Realization& r) {
    return json{{"m", r.m()},         {"n_plus", r.n_plus()},
                {"n_minus", r.n_minus()}, {"R0", matrix_to_json(r.R0)},
                {"A", matrix_to_json(r.A)},       {"B", matrix_to_json(r.B)},
                {"C", matrix_to_json(r.C)},       {"alpha", matrix_to_json(r.alpha)},
                {"beta", matrix_to_json(r.beta)}, {"gamma", matrix_to_json(r.gamma)}};
}

inline Realization realization_from_json(const json& j) {
    Realization r;
    try {
        r.R0 = matrix_from_json(j.at("R0"));
        r.A = matrix_from_json(j.at("A"));
        r.B = matrix_from_json(j.at("B"));
        r.C = matrix_from_json(j.at("C"));
        r.alpha = matrix_from_json(j.at("alpha"));
        r.beta = matrix_from_json(j.at("beta"));
        r.gamma = matrix_from_json(j.at("gamma"));
    } catch (const json::exception& e) {
        throw ParseError(std::string("realization JSON: ") + e.what());
    }
    r.check_dims();
    return r;
}

inline json coeff_window_to_json(const CoeffWindow& cw) {
    json plus = json::array(), minus = json::array();
    for (const Mat& blk : cw.plus) plus.push_back(matrix_to_json_rows(blk));
    for (const Mat& blk : cw.minus) minus.push_back(matrix_to_json_rows(blk));
    return json{{"m", cw.m}, {"J", cw.J}, {"a0", matrix_to_json_rows(cw.a0)},
                {"plus", plus}, {"minus", minus}};
}

inline CoeffWindow coeff_window_from_json(const json& j) {
    CoeffWindow cw;
    try {
        cw.m = j.at("m").get<int>();
        cw.J = j.at("J").get<int>();
        cw.a0 = matrix_from_json_rows(j.at("a0"), cw.m, cw.m);
        for (const json& blk : j.at("plus"))
            cw.plus.push_back(matrix_from_json_rows(blk, cw.m, cw.m));
        for (const json& blk : j.at("minus"))
            cw.minus.push_back(matrix_from_json_rows(blk, cw.m, cw.m));
    } catch (const json::exception& e) {
        throw ParseError(std::string("coefficient window JSON: ") + e.what());
    }
    cw.validate();
    return cw;
}

inline json riccati_outcome_to_json(const RiccatiOutcome& out, cplx lambda) {
    json j{{"lambda", complex_to_json(lambda)},
           {"verdict", to_string(out.verdict)},
           {"certificate", out.certificate}};
    if (out.verdict == Verdict::Resolvent) {
        j["Q"] = matrix_to_json(out.Q);
        j["A_circ"] = matrix_to_json(out.A_circ);
        j["alpha_circ"] = matrix_to_json(out.alpha_circ);
        j["residual"] = out.residual;
        j["rho_A_circ"] = out.rho_A_circ;
        j["rho_alpha_circ"] = out.rho_alpha_circ;
    }
    return j;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string ess_cloud_csv(const EssCloud& cloud) {
    std::ostringstream out;
    out << "theta,re_lambda,im_lambda\n";
    for (const auto& [th, lam] : cloud.points)
        out << (std::isnan(th) ? std::string("nan") : fmt_g17(th)) << ','
            << fmt_g17(lam.real()) << ',' << fmt_g17(lam.imag()) << '\n';
    return out.str();
}

inline json ess_cloud_sidecar_json(const EssCloud& cloud) {
    json degenerate = json::array(), epts = json::array();
    for (const cplx& nu : cloud.degenerate_nus) degenerate.push_back(complex_to_json(nu));
    for (const cplx& lam : cloud.e_points) epts.push_back(complex_to_json(lam));
    return json{{"whole_plane", cloud.whole_plane},
                {"degenerate_nus", degenerate},
                {"e_points", epts}};
}

/// One row per block-row of the truncation, entries as "re+imj".
inline std::string toeplitz_csv(const Mat& t) {
    std::ostringstream out;
    for (Index i = 0; i < t.rows(); ++i) {
        for (Index j = 0; j < t.cols(); ++j) {
            if (j > 0) out << ',';
            out << fmt_complex_j(t(i, j));
        }
        out << '\n';
    }
    return out.str();
}

inline std::string region_map_csv(const RegionMap& map) {
    std::ostringstream out;
    out << "re,im,label\n";
    for (int iy = 0; iy < map.ny; ++iy)
        for (int ix = 0; ix < map.nx; ++ix) {
            const cplx c = map.cell_center(ix, iy);
            out << fmt_g17(c.real()) << ',' << fmt_g17(c.imag()) << ','
                << to_string(map.label_at(ix, iy)) << '\n';
        }
    return out.str();
}

inline std::string markov_csv(const CoeffWindow& cw) {
    std::ostringstream out;
    out << "j";
    for (int i = 0; i < cw.m; ++i)
        for (int j = 0; j < cw.m; ++j) out << ",a_" << i << j;
    out << '\n';
    for (int k = -cw.J; k <= cw.J; ++k) {
        out << k;
        const Mat& blk = cw.a(k);
        for (int i = 0; i < cw.m; ++i)
            for (int j = 0; j < cw.m; ++j) out << ',' << fmt_complex_j(blk(i, j));
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

struct SvgFrame {
    double xmin, xmax, ymin, ymax;
    double width = 640.0, height = 640.0, margin = 20.0;

    double px(double x) const {
        return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin);
    }
    double py(double y) const {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    }
};

inline void svg_axes(std::ostringstream& out, const SvgFrame& f) {
    if (f.ymin < 0 && f.ymax > 0)
        out << "<line x1='" << f.px(f.xmin) << "' y1='" << f.py(0) << "' x2='"
            << f.px(f.xmax) << "' y2='" << f.py(0)
            << "' stroke='#cccccc' stroke-width='1'/>\n";
    if (f.xmin < 0 && f.xmax > 0)
        out << "<line x1='" << f.px(0) << "' y1='" << f.py(f.ymin) << "' x2='"
            << f.px(0) << "' y2='" << f.py(f.ymax)
            << "' stroke='#cccccc' stroke-width='1'/>\n";
    // Unit circle overlay.
    const double rpx = f.px(1.0) - f.px(0.0);
    out << "<ellipse cx='" << f.px(0) << "' cy='" << f.py(0) << "' rx='" << rpx
        << "' ry='" << (f.py(0) - f.py(1.0))
        << "' fill='none' stroke='#bbbbbb' stroke-width='1' stroke-dasharray='4 3'/>\n";
}

} // namespace detail

inline std::string ess_cloud_svg(const EssCloud& cloud, double clip_radius = 6.0) {
    double xmin = -2, xmax = 2, ymin = -2, ymax = 2;
    for (const auto& [th, lam] : cloud.points) {
        if (std::abs(lam) > clip_radius) continue;
        xmin = std::min(xmin, lam.real());
        xmax = std::max(xmax, lam.real());
        ymin = std::min(ymin, lam.imag());
        ymax = std::max(ymax, lam.imag());
    }
    const double padx = 0.05 * (xmax - xmin), pady = 0.05 * (ymax - ymin);
    detail::SvgFrame f{xmin - padx, xmax + padx, ymin - pady, ymax + pady};
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << f.width
        << "' height='" << f.height << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    detail::svg_axes(out, f);
    for (const auto& [th, lam] : cloud.points) {
        if (lam.real() < f.xmin || lam.real() > f.xmax || lam.imag() < f.ymin ||
            lam.imag() > f.ymax)
            continue;
        const bool is_e_point = std::isnan(th);
        out << "<circle cx='" << f.px(lam.real()) << "' cy='" << f.py(lam.imag())
            << "' r='" << (is_e_point ? 3.0 : 1.4) << "' fill='"
            << (is_e_point ? "#c0392b" : "#1f3a6e") << "'/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

inline std::string region_map_svg(const RegionMap& map, const EssCloud& cloud) {
    detail::SvgFrame f{map.x0, map.x0 + map.nx * map.dx, map.y0,
                       map.y0 + map.ny * map.dy};
    auto color = [](CellLabel l) {
        switch (l) {
            case CellLabel::EssBand: return "#3b3b3b";
            case CellLabel::Resolvent: return "#ffffff";
            case CellLabel::Spectrum: return "#8db4e2";
            default: return "#e8c34a";
        }
    };
    std::ostringstream out;
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << f.width
        << "' height='" << f.height << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    // Merge horizontal runs of equal label into single rectangles.
    for (int iy = 0; iy < map.ny; ++iy) {
        int ix = 0;
        while (ix < map.nx) {
            const CellLabel l = map.label_at(ix, iy);
            int end = ix;
            while (end + 1 < map.nx && map.label_at(end + 1, iy) == l) ++end;
            if (l != CellLabel::Resolvent) {
                const double x0 = f.px(map.x0 + ix * map.dx);
                const double x1 = f.px(map.x0 + (end + 1) * map.dx);
                const double y0 = f.py(map.y0 + (iy + 1) * map.dy);
                const double y1 = f.py(map.y0 + iy * map.dy);
                out << "<rect x='" << x0 << "' y='" << y0 << "' width='" << (x1 - x0)
                    << "' height='" << (y1 - y0) << "' fill='" << color(l) << "'/>\n";
            }
            ix = end + 1;
        }
    }
    detail::svg_axes(out, f);
    for (const auto& [th, lam] : cloud.points) {
        if (lam.real() < f.xmin || lam.real() > f.xmax || lam.imag() < f.ymin ||
            lam.imag() > f.ymax)
            continue;
        out << "<circle cx='" << f.px(lam.real()) << "' cy='" << f.py(lam.imag())
            << "' r='1.0' fill='#10141a'/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace toepspec

#endif
