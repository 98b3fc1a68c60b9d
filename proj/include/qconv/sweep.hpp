#ifndef QCONV_SWEEP_HPP
#define QCONV_SWEEP_HPP

#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qconv/regions.hpp"

namespace qconv {

/// Configuration of an eigenvalue-simplex sweep over the (lambda1, lambda2)
/// plane at fixed lambda4, with lambda3 = 1 - lambda1 - lambda2 - lambda4.
struct SweepConfig {
    double lambda4 = 0.0;
    double step = 0.005;           // grid pitch; 0.02 is the documented fast preset
    int a_grid_size = kDefaultAGridSize;
    double region_tol = kRegionTol;
    double feas_tol = kFeasTol;
    unsigned threads = 0;          // 0 = hardware concurrency

    void validate() const {
        if (lambda4 < 0 || lambda4 > 0.25)
            throw std::invalid_argument("SweepConfig: lambda4 must be in [0, 1/4]");
        if (step < 1e-4 || step > 0.1)
            throw std::invalid_argument("SweepConfig: step must be in [1e-4, 0.1]");
        if (a_grid_size < 3) throw std::invalid_argument("SweepConfig: a_grid_size must be >= 3");
    }
};

struct SweepRecord {
    std::array<double, 4> lambda{};
    RegionTag cls = RegionTag::BlueFeasible;
    TheoremTag detail = TheoremTag::None;
    bool lp_feasible = true;
    bool marginal = false;
    int cuts = 0;
};

namespace detail {

inline std::vector<std::array<double, 4>> sweep_points(const SweepConfig& cfg) {
    std::vector<std::array<double, 4>> pts;
    const int n = static_cast<int>(std::floor(1.0 / cfg.step + 0.5));
    for (int i = 0; i <= n; ++i) {
        const double l1 = i * cfg.step;
        for (int j = 0; j <= i; ++j) {
            const double l2 = j * cfg.step;
            const double l3 = 1.0 - l1 - l2 - cfg.lambda4;
            if (l3 < -1e-12) continue;         // off the simplex
            if (l2 < l3 - 1e-12) continue;     // ordering lambda2 >= lambda3
            if (l3 < cfg.lambda4 - 1e-12) continue;  // ordering lambda3 >= lambda4
            if (l1 > 1.0 + 1e-12) continue;
            pts.push_back({l1, l2, l3, cfg.lambda4});
        }
    }
    return pts;
}

}  // namespace detail

/// Classifies one spectrum the way the sweep does (LP verdict + region tags +
/// boundary shell flag).
inline SweepRecord classify_point(const std::array<double, 4>& lambda, int a_grid_size,
                                  double region_tol = kRegionTol, double feas_tol = kFeasTol) {
    const Spectrum s(lambda);
    LpOptions opt;
    opt.feas_tol = feas_tol;
    const Verdict v = feasible_for_spectrum(s, a_grid_size, opt);
    const RegionClass rc = classify(s, v, region_tol);
    SweepRecord rec;
    rec.lambda = lambda;
    rec.cls = rc.tag;
    rec.detail = rc.detail;
    rec.lp_feasible = v.feasible();
    rec.marginal = v.meta.marginal || near_region_boundary(s, region_tol);
    rec.cuts = v.meta.cuts;
    return rec;
}

/// Enumerates the grid (row-major in lambda1 then lambda2), classifies every
/// point, and returns the records in deterministic order. Points are
/// distributed over a worker pool; the output order does not depend on the
/// thread count.
inline std::vector<SweepRecord> sweep(const SweepConfig& cfg) {
    cfg.validate();
    const auto pts = detail::sweep_points(cfg);
    if (pts.empty()) throw std::invalid_argument("sweep: configuration excludes every grid point");

    std::vector<SweepRecord> records(pts.size());
    unsigned nthreads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    if (nthreads == 0) nthreads = 1;
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(pts.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t k = next.fetch_add(1, std::memory_order_relaxed);
            if (k >= pts.size()) break;
            try {
                records[k] = classify_point(pts[k], cfg.a_grid_size, cfg.region_tol, cfg.feas_tol);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed = true;
                if (error.empty()) error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
    if (failed) throw std::runtime_error("sweep: " + error);
    return records;
}

// ---------------------------------------------------------------------------
// CSV emission and parsing

namespace detail {

inline std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline RegionTag parse_region(const std::string& s) {
    for (RegionTag t : {RegionTag::AllSeparable, RegionTag::TargetSeparable,
                        RegionTag::GreenFeasible, RegionTag::BlackInfeasible,
                        RegionTag::OrangeInfeasible, RegionTag::BlueFeasible})
        if (s == to_string(t)) return t;
    throw std::invalid_argument("parse_csv: unknown class '" + s + "'");
}

inline TheoremTag parse_theorem(const std::string& s) {
    for (TheoremTag t : {TheoremTag::None, TheoremTag::Thm4, TheoremTag::Thm5, TheoremTag::Thm6A,
                         TheoremTag::Thm6B, TheoremTag::Thm6C})
        if (s == to_string(t)) return t;
    throw std::invalid_argument("parse_csv: unknown detail '" + s + "'");
}

}  // namespace detail

inline const char* kCsvHeader = "lambda1,lambda2,lambda3,lambda4,class,detail,lp_status,marginal,cuts";

inline void write_csv(const std::vector<SweepRecord>& records, std::ostream& os) {
    os << kCsvHeader << '\n';
    for (const SweepRecord& r : records) {
        os << detail::csv_number(r.lambda[0]) << ',' << detail::csv_number(r.lambda[1]) << ','
           << detail::csv_number(r.lambda[2]) << ',' << detail::csv_number(r.lambda[3]) << ','
           << to_string(r.cls) << ',' << to_string(r.detail) << ','
           << (r.lp_feasible ? "Feasible" : "Infeasible") << ',' << (r.marginal ? '1' : '0') << ','
           << r.cuts << '\n';
    }
}

inline std::vector<SweepRecord> parse_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("parse_csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw std::invalid_argument("parse_csv: unexpected header");

    std::vector<SweepRecord> records;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 9) throw std::invalid_argument("parse_csv: malformed row: " + line);
        SweepRecord r;
        for (int k = 0; k < 4; ++k) r.lambda[static_cast<std::size_t>(k)] = std::stod(fields[static_cast<std::size_t>(k)]);
        r.cls = detail::parse_region(fields[4]);
        r.detail = detail::parse_theorem(fields[5]);
        if (fields[6] == "Feasible")
            r.lp_feasible = true;
        else if (fields[6] == "Infeasible")
            r.lp_feasible = false;
        else
            throw std::invalid_argument("parse_csv: bad lp_status '" + fields[6] + "'");
        r.marginal = fields[7] == "1";
        r.cuts = std::stoi(fields[8]);
        records.push_back(r);
    }
    return records;
}

// ---------------------------------------------------------------------------
// SVG rendering

struct Palette {
    std::string all_separable = "#c8c8c8";
    std::string target_separable = "#8c8c8c";
    std::string green = "#2ca25f";
    std::string blue = "#3182bd";
    std::string orange = "#fd8d3c";
    std::string black = "#000000";

    const std::string& color(RegionTag t) const {
        switch (t) {
            case RegionTag::AllSeparable: return all_separable;
            case RegionTag::TargetSeparable: return target_separable;
            case RegionTag::GreenFeasible: return green;
            case RegionTag::BlueFeasible: return blue;
            case RegionTag::OrangeInfeasible: return orange;
            case RegionTag::BlackInfeasible: return black;
        }
        return black;
    }
};

/// Standalone SVG of the sweep: one filled cell per record in the
/// (lambda1, lambda2) plane plus a legend. The cell size is inferred from the
/// smallest gap between distinct lambda1 values.
inline std::string render_svg(const std::vector<SweepRecord>& records, const Palette& palette = {}) {
    if (records.empty()) throw std::invalid_argument("render_svg: no records");

    double cell = 0.01;
    {
        std::vector<double> xs;
        xs.reserve(records.size());
        for (const auto& r : records) xs.push_back(r.lambda[0]);
        std::sort(xs.begin(), xs.end());
        double best = 1;
        for (std::size_t i = 1; i < xs.size(); ++i) {
            const double d = xs[i] - xs[i - 1];
            if (d > 1e-9) best = std::min(best, d);
        }
        if (best < 1) cell = best;
    }

    double x0 = 1, x1 = 0, y0 = 1, y1 = 0;
    for (const auto& r : records) {
        x0 = std::min(x0, r.lambda[0]);
        x1 = std::max(x1, r.lambda[0]);
        y0 = std::min(y0, r.lambda[1]);
        y1 = std::max(y1, r.lambda[1]);
    }
    x0 -= cell;
    y0 -= cell;
    x1 += cell;
    y1 += cell;

    const double plot = 640.0;
    const double margin = 60.0;
    const double legend_w = 190.0;
    const double sx = plot / (x1 - x0);
    const double sy = plot / (y1 - y0);
    const double width = margin * 2 + plot + legend_w;
    const double height = margin * 2 + plot;

    const auto px = [&](double lx) { return margin + (lx - x0) * sx; };
    const auto py = [&](double ly) { return margin + (y1 - ly) * sy; };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    const double cw = cell * sx;
    const double ch = cell * sy;
    for (const auto& r : records) {
        svg << "<rect x=\"" << px(r.lambda[0]) - cw / 2 << "\" y=\"" << py(r.lambda[1]) - ch / 2
            << "\" width=\"" << cw << "\" height=\"" << ch << "\" fill=\"" << palette.color(r.cls)
            << "\"/>\n";
    }

    svg << "<text x=\"" << margin + plot / 2 << "\" y=\"" << height - 15
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">lambda1</text>\n"
        << "<text x=\"18\" y=\"" << margin + plot / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\" transform=\"rotate(-90 18 "
        << margin + plot / 2 << ")\">lambda2</text>\n";

    const std::array<RegionTag, 6> order{RegionTag::GreenFeasible,   RegionTag::BlueFeasible,
                                         RegionTag::OrangeInfeasible, RegionTag::BlackInfeasible,
                                         RegionTag::AllSeparable,     RegionTag::TargetSeparable};
    double ly = margin;
    const double lx = margin + plot + 25;
    for (RegionTag t : order) {
        svg << "<rect x=\"" << lx << "\" y=\"" << ly << "\" width=\"14\" height=\"14\" fill=\""
            << palette.color(t) << "\" stroke=\"#444444\"/>\n"
            << "<text x=\"" << lx + 20 << "\" y=\"" << ly + 12
            << "\" font-family=\"sans-serif\" font-size=\"13\">" << to_string(t) << "</text>\n";
        ly += 22;
    }

    svg << "</svg>\n";
    return svg.str();
}

// ---------------------------------------------------------------------------
// Cross-validation of a sweep against the analytic certificates

struct ValidationReport {
    std::size_t records = 0;
    std::map<RegionTag, std::size_t> class_counts;
    std::size_t green_feasible_violations = 0;    // Green must be LP-feasible
    std::size_t black_infeasible_violations = 0;  // Black must be LP-infeasible
    std::size_t black_containment_violations = 0; // Black must sit inside the infeasible set
    std::vector<std::string> issues;

    bool ok() const {
        return green_feasible_violations == 0 && black_infeasible_violations == 0 &&
               black_containment_violations == 0;
    }

    std::string summary() const {
        std::ostringstream os;
        os << "records " << records << '\n';
        for (const auto& [tag, count] : class_counts)
            os << "count " << to_string(tag) << ' ' << count << '\n';
        os << "violations green_implies_feasible " << green_feasible_violations << '\n'
           << "violations black_implies_infeasible " << black_infeasible_violations << '\n'
           << "violations black_within_infeasible_set " << black_containment_violations << '\n';
        for (const std::string& s : issues) os << "issue " << s << '\n';
        os << (ok() ? "result OK" : "result VIOLATIONS") << '\n';
        return os.str();
    }
};

inline ValidationReport cross_validate(const std::vector<SweepRecord>& records) {
    ValidationReport rep;
    rep.records = records.size();
    const auto point = [](const SweepRecord& r) {
        return "(" + detail::csv_number(r.lambda[0]) + "," + detail::csv_number(r.lambda[1]) + ")";
    };
    for (const SweepRecord& r : records) {
        ++rep.class_counts[r.cls];
        if (r.cls == RegionTag::GreenFeasible && !r.lp_feasible) {
            ++rep.green_feasible_violations;
            rep.issues.push_back("green record with infeasible LP at " + point(r));
        }
        if (r.cls == RegionTag::BlackInfeasible && r.lp_feasible) {
            // One fault, two reported properties: the analytic certificate
            // disagrees with the LP, and the black cell escapes the
            // infeasible (orange-or-black) set.
            ++rep.black_infeasible_violations;
            ++rep.black_containment_violations;
            rep.issues.push_back("black record with feasible LP at " + point(r));
        }
    }
    return rep;
}

}  // namespace qconv

#endif  // QCONV_SWEEP_HPP
