// Command-line front end: single-point classification, raw LP verdicts,
// eigenvalue-simplex sweeps with CSV/SVG output, subspace queries, and
// cross-validation of sweep files.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qconv/subspaces.hpp"
#include "qconv/sweep.hpp"

namespace {

qconv::Spectrum parse_spectrum(const std::vector<double>& v) {
    if (v.size() != 4)
        throw CLI::ValidationError("--spectrum", "expected four comma-separated eigenvalues");
    return qconv::Spectrum(v[0], v[1], v[2], v[3]);
}

std::array<int, 4> parse_perm(const std::vector<int>& v) {
    if (v.size() != 4)
        throw CLI::ValidationError("--target-perm", "expected a permutation of 1,2,3,4");
    return {v[0], v[1], v[2], v[3]};
}

// One ket per line, four complex "re,im" entries separated by whitespace.
std::vector<qconv::Ket> read_basis_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open basis file: " + path);
    std::vector<qconv::Ket> kets;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<qconv::cplx> amps;
        std::string tok;
        while (ls >> tok) {
            const auto comma = tok.find(',');
            if (comma == std::string::npos)
                throw std::runtime_error("basis entry must be re,im: " + tok);
            amps.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
        }
        if (amps.empty()) continue;
        if (amps.size() != 4) throw std::runtime_error("each ket needs four complex entries");
        qconv::Ket k;
        for (int i = 0; i < 4; ++i) k[i] = amps[static_cast<std::size_t>(i)];
        kets.push_back(k);
    }
    return kets;
}

// 16 complex entries "re,im", whitespace-separated, row-major.
qconv::DensityMatrix read_target_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open target file: " + path);
    std::vector<qconv::cplx> entries;
    std::string tok;
    while (in >> tok) {
        const auto comma = tok.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("matrix entry must be re,im: " + tok);
        entries.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
    if (entries.size() != 16)
        throw std::runtime_error("target file must hold 16 complex entries (4x4, row-major)");
    qconv::Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m(i, j) = entries[static_cast<std::size_t>(4 * i + j)];
    return qconv::DensityMatrix(m);
}

void print_record_csv(const qconv::SweepRecord& rec) {
    std::vector<qconv::SweepRecord> one{rec};
    qconv::write_csv(one, std::cout);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit fixed-spectrum convertibility toolkit"};
    app.require_subcommand(1);

    std::vector<double> spectrum_arg;
    std::vector<int> perm_arg{1, 2, 3, 4};
    bool want_certificate = false;
    int a_grid = qconv::kDefaultAGridSize;
    std::string target_file, csv_path, svg_path, basis_file;
    double lambda4 = 0.0, step = 0.005;
    unsigned threads = 0;

    auto* classify_cmd = app.add_subcommand("classify", "classify one spectrum point");
    classify_cmd->add_option("--spectrum", spectrum_arg, "lambda1,lambda2,lambda3,lambda4")
        ->required()
        ->delimiter(',');
    classify_cmd->add_option("--target-perm", perm_arg, "eigenvalue-to-Bell-state assignment")
        ->delimiter(',');
    classify_cmd->add_flag("--certificate", want_certificate,
                           "print Farkas multipliers for infeasible verdicts");
    classify_cmd->add_option("--a-grid", a_grid, "tau-constraint grid size")->check(CLI::Range(3, 100000));

    auto* lp_cmd = app.add_subcommand("lp", "raw LP verdict record");
    lp_cmd->add_option("--spectrum", spectrum_arg, "lambda1,lambda2,lambda3,lambda4")
        ->required()
        ->delimiter(',');
    lp_cmd->add_option("--a-grid", a_grid, "tau-constraint grid size")->check(CLI::Range(3, 100000));
    lp_cmd->add_option("--target-file", target_file,
                       "arbitrary target state (16 complex re,im entries, row-major)");

    auto* sweep_cmd = app.add_subcommand("sweep", "classify a (lambda1, lambda2) grid");
    sweep_cmd->add_option("--lambda4", lambda4, "fixed smallest eigenvalue")->required();
    sweep_cmd->add_option("--step", step, "grid pitch (fast preset: 0.02)");
    sweep_cmd->add_option("--a-grid", a_grid, "tau-constraint grid size");
    sweep_cmd->add_option("--csv", csv_path, "output CSV path")->required();
    sweep_cmd->add_option("--svg", svg_path, "optional SVG map path");
    sweep_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* subspace_cmd = app.add_subcommand("subspace", "subspace geometry queries");
    auto* count_cmd = subspace_cmd->add_subcommand("count", "separable rays of a 2-d subspace");
    auto* complement_cmd =
        subspace_cmd->add_subcommand("complement", "complement class of a 3-d subspace");
    count_cmd->add_option("--basis", basis_file, "file with one ket per line")->required();
    complement_cmd->add_option("--basis", basis_file, "file with one ket per line")->required();
    subspace_cmd->require_subcommand(1);

    auto* validate_cmd = app.add_subcommand("validate", "cross-validate a sweep CSV");
    validate_cmd->add_option("--csv", csv_path, "sweep CSV to check")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify_cmd) {
            const qconv::Spectrum s = parse_spectrum(spectrum_arg);
            const std::array<int, 4> perm = parse_perm(perm_arg);
            std::array<double, 4> target{};
            for (int i = 0; i < 4; ++i) target[static_cast<std::size_t>(i)] = s[perm[static_cast<std::size_t>(i)] - 1];
            const qconv::Verdict v = qconv::feasible_for_target(s, target, a_grid);
            const qconv::RegionClass rc = qconv::classify(s, v);
            qconv::SweepRecord rec;
            rec.lambda = {s[0], s[1], s[2], s[3]};
            rec.cls = rc.tag;
            rec.detail = rc.detail;
            rec.lp_feasible = v.feasible();
            rec.marginal = v.meta.marginal || qconv::near_region_boundary(s);
            rec.cuts = v.meta.cuts;
            print_record_csv(rec);
            if (want_certificate && !v.feasible())
                std::cout << qconv::verdict_record(s, target, v);
            return 0;
        }
        if (*lp_cmd) {
            const qconv::Spectrum s = parse_spectrum(spectrum_arg);
            std::array<double, 4> target{s[0], s[1], s[2], s[3]};
            if (!target_file.empty()) target = qconv::target_overlaps(read_target_file(target_file));
            const qconv::Verdict v = qconv::feasible_for_target(s, target, a_grid);
            std::cout << qconv::verdict_record(s, target, v);
            return 0;
        }
        if (*sweep_cmd) {
            qconv::SweepConfig cfg;
            cfg.lambda4 = lambda4;
            cfg.step = step;
            cfg.a_grid_size = a_grid;
            cfg.threads = threads;
            const auto records = qconv::sweep(cfg);
            {
                std::ofstream out(csv_path);
                if (!out) throw std::runtime_error("cannot open CSV output: " + csv_path);
                qconv::write_csv(records, out);
            }
            if (!svg_path.empty()) {
                std::ofstream out(svg_path);
                if (!out) throw std::runtime_error("cannot open SVG output: " + svg_path);
                out << qconv::render_svg(records);
            }
            std::cerr << records.size() << " records written to " << csv_path << "\n";
            return 0;
        }
        if (*subspace_cmd) {
            const auto kets = read_basis_file(basis_file);
            const qconv::Subspace v = qconv::Subspace::span(kets);
            if (*count_cmd)
                std::cout << qconv::to_string(qconv::separable_ray_count(v)) << "\n";
            else
                std::cout << qconv::to_string(qconv::complement_class(v)) << "\n";
            return 0;
        }
        if (*validate_cmd) {
            std::ifstream in(csv_path);
            if (!in) throw std::runtime_error("cannot open CSV: " + csv_path);
            const auto records = qconv::parse_csv(in);
            const qconv::ValidationReport rep = qconv::cross_validate(records);
            std::cout << rep.summary();
            return rep.ok() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
