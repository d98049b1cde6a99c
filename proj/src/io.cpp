#include "cylflow/io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cylflow {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& val) {
    try {
        size_t pos = 0;
        double d = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: value of '" + key + "' is not a number: " + val);
    }
}

int to_int(const std::string& key, const std::string& val) {
    const double d = to_double(key, val);
    const int i = static_cast<int>(std::llround(d));
    if (i != d) throw ConfigError("config: value of '" + key + "' must be an integer");
    return i;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

}  // namespace

uint64_t fnv1a(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig rc;
    rc.raw_text = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " +
                              std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        const std::string full = section.empty() ? key : section + "." + key;

        SimConfig& s = rc.sim;
        if (full == "grid.R") s.R = to_double(full, val);
        else if (full == "grid.a") s.a = to_double(full, val);
        else if (full == "grid.Nr") s.Nr = to_int(full, val);
        else if (full == "grid.Nz") s.Nz = to_int(full, val);
        else if (full == "time.dt") s.dt = to_double(full, val);
        else if (full == "time.T") s.T = to_double(full, val);
        else if (full == "time.cfl_safety") s.cfl_safety = to_double(full, val);
        else if (full == "time.record_every") s.record_every = to_int(full, val);
        else if (full == "time.scheme") {
            if (val == "imex1") s.scheme = Scheme::imex1;
            else if (val == "imex2") s.scheme = Scheme::imex2;
            else throw ConfigError("config: unknown scheme '" + val + "'");
        } else if (full == "flow.nu") s.nu = to_double(full, val);
        else if (full == "flow.scenario") s.scenario = val;
        else if (full == "flow.advection") {
            if (val == "upwind2") s.advection = AdvectionScheme::upwind2;
            else if (val == "centered") s.advection = AdvectionScheme::centered;
            else throw ConfigError("config: unknown advection scheme '" + val + "'");
        } else if (full == "flow.forcing") rc.forcing = val;
        else if (full == "flow.forcing_amp") rc.forcing_amp = to_double(full, val);
        else if (full == "certificate.eps0") s.eps0 = to_double(full, val);
        else if (full == "certificate.delta") s.delta = to_double(full, val);
        else if (full == "certificate.c0") s.c0 = to_double(full, val);
        else if (full == "certificate.d") s.interp_d = to_double(full, val);
        else if (full == "certificate.s_list") {
            s.s_list.clear();
            std::istringstream ls(val);
            std::string tok;
            while (std::getline(ls, tok, ','))
                s.s_list.push_back(to_double(full, trim(tok)));
            if (s.s_list.empty())
                throw ConfigError("config: certificate.s_list is empty");
        } else if (full == "output.dir") rc.output_dir = val;
        else
            throw ConfigError("config: unknown key '" + full + "'");
    }
    if (rc.forcing != "none" && rc.forcing != "swirl_pulse")
        throw ConfigError("config: unknown forcing '" + rc.forcing + "'");
    if (rc.sim.record_every < 1)
        throw ConfigError("config: time.record_every must be >= 1");
    return rc;
}

RunConfig parse_config_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

Forcing make_named_forcing(const std::string& name, double amp, double R,
                           double a) {
    Forcing f;
    if (name == "none" || name.empty()) return f;
    if (name == "swirl_pulse") {
        // azimuthal push, vanishing on the wall and the axis, decaying in time
        const double pi = std::numbers::pi;
        f.fphi = [amp, R, a, pi](double r, double z, double t) {
            return amp * r * (R * R - r * r) / (R * R * R) *
                   std::cos(pi * z / a) * std::exp(-2.0 * t);
        };
        return f;
    }
    throw ConfigError("unknown forcing '" + name + "'");
}

void write_text_atomic(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << text;
    }
    fs::rename(tmp, path);
}

std::string series_csv_text(const std::vector<StepRecord>& records) {
    std::ostringstream os;
    os << "t,v_l2,grad_v_l2_cum,u_inf,gamma_l2,phi_l2,X,cfl,elliptic_residual\n";
    for (const StepRecord& r : records) {
        os << fmt(r.t) << ',' << fmt(r.v_l2) << ','
           << fmt(std::sqrt(r.grad_v_sq_cum)) << ',' << fmt(r.u_inf) << ','
           << fmt(r.gamma_l2) << ',' << fmt(r.phi_l2) << ',' << fmt(r.X) << ','
           << fmt(r.cfl) << ',' << fmt(r.elliptic_residual) << '\n';
    }
    return os.str();
}

std::string series_ext_csv_text(const std::vector<StepRecord>& records) {
    std::ostringstream os;
    os << "t,metric_sq_cum,vphi_inf,div_l2\n";
    for (const StepRecord& r : records)
        os << fmt(r.t) << ',' << fmt(r.metric_sq_cum) << ',' << fmt(r.vphi_inf)
           << ',' << fmt(r.div_l2) << '\n';
    return os.str();
}

static std::vector<std::vector<double>> read_csv(const fs::path& path,
                                                 size_t cols) {
    std::ifstream in(path);
    if (!in) throw ConfigError("missing artifact: " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) {
            try {
                row.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw ConfigError("malformed csv cell in " + path.string());
            }
        }
        if (row.size() != cols)
            throw ConfigError("malformed csv row in " + path.string());
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<StepRecord> read_series_csv(const fs::path& main_csv,
                                        const fs::path& ext_csv) {
    auto main_rows = read_csv(main_csv, 9);
    auto ext_rows = read_csv(ext_csv, 4);
    if (main_rows.size() != ext_rows.size())
        throw ConfigError("series csv files disagree on row count");
    std::vector<StepRecord> recs(main_rows.size());
    for (size_t k = 0; k < main_rows.size(); ++k) {
        StepRecord& r = recs[k];
        const auto& m = main_rows[k];
        r.t = m[0];
        r.v_l2 = m[1];
        r.grad_v_sq_cum = m[2] * m[2];
        r.u_inf = m[3];
        r.gamma_l2 = m[4];
        r.phi_l2 = m[5];
        r.X = m[6];
        r.cfl = m[7];
        r.elliptic_residual = m[8];
        r.metric_sq_cum = ext_rows[k][1];
        r.vphi_inf = ext_rows[k][2];
        r.div_l2 = ext_rows[k][3];
    }
    return recs;
}

void write_snapshot(const fs::path& path, const State& s, const Grid& g) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << "CYLFLOW-CKPT v1\n"
            << "Nr " << g.nr << "\nNz " << g.nz << "\nR " << fmt(g.R) << "\na "
            << fmt(g.a) << "\nt " << fmt(s.t) << "\nfields u gamma psi1\n"
            << "binary\n";
        auto dump = [&out](const std::vector<double>& v) {
            out.write(reinterpret_cast<const char*>(v.data()),
                      static_cast<std::streamsize>(v.size() * sizeof(double)));
        };
        dump(s.u.v);
        dump(s.gamma.v);
        dump(s.psi1.v);
    }
    fs::rename(tmp, path);
}

SnapshotFile read_snapshot(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("missing artifact: " + path.string());
    SnapshotFile sf;
    std::string line;
    std::getline(in, line);
    if (line != "CYLFLOW-CKPT v1")
        throw ConfigError("bad checkpoint magic in " + path.string());
    while (std::getline(in, line)) {
        if (line == "binary") break;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "Nr") ls >> sf.nr;
        else if (key == "Nz") ls >> sf.nz;
        else if (key == "R") ls >> sf.R;
        else if (key == "a") ls >> sf.a;
        else if (key == "t") ls >> sf.t;
        else if (key == "fields") { /* fixed order */ }
        else throw ConfigError("bad checkpoint header line: " + line);
    }
    const size_t n = static_cast<size_t>(sf.nr) * sf.nz;
    auto load = [&](std::vector<double>& v) {
        v.resize(n);
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
        if (!in) throw ConfigError("truncated checkpoint " + path.string());
    };
    load(sf.u);
    load(sf.gamma);
    load(sf.psi1);
    return sf;
}

std::string certificate_text(const CertificateReport& rep) {
    std::ostringstream os;
    os << std::setprecision(12);
    os << "data constants\n";
    const DataConstants& d = rep.constants;
    os << "  D1=" << d.D1 << " (additive form " << d.d1_additive << ")"
       << " D2=" << d.D2 << " D*=" << d.Dstar << " D3=" << d.D3 << "\n"
       << "  D4=" << d.D4 << " D5=" << d.D5 << " D6=" << d.D6 << " D7=" << d.D7
       << " D8^2=" << d.D8_sq << "\n"
       << "  G=" << d.G << " G1=" << d.G1 << " G2=" << d.G2 << "\n";
    os << "interaction integral I = " << rep.interaction << "\n";
    for (const LambdaRecord& lr : rep.lambdas) {
        os << "lambda(" << lr.s << ") = ";
        if (lr.defined)
            os << lr.value << "  case " << lr.case_label << "  D0=" << lr.D0;
        else
            os << "undefined (v_phi = 0)";
        os << "\n";
    }
    os << "entries\n";
    for (const LedgerEntry& e : rep.entries) {
        const char* st = e.status == LedgerStatus::pass      ? "PASS"
                         : e.status == LedgerStatus::fail    ? "FAIL"
                         : e.status == LedgerStatus::tracked ? "TRACKED"
                                                             : "SKIPPED";
        os << "  " << st << ' '
           << (e.mode == LedgerMode::strict ? "[strict]  " : "[tracked] ")
           << e.name << "  lhs=" << e.lhs << "  rhs=" << e.rhs
           << "  ratio=" << e.ratio;
        if (!e.note.empty()) os << "  (" << e.note << ")";
        os << "\n";
    }
    os << (rep.all_strict_pass() ? "ALL STRICT ENTRIES PASS\n"
                                 : "STRICT ENTRY FAILURE\n");
    return os.str();
}

// ---------------------------------------------------------------------------
// CLI commands

namespace {

fs::path resolve_output_dir(const std::string& dir) {
    fs::path p(dir);
    if (p.is_absolute()) return p;
    if (const char* root = std::getenv("CYLFLOW_OUTPUT_ROOT"))
        return fs::path(root) / p;
    return p;
}

json certificate_json(const CertificateReport& rep) {
    json j;
    const DataConstants& d = rep.constants;
    j["constants"] = {{"D1", d.D1},      {"D1_additive", d.d1_additive},
                      {"D2", d.D2},      {"Dstar", d.Dstar},
                      {"D3", d.D3},      {"D4", d.D4},
                      {"D5", d.D5},      {"D6", d.D6},
                      {"D7", d.D7},      {"D8_sq", d.D8_sq},
                      {"G", d.G},        {"G1", d.G1},
                      {"G2", d.G2},      {"nu", d.nu},
                      {"horizon", d.horizon}};
    j["interaction"] = rep.interaction;
    j["entries"] = json::array();
    for (const LedgerEntry& e : rep.entries) {
        j["entries"].push_back(
            {{"name", e.name},
             {"mode", e.mode == LedgerMode::strict ? "strict" : "tracked"},
             {"status", e.status == LedgerStatus::pass      ? "pass"
                        : e.status == LedgerStatus::fail    ? "fail"
                        : e.status == LedgerStatus::tracked ? "tracked"
                                                            : "skipped"},
             {"lhs", e.lhs},
             {"rhs", e.rhs},
             {"ratio", e.ratio},
             {"note", e.note}});
    }
    j["lambda"] = json::array();
    for (const LambdaRecord& lr : rep.lambdas)
        j["lambda"].push_back({{"s", lr.s},
                               {"value", lr.value},
                               {"defined", lr.defined},
                               {"case", lr.case_label},
                               {"D0", lr.D0}});
    j["all_strict_pass"] = rep.all_strict_pass();
    return j;
}

struct LoadedRun {
    RunConfig rc;
    Scenario scenario;
    Forcing forcing;
    RunResult run;
};

// Rebuild an in-memory RunResult from a run directory (snapshot fields are
// trusted; velocity and Phi are re-derived; scalars come from the CSVs).
LoadedRun load_run_dir(const fs::path& dir) {
    LoadedRun lr;
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw ConfigError("missing artifact: " + (dir / "manifest.json").string());
    json manifest;
    try {
        manifest = json::parse(mf);
    } catch (const std::exception& e) {
        throw ConfigError("bad manifest in " + dir.string() + ": " + e.what());
    }

    lr.rc = parse_config_file(dir / "config.cfg");
    const SimConfig& cfg = lr.rc.sim;
    lr.scenario = builtin_scenario(cfg.scenario, cfg.R, cfg.a, cfg.nu);
    lr.forcing = lr.rc.forcing == "none"
                     ? lr.scenario.forcing
                     : make_named_forcing(lr.rc.forcing, lr.rc.forcing_amp,
                                          cfg.R, cfg.a);

    RunResult& run = lr.run;
    run.config = cfg;
    run.grid = make_grid(cfg.R, cfg.a, cfg.Nr, cfg.Nz);
    run.series.grid = run.grid;
    run.records = read_series_csv(dir / "series.csv", dir / "series_ext.csv");
    run.completed = manifest.value("status", "ok") == std::string("ok");

    std::vector<fs::path> snaps;
    const fs::path sdir = dir / "snapshots";
    if (!fs::exists(sdir)) throw ConfigError("missing artifact: " + sdir.string());
    if (manifest.contains("snapshots")) {
        for (const auto& name : manifest["snapshots"])
            snaps.push_back(sdir / name.get<std::string>());
    } else {
        for (const auto& e : fs::directory_iterator(sdir))
            if (e.path().extension() == ".ckpt") snaps.push_back(e.path());
        std::sort(snaps.begin(), snaps.end());
    }
    if (snaps.empty()) throw ConfigError("run directory has no snapshots");

    const Grid& g = run.grid;
    for (const fs::path& p : snaps) {
        SnapshotFile sf = read_snapshot(p);
        if (sf.nr != g.nr || sf.nz != g.nz)
            throw ConfigError("snapshot grid mismatch in " + p.string());
        State st;
        st.t = sf.t;
        st.u = ScalarField(g, Parity::odd2, EdgeBC::dirichlet0, EdgeBC::neumann0);
        st.u.v = std::move(sf.u);
        st.gamma =
            ScalarField(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        st.gamma.v = std::move(sf.gamma);
        st.psi1 =
            ScalarField(g, Parity::even, EdgeBC::dirichlet0, EdgeBC::dirichlet0);
        st.psi1.v = std::move(sf.psi1);
        st.v = velocity_from_stream(st.psi1, g);
        for (int j = 0; j < g.nz; ++j)
            for (int i = 0; i < g.nr; ++i)
                st.v.vphi.at(i, j) = st.u.at(i, j) / g.r[i];
        st.phi = phi_from_swirl(st.u, g);
        run.series.times.push_back(st.t);
        run.series.snaps.push_back(std::move(st));
    }
    return lr;
}

}  // namespace

int cmd_run(const std::string& config_path) {
    RunConfig rc;
    try {
        rc = parse_config_file(config_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    Scenario sc;
    Forcing forcing;
    try {
        sc = builtin_scenario(rc.sim.scenario, rc.sim.R, rc.sim.a, rc.sim.nu);
        forcing = rc.forcing == "none"
                      ? sc.forcing
                      : make_named_forcing(rc.forcing, rc.forcing_amp, rc.sim.R,
                                           rc.sim.a);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    const fs::path dir = resolve_output_dir(rc.output_dir);
    // stale checkpoints from an earlier (possibly longer) run must not
    // survive into the new artifact set
    fs::remove_all(dir / "snapshots");
    fs::create_directories(dir / "snapshots");

    Grid g = make_grid(rc.sim.R, rc.sim.a, rc.sim.Nr, rc.sim.Nz);
    RunResult run = cylflow::run(rc.sim, sc.initial_u(g), sc.initial_gamma(g),
                                 forcing);

    write_text_atomic(dir / "config.cfg", rc.raw_text);
    write_text_atomic(dir / "series.csv", series_csv_text(run.records));
    write_text_atomic(dir / "series_ext.csv", series_ext_csv_text(run.records));
    json snaplist = json::array();
    for (int k = 0; k < run.series.size(); ++k) {
        std::ostringstream name;
        name << "snap_" << std::setw(6) << std::setfill('0') << k << ".ckpt";
        write_snapshot(dir / "snapshots" / name.str(), run.series.snaps[k],
                       run.grid);
        snaplist.push_back(name.str());
    }

    json manifest;
    manifest["config_hash"] = fnv1a(rc.raw_text);
    manifest["grid"] = {{"R", rc.sim.R}, {"a", rc.sim.a}, {"Nr", rc.sim.Nr},
                        {"Nz", rc.sim.Nz}};
    manifest["scheme"] = rc.sim.scheme == Scheme::imex1 ? "imex1" : "imex2";
    manifest["advection"] =
        rc.sim.advection == AdvectionScheme::upwind2 ? "upwind2" : "centered";
    manifest["nu"] = rc.sim.nu;
    manifest["dt"] = rc.sim.dt;
    manifest["T"] = rc.sim.T;
    manifest["scenario"] = rc.sim.scenario;
    manifest["forcing"] = rc.forcing;
    manifest["forcing_amp"] = rc.forcing_amp;
    manifest["record_every"] = rc.sim.record_every;
    manifest["library_version"] = kLibraryVersion;
    manifest["snapshots"] = snaplist;
    manifest["status"] = run.completed ? "ok" : "failed";
    if (!run.completed) {
        manifest["failing_time"] = run.fail_time;
        manifest["failure"] = run.fail_reason;
    }
    write_text_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

    if (!run.completed) {
        std::cerr << "numerical failure at t=" << run.fail_time << ": "
                  << run.fail_reason << "\n";
        return 3;
    }
    std::cout << "run complete: " << dir.string() << " (" << run.records.size()
              << " steps recorded)\n";
    return 0;
}

int cmd_check(const std::string& run_dir) {
    const fs::path dir(run_dir);
    LoadedRun lr;
    try {
        lr = load_run_dir(dir);
    } catch (const ConfigError& e) {
        std::cerr << "check: " << e.what() << "\n";
        return 2;
    }
    RunData rd{lr.run, lr.forcing};
    CertificateReport rep = certificate_report(rd);
    write_text_atomic(dir / "certificate.txt", certificate_text(rep));
    write_text_atomic(dir / "certificate.json",
                      certificate_json(rep).dump(2) + "\n");
    std::cout << certificate_text(rep);
    return rep.all_strict_pass() ? 0 : 1;
}

int cmd_report(const std::vector<std::string>& run_dirs) {
    if (run_dirs.empty()) {
        std::cerr << "report: no run directories given\n";
        return 2;
    }
    struct DirReport {
        fs::path dir;
        int resolution;
        CertificateReport rep;
    };
    std::vector<DirReport> reports;
    for (const std::string& d : run_dirs) {
        const fs::path dir(d);
        LoadedRun lr;
        try {
            lr = load_run_dir(dir);
        } catch (const ConfigError& e) {
            std::cerr << "report: " << e.what() << "\n";
            return 2;
        }
        RunData rd{lr.run, lr.forcing};
        CertificateReport rep = certificate_report(rd);

        std::ostringstream xcsv;
        xcsv << "t,X\n";
        for (const auto& [t, x] : rep.x_of_t) xcsv << fmt(t) << ',' << fmt(x) << '\n';
        write_text_atomic(dir / "report_x_of_t.csv", xcsv.str());

        std::ostringstream ecsv;
        ecsv << "t,v_l2_sq,visc_grad_cum,visc_metric_cum,total\n";
        for (const StepRecord& r : lr.run.records) {
            const double nu = lr.run.config.nu;
            ecsv << fmt(r.t) << ',' << fmt(r.v_l2 * r.v_l2) << ','
                 << fmt(nu * r.grad_v_sq_cum) << ',' << fmt(nu * r.metric_sq_cum)
                 << ','
                 << fmt(r.v_l2 * r.v_l2 + nu * (r.grad_v_sq_cum + r.metric_sq_cum))
                 << '\n';
        }
        write_text_atomic(dir / "report_energy_budget.csv", ecsv.str());

        std::ostringstream lcsv;
        lcsv << "s,lambda,case,D0\n";
        for (const LambdaRecord& l : rep.lambdas)
            lcsv << fmt(l.s) << ',' << fmt(l.value) << ',' << l.case_label << ','
                 << fmt(l.D0) << '\n';
        write_text_atomic(dir / "report_lambda.csv", lcsv.str());

        reports.push_back({dir, lr.run.config.Nr, std::move(rep)});
    }

    if (reports.size() > 1) {
        std::ostringstream rcsv;
        rcsv << "entry";
        for (const DirReport& dr : reports) rcsv << ",N" << dr.resolution;
        rcsv << '\n';
        for (const LedgerEntry& e : reports.front().rep.entries) {
            rcsv << e.name;
            for (const DirReport& dr : reports) {
                const LedgerEntry* m = dr.rep.find(e.name);
                rcsv << ',' << (m ? fmt(m->ratio) : "");
            }
            rcsv << '\n';
        }
        write_text_atomic(reports.front().dir / "report_ratio_vs_resolution.csv",
                          rcsv.str());
    }
    std::cout << "report written for " << reports.size() << " run(s)\n";
    return 0;
}

}  // namespace cylflow
