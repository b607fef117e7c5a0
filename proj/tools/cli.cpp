#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cvmem/error.hpp"
#include "cvmem/fock.hpp"
#include "cvmem/kernels.hpp"
#include "cvmem/record.hpp"
#include "cvmem/upload.hpp"

namespace cvmem::cli {

namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

struct Sweep {
    std::string kind;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t n = 0;

    std::vector<double> values() const
    {
        std::vector<double> out;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
            if (kind == "log")
                out.push_back(std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))));
            else
                out.push_back(lo + t * (hi - lo));
        }
        if (!out.empty()) {
            out.front() = lo;
            out.back() = n == 1 ? lo : hi;
        }
        return out;
    }
};

Sweep parse_sweep(const std::vector<std::string>& raw, const char* name)
{
    if (raw.size() != 4)
        throw ParameterError(std::string(name) + " expects: lin|log LO HI N");
    Sweep s;
    s.kind = raw[0];
    if (s.kind != "lin" && s.kind != "log")
        throw ParameterError(std::string(name) + ": spacing must be 'lin' or 'log'");
    try {
        s.lo = std::stod(raw[1]);
        s.hi = std::stod(raw[2]);
        const long n = std::stol(raw[3]);
        if (n < 1)
            throw ParameterError(std::string(name) + ": N must be at least 1");
        s.n = static_cast<std::size_t>(n);
    } catch (const std::logic_error&) {
        throw ParameterError(std::string(name) + ": bounds and count must be numbers");
    }
    require_finite(s.lo, name);
    require_finite(s.hi, name);
    if (s.kind == "log" && (s.lo <= 0.0 || s.hi <= 0.0))
        throw ParameterError(std::string(name) + ": log spacing needs positive bounds");
    return s;
}

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : m_out(&fallback)
    {
        if (!path.empty()) {
            m_file.open(path);
            if (!m_file)
                throw ParameterError("cannot open output file '" + path + "'");
            m_out = &m_file;
        }
    }
    std::ostream& stream() { return *m_out; }

private:
    std::ofstream m_file;
    std::ostream* m_out;
};

void write_json(const json& j, const std::string& path, std::ostream& out)
{
    Output o(path, out);
    o.stream() << j.dump(2) << "\n";
}

// --- config file ----------------------------------------------------------------

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Flat key=value file; each key names a flag of the chosen subcommand. Values
// already given on the command line win.
std::vector<std::string> merge_config(std::vector<std::string> args)
{
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
            break;
        }
    }
    if (path.empty())
        return args;
    std::ifstream in(path);
    if (!in)
        throw ParameterError("cannot read config file '" + path + "'");
    auto given = [&](const std::string& flag) {
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
            return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    };
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == ';')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) == 0)
            key = key.substr(2);
        const std::string flag = "--" + key;
        if (given(flag) || (key == "post-correct" && given("--no-post-correct")))
            continue;
        if (value == "true" || value == "on" || value == "yes") {
            extra.push_back(flag);
        } else if (value == "false" || value == "off" || value == "no") {
            if (key == "post-correct")
                extra.push_back("--no-post-correct");
        } else {
            extra.push_back(flag);
            std::istringstream words(value);
            std::string w;
            while (words >> w)
                extra.push_back(w);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

void apply_thread_cap()
{
    if (const char* env = std::getenv("CVMEM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0)
            set_worker_threads(n);
    }
}

// --- record ---------------------------------------------------------------------

struct RecordArgs {
    double kappa = std::nan("");
    double c = 1.0;
    bool post_correct = true;
    std::vector<std::string> sweep;
    std::optional<double> gain;
    std::string out;
};

json channel_json(const ChannelReport& r)
{
    json j;
    j["kappa"] = r.kappa;
    j["c"] = r.c;
    j["post_corrected"] = r.post_corrected;
    j["T"] = std::abs(r.T_x - r.T_p) < 1e-12 ? json(r.T_x) : json(nullptr);
    j["T_x"] = r.T_x;
    j["T_p"] = r.T_p;
    j["V_Nx"] = r.V_Nx;
    j["V_Np"] = r.V_Np;
    j["cross_talk"] = r.cross_talk;
    j["noise_excess_free"] = r.noise_excess_free;
    j["frame"] = r.frame;
    j["gains"] = {{"g", r.g}, {"a", r.a}, {"kappa_prime", r.kappa_prime}, {"g_post", r.g_post}, {"b", r.b}};
    return j;
}

int cmd_record(const RecordArgs& ra, std::ostream& out)
{
    require_positive(ra.c, "pre-squeeze");
    if (!ra.sweep.empty()) {
        const auto s = parse_sweep(ra.sweep, "--kappa-sweep");
        const auto ks = s.values();
        std::vector<ChannelReport> rows(ks.size());
        for (double k : ks)
            require_positive(k, "kappa");
        for_each_index(ks.size(), [&](std::size_t i) { rows[i] = record_channel_report(ks[i], ra.c, ra.post_correct, ra.gain); });
        Output o(ra.out, out);
        o.stream() << "kappa,c,g,a,b,T,V_Nx,V_Np,noise_excess_free\n";
        for (const auto& r : rows)
            o.stream() << fmt(r.kappa) << ',' << fmt(r.c) << ',' << fmt(r.g) << ',' << fmt(r.a) << ','
                       << fmt(r.b) << ',' << fmt(r.T_x) << ',' << fmt(r.V_Nx) << ',' << fmt(r.V_Np) << ','
                       << (r.noise_excess_free ? "true" : "false") << "\n";
        return Ok;
    }
    if (std::isnan(ra.kappa))
        throw ParameterError("record needs --kappa or --kappa-sweep");
    require_positive(ra.kappa, "kappa");
    write_json(channel_json(record_channel_report(ra.kappa, ra.c, ra.post_correct, ra.gain)), ra.out, out);
    return Ok;
}

// --- upload-photon -----------------------------------------------------------------

struct PhotonArgs {
    double kappa = 0.05;
    double a = 1.0;
    double B = std::nan("");
    std::vector<std::string> sweep;
    double eta = 1.0;
    bool post_correct = false;
    bool numeric_check = false;
    std::string out;
};

struct PhotonRow {
    UploadReport rep;
    double max_dev = std::nan("");
    double S_dev = std::nan("");
};

const Grid kCheckGrid{-3.0, 3.0, 61, -3.0, 3.0, 61};

PhotonRow photon_row(const PhotonArgs& pa, double B)
{
    PostSelectParams prm;
    prm.kappa = pa.kappa;
    prm.a = pa.a;
    prm.B = B;
    prm.eta = pa.eta;
    prm.validate();
    PhotonRow row;
    NumericOptions opt;
    opt.exec = Exec::Serial;
    if (pa.eta < 1.0) {
        row.rep = lossy_photon_upload(prm, pa.post_correct, opt).report;
        return row;
    }
    const auto up = closed_form_photon_upload(prm, pa.post_correct, Exec::Serial);
    row.rep = up.report;
    if (pa.numeric_check) {
        auto num = postselect_upload_numeric(wigner_squeezed_photon(pa.a), pa.kappa, B);
        WignerFunction w = num.w;
        if (pa.post_correct)
            w = w.stretched(prm.d() / pa.a, pa.a / prm.d());
        const auto lhs = up.w.sample(kCheckGrid, Exec::Serial);
        const auto rhs = w.sample(kCheckGrid, Exec::Serial);
        double dev = 0.0;
        for (std::size_t i = 0; i < lhs.size(); ++i)
            dev = std::max(dev, std::abs(lhs[i] - rhs[i]));
        row.max_dev = dev;
        row.S_dev = std::abs(num.S - up.report.S);
    }
    return row;
}

int cmd_upload_photon(const PhotonArgs& pa, std::ostream& out, std::ostream& err)
{
    if (pa.numeric_check && pa.eta < 1.0)
        throw ParameterError("--numeric-check compares against the lossless closed form; it needs --eta 1");
    std::vector<double> bs;
    if (!pa.sweep.empty())
        bs = parse_sweep(pa.sweep, "--B-sweep").values();
    else if (!std::isnan(pa.B))
        bs = {pa.B};
    else
        throw ParameterError("upload-photon needs --B or --B-sweep");

    std::vector<PhotonRow> rows(bs.size());
    for_each_index(bs.size(), [&](std::size_t i) { rows[i] = photon_row(pa, bs[i]); });

    Output o(pa.out, out);
    o.stream() << "kappa,a,B,eta,S,log10S,F,N";
    if (pa.numeric_check)
        o.stream() << ",max_dev,S_dev";
    o.stream() << "\n";
    bool failed = false;
    for (const auto& r : rows) {
        const auto& p = r.rep.params;
        o.stream() << fmt(p.kappa) << ',' << fmt(p.a) << ',' << fmt(p.B) << ',' << fmt(p.eta) << ',' << fmt(r.rep.S)
                   << ',' << fmt(std::log10(r.rep.S)) << ',' << fmt(r.rep.F) << ',' << fmt(r.rep.N);
        if (pa.numeric_check) {
            o.stream() << ',' << fmt(r.max_dev) << ',' << fmt(r.S_dev);
            failed = failed || !(r.max_dev <= 1e-6);
        }
        o.stream() << "\n";
    }
    if (failed) {
        err << "numeric engine deviates from the closed form by more than 1e-6\n";
        return ValidationFailure;
    }
    return Ok;
}

// --- upload-cat ----------------------------------------------------------------------

struct CatArgs {
    double x0 = 4.0;
    double kappa = 0.1;
    double a = 1.0;
    double B = 0.01;
    bool post_correct = false;
    std::vector<std::string> grid;
    std::string marginal_out;
    bool approx = false;
    std::string out;
};

int cmd_upload_cat(const CatArgs& ca, std::ostream& out)
{
    PostSelectParams prm;
    prm.kappa = ca.kappa;
    prm.a = ca.a;
    prm.B = ca.B;
    prm.x0 = ca.x0;
    prm.validate();
    if (!ca.grid.empty() && ca.marginal_out.empty())
        throw ParameterError("--marginal-grid needs --marginal-out for the CSV");

    const auto up = closed_form_cat_upload(prm, ca.post_correct);
    const auto s = cat_success_rate(prm.x0, prm.kappa, prm.a, prm.B);
    const double d = prm.d();
    json j;
    j["kappa"] = prm.kappa;
    j["a"] = prm.a;
    j["B"] = prm.B;
    j["x0"] = prm.x0;
    j["eta"] = prm.eta;
    j["S"] = up.report.S;
    j["F"] = up.report.F;
    j["N"] = up.report.N;
    j["x0_prime"] = up.report.x0_prime;
    j["post_corrected"] = ca.post_correct;
    j["imag_residual"] = s.imag_residual;
    // fringe period of the marginal along p
    j["fringe_period"] = up.report.x0_prime > 0.0
                             ? json(std::numbers::pi * (ca.post_correct ? 1.0 : prm.a / d) / (2.0 * up.report.x0_prime))
                             : json(nullptr);
    j["warnings"] = up.report.warnings;
    write_json(j, ca.out, out);

    if (!ca.grid.empty()) {
        const auto sw = parse_sweep(ca.grid, "--marginal-grid");
        const auto ps = sw.values();
        Output o(ca.marginal_out, out);
        o.stream() << "p,P";
        if (ca.approx)
            o.stream() << ",P_small_B,P_reduced_amplitude,P_limit";
        o.stream() << "\n";
        // the corrected state is the uncorrected one stretched along p by a/d
        const double scale = ca.post_correct ? prm.a / d : 1.0;
        for (double p : ps) {
            o.stream() << fmt(p) << ',' << fmt(scale * cat_marginal(prm, scale * p));
            if (ca.approx)
                o.stream() << ',' << fmt(scale * approx_marginal(prm, MarginalForm::SmallB, scale * p)) << ','
                           << fmt(scale * approx_marginal(prm, MarginalForm::ReducedAmplitude, scale * p)) << ','
                           << fmt(scale * approx_marginal(prm, MarginalForm::Limit, scale * p));
            o.stream() << "\n";
        }
    }
    return Ok;
}

// --- oracle-check ----------------------------------------------------------------------

struct OracleArgs {
    std::string which = "photon";
    double kappa = 0.05;
    double a = 1.0;
    double B = 0.01;
    double x0 = 2.0;
    long ntrunc = -1;
    std::string out;
};

double grid_deviation(const std::vector<double>& a, const std::vector<double>& b)
{
    double dev = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        dev = std::max(dev, std::abs(a[i] - b[i]));
    return dev;
}

int cmd_oracle_check(const OracleArgs& oa, std::ostream& out, std::ostream& err)
{
    PostSelectParams prm;
    prm.kappa = oa.kappa;
    prm.a = oa.a;
    prm.B = oa.B;
    prm.x0 = oa.which == "cat" ? oa.x0 : 0.0;
    prm.validate();
    std::size_t n = 40;
    if (oa.ntrunc >= 0)
        n = static_cast<std::size_t>(oa.ntrunc);
    else if (oa.which == "cat")
        n = 50 + static_cast<std::size_t>(std::ceil(8.0 * oa.x0 * oa.x0));
    if (n < 2)
        throw ParameterError("--ntrunc must be at least 2");

    std::vector<std::string> warnings;
    if (prm.kappa > 0.3)
        warnings.push_back("kappa > 0.3 is outside the validated oracle regime");

    double F_closed, S_closed, N_closed;
    WignerFunction closed = wigner_vacuum();
    Ket light, target;
    double tail = 0.0;
    json extra = json::object();

    if (oa.which == "photon") {
        const auto up = closed_form_photon_upload(prm, false);
        closed = up.w;
        F_closed = up.report.F;
        S_closed = up.report.S;
        N_closed = up.report.N;
        const auto k = squeezed_photon_ket(prm.a, n);
        light = k.ket;
        tail = k.tail;
        target = fock_ket(1, n);
    } else if (oa.which == "cat") {
        const auto up = closed_form_cat_upload(prm, false);
        // closed form lives in the cat frame; the oracle in the lab frame
        closed = up.w.quarter_turn_back();
        F_closed = up.report.F;
        S_closed = up.report.S;
        N_closed = up.report.N;
        const auto k = cat_ket(prm.x0, prm.a, n);
        light = k.ket;
        tail = k.tail;
        target = cat_ket(up.report.x0_prime, prm.a / prm.d(), n).ket;
        extra["x0_prime"] = up.report.x0_prime;
    } else if (oa.which == "vacuum") {
        const auto g = vacuum_upload_gaussian(prm.kappa, prm.B);
        closed = g.w;
        S_closed = g.S;
        N_closed = negativity(g.w);
        F_closed = fidelity(g.w, wigner_vacuum());
        light = fock_ket(0, n);
        target = fock_ket(0, n);
        const auto num = postselect_upload_numeric(wigner_vacuum(), prm.kappa, prm.B);
        extra["S_numeric"] = num.S;
        extra["max_numeric_dev"] = grid_deviation(closed.sample(kCheckGrid), num.w.sample(kCheckGrid));
    } else {
        throw ParameterError("--case must be photon, cat or vacuum");
    }

    if (tail > 1e-8) {
        std::ostringstream os;
        os << "input state loses " << tail << " of its norm to truncation at N=" << n;
        warnings.push_back(os.str());
    }
    const auto orc = upload_oracle(light, prm.kappa, prm.B, n);
    warnings.insert(warnings.end(), orc.warnings.begin(), orc.warnings.end());
    const double top = orc.rho.matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)).real();
    if (top > 1e-8) {
        std::ostringstream os;
        os << "Wigner reconstruction truncated: rho_NN = " << top;
        warnings.push_back(os.str());
    }
    const auto m = fock_metrics(orc.rho);
    const double F_oracle = fidelity_with(orc.rho, target);
    const double wig_dev = grid_deviation(closed.sample(kCheckGrid), wigner_from_fock(orc.rho, kCheckGrid));

    json j;
    j["case"] = oa.which;
    j["kappa"] = prm.kappa;
    j["a"] = prm.a;
    j["B"] = prm.B;
    j["x0"] = prm.x0;
    j["ntrunc"] = n;
    j["F_closed"] = F_closed;
    j["F_oracle"] = F_oracle;
    j["S_closed"] = S_closed;
    j["S_oracle"] = orc.S;
    j["N_closed"] = N_closed;
    j["N_oracle"] = m.N;
    j["max_wigner_dev"] = wig_dev;
    for (auto& [k, v] : extra.items())
        j[k] = v;
    j["warnings"] = warnings;
    const double tol = 1e-3;
    const bool pass = std::abs(F_closed - F_oracle) <= tol && std::abs(S_closed - orc.S) <= tol
                      && std::abs(N_closed - m.N) <= tol && wig_dev <= tol
                      && (!extra.contains("max_numeric_dev") || extra["max_numeric_dev"].get<double>() <= tol);
    j["pass"] = pass;
    write_json(j, oa.out, out);
    if (!pass) {
        err << "oracle and closed form disagree beyond " << tol << "\n";
        return ValidationFailure;
    }
    return Ok;
}

} // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"cvmem: record and upload of non-classical states to a continuous-variable memory"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    std::string config_path;
    app.add_option("--config", config_path, "flat key=value file with flag defaults");

    RecordArgs ra;
    auto* rec = app.add_subcommand("record", "deterministic noise-excess-free record (channel report)");
    rec->add_option("--kappa", ra.kappa, "QND coupling constant");
    rec->add_option("--pre-squeeze", ra.c, "pre-squeezing factor c of the light")->capture_default_str();
    rec->add_flag("--post-correct,!--no-post-correct", ra.post_correct, "apply the matched squeezing post-correction")
        ->capture_default_str();
    rec->add_option("--kappa-sweep", ra.sweep, "lin|log LO HI N: CSV sweep over kappa")->expected(4);
    rec->add_option("--gain", ra.gain, "override the feed-forward gain g");
    rec->add_option("--out", ra.out, "output file (default stdout)");

    PhotonArgs pa;
    auto* ph = app.add_subcommand("upload-photon", "post-selected upload of a squeezed single photon");
    ph->add_option("--kappa", pa.kappa, "QND coupling constant")->capture_default_str();
    ph->add_option("--a", pa.a, "pre-squeezing of the photon")->capture_default_str();
    auto* bopt = ph->add_option("--B", pa.B, "half-width of the post-selection window");
    ph->add_option("--B-sweep", pa.sweep, "lin|log LO HI N")->expected(4)->excludes(bopt);
    ph->add_option("--eta", pa.eta, "total out-coupling efficiency")->capture_default_str();
    ph->add_flag("--post-correct", pa.post_correct, "undo the residual squeezing");
    ph->add_flag("--numeric-check", pa.numeric_check, "compare with the numeric conditioning engine");
    ph->add_option("--out", pa.out, "output CSV (default stdout)");

    CatArgs ca;
    auto* cat = app.add_subcommand("upload-cat", "post-selected upload of a squeezed cat state");
    cat->add_option("--x0", ca.x0, "cat amplitude Re(alpha)")->capture_default_str();
    cat->add_option("--kappa", ca.kappa, "QND coupling constant")->capture_default_str();
    cat->add_option("--a", ca.a, "pre-squeezing")->capture_default_str();
    cat->add_option("--B", ca.B, "half-width of the post-selection window")->capture_default_str();
    cat->add_flag("--post-correct", ca.post_correct, "undo the residual squeezing");
    cat->add_option("--marginal-grid", ca.grid, "lin|log LO HI N grid in p for the marginal")->expected(4);
    cat->add_option("--marginal-out", ca.marginal_out, "CSV file for the marginal P(p)");
    cat->add_flag("--approx", ca.approx, "add the small-window approximations to the marginal CSV");
    cat->add_option("--out", ca.out, "output JSON (default stdout)");

    OracleArgs oa;
    auto* orc = app.add_subcommand("oracle-check", "compare closed forms with the truncated Fock oracle");
    orc->add_option("--case", oa.which, "photon|cat|vacuum")->capture_default_str();
    orc->add_option("--kappa", oa.kappa)->capture_default_str();
    orc->add_option("--a", oa.a)->capture_default_str();
    orc->add_option("--B", oa.B)->capture_default_str();
    orc->add_option("--x0", oa.x0)->capture_default_str();
    orc->add_option("--ntrunc", oa.ntrunc, "number-basis truncation (default 40, cats 50 + ceil(8 x0^2))");
    orc->add_option("--out", oa.out, "output JSON (default stdout)");

    try {
        auto args = merge_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return UsageError;
    } catch (const ParameterError& e) {
        err << "usage error: " << e.what() << "\n";
        return UsageError;
    }

    apply_thread_cap();
    try {
        if (rec->parsed())
            return cmd_record(ra, out);
        if (ph->parsed())
            return cmd_upload_photon(pa, out, err);
        if (cat->parsed())
            return cmd_upload_cat(ca, out);
        if (orc->parsed())
            return cmd_oracle_check(oa, out, err);
    } catch (const ParameterError& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return UsageError;
    } catch (const DomainError& e) {
        err << "outside the domain: " << e.what() << "\n";
        return UsageError;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << " (achieved error " << e.achieved_error() << ")\n";
        return NumericFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return NumericFailure;
    }
    return UsageError;
}

} // namespace cvmem::cli
