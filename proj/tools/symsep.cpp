// symsep command-line front end: analyze, embed, decompose, conjecture.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <symsep/symsep.hpp>

namespace fs = std::filesystem;
using namespace symsep;

namespace {

enum Exit { ok = 0, inconclusive = 1, usage = 2, applicability = 3, unsupported = 4, resource = 5 };

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

struct Common {
    std::optional<double> tolerance;
    std::optional<std::uint64_t> seed;
};

// flags > SYMSEP_CONFIG > defaults
Config load_config(const Common& flags) {
    Config config;
    if (const char* path = std::getenv("SYMSEP_CONFIG"); path && *path) {
        config = parse_config(read_file(path));
    }
    if (flags.tolerance) {
        if (!(*flags.tolerance > 0.0)) throw DomainError("--tolerance must be positive");
        config.tol.psd_relative = *flags.tolerance;
    }
    if (flags.seed) {
        config.cp.seed = *flags.seed;
        config.decomposition.seed = *flags.seed;
    }
    return config;
}

std::string sibling_path(const std::string& input, const std::string& suffix) {
    fs::path p(input);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream ss;
    ss << std::setprecision(precision) << v;
    return ss.str();
}

void emit(const Json& report, bool as_json, const std::string& out) {
    if (!out.empty()) write_file(out, report.dump(2) + "\n");
    if (as_json) std::cout << report.dump(2) << "\n";
}

std::string cp_tag(const ConeVerdict& v) {
    std::string s = to_string(v.cp);
    if (v.certificate != CertificateKind::none) s += " (" + std::string(to_string(v.certificate)) + ")";
    return s;
}

void print_blocks(const BlockMatrix& bm, const BlockVerdict* verdict) {
    std::cout << "reduced partial transpose, " << bm.transposed << " of " << bm.n_parties
              << " parties transposed, total side " << bm.total_side() << "\n";
    for (std::size_t i = 0; i < bm.blocks.size(); ++i) {
        const auto& b = bm.blocks[i];
        std::cout << "  block " << b.name << ": " << b.side() << "x" << b.side();
        if (b.copies > 1) std::cout << " (x" << b.copies << ")";
        if (verdict) std::cout << "  " << cp_tag(verdict->blocks[i]);
        std::cout << "\n";
    }
    if (!bm.singletons.empty()) {
        std::size_t count = 0;
        for (const auto& s : bm.singletons) count += static_cast<std::size_t>(s.copies);
        std::cout << "  singletons: " << count << "\n";
    }
    if (bm.zero_eigenvalues) std::cout << "  zero eigenvalues: " << bm.zero_eigenvalues << "\n";
}

// ---------------------------------------------------------------------------

struct AnalyzeArgs {
    std::string file;
    std::optional<int> cut;
    bool json = false;
    std::string out;
    std::string decomposition_out;
};

int cmd_analyze(const AnalyzeArgs& args, const Common& common) {
    Stopwatch clock;
    Json timings = Json::object();
    const std::string text = read_file(args.file);
    const DsState state = parse_state(text);
    const Config config = load_config(common);
    timings["parse"] = clock.lap();

    const int n = state.n_parties();
    const int cut = args.cut.value_or(n / 2);
    if (n < 2) throw DomainError("analyze needs at least two parties");
    if (cut < 1 || cut >= n) throw DomainError("--cut must lie in 1.." + std::to_string(n - 1));

    const auto partitions = ppt_all_partitions(state, config);
    timings["ppt_all_partitions"] = clock.lap();

    const auto result = classify(state, config);
    timings["classify"] = clock.lap();

    // blocks of the requested cut, reusing the classifier's check when it ran
    const bool reuse = cut == n / 2 && !result.block_checks.empty();
    const BlockMatrix bm = reuse ? result.block_checks.front().blocks : reduced_partial_transpose(state, cut, config.limits);
    const BlockVerdict bv = reuse ? result.block_checks.front().verdict : check_block(bm, ConeKind::cp, config.cp, config.tol);
    timings["check_block"] = clock.lap();

    Json cuts = Json::array();
    for (const auto& c : result.cuts.empty() ? ppt_cuts_reduced(state, config) : result.cuts) cuts.push_back(to_json(c));
    Json parts = Json::array();
    for (const auto& [bp, ppt] : partitions) parts.push_back(Json{{"left_parties", bp.left_parties()}, {"ppt", ppt}});

    Json certificates = Json::object();
    Json marginals = Json::array();
    for (const auto& bc : result.block_checks) {
        marginals.push_back(Json{{"parties", bc.parties}, {"transposed", bc.transposed},
                                 {"blocks", to_json(bc.blocks)}, {"verdict", to_json(bc.verdict)}});
    }
    certificates["block_checks"] = marginals;
    if (result.moment_witness) certificates["moment_witness"] = to_json(*result.moment_witness);

    std::string decomposition_path;
    if (result.decomposition) {
        certificates["decomposition_status"] = to_string(result.decomposition->status);
        certificates["decomposition_residual"] = result.decomposition->residual;
        if (result.decomposition->decomposition) {
            decomposition_path = args.decomposition_out.empty() ? sibling_path(args.file, ".decomposition.json")
                                                                 : args.decomposition_out;
            write_file(decomposition_path, to_json(*result.decomposition->decomposition, config.tol).dump(2) + "\n");
            certificates["decomposition_file"] = decomposition_path;
            certificates["reconstruction_error"] = result.decomposition->decomposition->reconstruction_error();
        }
    }
    timings["write"] = clock.lap();

    Json report{{"input", args.file},
                {"input_digest", fnv1a_hex(text)},
                {"state", to_json(state)},
                {"config", to_json(config)},
                {"verdicts",
                 {{"cuts", cuts},
                  {"partitions", parts},
                  {"cut", cut},
                  {"blocks", to_json(bm)},
                  {"cone", to_json(bv)},
                  {"classification", to_string(result.verdict)},
                  {"reason", result.reason}}},
                {"certificates", certificates},
                {"timings", timings}};
    emit(report, args.json, args.out);
    if (args.json) return ok;

    std::cout << "state: N=" << n << " d=" << state.local_dim() << ", " << state.partitions().size()
              << " partitions, digest " << fnv1a_hex(text) << "\n";
    for (const auto& c : result.cuts.empty() ? ppt_cuts_reduced(state, config) : result.cuts) {
        std::cout << "cut " << c.cut.label() << ": " << (c.ppt ? "PPT" : "NPT") << ", min eigenvalue "
                  << fmt(c.min_eigenvalue) << "\n";
    }
    print_blocks(bm, &bv);
    std::cout << "classification: " << to_string(result.verdict) << "\n";
    if (!result.reason.empty()) std::cout << "reason: " << result.reason << "\n";
    if (!decomposition_path.empty()) {
        std::cout << "decomposition: " << decomposition_path << " (error "
                  << fmt(result.decomposition->decomposition->reconstruction_error(), 3) << ")\n";
    }
    return ok;
}

// ---------------------------------------------------------------------------

struct EmbedArgs {
    std::string file;
    bool inverse = false;
    bool json = false;
    std::string out;
    std::string state_out;
};

Json spectrum_json(const Vector& ev, double tol) {
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    Json nonzero = Json::array();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i)) > tol * scale) nonzero.push_back(ev(i));
    }
    return Json{{"side", ev.size()}, {"min_eigenvalue", ev.size() ? ev(0) : 0.0},
                {"psd", spectrum_is_psd(ev, tol)}, {"nonzero", nonzero}};
}

int cmd_embed_forward(const EmbedArgs& args, const Config& config) {
    const std::string text = read_file(args.file);
    const DsState state = parse_state(text);
    if (state.n_parties() % 2) {
        throw ApplicabilityError("the direct embedding needs an even number of parties; N = " +
                                 std::to_string(state.n_parties()) + " cannot be split into two equal halves");
    }
    const auto target = embed(state, config.limits);
    const Vector source_ev = reduced_partial_transpose(state, state.n_parties() / 2, config.limits).spectrum();
    const Vector target_ev = symmetric_eigenvalues(pt_bipartite_symmetric(target, config.limits).matrix());
    const auto table = embedding_rank_table(state, config);
    const std::string state_out = args.state_out.empty() ? sibling_path(args.file, ".embedded.json") : args.state_out;
    write_file(state_out, to_json(target).dump(2) + "\n");

    const double tol = config.tol.psd_relative;
    Json report{{"input", args.file},
                {"input_digest", fnv1a_hex(text)},
                {"config", to_json(config)},
                {"embedded_state", to_json(target)},
                {"embedded_file", state_out},
                {"source_pt", spectrum_json(source_ev, tol)},
                {"target_pt", spectrum_json(target_ev, tol)},
                {"rank_table", to_json(table)}};
    emit(report, args.json, args.out);
    if (args.json) return ok;

    std::cout << "embedded state: " << state_out << " (local dimension " << target.local_dim() << ")\n";
    std::cout << std::left << std::setw(10) << "" << std::setw(8) << "dim" << std::setw(12) << "sym dim"
              << std::setw(8) << "rank" << std::setw(10) << "PT side" << std::setw(10) << "PT rank"
              << "PPT\n";
    std::cout << std::setw(10) << "source" << std::setw(8) << table.source_dim << std::setw(12)
              << table.source_symmetric_dim << std::setw(8) << table.source_rank << std::setw(10) << source_ev.size()
              << std::setw(10) << table.source_pt_rank << (spectrum_is_psd(source_ev, tol) ? "yes" : "no") << "\n";
    std::cout << std::setw(10) << "target" << std::setw(8) << table.target_dim << std::setw(12)
              << table.target_symmetric_dim << std::setw(8) << table.target_rank << std::setw(10) << target_ev.size()
              << std::setw(10) << table.target_pt_rank << (spectrum_is_psd(target_ev, tol) ? "yes" : "no") << "\n";
    return ok;
}

int cmd_embed_inverse(const EmbedArgs& args, const Config& config) {
    const std::string text = read_file(args.file);
    const auto slice = parse_bipartite_state(text, config.tol);
    const auto cert = corollary1_certify(slice, config);
    const std::string state_out = args.state_out.empty() ? sibling_path(args.file, ".fourqubit.json") : args.state_out;
    write_file(state_out, to_json(cert.qubit_state).dump(2) + "\n");

    Json report{{"input", args.file},
                {"input_digest", fnv1a_hex(text)},
                {"config", to_json(config)},
                {"middle_level", slice_middle_level(slice)},
                {"fourqubit_state", to_json(cert.qubit_state)},
                {"fourqubit_file", state_out},
                {"qubit_ppt", cert.qubit_ppt},
                {"qubit_min_eigenvalue", cert.qubit_min_eigenvalue},
                {"direct_ppt", cert.direct_ppt},
                {"direct_min_eigenvalue", cert.direct_min_eigenvalue},
                {"consistent", cert.consistent},
                {"verdict", to_string(cert.verdict)}};
    emit(report, args.json, args.out);
    if (args.json) return ok;
    std::cout << "four-qubit DS state: " << state_out << "\n";
    std::cout << "qubit route: " << (cert.qubit_ppt ? "PPT" : "NPT") << ", min eigenvalue "
              << fmt(cert.qubit_min_eigenvalue) << "\n";
    std::cout << "direct route: " << (cert.direct_ppt ? "PPT" : "NPT") << ", min eigenvalue "
              << fmt(cert.direct_min_eigenvalue) << "\n";
    std::cout << "verdict: " << to_string(cert.verdict) << (cert.consistent ? "" : " (routes disagree)") << "\n";
    return ok;
}

// ---------------------------------------------------------------------------

struct DecomposeArgs {
    std::string file;
    std::string out;
};

int cmd_decompose(const DecomposeArgs& args, const Common& common) {
    const std::string text = read_file(args.file);
    const DsState state = parse_state(text);
    const Config config = load_config(common);
    const int n = state.n_parties();
    if (n != 3 && n != 4) {
        throw UnsupportedError("explicit decompositions are built for N = 3 and N = 4 only, got N = " + std::to_string(n));
    }
    const auto result = n == 3 ? decompose_tripartite(state, config) : decompose_fourpartite(state, config);
    switch (result.status) {
        case DecompositionStatus::success: {
            const auto& dec = *result.decomposition;
            const std::string out = args.out.empty() ? sibling_path(args.file, ".decomposition.json") : args.out;
            write_file(out, to_json(dec, config.tol).dump(2) + "\n");
            std::cout << "SUCCESS: " << dec.terms().size() << " product terms, reconstruction error "
                      << fmt(dec.reconstruction_error(), 3) << "\n";
            std::cout << "decomposition: " << out << "\n";
            return ok;
        }
        case DecompositionStatus::not_separable:
            throw ApplicabilityError("NOT_SEPARABLE: " + result.note);
        default:
            std::cout << "UNDECIDED: " << result.note << " (moment residual " << fmt(result.residual, 3) << ")\n";
            return inconclusive;
    }
}

// ---------------------------------------------------------------------------

struct ConjectureArgs {
    int n = 0;
    int d = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::string out = "conjecture_out";
    std::string ensemble = "dirichlet";
};

int cmd_conjecture(const ConjectureArgs& args, const Common& common) {
    Config config = load_config(common);
    if (args.samples == 0) throw DomainError("--samples must be at least 1");
    const Ensemble ensemble = args.ensemble == "radial" ? Ensemble::radial : Ensemble::dirichlet;
    Stopwatch clock;
    const auto report = test_conjecture1(args.n, args.d, args.samples, args.seed, ensemble, config);
    const double elapsed = clock.lap();

    fs::create_directories(args.out);
    const auto partitions = enumerate_partitions(args.n, args.d);
    std::string lines;
    Json counterexample_files = Json::array();
    for (const auto& rec : report.records) {
        Json probs = Json::object();
        for (std::size_t i = 0; i < partitions.size(); ++i) probs[partitions[i].key()] = rec.probs[i];
        Json cuts = Json::array();
        for (const auto& c : rec.cuts) {
            cuts.push_back(Json{{"cut", c.cut.label()}, {"ppt", c.ppt}, {"min_eigenvalue", c.min_eigenvalue}});
        }
        lines += Json{{"index", rec.index}, {"probs", probs}, {"cuts", cuts},
                      {"largest_cut_ppt", rec.largest_cut_ppt}, {"counterexample", rec.counterexample}}
                     .dump() +
                 "\n";
        if (rec.counterexample) {
            const std::string path = (fs::path(args.out) / ("counterexample_" + std::to_string(rec.index) + ".json")).string();
            write_file(path, Json{{"n_parties", args.n}, {"local_dim", args.d}, {"probs", probs}}.dump(2) + "\n");
            counterexample_files.push_back(path);
        }
    }
    write_file((fs::path(args.out) / "samples.jsonl").string(), lines);

    Json summary{{"n_parties", report.n_parties},
                 {"local_dim", report.local_dim},
                 {"samples", report.samples},
                 {"seed", report.seed},
                 {"ensemble", ensemble_name(report.ensemble)},
                 {"largest_cut_ppt", report.largest_cut_ppt},
                 {"fully_ppt", report.fully_ppt},
                 {"counterexamples", report.counterexamples},
                 {"counterexample_files", counterexample_files},
                 {"samples_digest", fnv1a_hex(lines)},
                 {"config", to_json(config)}};
    summary["report_digest"] = fnv1a_hex(summary.dump());
    summary["timings"] = Json{{"campaign", elapsed}};
    write_file((fs::path(args.out) / "summary.json").string(), summary.dump(2) + "\n");

    std::cout << "N=" << args.n << " d=" << args.d << " samples=" << report.samples << " seed=" << report.seed
              << " ensemble=" << ensemble_name(report.ensemble) << "\n";
    std::cout << "largest cut PPT: " << report.largest_cut_ppt << ", fully PPT: " << report.fully_ppt
              << ", counterexamples: " << report.counterexamples << "\n";
    std::cout << "report digest " << summary["report_digest"].get<std::string>() << ", written to " << args.out << "\n";
    return ok;
}

int run_guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return usage;
    } catch (const DomainError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const ApplicabilityError& e) {
        std::cerr << "not applicable: " << e.what() << "\n";
        return applicability;
    } catch (const UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return unsupported;
    } catch (const ResourceError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return resource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return inconclusive;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separability analysis of diagonal symmetric multi-qudit states"};
    app.require_subcommand(1);
    Common common;

    AnalyzeArgs analyze;
    auto* a = app.add_subcommand("analyze", "PPT cuts, reduced blocks, cone checks and classification");
    a->add_option("file", analyze.file, "state file")->required();
    a->add_option("--cut", analyze.cut, "number of transposed parties whose blocks are shown (default N/2)");
    a->add_option("--tolerance", common.tolerance, "relative PSD tolerance");
    a->add_option("--seed", common.seed, "seed for factorization and decomposition");
    a->add_flag("--json", analyze.json, "print the JSON report");
    a->add_option("--out", analyze.out, "write the JSON report here");
    a->add_option("--decomposition-out", analyze.decomposition_out, "where to write a found decomposition");

    EmbedArgs emb;
    auto* e = app.add_subcommand("embed", "bipartite symmetric embedding, or the qutrit slice map with --inverse");
    e->add_option("file", emb.file, "DS state file, or slice state file with --inverse")->required();
    e->add_flag("--inverse", emb.inverse, "map a two-qutrit slice state to four qubits");
    e->add_option("--tolerance", common.tolerance, "relative PSD tolerance");
    e->add_flag("--json", emb.json, "print the JSON report");
    e->add_option("--out", emb.out, "write the JSON report here");
    e->add_option("--state-out", emb.state_out, "where to write the mapped state");

    DecomposeArgs dec;
    auto* d = app.add_subcommand("decompose", "explicit separable decomposition for N = 3 or 4");
    d->add_option("file", dec.file, "state file")->required();
    d->add_option("--out", dec.out, "decomposition file");
    d->add_option("--tolerance", common.tolerance, "relative PSD tolerance");
    d->add_option("--seed", common.seed, "seed for factorization and decomposition");

    ConjectureArgs conj;
    auto* c = app.add_subcommand("conjecture", "sample states and test whether a PPT largest cut implies PPT");
    c->add_option("--n", conj.n, "number of parties")->required()->check(CLI::Range(2, 64));
    c->add_option("--d", conj.d, "local dimension")->required()->check(CLI::Range(2, 64));
    c->add_option("--samples", conj.samples, "number of samples")->required();
    c->add_option("--seed", conj.seed, "campaign seed");
    c->add_option("--out", conj.out, "output directory");
    c->add_option("--ensemble", conj.ensemble, "dirichlet or radial")
        ->check(CLI::IsMember({"dirichlet", "radial"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? ok : usage;
    }

    if (a->parsed()) return run_guarded([&] { return cmd_analyze(analyze, common); });
    if (e->parsed()) {
        return run_guarded([&] {
            const Config config = load_config(common);
            return emb.inverse ? cmd_embed_inverse(emb, config) : cmd_embed_forward(emb, config);
        });
    }
    if (d->parsed()) return run_guarded([&] { return cmd_decompose(dec, common); });
    return run_guarded([&] { return cmd_conjecture(conj, common); });
}
