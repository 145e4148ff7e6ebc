// procdist command-line front end. Talks to the library only through procdist.h.
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "procdist.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct Failure {
    pd_status status;
    std::string message;
};

void check(pd_status s) {
    if (s != PD_OK) {
        throw Failure{s, pd_last_error()};
    }
}

struct SampleDeleter {
    void operator()(pd_sample* s) const { pd_sample_free(s); }
};
struct ModelDeleter {
    void operator()(pd_model* m) const { pd_model_free(m); }
};
struct HypothesisDeleter {
    void operator()(pd_hypothesis* h) const { pd_hypothesis_free(h); }
};
struct CalibrationDeleter {
    void operator()(pd_calibration* c) const { pd_calibration_free(c); }
};
using SamplePtr = std::unique_ptr<pd_sample, SampleDeleter>;
using ModelPtr = std::unique_ptr<pd_model, ModelDeleter>;
using HypothesisPtr = std::unique_ptr<pd_hypothesis, HypothesisDeleter>;
using CalibrationPtr = std::unique_ptr<pd_calibration, CalibrationDeleter>;

json take_json(char* raw) {
    json j = json::parse(raw);
    pd_string_free(raw);
    return j;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SI_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw Failure{PD_ERR_INVALID_ARGUMENT, std::string("SI_SEED is not an unsigned integer: ") + env};
        }
    }
    return 1;
}

struct TruncationFlags {
    std::size_t kmax = 0;
    std::size_t mmax = 0;
    std::size_t lmax = 0;
    bool exact_tail = false;

    void add(CLI::App* app, bool allow_exact_tail = true) {
        auto* k = app->add_option("--kmax", kmax, "Largest pattern length for discrete samples");
        auto* m = app->add_option("--mmax", mmax, "Largest pattern length for real samples");
        auto* l = app->add_option("--lmax", lmax, "Finest dyadic level for real samples");
        k->excludes(m)->excludes(l);
        m->needs(l);
        l->needs(m);
        if (allow_exact_tail) {
            auto* e = app->add_flag("--exact-tail", exact_tail,
                                    "Sum every refinement level exactly (real samples; optional --mmax)");
            e->excludes(k)->excludes(l);
            m->remove_needs(l);
        }
    }

    pd_truncation resolve(std::size_t longest) const {
        pd_truncation t{PD_TRUNC_AUTO, 0, 0, 0};
        if (exact_tail) {
            t.mode = PD_TRUNC_EXACT_TAIL;
            t.m_max = mmax;
            if (t.m_max == 0) {
                std::size_t c = 0;
                while ((std::size_t{1} << c) < longest) {
                    ++c;
                }
                t.m_max = c == 0 ? 1 : c;
            }
        } else if (kmax > 0) {
            t = {PD_TRUNC_FIXED, kmax, 0, 0};
        } else if (mmax > 0 || lmax > 0) {
            if (mmax == 0 || lmax == 0) {
                throw Failure{PD_ERR_INVALID_ARGUMENT, "--mmax and --lmax must be given together"};
            }
            t = {PD_TRUNC_FIXED, 0, mmax, lmax};
        }
        return t;
    }
};

pd_sample_kind parse_kind(const std::string& alphabet) {
    if (alphabet == "discrete") {
        return PD_KIND_DISCRETE;
    }
    if (alphabet == "real") {
        return PD_KIND_REAL;
    }
    return PD_KIND_AUTO;
}

SamplePtr load_one(const std::string& path, pd_sample_kind kind, std::uint32_t alphabet = 0) {
    pd_sample* s = nullptr;
    check(pd_sample_load(path.c_str(), kind, alphabet, &s));
    return SamplePtr(s);
}

// Discrete samples read separately may see different symbol ranges; lift them to one alphabet.
std::vector<SamplePtr> load_all(const std::vector<std::string>& paths, pd_sample_kind kind, std::uint32_t floor = 0) {
    std::vector<SamplePtr> out;
    std::uint32_t size = floor;
    for (const auto& p : paths) {
        out.push_back(load_one(p, kind));
        if (pd_sample_is_discrete(out.back().get())) {
            size = std::max(size, pd_sample_alphabet_size(out.back().get()));
        }
    }
    for (auto& s : out) {
        if (pd_sample_is_discrete(s.get()) && pd_sample_alphabet_size(s.get()) < size) {
            pd_sample* w = nullptr;
            check(pd_sample_widen(s.get(), size, &w));
            s.reset(w);
        }
    }
    return out;
}

std::vector<const pd_sample*> raw(const std::vector<SamplePtr>& v) {
    std::vector<const pd_sample*> out;
    for (const auto& s : v) {
        out.push_back(s.get());
    }
    return out;
}

std::size_t longest(const std::vector<SamplePtr>& v) {
    std::size_t n = 0;
    for (const auto& s : v) {
        n = std::max(n, pd_sample_length(s.get()));
    }
    return n;
}

std::vector<std::size_t> parse_curve(const std::string& spec) {
    std::vector<std::size_t> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(item, &used);
            if (used != item.size() || v == 0) {
                throw std::invalid_argument(item);
            }
            out.push_back(v);
        } catch (const std::exception&) {
            throw Failure{PD_ERR_INVALID_ARGUMENT, "--curve expects positive integers separated by commas, got \"" + item + "\""};
        }
    }
    if (out.empty()) {
        throw Failure{PD_ERR_INVALID_ARGUMENT, "--curve is empty"};
    }
    return out;
}

const char* kImpossibility =
    "refusing: deciding whether two samples come from the same stationary ergodic process has no\n"
    "consistent solution, not even for B-processes (no test can make both error kinds vanish).\n"
    "Consistent alternatives: 'classify' (three-sample problem), 'cluster' with a known number of\n"
    "clusters, or 'test' against an explicit hypothesis. See README, \"Things this tool will not do\".\n";

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"procdist: distances between stationary ergodic processes and the estimators built on them"};
    app.set_version_flag("--version", std::string(pd_version()));
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads (0 = all cores)");

    json out = {{"version", pd_version()}};
    std::string summary;

    // simulate
    auto* sim = app.add_subcommand("simulate", "Draw a sample from a process model (iid, markov, hmm, translation, diagonal)");
    std::string model_path, out_path;
    std::size_t length = 0;
    std::optional<std::uint64_t> seed_opt;
    sim->add_option("--model", model_path, "Model spec (JSON)")->required()->check(CLI::ExistingFile);
    sim->add_option("--length", length, "Sample length")->required();
    sim->add_option("--seed", seed_opt, "RNG seed (default: $SI_SEED, else 1)");
    sim->add_option("--out", out_path, "Write the sample as CSV here instead of embedding it in the JSON");

    // distance
    auto* dist = app.add_subcommand(
        "distance", "Empirical distributional distance: weighted sum over patterns (and dyadic cells for real data)\n"
                    "of absolute frequency differences between two samples");
    std::string x_path, y_path, z_path, alphabet = "auto", curve;
    TruncationFlags dist_t;
    dist->add_option("X", x_path, "First sample")->required()->check(CLI::ExistingFile);
    dist->add_option("Y", y_path, "Second sample")->required()->check(CLI::ExistingFile);
    dist->add_option("--alphabet", alphabet, "Sample type")->check(CLI::IsMember({"auto", "discrete", "real"}));
    dist_t.add(dist);
    dist->add_option("--curve", curve, "Comma-separated prefix lengths; emits the estimate on each prefix pair");

    // classify
    auto* cls = app.add_subcommand("classify", "Three-sample problem: attribute Z to whichever of X, Y is nearer in distance");
    TruncationFlags cls_t;
    cls->add_option("X", x_path, "Sample of the first process")->required()->check(CLI::ExistingFile);
    cls->add_option("Y", y_path, "Sample of the second process")->required()->check(CLI::ExistingFile);
    cls->add_option("Z", z_path, "Sample to classify")->required()->check(CLI::ExistingFile);
    cls->add_option("--alphabet", alphabet, "Sample type")->check(CLI::IsMember({"auto", "discrete", "real"}));
    cls_t.add(cls);

    // cluster
    auto* clu = app.add_subcommand(
        "cluster", "Offline clustering by generating process: farthest-point centres, then nearest-centre assignment");
    std::size_t clusters = 0;
    std::vector<std::string> files;
    TruncationFlags clu_t;
    clu->add_option("--k", clusters, "Number of clusters (must be known)")->required();
    clu->add_option("FILES", files, "Samples")->required()->check(CLI::ExistingFile);
    clu->add_option("--alphabet", alphabet, "Sample type")->check(CLI::IsMember({"auto", "discrete", "real"}));
    clu_t.add(clu);

    // changepoint
    auto* cp = app.add_subcommand("changepoint",
                                  "Offline change points: the split maximising the distance between the two parts, "
                                  "and its multi-point extensions");
    bool single = false, list = false;
    double alpha = 0.0, beta = 0.0, lambda = 0.0;
    std::size_t count = 0, distributions = 0;
    TruncationFlags cp_t;
    cp->add_option("Z", z_path, "Sample")->required()->check(CLI::ExistingFile);
    auto* o_single = cp->add_flag("--single", single, "One change point in [ceil(alpha n), floor(beta n)]");
    auto* o_alpha = cp->add_option("--alpha", alpha, "Lower end of the search range, as a fraction of n");
    auto* o_beta = cp->add_option("--beta", beta, "Upper end of the search range, as a fraction of n");
    auto* o_k = cp->add_option("--k", count, "Known number of change points");
    auto* o_list = cp->add_flag("--list", list, "Ranked list of candidates (number of change points unknown)");
    auto* o_r = cp->add_option("--r", distributions, "Known number of distinct distributions among the segments");
    auto* o_lambda = cp->add_option("--lambda", lambda, "Lower bound on the spacing of change points, as a fraction of n");
    cp->add_option("--alphabet", alphabet, "Sample type")->check(CLI::IsMember({"auto", "discrete", "real"}));
    cp_t.add(cp, false);
    o_single->needs(o_alpha)->needs(o_beta)->excludes(o_k)->excludes(o_list)->excludes(o_r);
    o_k->excludes(o_list)->excludes(o_r)->needs(o_lambda);
    o_list->excludes(o_r)->needs(o_lambda);
    o_r->needs(o_lambda);

    // test
    auto* tst = app.add_subcommand(
        "test", "Hypothesis tests: goodness of fit or --h0 alone give the alpha-level test against a Monte-Carlo\n"
                "calibrated neighbourhood of H0; --h0 with --h1 gives the test that picks the nearer hypothesis");
    std::string gof_path, h0_path, h1_path, cal_path;
    std::size_t mc_runs = 0;
    double test_alpha = 0.0;
    TruncationFlags tst_t;
    tst->add_option("X", x_path, "Sample")->required()->check(CLI::ExistingFile);
    auto* o_gof = tst->add_option("--gof", gof_path, "Model for goodness of fit (JSON)")->check(CLI::ExistingFile);
    auto* o_h0 = tst->add_option("--h0", h0_path, "Null hypothesis: model(s) as JSON")->check(CLI::ExistingFile);
    auto* o_h1 = tst->add_option("--h1", h1_path, "Alternative hypothesis: model(s) as JSON")->check(CLI::ExistingFile);
    auto* o_talpha = tst->add_option("--alpha", test_alpha, "Type-I error level");
    auto* o_cal = tst->add_option("--calibrate", mc_runs, "Monte-Carlo runs per model for the critical radius");
    tst->add_option("--seed", seed_opt, "Calibration seed (default: $SI_SEED, else 1)");
    auto* o_table = tst->add_option("--cal-table", cal_path,
                                    "Calibration table: read it, or write it when --calibrate is given");
    o_gof->excludes(o_h0)->excludes(o_h1);
    o_h1->needs(o_h0);
    (void)o_talpha;
    (void)o_cal;
    (void)o_table;
    tst_t.kmax = 0;
    tst->add_option("--kmax", tst_t.kmax, "Largest pattern length for the --h0/--h1 comparison");

    for (const char* name : {"same-different", "homogeneity"}) {
        app.add_subcommand(name, "Not provided: two-sample homogeneity is not consistently decidable")
            ->allow_extras()
            ->prefix_command();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    pd_set_max_threads(threads);
    out["threads"] = threads;
    const pd_sample_kind kind = parse_kind(alphabet);

    try {
        if (app.got_subcommand("same-different") || app.got_subcommand("homogeneity")) {
            std::cerr << kImpossibility;
            out["error"] = {{"status", "unsupported"}, {"message", "two-sample homogeneity testing is not offered"}};
            std::cout << out.dump(2) << "\n";
            return kExitUsage;
        }
        if (sim->parsed()) {
            const std::uint64_t seed = seed_opt.value_or(default_seed());
            pd_model* m = nullptr;
            check(pd_model_load(model_path.c_str(), &m));
            ModelPtr model(m);
            pd_sample* s = nullptr;
            check(pd_simulate(model.get(), length, seed, &s));
            SamplePtr sample(s);
            char* mj = nullptr;
            check(pd_model_to_json(model.get(), &mj));
            out["command"] = "simulate";
            out["model"] = take_json(mj);
            out["length"] = length;
            out["seed"] = seed;
            if (!out_path.empty()) {
                check(pd_sample_save_csv(sample.get(), out_path.c_str()));
                out["out"] = out_path;
            } else {
                std::vector<std::uint32_t> v(length);
                pd_sample_copy_symbols(sample.get(), v.data(), v.size());
                out["values"] = v;
            }
            summary = "simulated " + std::to_string(length) + " symbols (seed " + std::to_string(seed) + ")";
        } else if (dist->parsed()) {
            auto samples = load_all({x_path, y_path}, kind);
            const pd_truncation t = dist_t.resolve(longest(samples));
            out["command"] = "distance";
            out["x"] = x_path;
            out["y"] = y_path;
            if (!curve.empty()) {
                json series = json::array();
                for (std::size_t n : parse_curve(curve)) {
                    const std::size_t nx = std::min(n, pd_sample_length(samples[0].get()));
                    const std::size_t ny = std::min(n, pd_sample_length(samples[1].get()));
                    pd_sample *px = nullptr, *py = nullptr;
                    check(pd_sample_slice(samples[0].get(), 0, nx, &px));
                    SamplePtr hx(px);
                    check(pd_sample_slice(samples[1].get(), 0, ny, &py));
                    SamplePtr hy(py);
                    char* ej = nullptr;
                    check(pd_distance(hx.get(), hy.get(), t, nullptr, &ej));
                    json e = take_json(ej);
                    series.push_back({{"n", n}, {"n_x", nx}, {"n_y", ny}, {"value", e["value"]},
                                      {"truncation", e["truncation"]}});
                }
                out["curve"] = series;
                summary = "convergence series over " + std::to_string(series.size()) + " prefix lengths";
            } else {
                char* ej = nullptr;
                check(pd_distance(samples[0].get(), samples[1].get(), t, nullptr, &ej));
                const json e = take_json(ej);
                out.update(e);
                summary = "d = " + std::to_string(e["value"].get<double>());
            }
        } else if (cls->parsed()) {
            auto samples = load_all({x_path, y_path, z_path}, kind);
            const pd_truncation t = cls_t.resolve(longest(samples));
            char* rj = nullptr;
            check(pd_classify(samples[0].get(), samples[1].get(), samples[2].get(), t, nullptr, &rj));
            out["command"] = "classify";
            out.update(take_json(rj));
            summary = "Z attributed to " + std::string(out["label"] == "x" ? "X" : "Y");
        } else if (clu->parsed()) {
            auto samples = load_all(files, kind);
            const pd_truncation t = clu_t.resolve(longest(samples));
            const auto ptrs = raw(samples);
            char* rj = nullptr;
            check(pd_cluster(ptrs.data(), ptrs.size(), clusters, t, nullptr, &rj));
            out["command"] = "cluster";
            out["files"] = files;
            out.update(take_json(rj));
            summary = std::to_string(files.size()) + " samples in " + std::to_string(clusters) + " clusters";
        } else if (cp->parsed()) {
            if (!single && count == 0 && !list && distributions == 0) {
                throw Failure{PD_ERR_INVALID_ARGUMENT, "choose one of --single, --k, --list, --r"};
            }
            auto z = load_one(z_path, kind);
            const pd_truncation t = cp_t.resolve(pd_sample_length(z.get()));
            char* rj = nullptr;
            out["command"] = "changepoint";
            if (single) {
                check(pd_changepoint_single(z.get(), alpha, beta, t, &rj));
                out["method"] = "single";
                out["alpha"] = alpha;
                out["beta"] = beta;
            } else if (count > 0) {
                check(pd_changepoint_known_k(z.get(), count, lambda, t, &rj));
                out["method"] = "known_k";
                out["k"] = count;
                out["lambda"] = lambda;
            } else if (list) {
                check(pd_changepoint_list(z.get(), lambda, t, &rj));
                out["method"] = "list";
                out["lambda"] = lambda;
            } else {
                check(pd_changepoint_known_r(z.get(), distributions, lambda, t, &rj));
                out["method"] = "known_r";
                out["r"] = distributions;
                out["lambda"] = lambda;
            }
            out.update(take_json(rj));
            if (out.contains("thetas")) {
                summary = std::to_string(out["thetas"].size()) + " change point(s)";
            } else {
                summary = std::to_string(out["candidates"].size()) + " ranked candidate(s)";
            }
        } else if (tst->parsed()) {
            if (gof_path.empty() && h0_path.empty()) {
                throw Failure{PD_ERR_INVALID_ARGUMENT, "give --gof MODEL or --h0 MODELS"};
            }
            HypothesisPtr h0, h1;
            pd_hypothesis* h = nullptr;
            if (!gof_path.empty()) {
                pd_model* m = nullptr;
                check(pd_model_load(gof_path.c_str(), &m));
                ModelPtr model(m);
                check(pd_hypothesis_from_model(model.get(), &h));
                h0.reset(h);
            } else {
                check(pd_hypothesis_load(h0_path.c_str(), &h));
                h0.reset(h);
            }
            if (!h1_path.empty()) {
                check(pd_hypothesis_load(h1_path.c_str(), &h));
                h1.reset(h);
            }
            auto xs = load_all({x_path}, PD_KIND_DISCRETE, pd_hypothesis_alphabet_size(h0.get()));
            const pd_sample* x = xs[0].get();
            out["command"] = "test";
            out["x"] = x_path;
            char* rj = nullptr;
            if (h1) {
                const pd_truncation t = tst_t.resolve(pd_sample_length(x));
                check(pd_test_uniform(x, h0.get(), h1.get(), t, nullptr, &rj));
                out["test"] = "uniform";
                if (tst->count("--alpha") > 0) {
                    out["alpha"] = test_alpha;
                }
            } else {
                if (tst->count("--alpha") == 0) {
                    throw Failure{PD_ERR_INVALID_ARGUMENT, "the alpha-level test needs --alpha"};
                }
                CalibrationPtr cal;
                pd_calibration* c = nullptr;
                if (mc_runs > 0 || cal_path.empty()) {
                    const std::uint64_t seed = seed_opt.value_or(default_seed());
                    const std::size_t runs = mc_runs > 0 ? mc_runs : 2000;
                    check(pd_calibrate(h0.get(), pd_sample_length(x), 1.0 - test_alpha, runs, seed, &c));
                    cal.reset(c);
                    if (!cal_path.empty()) {
                        check(pd_calibration_save(cal.get(), cal_path.c_str()));
                    }
                } else {
                    check(pd_calibration_load(cal_path.c_str(), &c));
                    cal.reset(c);
                }
                check(pd_test_asymmetric(x, h0.get(), test_alpha, cal.get(), nullptr, &rj));
                out["test"] = gof_path.empty() ? "asymmetric" : "goodness_of_fit";
                out["alpha"] = test_alpha;
                char* cj = nullptr;
                check(pd_calibration_to_json(cal.get(), &cj));
                json calj = take_json(cj);
                out["calibration"] = {{"hypothesis_hash", calj["hypothesis_hash"]}, {"n", calj["n"]},
                                      {"theta", calj["theta"]}, {"gamma", calj["gamma"]},
                                      {"mc_runs", calj["mc_runs"]}, {"seed", calj["seed"]}};
                if (!cal_path.empty()) {
                    out["calibration"]["file"] = cal_path;
                }
            }
            out.update(take_json(rj));
            summary = out["decision"] == 0 ? "H0 accepted" : "H0 rejected";
        }
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << "\n";
        out["error"] = {{"status", pd_status_name(f.status)}, {"message", f.message}};
        std::cout << out.dump(2) << "\n";
        return f.status == PD_ERR_INFEASIBLE ? kExitInfeasible : kExitUsage;
    }

    std::cout << out.dump(2) << "\n";
    if (!summary.empty()) {
        std::cerr << summary << "\n";
    }
    return kExitOk;
}
