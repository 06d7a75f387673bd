// polargen: construct symplectic/Hermitian polar Grassmannians over small
// fields, build the inductive generating sets, and certify generating ranks
// against the Grassmann embedding dimension.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "polar/io.hpp"

using namespace polar;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct SpaceArgs {
    std::string form = "sp";
    int q = 3;
    int n = 2;
    int k = 1;

    void attach(CLI::App* cmd, bool with_k = true) {
        cmd->add_option("--form", form, "form kind: sp or her")
            ->check(CLI::IsMember({"sp", "her"}))
            ->required();
        cmd->add_option("--q", q, "base prime power (her uses GF(q^2))")->required();
        cmd->add_option("--n", n, "Witt index")->required();
        if (with_k) cmd->add_option("--k", k, "Grassmannian index")->required();
    }

    FormKind kind() const { return form_from_name(form); }

    const Field& field() const {
        int p = 0;
        for (int d = 2; d <= q; ++d)
            if (q % d == 0) { p = d; break; }
        if (p == 0 || !is_prime(p)) throw CLI::ValidationError("--q", "q must be a prime power");
        int m = 0;
        int rest = q;
        while (rest > 1) {
            if (rest % p != 0) throw CLI::ValidationError("--q", "q must be a prime power");
            rest /= p;
            ++m;
        }
        return Field::get(p, kind() == FormKind::Hermitian ? 2 * m : m);
    }

    FormSpace space() const { return FormSpace(field(), n, kind()); }

    std::string label() const {
        return (kind() == FormKind::Symplectic
                    ? "Sp_" + std::to_string(2 * n) + "(" + std::to_string(q) + ")"
                    : "SU_" + std::to_string(2 * n) + "(GF(" + std::to_string(q * q) + "))") +
               " k=" + std::to_string(k);
    }
};

int default_threads() {
    if (const char* env = std::getenv("POLARGEN_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) return t;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? (int)hw : 1;
}

std::vector<std::uint32_t> parse_ids(const std::string& csv) {
    std::vector<std::uint32_t> out;
    std::size_t at = 0;
    while (at < csv.size()) {
        std::size_t next = csv.find(',', at);
        if (next == std::string::npos) next = csv.size();
        out.push_back((std::uint32_t)std::stoul(csv.substr(at, next - at)));
        at = next + 1;
    }
    return out;
}

json line_descriptor(const Geometry& G, std::uint32_t l) {
    json j;
    j["index"] = l;
    if (!G.line_D.empty() && G.line_D[l] != UINT32_MAX)
        j["D"] = subspace_to_json(G.Ds->subspace(G.line_D[l]));
    if (!G.line_U.empty() && G.line_U[l] != UINT32_MAX)
        j["U"] = subspace_to_json(G.Us->subspace(G.line_U[l]));
    auto pts = G.line(l);
    j["points"] = std::vector<std::uint32_t>(pts.begin(), pts.end());
    return j;
}

int run_reproduce(const SpaceArgs& args, std::uint64_t seed, int restarts, int threads,
                  const std::string& out) {
    FormSpace V = args.space();
    auto t0 = Clock::now();
    PolarComplex C(V);
    Geometry G = build_geometry(C, args.k);
    double t_enum = ms_since(t0);

    auto t1 = Clock::now();
    GreedyOptions opts{seed, restarts};
    GenSetBuild S = build_genset(V, args.k, opts);
    double t_genset = ms_since(t1);

    auto t2 = Clock::now();
    EmbeddedGeometry E = embed(G, threads);
    double t_embed = ms_since(t2);

    auto t3 = Clock::now();
    RankCertificate cert = certify(G, E, resolve_ids(G, S));
    double t_cert = ms_since(t3);

    std::printf("%-22s  points %8u  lines %8u  |S| %4u  d_k %4llu  emb %4llu  %-32s  %.0f ms\n",
                args.label().c_str(), G.num_points(), G.num_lines(), cert.set_size,
                (unsigned long long)cert.d_k, (unsigned long long)cert.lower_bound,
                verdict_name(cert.verdict), t_enum + t_genset + t_embed + t_cert);
    if (cert.exploratory) {
        std::printf("  exploratory field: no certification");
        if (cert.li)
            std::printf("; dual polar lower bound (4^n+2)/3 = %llu", (unsigned long long)*cert.li);
        std::printf("\n");
    }

    if (!out.empty()) {
        json j = space_meta(V, args.k);
        j["kind"] = "report";
        j["points"] = G.num_points();
        j["lines"] = G.num_lines();
        j["certificate"] = certificate_to_json(cert);
        j["genset"] = genset_to_json(V, args.k, S, seed);
        j["seed"] = seed;
        j["threads"] = threads;
        j["timings_ms"] = json{{"enumerate", t_enum},
                               {"genset", t_genset},
                               {"embed", t_embed},
                               {"certify", t_cert}};
        write_json_file(out, j);
    }
    return cert.verdict == Verdict::CertifiedMinimal ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact polar Grassmannian toolkit"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    int restarts = 32;
    int threads = default_threads();
    app.add_option("--seed", seed, "seed for greedy restarts")->capture_default_str();
    app.add_option("--restarts", restarts, "greedy restart budget")->capture_default_str();
    app.add_option("--threads", threads, "worker threads (default POLARGEN_THREADS)")
        ->capture_default_str();

    SpaceArgs enum_args;
    std::string enum_out;
    CLI::App* cmd_enum = app.add_subcommand("enumerate", "enumerate a polar k-Grassmannian");
    enum_args.attach(cmd_enum);
    cmd_enum->add_option("--out", enum_out, "output geometry JSON")->required();

    SpaceArgs clo_args;
    std::string clo_points, clo_out;
    CLI::App* cmd_clo = app.add_subcommand("closure", "geometric span of a point set");
    clo_args.attach(cmd_clo);
    cmd_clo->add_option("--points", clo_points, "comma-separated point indices")->required();
    cmd_clo->add_option("--out", clo_out, "optional JSON output");

    SpaceArgs cls_args;
    std::uint32_t cls_x = 0, cls_y = 0;
    CLI::App* cmd_cls = app.add_subcommand("classify", "two-point relation in Gamma_2");
    cls_args.attach(cmd_cls);
    cmd_cls->add_option("--x", cls_x)->required();
    cmd_cls->add_option("--y", cls_y)->required();

    SpaceArgs par_args;
    std::uint32_t par_x = 0, par_y = 0;
    CLI::App* cmd_par = app.add_subcommand("parallel", "parallel line pair through two points");
    par_args.attach(cmd_par);
    cmd_par->add_option("--x", par_x)->required();
    cmd_par->add_option("--y", par_y)->required();

    CLI::App* cmd_gs = app.add_subcommand("genset", "generating set construction/certification");
    cmd_gs->require_subcommand(1);
    SpaceArgs gsb_args;
    std::string gsb_out;
    CLI::App* cmd_gsb = cmd_gs->add_subcommand("build", "build the inductive generating set");
    gsb_args.attach(cmd_gsb);
    cmd_gsb->add_option("--out", gsb_out, "output genset JSON")->required();
    std::string gsc_geometry, gsc_set, gsc_report;
    CLI::App* cmd_gsc = cmd_gs->add_subcommand("certify", "certify a generating set");
    cmd_gsc->add_option("--geometry", gsc_geometry, "geometry JSON")->required();
    cmd_gsc->add_option("--set", gsc_set, "genset JSON")->required();
    cmd_gsc->add_option("--report", gsc_report, "report JSON")->required();

    std::string emb_geometry, emb_out;
    CLI::App* cmd_emb = app.add_subcommand("embed", "Grassmann embedding of a geometry");
    cmd_emb->add_option("--geometry", emb_geometry, "geometry JSON")->required();
    cmd_emb->add_option("--out", emb_out, "output embedding JSON")->required();

    SpaceArgs irr_args;
    int irr_seeds = 20;
    CLI::App* cmd_irr = app.add_subcommand("irrep-check", "unitary submodule closure check");
    irr_args.attach(cmd_irr);
    cmd_irr->add_option("--seeds", irr_seeds, "number of random seeds")->capture_default_str();

    SpaceArgs rep_args;
    std::string rep_out;
    CLI::App* cmd_rep = app.add_subcommand("reproduce", "enumerate + genset + certify + embed");
    rep_args.attach(cmd_rep);
    cmd_rep->add_option("--out", rep_out, "report JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_enum->parsed()) {
            FormSpace V = enum_args.space();
            PolarComplex C(V);
            Geometry G = build_geometry(C, enum_args.k);
            write_json_file(enum_out, geometry_to_json(G));
            std::printf("%s: %u points, %u lines of %u -> %s\n", enum_args.label().c_str(),
                        G.num_points(), G.num_lines(), G.line_size, enum_out.c_str());
        } else if (cmd_clo->parsed()) {
            FormSpace V = clo_args.space();
            PolarComplex C(V);
            Geometry G = build_geometry(C, clo_args.k);
            ClosureReport rep = closure(G, parse_ids(clo_points));
            std::printf("closure: %u of %u points (%d rounds, %llu lines absorbed)\n", rep.count,
                        G.num_points(), rep.rounds, (unsigned long long)rep.lines_triggered);
            if (!clo_out.empty()) {
                json j = space_meta(V, clo_args.k);
                j["kind"] = "closure";
                j["seed_points"] = rep.seed;
                j["count"] = rep.count;
                j["rounds"] = rep.rounds;
                j["lines_triggered"] = rep.lines_triggered;
                std::vector<std::uint32_t> members;
                for (std::uint32_t i = 0; i < G.num_points(); ++i)
                    if (rep.in[i]) members.push_back(i);
                j["members"] = members;
                write_json_file(clo_out, j);
            }
        } else if (cmd_cls->parsed()) {
            FormSpace V = cls_args.space();
            PolarComplex C(V);
            Geometry G = build_geometry(C, cls_args.k);
            std::printf("%s\n", rel_name(classify(G, cls_x, cls_y)));
        } else if (cmd_par->parsed()) {
            FormSpace V = par_args.space();
            PolarComplex C(V);
            Geometry G = build_geometry(C, par_args.k);
            ParallelLines par = parallel_lines(G, par_x, par_y);
            json j;
            j["l"] = line_descriptor(G, par.l);
            j["m"] = line_descriptor(G, par.m);
            j["p_mate"] = par.p_mate;
            j["q_mate"] = par.q_mate;
            j["relation"] = rel_name(par.main);
            j["cross_relation"] = rel_name(par.cross);
            std::printf("%s\n", j.dump(1, '\t').c_str());
        } else if (cmd_gsb->parsed()) {
            FormSpace V = gsb_args.space();
            GenSetBuild S = build_genset(V, gsb_args.k, GreedyOptions{seed, restarts});
            write_json_file(gsb_out, genset_to_json(V, gsb_args.k, S, seed));
            std::printf("%s: %zu generating points -> %s\n", gsb_args.label().c_str(),
                        S.points.size(), gsb_out.c_str());
        } else if (cmd_gsc->parsed()) {
            LoadedGeometry L = geometry_from_json(read_json_file(gsc_geometry));
            GenSetBuild S = genset_from_json(*L.space, read_json_file(gsc_set));
            EmbeddedGeometry E = embed(L.geometry, threads);
            RankCertificate cert = certify(L.geometry, E, resolve_ids(L.geometry, S));
            json j = space_meta(*L.space, L.geometry.k);
            j["kind"] = "report";
            j["certificate"] = certificate_to_json(cert);
            j["seed"] = seed;
            write_json_file(gsc_report, j);
            std::printf("verdict: %s (|S| = %u, lower bound = %llu)\n", verdict_name(cert.verdict),
                        cert.set_size, (unsigned long long)cert.lower_bound);
            return cert.verdict == Verdict::CertifiedMinimal ? 0 : 2;
        } else if (cmd_emb->parsed()) {
            LoadedGeometry L = geometry_from_json(read_json_file(emb_geometry));
            EmbeddedGeometry E = embed(L.geometry, threads);
            write_json_file(emb_out, embedding_to_json(E));
            std::printf("embedding: width %d, span %d", E.width, E.span_dim);
            if (E.baer_dim) std::printf(", fixed-field span %d", *E.baer_dim);
            std::printf(" -> %s\n", emb_out.c_str());
        } else if (cmd_irr->parsed()) {
            FormSpace V = irr_args.space();
            if (!V.hermitian()) throw std::invalid_argument("irrep-check needs --form her");
            int width = (int)binom(V.dim(), irr_args.k);
            std::mt19937_64 rng(seed);
            bool ok = true;
            for (int s = 0; s < irr_seeds; ++s) {
                std::vector<fe> v(width, 0);
                bool nz = false;
                while (!nz)
                    for (fe& x : v) nz |= (x = (fe)(rng() % V.field().q())) != 0;
                int dim = su_submodule_closure(V, irr_args.k, v);
                if (dim != width) {
                    ok = false;
                    std::printf("seed %d: closure dimension %d < %d\n", s, dim, width);
                }
            }
            std::printf("%s: %d seeds, submodule closure %s C(%d,%d) = %d\n",
                        irr_args.label().c_str(), irr_seeds,
                        ok ? "always reached" : "FAILED to reach", V.dim(), irr_args.k, width);
            return ok ? 0 : 2;
        } else if (cmd_rep->parsed()) {
            return run_reproduce(rep_args, seed, restarts, threads, rep_out);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
