// Command-line driver for the dimension-certificate pipeline. Each stage is
// independently runnable and cacheable: covers are stored as text files and
// reused when an existing file matches the requested parameters exactly
// (grid, level, step budget, coefficient checksum), so an interrupted run
// resumes by rerunning the same command.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "feigdim/certificate.hpp"
#include "feigdim/cover.hpp"
#include "feigdim/distortion.hpp"
#include "feigdim/domains.hpp"
#include "feigdim/map.hpp"
#include "feigdim/svg.hpp"
#include "feigdim/verify.hpp"

namespace fs = std::filesystem;
using namespace feigdim;

namespace {

struct Ctx {
    std::string coeffs;
    std::string out = ".";
    int threads = 4;
};

std::string cover_path(const Ctx& ctx, const Cover& like) {
    char buf[128];
    const int e = int(std::lround(-std::log2(like.grid.h)));
    switch (like.target) {
        case CoverTarget::Xtilde:
            std::snprintf(buf, sizeof buf, "x_n%d_e%d.cov", like.n, e);
            break;
        case CoverTarget::Sigma:
            std::snprintf(buf, sizeof buf, "sigma_n%d_e%d.cov", like.n, e);
            break;
        case CoverTarget::P0:
            std::snprintf(buf, sizeof buf, "p0_m%d_e%d.cov", like.n, e);
            break;
    }
    return (fs::path(ctx.out) / buf).string();
}

void print_ledger(const StepErrorLedger& led) {
    std::printf("  step ledger (accumulated enclosure radii):\n");
    for (std::size_t k = 0; k < led.eps.size(); ++k)
        if (led.eps[k] > 0 || led.delta[k] > 0)
            std::printf("    k=%2zu  eps=%.6e  delta=%.6e\n", k + 1, led.eps[k], led.delta[k]);
}

void print_cover_summary(const char* tag, const Cover& c, double seconds) {
    const AreaBound ab = area_bound(c);
    std::printf("%s: %zu cells of %d x %d, h=2^%d, quarter area %s %.6f  [%.1f s]\n", tag,
                c.cells.size(), c.grid.nx, c.grid.ny, int(std::lround(std::log2(c.grid.h))),
                c.kind == CoverKind::UpperCover ? "<=" : ">=", ab.bound, seconds);
}

// Reuse a stored cover when its parameters match the request; rebuild
// otherwise. The builder returns the freshly computed cover.
template <typename Build>
Cover build_or_reuse(const Ctx& ctx, const Cover& like, Build&& build) {
    const std::string path = cover_path(ctx, like);
    if (fs::exists(path)) {
        Cover on_disk = load_cover(path);
        if (on_disk.target == like.target && on_disk.kind == like.kind && on_disk.n == like.n &&
            on_disk.max_iter == like.max_iter && on_disk.grid == like.grid &&
            on_disk.coeff_checksum == like.coeff_checksum) {
            std::printf("[reuse] %s (%zu cells)\n", path.c_str(), on_disk.cells.size());
            return on_disk;
        }
        std::printf("[stale] %s: parameters differ, rebuilding\n", path.c_str());
    }
    const auto t0 = std::chrono::steady_clock::now();
    Cover built = build();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    fs::create_directories(ctx.out);
    save_cover(built, path);
    std::printf("[build] %s  [%.1f s]\n", path.c_str(), secs);
    return built;
}

Cover x_request(const Map& map, const Domains& dom, int n, int e, int K) {
    Cover like;
    like.kind = CoverKind::UpperCover;
    like.target = CoverTarget::Xtilde;
    like.n = n;
    like.max_iter = K;
    like.grid = scaled_window_grid(map, dom, e);
    like.coeff_checksum = map.poly.checksum;
    return like;
}

Cover sigma_request(const Map& map, const Domains& dom, int n, int e, int K) {
    Cover like;
    like.kind = CoverKind::LowerPacking;
    like.target = CoverTarget::Sigma;
    like.n = n;
    like.max_iter = K;
    like.grid = unit_window_grid(dom, e);
    like.coeff_checksum = map.poly.checksum;
    return like;
}

Cover p0_request(const Map& map, const Domains& dom, int m, int e) {
    Cover like;
    like.kind = CoverKind::UpperCover;
    like.target = CoverTarget::P0;
    like.n = m;
    like.max_iter = (1 << m) - 1;
    like.grid = unit_window_grid(dom, e);
    like.coeff_checksum = map.poly.checksum;
    return like;
}

int run_verify(const Map& map, const Domains& dom, const Ctx& ctx) {
    const DomainVerification ver = verify_domain_inclusions(map, dom);
    for (const auto& c : ver.checks) {
        std::printf("%-28s %s  margin=%.6e (stated %.3e, %s)  err=%.3e  pieces=%lld  [%.1f s]\n",
                    c.name.c_str(), c.pass ? "PASS" : "FAIL", c.margin, c.margin_stated,
                    c.margin_in_band ? "in band" : "OUT OF BAND", c.err, c.pieces, c.seconds);
        if (!c.pass) std::printf("  failure: %s\n", c.failure.c_str());
    }
    std::string doc;
    for (const auto& c : ver.checks) {
        doc += c.name + (c.pass ? ": pass, " : ": FAIL, ") + "margin " +
               std::to_string(c.margin) + "\n" + c.detail + "\n";
    }
    fs::create_directories(ctx.out);
    write_text_file((fs::path(ctx.out) / "verify_domains.txt").string(), doc);
    return ver.all_pass() ? 0 : 1;
}

std::string distortion_report(const DistortionBound& mb, const Cover& packing,
                              const Cover& probes) {
    std::string doc;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "distortion bound over %zu packing cells (h=%g), %zu probes (h=%g)\n"
                  "M_upper %.9f\nwitness %.9f %.9f\nwitness_g %.9f\n",
                  packing.cells.size(), packing.grid.h, probes.cells.size(), probes.grid.h,
                  mb.m_up, mb.witness.real(), mb.witness.imag(), mb.witness_g);
    doc += buf;
    doc += "probe_g_values\n";
    for (std::size_t i = 0; i < mb.g_values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9f %.9f %.9f\n", mb.probe_points[i].real(),
                      mb.probe_points[i].imag(), mb.g_values[i]);
        doc += buf;
    }
    return doc;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Certified pipeline for the Feigenbaum-map dimension certificate: "
        "domain verification, escape covers, distortion bounds, and the "
        "final area product."};
    app.require_subcommand(1);

    Ctx ctx;
    app.add_option("--coeffs", ctx.coeffs, "map coefficient file (default: bundled data)");
    app.add_option("--out", ctx.out, "output directory for covers and reports");
    app.add_option("--threads", ctx.threads, "worker threads for cell sweeps");

    int n = 4, e = 9, K = 20, p0_depth = 2, p0_exp = 5, sigma_exp = -1;
    double slack = 1.0;
    std::string refine_from, plot_input;

    auto* c_verify = app.add_subcommand("verify-domains", "run the six window-geometry checks");
    (void)c_verify;

    auto* c_x = app.add_subcommand("cover-x", "upper cover of the trapped set at level n");
    c_x->add_option("--n", n, "renormalization level");
    c_x->add_option("--spacing-exp", e, "grid spacing h = 2^-e");
    c_x->add_option("--max-steps", K, "first-return step budget K");
    c_x->add_option("--refine-from", refine_from, "refine an existing coarser cover file");

    auto* c_s = app.add_subcommand("cover-sigma", "lower packing of the escaping set at level n");
    c_s->add_option("--n", n, "renormalization level");
    c_s->add_option("--spacing-exp", e, "grid spacing h = 2^-e");
    c_s->add_option("--max-steps", K, "first-return step budget K");
    c_s->add_option("--refine-from", refine_from, "refine an existing coarser packing file");

    auto* c_p = app.add_subcommand("cover-p0", "upper cover of the invariant piece");
    c_p->add_option("--n", p0_depth, "disk-tracking depth m (iterates 1 .. 2^m - 1)");
    c_p->add_option("--spacing-exp", p0_exp, "grid spacing h = 2^-e");

    auto* c_d = app.add_subcommand("distortion", "distortion bound M over a stored packing");
    c_d->add_option("--n", n, "packing level");
    c_d->add_option("--spacing-exp", e, "packing grid exponent");
    c_d->add_option("--p0-depth", p0_depth, "probe cover depth m");
    c_d->add_option("--p0-exp", p0_exp, "probe cover exponent");

    auto* c_c = app.add_subcommand("certify", "full pipeline: verify, covers, distortion, product");
    c_c->add_option("--n", n, "renormalization level");
    c_c->add_option("--spacing-exp", e, "trapped-cover grid exponent");
    c_c->add_option("--sigma-exp", sigma_exp, "packing grid exponent (default: spacing-exp)");
    c_c->add_option("--max-steps", K, "first-return step budget K");
    c_c->add_option("--p0-depth", p0_depth, "piece cover depth m");
    c_c->add_option("--p0-exp", p0_exp, "piece cover exponent");

    auto* c_r = app.add_subcommand("report", "recursive-estimate consistency table");
    c_r->add_option("--spacing-exp", e, "cover grid exponent");
    c_r->add_option("--max-steps", K, "first-return step budget K");
    c_r->add_option("--p0-exp", p0_exp, "probe cover exponent for the distortion bound");
    c_r->add_option("--slack", slack, "allowed lhs/rhs overshoot before flagging");

    auto* c_plot = app.add_subcommand("plot", "render a cover file (or the window geometry) as SVG");
    c_plot->add_option("--cover", plot_input, "cover file to render");

    CLI11_PARSE(app, argc, argv);

    try {
        Map map = Map::load(ctx.coeffs);
        Domains dom(map.consts);
        if (sigma_exp < 0) sigma_exp = e;

        if (app.got_subcommand(c_verify)) return run_verify(map, dom, ctx);

        if (app.got_subcommand(c_x) || app.got_subcommand(c_s)) {
            const bool is_x = app.got_subcommand(c_x);
            Cover like = is_x ? x_request(map, dom, n, e, K) : sigma_request(map, dom, n, e, K);
            StepErrorLedger led;
            Cover built = build_or_reuse(ctx, like, [&] {
                EngineOptions opts{ctx.threads, &led};
                if (!refine_from.empty()) {
                    Cover base = load_cover(refine_from);
                    const int factor =
                        int(std::lround(base.grid.h / like.grid.h));
                    return refine(map, dom, base, factor, opts);
                }
                return is_x ? cover_xtilde(map, dom, n, like.grid, K, opts)
                            : cover_sigma(map, dom, n, like.grid, K, opts);
            });
            print_cover_summary(is_x ? "cover-x" : "cover-sigma", built, 0.0);
            if (!led.eps.empty()) print_ledger(led);
            return 0;
        }

        if (app.got_subcommand(c_p)) {
            Cover like = p0_request(map, dom, p0_depth, p0_exp);
            Cover built = build_or_reuse(ctx, like, [&] {
                return cover_p0(map, dom, p0_depth, like.grid, EngineOptions{ctx.threads, nullptr});
            });
            print_cover_summary("cover-p0", built, 0.0);
            return 0;
        }

        if (app.got_subcommand(c_d)) {
            Cover packing = load_cover(cover_path(ctx, sigma_request(map, dom, n, e, K)));
            Cover probes = load_cover(cover_path(ctx, p0_request(map, dom, p0_depth, p0_exp)));
            Uniformizer uni(map);
            const auto t0 = std::chrono::steady_clock::now();
            DistortionBound mb = m_upper(uni, dom, packing, probes, ctx.threads);
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("M_upper = %.6f  (witness %.5f%+.5fi, g=%.6f)  [%.1f s]\n", mb.m_up,
                        mb.witness.real(), mb.witness.imag(), mb.witness_g, secs);
            write_text_file((fs::path(ctx.out) / "distortion.txt").string(),
                            distortion_report(mb, packing, probes));
            return 0;
        }

        if (app.got_subcommand(c_c)) {
            // Fail-closed: the window geometry must verify before anything else.
            std::printf("== stage 1: domain verification ==\n");
            if (run_verify(map, dom, ctx) != 0) {
                std::printf("verdict: NotCertified (domain verification failed)\n");
                return 1;
            }
            std::printf("== stage 2: covers ==\n");
            StepErrorLedger led;
            Cover xcov = build_or_reuse(ctx, x_request(map, dom, n, e, K), [&] {
                return cover_xtilde(map, dom, n, x_request(map, dom, n, e, K).grid, K,
                                    EngineOptions{ctx.threads, &led});
            });
            Cover scov = build_or_reuse(ctx, sigma_request(map, dom, n, sigma_exp, K), [&] {
                return cover_sigma(map, dom, n, sigma_request(map, dom, n, sigma_exp, K).grid, K,
                                   EngineOptions{ctx.threads, &led});
            });
            Cover pcov = build_or_reuse(ctx, p0_request(map, dom, p0_depth, p0_exp), [&] {
                return cover_p0(map, dom, p0_depth, p0_request(map, dom, p0_depth, p0_exp).grid,
                                EngineOptions{ctx.threads, nullptr});
            });
            std::printf("== stage 3: distortion ==\n");
            Uniformizer uni(map);
            DistortionBound mb = m_upper(uni, dom, scov, pcov, ctx.threads);
            std::printf("M_upper = %.6f\n", mb.m_up);
            write_text_file((fs::path(ctx.out) / "distortion.txt").string(),
                            distortion_report(mb, scov, pcov));
            std::printf("== stage 4: certificate ==\n");
            Certificate cert = assemble_certificate(map, xcov, scov, pcov, mb, &led);
            const std::string doc = certificate_json(cert);
            write_text_file((fs::path(ctx.out) / "certificate.json").string(), doc);
            std::printf("%s", doc.c_str());
            std::printf("verdict: %s (product %.6f)\n",
                        cert.certified ? "Certified" : "NotCertified", cert.product);
            return 0;
        }

        if (app.got_subcommand(c_r)) {
            // Covers needed for the rows (3,3), (3,4), (4,3): levels 3,4,5,7
            // plus packings and probe covers for the distortion bounds.
            auto xc = [&](int level) {
                return build_or_reuse(ctx, x_request(map, dom, level, e, K), [&] {
                    return cover_xtilde(map, dom, level, x_request(map, dom, level, e, K).grid, K,
                                        EngineOptions{ctx.threads, nullptr});
                });
            };
            Cover x3 = xc(3), x4 = xc(4), x5 = xc(5), x6 = xc(6), x7 = xc(7);
            Cover pcov = build_or_reuse(ctx, p0_request(map, dom, 2, p0_exp), [&] {
                return cover_p0(map, dom, 2, p0_request(map, dom, 2, p0_exp).grid,
                                EngineOptions{ctx.threads, nullptr});
            });
            Uniformizer uni(map);
            auto m_for = [&](int level) {
                Cover s = build_or_reuse(ctx, sigma_request(map, dom, level, e, K), [&] {
                    return cover_sigma(map, dom, level, sigma_request(map, dom, level, e, K).grid,
                                       K, EngineOptions{ctx.threads, nullptr});
                });
                return m_upper(uni, dom, s, pcov, ctx.threads).m_up;
            };
            const double m3 = m_for(3), m4 = m_for(4);
            RecursiveRow rows[3] = {
                recursive_estimate_row(map, dom, x3, x4, x6, m3, slack),
                recursive_estimate_row(map, dom, x3, x5, x7, m3, slack),
                recursive_estimate_row(map, dom, x4, x4, x7, m4, slack),
            };
            bool any = false;
            std::string doc = "recursive-estimate diagnostic (area form)\n";
            for (const auto& r : rows) {
                char buf[192];
                std::snprintf(buf, sizeof buf,
                              "(n=%d, m=%d)  lhs=%.8f  rhs=%.8f  ratio=%.4f  %s\n", r.n, r.m,
                              r.lhs_up, r.rhs_up, r.ratio, r.violation ? "VIOLATION" : "ok");
                std::printf("%s", buf);
                doc += buf;
                any = any || r.violation;
            }
            write_text_file((fs::path(ctx.out) / "recursive_estimate.txt").string(), doc);
            return any ? 2 : 0;
        }

        if (app.got_subcommand(c_plot)) {
            fs::create_directories(ctx.out);
            if (plot_input.empty()) {
                write_text_file((fs::path(ctx.out) / "domains.svg").string(), domains_svg(dom));
                std::printf("wrote %s/domains.svg\n", ctx.out.c_str());
            } else {
                Cover cov = load_cover(plot_input);
                const std::string name = fs::path(plot_input).stem().string() + ".svg";
                write_text_file((fs::path(ctx.out) / name).string(), cover_svg(cov, dom));
                std::printf("wrote %s/%s\n", ctx.out.c_str(), name.c_str());
            }
            return 0;
        }
    } catch (const std::exception& ex) {
        std::fprintf(stderr, "error: %s\n", ex.what());
        return 3;
    }
    return 0;
}
