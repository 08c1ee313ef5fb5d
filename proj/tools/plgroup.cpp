// plgroup: command-line front end for the plgroup library.
//
// Exit status: 0 success, 1 mathematical refusal, 2 malformed input.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plgroup/plgroup.hpp"

namespace fs = std::filesystem;
using namespace plgroup;

namespace {

// A path, or an inline "plmap1p v1 ..." literal (';' may stand for newlines).
PLMap1P load(const std::string& arg) {
    if (arg.rfind("plmap1p", 0) == 0) return PLMap1P::parse(arg);
    return read_plmap_file(arg);
}

std::vector<Dyadic> parse_list(const std::string& s) {
    std::vector<Dyadic> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(Dyadic::parse(item));
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw malformed("cannot write " + path);
    out << text;
}

void write_bundle(const ManifestBundle& b, const std::string& dir, const std::string& stem) {
    fs::create_directories(dir);
    for (const auto& [name, text] : b.files) write_text((fs::path(dir) / name).string(), text);
    write_text((fs::path(dir) / (stem + ".manifest")).string(), b.manifest);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact arithmetic for 1-periodic PL maps, Omega_n membership, cocycles and width certificates"};
    app.require_subcommand(1);

    int n = 2;
    std::string in, in2, out, x_text;
    std::vector<std::string> inputs;
    std::function<int()> action;

    const auto level = [&](CLI::App* c) { c->add_option("--n", n, "level n")->required()->check(CLI::Range(2, 62)); };
    const auto input = [&](CLI::App* c) {
        c->add_option("--in", in, "plmap1p file or inline literal")->required();
    };
    const auto output = [&](CLI::App* c) { c->add_option("--out", out, "output path (default stdout)"); };

    // make
    std::string kind, by_text;
    std::int64_t k = 1;
    auto* make = app.add_subcommand("make", "construct tau, zeta, translation, identity or witness");
    make->add_option("kind", kind, "tau | zeta | translation | identity | witness")
        ->required()
        ->check(CLI::IsMember({"tau", "zeta", "translation", "identity", "witness"}));
    make->add_option("--n", n, "level n")->check(CLI::Range(2, 62));
    make->add_option("--k", k, "zeta index, 1 <= k <= 2^n - 2");
    make->add_option("--by", by_text, "translation amount (default n)");
    output(make);
    make->callback([&] {
        action = [&] {
            PLMap1P f;
            if (kind == "tau") f = make_tau(n);
            else if (kind == "zeta") f = make_zeta(n, k);
            else if (kind == "identity") f = PLMap1P::identity();
            else if (kind == "witness") f = width_witness(n);
            else f = make_translation(by_text.empty() ? Dyadic(n) : Dyadic::parse(by_text));
            write_text(out, f.serialize());
            return 0;
        };
    });

    auto* comp = app.add_subcommand("compose", "product of the inputs, applied left to right");
    comp->add_option("--in", inputs, "factors in order")->required();
    output(comp);
    comp->callback([&] {
        action = [&] {
            PLMap1P f;
            for (const std::string& s : inputs) f = compose(f, load(s));
            write_text(out, f.serialize());
            return 0;
        };
    });

    auto* inv = app.add_subcommand("invert", "inverse map");
    input(inv);
    output(inv);
    inv->callback([&] {
        action = [&] {
            write_text(out, invert(load(in)).serialize());
            return 0;
        };
    });

    auto* ev = app.add_subcommand("eval", "image of a dyadic point");
    input(ev);
    ev->add_option("--x", x_text, "dyadic m/2^e")->required();
    ev->callback([&] {
        action = [&] {
            std::cout << load(in)(Dyadic::parse(x_text)) << '\n';
            return 0;
        };
    });

    auto* chk = app.add_subcommand("check-omega", "per-segment membership certificate for Omega_n");
    level(chk);
    input(chk);
    chk->callback([&] {
        action = [&] {
            const OmegaCertificate c = check_omega(load(in), n);
            std::cout << c.report();
            return c.pass ? 0 : 1;
        };
    });

    auto* th = app.add_subcommand("theta", "theta residue of a dyadic point");
    level(th);
    th->add_option("--x", x_text, "dyadic m/2^e")->required();
    th->callback([&] {
        action = [&] {
            const Residue r = theta(Dyadic::parse(x_text), n);
            std::cout << r.value << " (orbit O_" << r.orbit_index() << ")\n";
            return 0;
        };
    });

    auto* xic = app.add_subcommand("xi", "Xi vector of a compactly supported element of F_{2^n}");
    level(xic);
    input(xic);
    xic->callback([&] {
        action = [&] {
            std::cout << xi(load(in), n).str() << '\n';
            return 0;
        };
    });

    auto* gim = app.add_subcommand("gimel", "gimel vector of an element of Omega_n");
    level(gim);
    input(gim);
    gim->callback([&] {
        action = [&] {
            std::cout << gimel(load(in), n).str() << '\n';
            return 0;
        };
    });

    auto* part = app.add_subcommand("partition", "orbit partition of the Xi labels");
    level(part);
    part->callback([&] {
        action = [&] {
            std::cout << orbit_partition(n).str();
            return 0;
        };
    });

    auto* cls = app.add_subcommand("classify", "membership in F, F^c, F', Theta_n, Delta_n");
    level(cls);
    input(cls);
    cls->callback([&] {
        action = [&] {
            const PLMap1P f = load(in);
            const ThompsonClass t = classify_thompson(f, n);
            const auto yn = [](bool b) { return b ? "yes" : "no"; };
            std::cout << "omega " << yn(in_omega(f, n)) << '\n'
                      << "F " << yn(t.in_F) << '\n'
                      << "Fc " << yn(t.in_Fc) << '\n'
                      << "Fprime " << yn(t.in_Fprime) << '\n';
            if (t.in_Fc) {
                const SubgroupClass s = classify_subgroup(f, n);
                std::cout << "Theta " << yn(s.in_Theta) << '\n' << "Delta " << yn(s.in_Delta) << '\n';
            }
            return 0;
        };
    });

    std::string from_text, to_text;
    auto* tr = app.add_subcommand("transporter", "element of F_{2^n} sending one ordered tuple to another");
    level(tr);
    tr->add_option("--from", from_text, "comma separated dyadics in (0, 1)")->required();
    tr->add_option("--to", to_text, "comma separated dyadics in (0, 1)")->required();
    output(tr);
    tr->callback([&] {
        action = [&] {
            const auto xs = parse_list(from_text), ys = parse_list(to_text);
            write_text(out, transporter(n, xs, ys).serialize());
            return 0;
        };
    });

    std::string out_dir, stem = "nf";
    auto* nf = app.add_subcommand("normal-form", "factor g as head * conjugates of F' elements * t_n^l");
    level(nf);
    input(nf);
    nf->add_option("--out-dir", out_dir, "write the manifest and factor files here");
    nf->add_option("--stem", stem, "file name stem");
    nf->callback([&] {
        action = [&] {
            const Factorization fz = normal_form_near_zero(load(in), n);
            const std::string d = fz.defect(n);
            const ManifestBundle b = to_manifest(fz, n, stem);
            if (!out_dir.empty()) write_bundle(b, out_dir, stem);
            std::cout << b.manifest << "conjugated " << fz.conjugated_count() << " budget " << 2 * n + 4 << '\n'
                      << "verify " << (d.empty() ? "PASS" : "FAIL " + d) << '\n';
            return d.empty() ? 0 : 1;
        };
    });

    auto* wg = app.add_subcommand("weak-generators", "commutators generating Delta_n, with verification report");
    level(wg);
    wg->add_option("--out-dir", out_dir, "write f, g and the commutators here");
    wg->callback([&] {
        action = [&] {
            const WeakGenerators w = weak_generators_delta(n);
            if (!out_dir.empty()) {
                fs::create_directories(out_dir);
                write_text((fs::path(out_dir) / "f.plmap").string(), w.f.serialize());
                write_text((fs::path(out_dir) / "g.plmap").string(), w.g.serialize());
                for (std::size_t i = 0; i < w.commutators.size(); ++i)
                    write_text((fs::path(out_dir) / ("c" + std::to_string(i + 1) + ".plmap")).string(),
                               w.commutators[i].serialize());
            }
            std::cout << w.report();
            return w.pass() ? 0 : 1;
        };
    });

    const auto certify = [&](const char* name, WidthCertificate (*fn)(const PLMap1P&, int)) {
        auto* c = app.add_subcommand(name, "lower bound on factor count from the displacement of 0");
        level(c);
        input(c);
        c->callback([&, fn] {
            action = [&, fn] {
                std::cout << fn(load(in), n).report();
                return 0;
            };
        });
    };
    certify("certify-ulam", ulam_lower_certificate);
    certify("certify-commutator", commutator_lower_certificate);

    std::uint64_t seed = 0;
    std::size_t iters = 100;
    std::string manifest;
    auto* ver = app.add_subcommand("verify", "seeded property suite, or offline check of a factorization manifest");
    ver->add_option("--n", n, "level n")->check(CLI::Range(2, 6));
    ver->add_option("--seed", seed, "random seed");
    ver->add_option("--iters", iters, "trials per property");
    ver->add_option("--manifest", manifest, "manifest written by normal-form");
    ver->callback([&] {
        action = [&] {
            if (!manifest.empty()) {
                const auto [level_n, fz] = read_manifest(manifest);
                const std::string d = fz.defect(level_n);
                std::cout << "manifest n=" << level_n << " factors=" << fz.factors.size()
                          << " conjugated=" << fz.conjugated_count() << '\n'
                          << "verify " << (d.empty() ? "PASS" : "FAIL " + d) << '\n';
                return d.empty() ? 0 : 1;
            }
            const SuiteReport r = run_lemma_suite(n, seed, iters);
            std::cout << r.str();
            return r.pass() ? 0 : 1;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        return action();
    } catch (const malformed& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const refused& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
