#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "poissonlab/report.hpp"

namespace pl = poissonlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitLoad = 2;
constexpr int kExitCheckFailed = 3;
constexpr int kExitInternal = 4;

std::uint64_t default_seed() {
    if (const char* env = std::getenv("POISSON_LAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
        }
    }
    return 1;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pl::ParseError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool looks_like_path(const std::string& s) {
    return s.find('/') != std::string::npos || s.find(".txt") != std::string::npos ||
           s.find(".struct") != std::string::npos;
}

struct LoadedStructure {
    pl::Structure S;
    const pl::GalleryEntry* entry = nullptr;  // set when loaded from the gallery
};

LoadedStructure load_target(const std::string& target, bool allow_non_poisson) {
    static pl::GalleryEntry entry_store;
    LoadedStructure out;
    if (looks_like_path(target)) {
        out.S = pl::load_structure(read_file(target), allow_non_poisson);
        return out;
    }
    entry_store = pl::gallery_get(target);
    if (entry_store.is_submersion)
        throw pl::UnknownEntry(target + " is a submersion spec; use the submersion command");
    if (!entry_store.contested.empty() || true) out.entry = &entry_store;
    if (auto s = target.find('/'); s != std::string::npos) {
        std::string label = target.substr(s + 1);
        for (const auto& [l, text] : entry_store.variants)
            if (l == label) {
                out.S = pl::load_structure(text, allow_non_poisson);
                return out;
            }
        throw pl::UnknownEntry(target);
    }
    out.S = pl::load_structure(entry_store.text, allow_non_poisson);
    return out;
}

void emit(const std::string& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream os(out_path);
        os << payload;
    }
}

std::string join_args(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 1; i < argc; ++i) os << (i > 1 ? " " : "") << argv[i];
    return os.str();
}

double wall_ms(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"poisson-lab: verification toolkit for compatible Poisson and metric structures"};
    app.require_subcommand(1);
    std::string command_line = join_args(argc, argv);

    std::string target, out_path, svg_path, csv_path, checks_arg, plane = "auto", ham;
    std::string start_arg, schedule_arg;
    int samples = 200;
    std::uint64_t seed = default_seed();
    double tol = 1e-8;
    double duration = 1.0, step = 1e-3;
    bool allow_np = false, reproducible = false;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--samples", samples, "sample count");
        c->add_option("--seed", seed, "RNG seed (default: POISSON_LAB_SEED or 1)");
        c->add_option("--tol", tol, "pass tolerance");
        c->add_option("--out", out_path, "write the report here instead of stdout");
        c->add_flag("--reproducible", reproducible, "omit timing fields for byte-stable output");
        c->add_flag("--allow-non-poisson", allow_np, "load bivectors that fail the Jacobi check");
    };

    CLI::App* check = app.add_subcommand("check", "classify a structure and report defects");
    check->add_option("target", target, "gallery id or structure file")->required();
    check->add_option("--checks", checks_arg, "comma-separated check ids (default: all)");
    add_common(check);

    CLI::App* identities = app.add_subcommand("identities", "run the identity suites");
    identities->add_option("target", target)->required();
    add_common(identities);

    CLI::App* submersion = app.add_subcommand("submersion", "run the submersion defect suite");
    submersion->add_option("target", target, "gallery id or submersion file")->required();
    add_common(submersion);

    CLI::App* leaf = app.add_subcommand("leaf", "trace a leaf by coordinate Hamiltonian flows");
    leaf->add_option("target", target)->required();
    leaf->add_option("--start", start_arg, "start point, comma separated")->required();
    leaf->add_option("--ham", ham, "coordinate name (or index) whose Hamiltonian flow to follow");
    leaf->add_option("--schedule", schedule_arg, "segments coord:duration,coord:duration,...");
    leaf->add_option("--t", duration, "duration for --ham");
    leaf->add_option("--h", step, "integrator step");
    leaf->add_option("--csv", csv_path, "CSV output path (default stdout)");
    leaf->add_option("--svg", svg_path, "also render an SVG projection");
    leaf->add_option("--plane", plane, "projection plane, e.g. xy (default: first two coords)");
    add_common(leaf);

    CLI::App* list = app.add_subcommand("list", "list gallery entries");
    CLI::App* describe = app.add_subcommand("describe", "describe a gallery entry");
    describe->add_option("target", target)->required();

    CLI11_PARSE(app, argc, argv);
    auto t0 = std::chrono::steady_clock::now();

    try {
        if (list->parsed()) {
            for (const auto& e : pl::gallery_entries())
                std::cout << e.id << (e.is_submersion ? "  [submersion]" : "") << "\n";
            return kExitOk;
        }
        if (describe->parsed()) {
            pl::GalleryEntry e = pl::gallery_get(target);
            std::cout << "id: " << e.id << "\n";
            std::cout << "kind: " << (e.is_submersion ? "submersion" : "structure") << "\n";
            std::cout << "reference: " << e.reference << "\n";
            if (!e.variants.empty()) {
                std::cout << "variants:";
                for (const auto& [l, t] : e.variants) std::cout << " " << l;
                std::cout << "\n";
            }
            std::cout << "expected checks:\n";
            for (const auto& [id, kind] : e.expected) {
                std::cout << "  " << id << ": " << kind;
                if (e.contested.count(id)) std::cout << "  (contested source claim; see README)";
                std::cout << "\n";
            }
            if (!e.is_submersion && e.variants.empty()) {
                std::cout << "definition:\n" << e.text;
            }
            return kExitOk;
        }

        if (check->parsed()) {
            LoadedStructure ls;
            try {
                ls = load_target(target, allow_np);
            } catch (const pl::Error& e) {
                std::cerr << "load error: " << e.what() << "\n";
                return kExitLoad;
            }
            std::vector<std::string> which;
            if (!checks_arg.empty()) {
                std::istringstream is(checks_arg);
                std::string t;
                while (std::getline(is, t, ',')) which.push_back(t);
            } else if (ls.entry && !ls.entry->expected.empty()) {
                // default for gallery entries: the expected-pass and
                // measure-only checks (expected failures run only on request)
                for (const auto& [id, kind] : ls.entry->expected)
                    if (kind == "pass" || kind == "measure") which.push_back(id);
            }
            pl::DefectReport rep =
                pl::classify(ls.S, samples, seed, tol, which.empty() ? nullptr : &which);
            emit(pl::report_to_json(rep, command_line, reproducible, wall_ms(t0)), out_path);

            bool ok = true;
            for (const auto& c : rep.checks) {
                if (c.status != "ran" && c.status != "derived") continue;
                bool measure_only =
                    ls.entry && checks_arg.empty() &&
                    ls.entry->expected.count(c.id) && ls.entry->expected.at(c.id) == "measure";
                if (!measure_only && !c.pass) ok = false;
            }
            return ok ? kExitOk : kExitCheckFailed;
        }

        if (identities->parsed()) {
            LoadedStructure ls;
            try {
                ls = load_target(target, allow_np);
            } catch (const pl::Error& e) {
                std::cerr << "load error: " << e.what() << "\n";
                return kExitLoad;
            }
            auto rs = pl::run_identities(ls.S, samples, seed, tol);
            emit(pl::identities_to_json(ls.S.name, rs, command_line, seed, samples, reproducible,
                                        wall_ms(t0)),
                 out_path);
            for (const auto& r : rs)
                if (r.assertive && !r.pass) return kExitCheckFailed;
            return kExitOk;
        }

        if (submersion->parsed()) {
            pl::SubmersionSpec sub;
            try {
                if (looks_like_path(target))
                    sub = pl::parse_submersion(read_file(target), [](const std::string& gid) {
                        return pl::gallery_structure(gid);
                    });
                else
                    sub = pl::gallery_submersion(target);
            } catch (const pl::Error& e) {
                std::cerr << "load error: " << e.what() << "\n";
                return kExitLoad;
            }
            auto rep = pl::run_submersion_suite(sub, samples, seed, tol);
            emit(pl::submersion_to_json(rep, command_line, reproducible, wall_ms(t0)), out_path);
            for (const auto& r : rep.defects)
                if (!r.pass) return kExitCheckFailed;
            return kExitOk;
        }

        if (leaf->parsed()) {
            LoadedStructure ls;
            try {
                ls = load_target(target, allow_np);
            } catch (const pl::Error& e) {
                std::cerr << "load error: " << e.what() << "\n";
                return kExitLoad;
            }
            const pl::Structure& S = ls.S;
            pl::Point p0;
            {
                std::istringstream is(start_arg);
                std::string t;
                while (std::getline(is, t, ',')) p0.push_back(std::stod(t));
            }
            if (static_cast<int>(p0.size()) != S.n) {
                std::cerr << "start point needs " << S.n << " components\n";
                return kExitLoad;
            }
            auto coord_index = [&](const std::string& c) {
                for (int i = 0; i < S.n; ++i)
                    if (S.coords[static_cast<std::size_t>(i)] == c) return i;
                try {
                    int idx = std::stoi(c) - 1;
                    if (idx >= 0 && idx < S.n) return idx;
                } catch (...) {
                }
                throw pl::Error("unknown coordinate '" + c + "'");
            };
            std::vector<std::pair<int, double>> schedule;
            if (!schedule_arg.empty()) {
                std::istringstream is(schedule_arg);
                std::string seg;
                while (std::getline(is, seg, ',')) {
                    auto colon = seg.find(':');
                    if (colon == std::string::npos)
                        throw pl::Error("schedule segment needs coord:duration");
                    schedule.emplace_back(coord_index(seg.substr(0, colon)),
                                          std::stod(seg.substr(colon + 1)));
                }
            } else {
                if (ham.empty()) throw pl::Error("leaf needs --ham or --schedule");
                schedule.emplace_back(coord_index(ham), duration);
            }
            pl::LeafTrace tr = pl::trace_leaf(S, p0, schedule, step);
            emit(pl::trace_to_csv(S, tr), csv_path.empty() ? out_path : csv_path);
            if (tr.truncated)
                std::cerr << "note: trace left the validity box at t = " << tr.exit_time
                          << "; output truncated\n";
            if (!svg_path.empty()) {
                int ax = 0, ay = 1;
                if (plane != "auto" && plane.size() == 2) {
                    ax = coord_index(plane.substr(0, 1));
                    ay = coord_index(plane.substr(1, 1));
                }
                std::ofstream os(svg_path);
                os << pl::trace_to_svg(S, tr, ax, ay, S.name);
            }
            return kExitOk;
        }
    } catch (const pl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
