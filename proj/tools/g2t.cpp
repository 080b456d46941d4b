#include "g2t/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace g2t;

namespace {

constexpr int kExitFail = 1, kExitInput = 2;

struct Options {
    Config cfg;
    bool json_out = false;
    std::string suite, input, out, s = "auto", loop_action, out_dir = "fixtures";
    std::vector<std::string> points;
};

json read_json(const std::string& path) {
    std::stringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open " + path);
        ss << in.rdbuf();
    }
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << j.dump(1) << "\n";
}

int emit(const Report& r, const Options& o, const json& extra = json::object()) {
    if (o.json_out) {
        json j = r.to_json();
        for (auto& [k, v] : extra.items()) j[k] = v;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << r.to_text();
    }
    return r.all_pass() ? 0 : kExitFail;
}

int input_error(const std::string& msg, const Options& o, const std::string& kind = "InputError", const std::string& point = "") {
    if (o.json_out) {
        json j = {{"error", msg}, {"kind", kind}};
        if (!point.empty()) j["point"] = point;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cerr << "error: " << kind << ": " << msg << (point.empty() ? "" : " at z0 = " + point) << "\n";
    }
    return kExitInput;
}

int cmd_lift(const Options& o) {
    try {
        auto res = run_lift(read_json(o.input), o.cfg, o.s, o.points);
        if (!o.out.empty()) write_json(o.out, res.flags);
        return emit(res.report, o, {{"flags", res.flags}});
    } catch (const RejectedMap& e) {
        return input_error(e.what(), o, e.kind, e.point);
    }
}

int cmd_loop(const Options& o) {
    if (o.loop_action == "build") {
        json j = build_loop(o.cfg);
        if (o.out.empty()) {
            std::cout << j.dump(1) << "\n";
            return 0;
        }
        write_json(o.out, j);
        return emit(check_loop(j, o.cfg), o);
    }
    return emit(check_loop(read_json(o.input), o.cfg), o);
}

int cmd_fixtures(const Options& o) {
    namespace fs = std::filesystem;
    fs::create_directories(o.out_dir);
    std::vector<std::string> written;
    for (auto& [name, j] : fixture_files(o.cfg)) {
        write_json((fs::path(o.out_dir) / name).string(), j);
        written.push_back((fs::path(o.out_dir) / name).string());
    }
    if (o.json_out) {
        std::cout << json({{"dir", o.out_dir}, {"files", written}}).dump(2) << "\n";
    } else {
        for (auto& w : written) std::cout << w << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"g2t: harmonic maps into G2/SO(4), twistor lifts and extended solutions"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--backend", o.cfg.backend, "exact or float")->envname("G2T_BACKEND")->check(CLI::IsMember({"exact", "float"}));
    app.add_option("--tol", o.cfg.tol, "numerical tolerance")->envname("G2T_TOL");
    app.add_option("--jet-order", o.cfg.jet_order, "jet order of constructed maps")->envname("G2T_JET_ORDER");
    app.add_option("--seed", o.cfg.seed, "random seed")->envname("G2T_SEED");
    app.add_flag("--json", o.json_out, "machine-readable output")->envname("G2T_JSON");
    app.fallthrough();

    auto* verify = app.add_subcommand("verify", "run an invariant suite");
    verify->add_option("suite", o.suite, "algebra, weights, s6, twistor, loops or all")->required();
    verify->add_option("--points", o.cfg.points, "number of sample points")->envname("G2T_POINTS");
    verify->add_option("--example", o.cfg.example, "loops example: s2, s3 or all")->envname("G2T_EXAMPLE");
    verify->add_option("--t", o.cfg.t, "loop deformation parameter")->envname("G2T_T");

    auto* lift_cmd = app.add_subcommand("lift", "construct and check the twistor lift of a map");
    lift_cmd->add_option("input", o.input, "map JSON file, - for stdin")->required();
    lift_cmd->add_option("--s", o.s, "auto, 1, 2 or 3")->check(CLI::IsMember({"auto", "1", "2", "3"}));
    lift_cmd->add_option("--points", o.points, "base points re,im for generator inputs");
    lift_cmd->add_option("--out", o.out, "write flag JSON here");

    auto* loop = app.add_subcommand("loop", "build or check extended solutions");
    loop->require_subcommand(1);
    auto* build = loop->add_subcommand("build", "build an example loop");
    build->add_option("--example", o.cfg.example, "s2 or s3")->required()->check(CLI::IsMember({"s2", "s3"}));
    build->add_option("--t", o.cfg.t, "deformation parameter");
    build->add_option("--out", o.out, "write loop JSON here and print a check report");
    auto* check = loop->add_subcommand("check", "check a loop JSON file");
    check->add_option("input", o.input, "loop JSON file, - for stdin")->required();

    auto* fixtures = app.add_subcommand("fixtures", "fixture files");
    fixtures->require_subcommand(1);
    auto* gen = fixtures->add_subcommand("generate", "write JSON fixtures");
    gen->add_option("--out-dir", o.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        validate(o.cfg);
        if (*verify) return emit(run_suite(o.suite, o.cfg), o);
        if (*lift_cmd) return cmd_lift(o);
        if (*loop) {
            o.loop_action = *build ? "build" : "check";
            return cmd_loop(o);
        }
        if (*gen) return cmd_fixtures(o);
    } catch (const InputError& e) {
        return input_error(e.what(), o);
    } catch (const PreconditionError& e) {
        return input_error(e.what(), o, "PreconditionError");
    } catch (const JetOrderError& e) {
        return input_error(e.what(), o, "JetOrderError");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitInput;
}
