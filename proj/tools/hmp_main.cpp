// hmp: fleet high-level maintenance planning CLI.
//
// Subcommands: solve, oracle, validate, generate, report, windows.
// Exit codes: 0 success, 1 validation/infeasibility failure, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hmp/annealer.hpp"
#include "hmp/exact_oracle.hpp"
#include "hmp/instance_io.hpp"
#include "hmp/occupancy.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hmp::ValidationError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw hmp::ValidationError("cannot write file: " + path);
    out << content;
}

hmp::SaParams load_params(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    hmp::SaParams p;
    p.beta_rate = j.value("beta_rate", p.beta_rate);
    p.beta_accept = j.value("beta_accept", p.beta_accept);
    p.beta_capacity = j.value("beta_capacity", p.beta_capacity);
    p.cooling_rate = j.value("cooling_rate", p.cooling_rate);
    p.inner_generated_coeff = j.value("inner_generated_coeff", p.inner_generated_coeff);
    p.inner_accepted_coeff = j.value("inner_accepted_coeff", p.inner_accepted_coeff);
    p.min_accept_rate = j.value("min_accept_rate", p.min_accept_rate);
    p.stability_count = j.value("stability_count", p.stability_count);
    p.stability_rel_tol = j.value("stability_rel_tol", p.stability_rel_tol);
    if (j.contains("initial_temp")) p.initial_temp = j["initial_temp"].get<double>();
    p.max_evaluations = j.value("max_evaluations", p.max_evaluations);
    return p;
}

std::string trace_csv(const hmp::SaResult& result) {
    std::ostringstream os;
    os << "temperature,mean_energy,acceptance_rate,generated,accepted\n";
    for (const hmp::TraceRow& row : result.trace) {
        os << row.temperature << ',' << row.mean_energy << ',' << row.acceptance_rate << ','
           << row.generated << ',' << row.accepted << "\n";
    }
    return os.str();
}

void print_model_size(const hmp::Instance& inst) {
    std::cout << "decision_variables " << hmp::variable_count(inst) << "\n";
    std::cout << "constraints " << hmp::constraint_count(inst) << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"EMU fleet high-level maintenance planner"};
    app.require_subcommand(1);

    std::string instance_path, schedule_path, config_path, params_path;
    std::string out_path, trace_path;
    std::uint64_t seed = 0;
    int restarts = 1, threads = 1;
    long long max_nodes = 10'000'000;
    bool no_prune = false;

    auto* solve = app.add_subcommand("solve", "Anneal a delivery schedule for an instance");
    solve->add_option("instance", instance_path, "instance file")->required();
    solve->add_option("--seed", seed, "random seed");
    solve->add_option("--params", params_path, "solver parameter file (JSON)");
    solve->add_option("--out", out_path, "write the schedule report here");
    solve->add_option("--trace", trace_path, "write the per-temperature trace here (CSV)");
    solve->add_option("--restarts", restarts, "independent seeded searches");
    solve->add_option("--threads", threads, "worker threads for --restarts");

    auto* oracle = app.add_subcommand("oracle", "Exact enumeration for small instances");
    oracle->add_option("instance", instance_path, "instance file")->required();
    oracle->add_option("--max-nodes", max_nodes, "largest searchable schedule count");
    oracle->add_flag("--no-prune", no_prune, "disable partial-assignment pruning");
    oracle->add_option("--threads", threads, "worker threads");
    oracle->add_option("--out", out_path, "write the optimum schedule report here");

    auto* validate = app.add_subcommand("validate", "Check an instance (and optionally a schedule)");
    validate->add_option("instance", instance_path, "instance file")->required();
    validate->add_option("--schedule", schedule_path, "schedule file to check");

    auto* generate = app.add_subcommand("generate", "Generate a random instance");
    generate->add_option("--config", config_path, "generator config file (JSON)");
    generate->add_option("--seed", seed, "random seed (overrides config)");
    generate->add_option("--out", out_path, "write the instance here");

    auto* report = app.add_subcommand("report", "Per-day occupancy/rate/delivery series");
    report->add_option("instance", instance_path, "instance file")->required();
    report->add_option("schedule", schedule_path, "schedule file")->required();
    report->add_option("--out", out_path, "write the CSV here");

    auto* windows = app.add_subcommand("windows", "Print each train's delivery window");
    windows->add_option("instance", instance_path, "instance file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream os;
        const int code = app.exit(e, os, os);
        if (code != 0) {
            std::cerr << os.str();
            return 2;
        }
        std::cout << os.str();  // --help / --version
        return 0;
    }

    if (solve->parsed()) {
        hmp::Instance inst = hmp::parse_instance(read_file(instance_path));
        hmp::SaParams params = params_path.empty() ? hmp::SaParams{} : load_params(params_path);
        params.seed = seed;
        const hmp::SaResult result = restarts > 1
                                         ? hmp::solve_restarts(inst, params, restarts, threads)
                                         : hmp::solve(inst, params);
        print_model_size(inst);
        std::cout << "best_energy " << result.best_energy << "\n";
        std::cout << "mileage_loss_train_km " << result.best_evaluation.mileage_loss << "\n";
        std::cout << "cost_value " << result.best_evaluation.cost_value << "\n";
        std::cout << "feasible " << (result.best_evaluation.feasible ? "true" : "false") << "\n";
        std::cout << "stop_reason " << hmp::to_string(result.stop_reason) << "\n";
        std::cout << "evaluations " << result.evaluations << "\n";
        if (!out_path.empty()) {
            write_file(out_path, hmp::serialize_schedule(inst, result.best_schedule,
                                                         result.best_evaluation));
        }
        if (!trace_path.empty()) write_file(trace_path, trace_csv(result));
        return 0;
    }

    if (oracle->parsed()) {
        hmp::Instance inst = hmp::parse_instance(read_file(instance_path));
        hmp::OracleLimits limits;
        limits.max_nodes = max_nodes;
        limits.prune = !no_prune;
        limits.threads = threads;
        const hmp::OracleResult result = hmp::solve_exact(inst, limits);
        std::cout << "searched_count " << result.searched_count << "\n";
        std::cout << "feasible_count " << result.feasible_count << "\n";
        if (!result.optimum) {
            std::cout << "infeasible true\n";
            return 1;
        }
        std::cout << "optimum_loss_train_km " << result.optimum_loss << "\n";
        if (!out_path.empty()) {
            const hmp::Evaluation eval = hmp::evaluate(inst, *result.optimum);
            write_file(out_path, hmp::serialize_schedule(inst, *result.optimum, eval));
        }
        return 0;
    }

    if (validate->parsed()) {
        hmp::Instance inst = hmp::parse_instance(read_file(instance_path));
        if (!schedule_path.empty()) {
            const hmp::Schedule sched = hmp::parse_schedule(read_file(schedule_path));
            hmp::validate_schedule(inst, sched);
        }
        std::cout << "ok\n";
        return 0;
    }

    if (generate->parsed()) {
        hmp::GeneratorConfig cfg = config_path.empty()
                                       ? hmp::GeneratorConfig{}
                                       : hmp::parse_generator_config(read_file(config_path));
        if (generate->count("--seed") > 0) cfg.seed = seed;
        const hmp::Instance inst = hmp::generate(cfg);
        const std::string text = hmp::serialize_instance(inst);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            write_file(out_path, text);
            std::cout << "fleet_size " << inst.fleet_size() << "\n"
                      << "horizon_day " << inst.horizon << "\n";
        }
        return 0;
    }

    if (report->parsed()) {
        hmp::Instance inst = hmp::parse_instance(read_file(instance_path));
        const hmp::Schedule sched = hmp::parse_schedule(read_file(schedule_path));
        hmp::validate_schedule(inst, sched);
        std::ostringstream os;
        os << "day,in_maintenance,rate_limit,deliveries\n";
        std::vector<int> in_maint(inst.horizon + 1, 0), deliveries(inst.horizon + 1, 0);
        for (const hmp::TrainRecord& train : inst.trains) {
            const int day = sched.day_of(train.id);
            const auto occ = hmp::occupancy_intervals(train, day, inst.regs, inst.horizon);
            for (int t = 0; t <= inst.horizon; ++t) {
                if (occ.covers(t)) ++in_maint[t];
            }
            ++deliveries[day];
        }
        for (int t = 0; t <= inst.horizon; ++t) {
            os << t << ',' << in_maint[t] << ',' << hmp::rate_limit_on(inst, t) << ','
               << deliveries[t] << "\n";
        }
        if (out_path.empty()) {
            std::cout << os.str();
        } else {
            write_file(out_path, os.str());
        }
        return 0;
    }

    if (windows->parsed()) {
        hmp::Instance inst = hmp::parse_instance(read_file(instance_path));
        const auto win = hmp::fleet_windows(inst);
        for (size_t i = 0; i < inst.trains.size(); ++i) {
            std::cout << inst.trains[i].id << ' ' << hmp::to_string(inst.trains[i].level) << " ["
                      << win[i].begin_day << "," << win[i].end_day << "]\n";
        }
        std::cout << "horizon " << inst.horizon << "\n";
        return 0;
    }

    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const hmp::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const hmp::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const hmp::InfeasibleTrainError& e) {
        std::cerr << "infeasible train: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
