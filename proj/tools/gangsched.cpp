#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "gang/analysis.hpp"
#include "gang/io.hpp"

using namespace gang;

namespace {

	// exit codes: 0 = schedulable / no violation, 1 = negative result,
	// 2 = usage or validation error
	constexpr int kOk = 0;
	constexpr int kNegative = 1;
	constexpr int kUsage = 2;

	std::string slurp(const std::string& path)
	{
		std::ifstream in(path, std::ios::binary);
		if (!in)
			throw std::runtime_error("cannot open '" + path + "'");
		std::ostringstream out;
		out << in.rdbuf();
		return out.str();
	}

	void spill(const std::string& path, const std::string& data)
	{
		if (path.empty() || path == "-") {
			std::cout << data;
			return;
		}
		std::ofstream out(path, std::ios::binary);
		if (!out)
			throw std::runtime_error("cannot write '" + path + "'");
		out << data;
	}

	Policy need_policy(const std::string& name)
	{
		auto p = parse_policy(name);
		if (!p)
			throw std::runtime_error(
				"unknown policy '" + name
				+ "' (use gang-fjp | limited | idling | slack-reclaiming)");
		return *p;
	}

	int run_analyze(const std::string& file, const std::string& policy_name,
	                bool force)
	{
		auto resolved = resolve_task_set(parse_task_set(slurp(file)));
		Verdict v = exact_schedulability_test(resolved.ts,
		                                      need_policy(policy_name), force);
		std::cout << "policy: " << policy_name
		          << (v.worst_case_only ? " (forced)" : "") << "\n";
		std::cout << "S:";
		for (dtime_t s : v.stabilization)
			std::cout << " " << s;
		std::cout << "\nP: " << v.hyperperiod << "\n";
		std::cout << "window: [0, " << v.window_end << ")\n";
		if (v.schedulable) {
			std::cout << (v.worst_case_only
			              ? "verdict: worst-case-schedulable only "
			                "(policy not predictable)\n"
			              : "verdict: schedulable\n");
			return kOk;
		}
		std::cout << "verdict: not schedulable\n";
		if (v.witness == Verdict::Witness::DeadlineMiss)
			std::cout << "witness: deadline miss of " << v.miss_task
			          << " job " << v.miss_instance << " at t=" << v.miss_t
			          << "\n";
		else
			std::cout << "witness: state mismatch between t="
			          << v.digest_start.t << " and t=" << v.digest_end.t
			          << "\n";
		return kNegative;
	}

	int run_simulate(const std::string& file, const std::string& policy_name,
	                 dtime_t horizon, const std::string& profile_path,
	                 const std::string& out_path, bool stop_on_miss)
	{
		auto resolved = resolve_task_set(parse_task_set(slurp(file)));
		if (horizon < 0) {
			// default window: one stabilized hyperperiod
			horizon = checked_add(stabilization_points(resolved.ts).back(),
			                      hyperperiod(resolved.ts));
		}
		std::vector<Job> jobs = jobs_within(resolved.ts, horizon);
		ExecutionProfile profile;
		if (!profile_path.empty() && profile_path != "worst")
			profile = parse_profile(slurp(profile_path), jobs);

		SimOptions opts;
		opts.policy = need_policy(policy_name);
		opts.stop_on_first_miss = stop_on_miss;
		SimResult result = simulate(resolved.ts, profile, horizon, opts);

		spill(out_path, serialize_trace(make_trace_doc(result)));
		if (result.has_miss()) {
			std::cerr << "deadline miss at t=" << *result.first_miss_at()
			          << "\n";
			return kNegative;
		}
		return kOk;
	}

	int run_fuzz(const std::string& file, const std::string& policy_name,
	             const std::string& strategy, std::uint64_t seed,
	             std::uint64_t count, dtime_t window, std::uint64_t cap,
	             bool serial)
	{
		auto resolved = resolve_task_set(parse_task_set(slurp(file)));
		if (window < 0)
			window = checked_add(stabilization_points(resolved.ts).back(),
			                     hyperperiod(resolved.ts));
		std::vector<Job> jobs = generate_jobs(resolved.ts, window);
		std::vector<dtime_t> e_min;
		for (const auto& j : jobs)
			e_min.push_back(resolved.e_min[static_cast<std::size_t>(j.task_index)]);

		ProbeOptions opts;
		if (strategy == "exhaustive")
			opts.strategy = ProbeStrategy::Exhaustive;
		else if (strategy == "random")
			opts.strategy = ProbeStrategy::Random;
		else
			throw std::runtime_error("unknown strategy '" + strategy
			                         + "' (use exhaustive | random)");
		opts.seed = seed;
		opts.count = count;
		opts.exhaustive_cap = cap;

		Policy policy = need_policy(policy_name);
		ProbeReport report = serial
			? predictability_probe_serial(jobs, e_min, resolved.ts.platform.proc_count,
			                              policy, opts)
			: predictability_probe(jobs, e_min, resolved.ts.platform.proc_count,
			                       policy, opts);

		std::cout << "policy: " << policy_name << "\n";
		std::cout << "strategy: " << strategy;
		if (opts.strategy == ProbeStrategy::Random)
			std::cout << " seed=" << report.seed << " count=" << count;
		std::cout << "\njobs: " << jobs.size() << " (released in [0, " << window
		          << "))\n";
		std::cout << "profiles tested: " << report.profiles_tested << "\n";
		if (!report.applicable) {
			std::cout << "not applicable: no priority prefix is schedulable "
			             "under the worst case\n";
			return kNegative;
		}
		for (int i : report.skipped_prefixes)
			std::cout << "prefix " << i
			          << " skipped (worst case not schedulable)\n";
		if (report.violations.empty()) {
			std::cout << "violations: none (evidence, not proof)\n";
			return kOk;
		}
		std::cout << "violations: " << report.violations.size() << "\n";
		for (const auto& v : report.violations) {
			std::cout << "  prefix " << v.prefix << ": "
			          << probe_bound_name(v.bound) << ", observed "
			          << v.observed << " vs bound " << v.limit
			          << ", profile (";
			for (std::size_t j = 0; j < v.profile.size(); j++)
				std::cout << (j ? "," : "") << v.profile[j];
			std::cout << ")\n";
		}
		return kNegative;
	}

	int run_export(const std::string& file, const std::string& format,
	               const std::string& out_path)
	{
		std::string text = slurp(file);
		bool is_csv = file.size() > 4
		              && file.compare(file.size() - 4, 4, ".csv") == 0;
		if (format == "csv") {
			if (is_csv)
				spill(out_path, grid_to_csv(csv_to_grid(text)));
			else
				spill(out_path, trace_to_csv(parse_trace(text)));
		} else if (format == "svg") {
			if (is_csv)
				spill(out_path, grid_to_svg(csv_to_grid(text)));
			else
				spill(out_path, trace_to_svg(parse_trace(text)));
		} else {
			throw std::runtime_error("unknown format '" + format
			                         + "' (use csv | svg)");
		}
		return kOk;
	}

}

int main(int argc, char** argv)
{
	CLI::App app{"simulator and exact schedulability analyzer for rigid "
	             "gang tasks on identical multiprocessors"};
	app.require_subcommand(1);

	std::string file, policy = "gang-fjp", profile = "worst", out, strategy =
		"exhaustive", format = "csv";
	bool force = false, stop_on_miss = false, serial = false;
	dtime_t horizon = -1, window = -1;
	std::uint64_t seed = 1, count = 1000, cap = 65536;

	auto* analyze = app.add_subcommand("analyze", "exact schedulability test");
	analyze->add_option("file", file)->required();
	analyze->add_option("--policy", policy);
	analyze->add_flag("--force", force,
	                  "run plain gang-fjp without a PM order anyway");

	auto* sim = app.add_subcommand("simulate", "write a schedule trace");
	sim->add_option("file", file)->required();
	sim->add_option("--policy", policy);
	sim->add_option("--horizon", horizon, "quanta to simulate (default S_n+P)");
	sim->add_option("--profile", profile, "'worst' or a profile file");
	sim->add_option("--out", out, "trace file (default stdout)");
	sim->add_flag("--stop-on-miss", stop_on_miss);

	auto* fuzz = app.add_subcommand("fuzz", "predictability probe");
	fuzz->add_option("file", file)->required();
	fuzz->add_option("--policy", policy);
	fuzz->add_option("--strategy", strategy, "exhaustive | random");
	fuzz->add_option("--seed", seed);
	fuzz->add_option("--count", count, "profiles for the random strategy");
	fuzz->add_option("--window", window, "release window (default S_n+P)");
	fuzz->add_option("--cap", cap, "exhaustive profile-space cap");
	fuzz->add_flag("--serial", serial, "use the single-threaded driver");

	auto* exp = app.add_subcommand("export", "convert a trace file");
	exp->add_option("file", file)->required();
	exp->add_option("--format", format, "csv | svg");
	exp->add_option("--out", out, "output file (default stdout)");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError& e) {
		int code = app.exit(e);
		return code == 0 ? 0 : kUsage;
	}

	try {
		if (*analyze)
			return run_analyze(file, policy, force);
		if (*sim)
			return run_simulate(file, policy, horizon, profile, out,
			                    stop_on_miss);
		if (*fuzz)
			return run_fuzz(file, policy, strategy, seed, count, window, cap,
			                serial);
		if (*exp)
			return run_export(file, format, out);
	} catch (const std::exception& e) {
		std::cerr << "error: " << e.what() << "\n";
		return kUsage;
	}
	return kUsage;
}
