// Acceptance suite: one deterministic, integer-exact check per criterion,
// one PASS/FAIL line each. Exits non-zero if any criterion fails.

#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "helpers.hpp"

using namespace gang;
using namespace helpers;

namespace {

	struct Failure : std::runtime_error {
		using std::runtime_error::runtime_error;
	};

	void require(bool cond, const std::string& what)
	{
		if (!cond)
			throw Failure(what);
	}

	template <typename A, typename B>
	void require_eq(const A& a, const B& b, const std::string& what)
	{
		if (!(a == b)) {
			std::ostringstream msg;
			msg << what << " (got " << a << ", expected " << b << ")";
			throw Failure(msg.str());
		}
	}

	using row_t = std::vector<std::string>;

	// --- 1: priority-inversion schedule reproduction -----------------------

	void criterion_inversion_schedule()
	{
		SimResult r = simulate(inversion_tasks(), {}, 5, {});
		for (dtime_t t = 0; t < 2; t++)
			require(exec_row(r, t) == row_t{"T1", "T1", "T3"},
			        "T1 and T3 must hold [0,2)");
		for (dtime_t t = 2; t < 5; t++) {
			require(exec_row(r, t)[0] == "T2" && exec_row(r, t)[1] == "T2",
			        "T2 must hold [2,5)");
			require(exec_row(r, t)[2] == (t < 4 ? "T3" : "0"),
			        "T3 must hold [0,4)");
		}
		auto inv = detect_priority_inversion(r);
		require_eq(inv.size(), std::size_t(2), "two inversion records");
		require(inv[0].t == 0 && inv[1].t == 1, "inversions at t=0 and t=1");
		for (const auto& rec : inv) {
			require(r.jobs[static_cast<std::size_t>(rec.running)].label == "T3",
			        "the narrow task runs during the inversion");
			require(r.jobs[static_cast<std::size_t>(rec.starved)].label == "T2",
			        "the wide task starves during the inversion");
		}
		require(!r.has_miss(), "no deadline misses");
	}

	// --- 2: non-predictability counterexample ------------------------------

	void criterion_counterexample()
	{
		auto jobs = counterexample_jobs();
		SimResult worst = sim_jobs(jobs, kCounterexampleM, Policy::GangFjp);
		require_eq(start_finish_times(worst, 2).finish.value(), dtime_t(2),
		           "worst-case F(J3)");
		require(!worst.has_miss(), "worst case meets all deadlines");

		SimResult shrunk = sim_jobs(jobs, kCounterexampleM, Policy::GangFjp,
		                            profile({1, 1, 2}));
		require_eq(start_finish_times(shrunk, 2).finish.value(), dtime_t(3),
		           "F(J3) when J1 runs one quantum");
		require(shrunk.has_miss() && *shrunk.first_miss_at() == 2,
		        "J3 misses its deadline 2");

		ProbeReport rep = predictability_probe(jobs, {1, 1, 2},
		                                       kCounterexampleM,
		                                       Policy::GangFjp);
		require(rep.applicable, "worst case is schedulable, probe applies");
		require(!rep.violations.empty(),
		        "exhaustive probe over e1 in [1,3] finds a violation");
	}

	// --- 3: slack-server walkthrough ---------------------------------------

	void criterion_slack_walkthrough()
	{
		SimResult worst = sim_jobs(slack_jobs(), kSlackM, Policy::GangFjp, {}, 7);
		for (int j = 0; j < 6; j++)
			require(start_finish_times(worst, j).finish.value() <= 6,
			        "worst case completes everything by 6");

		ExecutionProfile short_j1 = profile({1, 1, 2, 2, 2, 1});
		SimResult r = sim_jobs(slack_jobs(), kSlackM, Policy::SlackReclaiming,
		                       short_j1, 7);

		std::vector<Event> spawns;
		for (const auto& e : r.events)
			if (e.kind == EventKind::ServerSpawn)
				spawns.push_back(e);
		require_eq(spawns.size(), std::size_t(4), "four servers spawn");
		require(spawns[0].job == 0 && spawns[0].t == 1 && spawns[0].value == 2,
		        "level-1 server of width 2, length 2 spawns at t=1");
		require_eq(r.jobs[0].width, 2, "server width is the job width");

		require(exec_row(r, 1) == row_t{"J4", "J6", "J3"},
		        "the server serves J4 and J6 at t=1");
		require(cover_row(r, 1) == row_t{"J1", "J1", "0"},
		        "the server holds two processors at t=1");
		require(exec_row(r, 2) == row_t{"J5", "J5", "J4"},
		        "J4 is withdrawn at t=2 and J5 is served instead");
		require(exec_row(r, 3) == row_t{"J2", "J2", "J2"},
		        "J5 is preempted when the server expires at 3");

		// zero-work servers at t=4 (J4) and t=5 (J5, J6)
		require(spawns[1].job == 3 && spawns[1].t == 4,
		        "J4's server spawns at t=4");
		require(spawns[2].job == 4 && spawns[2].t == 5,
		        "J5's server spawns at t=5");
		require(spawns[3].job == 5 && spawns[3].t == 5,
		        "J6's server spawns at t=5");
		for (dtime_t t = 4; t < 6; t++)
			for (int p = 0; p < kSlackM; p++) {
				std::size_t at = r.trace.at(t, p);
				require(r.trace.cover[at] == kIdle
				        || r.trace.exec[at] == kIdle,
				        "late servers receive no work");
			}

		for (int j = 0; j < 6; j++) {
			auto a = start_finish_times(r, j);
			auto b = start_finish_times(worst, j);
			require(a.start == b.start,
			        "outer start equals the worst-case start");
			require(a.finish == b.finish,
			        "reservation-inclusive finish equals the worst case");
		}
	}

	// --- 4: predictability suites ------------------------------------------

	void criterion_predictability_suites()
	{
		std::mt19937_64 rng(20260810);
		int instances = 0, applicable_prefixes = 0;
		while (instances < 100) {
			JobSetInstance inst = random_job_set(rng, instances % 3 == 0);
			instances++;

			struct Config { JobSetInstance inst; Policy policy; };
			std::vector<Config> configs = {
				{pm_ordered(inst), Policy::GangFjp},
				{inst, Policy::Idling},
				{inst, Policy::Limited},
				{inst, Policy::SlackReclaiming},
			};
			for (const auto& cfg : configs) {
				ProbeReport rep = predictability_probe(
					cfg.inst.jobs, cfg.inst.e_min, cfg.inst.m, cfg.policy);
				require(rep.violations.empty(),
				        std::string("no violation under ")
				        + policy_name(cfg.policy));
				applicable_prefixes +=
					static_cast<int>(cfg.inst.jobs.size()
					                 - rep.skipped_prefixes.size());
			}
		}
		require(applicable_prefixes >= 400,
		        "enough schedulable prefixes for the sweep to mean something");

		ProbeReport plain = predictability_probe(counterexample_jobs(),
		                                         {1, 1, 2}, kCounterexampleM,
		                                         Policy::GangFjp);
		require(!plain.violations.empty(),
		        "plain gang-fjp still fails on the counterexample");
	}

	// --- 5: periodicity ------------------------------------------------------

	void criterion_periodicity()
	{
		std::mt19937_64 rng(5);
		const Policy policies[] = {Policy::GangFjp, Policy::Limited,
		                           Policy::Idling, Policy::SlackReclaiming};
		int checked = 0, asynchronous = 0;
		while (checked < 100) {
			TaskSet ts = random_task_set(rng, checked % 2 == 0);
			Policy policy = policies[checked % 4];
			Verdict v;
			try {
				v = exact_schedulability_test(ts, policy, true);
			} catch (const AnalysisError&) {
				continue;
			}
			if (!v.schedulable)
				continue;
			auto rep = verify_schedule_periodicity(ts, policy);
			require(rep.periodic,
			        "schedulable sets repeat with period P from S_n");
			require_eq(rep.period, v.hyperperiod, "period is the hyperperiod");
			checked++;
			for (const auto& t : ts.tasks)
				if (t.offset > 0) {
					asynchronous++;
					break;
				}
		}
		require(asynchronous >= 20, "asynchronous offsets are represented");
	}

	// --- 6: exact test against a brute-force oracle -------------------------

	void criterion_exact_test_oracle()
	{
		std::mt19937_64 rng(6);
		const Policy policies[] = {Policy::Limited, Policy::Idling,
		                           Policy::SlackReclaiming, Policy::GangFjp};
		int checked = 0, positives = 0, negatives = 0;
		while (checked < 120) {
			TaskSet ts = random_task_set(rng, checked % 2 == 0);
			Policy policy = policies[checked % 4];
			if (policy == Policy::GangFjp) {
				// keep the iff premise: use a parallelism-monotonic order
				std::stable_sort(ts.tasks.begin(), ts.tasks.end(),
				                 [](const Task& a, const Task& b) {
					                 return a.width < b.width;
				                 });
			}
			dtime_t window = stabilization_points(ts).back()
			                 + 3 * hyperperiod(ts);
			if (window > 10000)
				continue;
			checked++;

			Verdict v = exact_schedulability_test(ts, policy);
			SimOptions opts;
			opts.policy = policy;
			SimResult brute = simulate(ts, {}, window, opts);
			require_eq(v.schedulable, !brute.has_miss(),
			           "verdict agrees with direct simulation over [0, S_n+3P)");
			(v.schedulable ? positives : negatives)++;
		}
		require(positives >= 20 && negatives >= 20,
		        "the oracle saw both verdict polarities");
	}

	// --- 7: black-box equivalence -------------------------------------------

	void criterion_black_box()
	{
		std::mt19937_64 rng(7);
		for (int round = 0; round < 100; round++) {
			JobSetInstance inst = random_job_set(rng, round % 3 == 0);
			ExecutionProfile prof = random_profile(rng, inst.jobs, inst.e_min);

			SimResult slack = sim_jobs(inst.jobs, inst.m,
			                           Policy::SlackReclaiming, prof);
			SimResult idling = sim_jobs(inst.jobs, inst.m, Policy::Idling,
			                            prof);
			require(rewrite_as_idling(slack) == idling.trace,
			        "erasing inner service reproduces the idling trace");

			SimResult wc_plain = sim_jobs(inst.jobs, inst.m, Policy::GangFjp);
			SimResult wc_idle = sim_jobs(inst.jobs, inst.m, Policy::Idling);
			SimResult wc_slack = sim_jobs(inst.jobs, inst.m,
			                              Policy::SlackReclaiming);
			require(wc_plain.trace == wc_idle.trace
			        && wc_plain.trace == wc_slack.trace,
			        "worst-case traces of the three variants are identical");
		}
	}

	// --- 8: determinism and formats ------------------------------------------

	void criterion_determinism_and_format()
	{
		std::mt19937_64 rng(8);
		for (int round = 0; round < 20; round++) {
			JobSetInstance inst = random_job_set(rng, true);
			ExecutionProfile prof = random_profile(rng, inst.jobs, inst.e_min);
			SimResult a = sim_jobs(inst.jobs, inst.m, Policy::SlackReclaiming,
			                       prof);
			SimResult b = sim_jobs(inst.jobs, inst.m, Policy::SlackReclaiming,
			                       prof);
			require(a.trace == b.trace && a.events == b.events,
			        "repeated simulations are identical");
			require_eq(serialize_trace(make_trace_doc(a)),
			           serialize_trace(make_trace_doc(b)),
			           "repeated runs serialize byte-identically");

			TraceDoc doc = make_trace_doc(a);
			require(csv_to_grid(trace_to_csv(doc)) == grid_of(doc),
			        "CSV round-trip is lossless");
			require(parse_trace(serialize_trace(doc)) == doc,
			        "trace JSON round-trip is lossless");
		}
	}

}

int main()
{
	struct Criterion {
		const char* name;
		std::function<void()> fn;
	};
	const std::vector<Criterion> criteria = {
		{"1 gang-FTP inversion schedule reproduced", criterion_inversion_schedule},
		{"2 shrinking-execution counterexample reproduced", criterion_counterexample},
		{"3 slack-server walkthrough reproduced", criterion_slack_walkthrough},
		{"4 predictable variants survive exhaustive profile sweeps",
		 criterion_predictability_suites},
		{"5 schedulable sets repeat with period P from S_n", criterion_periodicity},
		{"6 exact test agrees with the brute-force oracle", criterion_exact_test_oracle},
		{"7 slack servers are black-box equivalent to idling", criterion_black_box},
		{"8 determinism and lossless formats", criterion_determinism_and_format},
	};

	int failed = 0;
	for (const auto& c : criteria) {
		try {
			c.fn();
			std::cout << "[PASS] " << c.name << "\n";
		} catch (const std::exception& e) {
			failed++;
			std::cout << "[FAIL] " << c.name << ": " << e.what() << "\n";
		}
	}
	return failed == 0 ? 0 : 1;
}
