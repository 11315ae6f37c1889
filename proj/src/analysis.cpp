#include "gang/analysis.hpp"

#include <algorithm>
#include <random>

namespace gang {

	Verdict exact_schedulability_test(const TaskSet& ts, Policy policy,
	                                  bool force_fjp)
	{
		validate_or_throw(ts);
		if (policy == Policy::GangFjp && !is_parallelism_monotonic(ts)
		    && !force_fjp)
			throw AnalysisError(
				AnalysisError::Kind::PolicyNotPredictable,
				"PolicyNotPredictable: plain gang-fjp without a "
				"parallelism-monotonic priority order is not predictable, so "
				"the test is only exact for the worst case; pass --force to "
				"run it anyway");

		Verdict v;
		v.worst_case_only =
			policy == Policy::GangFjp && !is_parallelism_monotonic(ts);
		v.stabilization = stabilization_points(ts);
		v.hyperperiod = hyperperiod(ts);
		v.window_end = checked_add(v.stabilization.back(), v.hyperperiod);
		if (v.window_end > horizon_cap())
			throw AnalysisError(
				AnalysisError::Kind::WindowOverflow,
				"analysis window [0, " + std::to_string(v.window_end)
				+ ") exceeds the horizon cap "
				+ std::to_string(horizon_cap())
				+ "; set GANGSCHED_HORIZON_CAP to at least "
				+ std::to_string(v.window_end));

		SimOptions opts;
		opts.policy = policy;
		opts.stop_on_first_miss = true;
		opts.digest_at = {v.stabilization.back(), v.window_end};

		SimResult sim = simulate(ts, {}, v.window_end, opts);

		for (const auto& e : sim.events) {
			if (e.kind != EventKind::DeadlineMiss)
				continue;
			v.schedulable = false;
			v.witness = Verdict::Witness::DeadlineMiss;
			v.miss_task = sim.jobs[e.job].label;
			v.miss_instance = sim.jobs[e.job].instance;
			v.miss_t = e.t;
			return v;
		}

		// no miss and a full window: both digests were captured
		v.digest_start = sim.digests.at(0);
		v.digest_end = sim.digests.at(1);
		if (v.digest_start.same_state(v.digest_end)) {
			v.schedulable = true;
			v.witness = Verdict::Witness::None;
		} else {
			v.schedulable = false;
			v.witness = Verdict::Witness::StateMismatch;
		}
		return v;
	}

	PeriodicityReport verify_schedule_periodicity(const TaskSet& ts, Policy policy)
	{
		validate_or_throw(ts);
		PeriodicityReport report;
		report.from = stabilization_points(ts).back();
		report.period = hyperperiod(ts);
		dtime_t end = checked_add(report.from,
		                          checked_mul(2, report.period));
		if (end > horizon_cap())
			throw AnalysisError(
				AnalysisError::Kind::WindowOverflow,
				"periodicity window needs horizon "
				+ std::to_string(end) + ", cap is "
				+ std::to_string(horizon_cap()));

		SimOptions opts;
		opts.policy = policy;
		SimResult sim = simulate(ts, {}, end, opts);

		// slots hold job indices and the occupant at t+P is the next instance,
		// so "the schedule repeats" means: same task, released exactly P later
		auto shifted_match = [&](int a, int b) {
			if (a == kIdle || b == kIdle)
				return a == b;
			return sim.jobs[a].task_index == sim.jobs[b].task_index
			       && sim.jobs[a].release + report.period == sim.jobs[b].release;
		};

		const Trace& tr = sim.trace;
		report.periodic = true;
		for (dtime_t t = report.from; t < report.from + report.period; t++) {
			for (int p = 0; p < tr.m; p++) {
				std::size_t a = tr.at(t, p);
				std::size_t b = tr.at(t + report.period, p);
				if (!shifted_match(tr.exec[a], tr.exec[b])
				    || !shifted_match(tr.cover[a], tr.cover[b])
				    || tr.kind[a] != tr.kind[b]) {
					report.periodic = false;
					report.first_divergence = t;
					return report;
				}
			}
		}
		return report;
	}

	const char* probe_bound_name(ProbeBound bound)
	{
		switch (bound) {
		case ProbeBound::StartLow:   return "S below all-minimal bound";
		case ProbeBound::StartHigh:  return "S above all-maximal bound";
		case ProbeBound::FinishLow:  return "F below all-minimal bound";
		case ProbeBound::FinishHigh: return "F above all-maximal bound";
		}
		return "?";
	}

	namespace {

		struct PrefixEnvelope {
			bool applicable = false;
			dtime_t s_lo = 0, s_hi = 0, f_lo = 0, f_hi = 0;
		};

		struct ProbePlan {
			std::vector<Job> jobs;
			std::vector<dtime_t> e_min;
			int m = 1;
			Policy policy = Policy::GangFjp;
			dtime_t horizon = 0;
			std::vector<PrefixEnvelope> prefixes;
			std::vector<dtime_t> radix;        // profile choices per job
			std::vector<std::vector<dtime_t>> samples; // random strategy
			std::uint64_t total = 0;
		};

		std::vector<Job> prefix_of(const std::vector<Job>& jobs, std::size_t i)
		{
			return {jobs.begin(), jobs.begin() + static_cast<long>(i)};
		}

		SimResult run_prefix(const ProbePlan& plan, std::size_t i,
		                     std::vector<dtime_t> actual)
		{
			ExecutionProfile profile;
			profile.actual = std::move(actual);
			SimOptions opts;
			opts.policy = plan.policy;
			return simulate(prefix_of(plan.jobs, i), profile, plan.m,
			                plan.horizon, opts);
		}

		ProbePlan prepare(const std::vector<Job>& jobs,
		                  const std::vector<dtime_t>& e_min, int m,
		                  Policy policy, const ProbeOptions& opts)
		{
			if (e_min.size() != jobs.size())
				throw std::invalid_argument(
					"e_min must list one lower bound per job");
			for (std::size_t j = 0; j < jobs.size(); j++)
				if (e_min[j] < 1 || e_min[j] > jobs[j].wcet)
					throw std::invalid_argument(
						"e_min of " + jobs[j].ref() + " outside [1, wcet]");

			ProbePlan plan;
			plan.jobs = jobs;
			plan.e_min = e_min;
			plan.m = m;
			plan.policy = policy;

			// everything departs by max release + total worst-case budget:
			// some job always progresses while any is active
			dtime_t horizon = 0;
			for (const auto& j : jobs)
				horizon = std::max(horizon, j.release);
			for (const auto& j : jobs)
				horizon = checked_add(horizon, j.wcet);
			plan.horizon = checked_add(horizon, 1);

			for (std::size_t i = 1; i <= jobs.size(); i++) {
				std::vector<dtime_t> hi, lo;
				for (std::size_t j = 0; j < i; j++) {
					hi.push_back(jobs[j].wcet);
					lo.push_back(e_min[j]);
				}
				SimResult plus = run_prefix(plan, i, hi);
				SimResult minus = run_prefix(plan, i, lo);
				PrefixEnvelope env;
				env.applicable = !plus.has_miss();
				if (env.applicable) {
					auto sf_hi = start_finish_times(plus, static_cast<int>(i) - 1);
					auto sf_lo = start_finish_times(minus, static_cast<int>(i) - 1);
					env.s_hi = sf_hi.start.value();
					env.f_hi = sf_hi.finish.value();
					env.s_lo = sf_lo.start.value();
					env.f_lo = sf_lo.finish.value();
				}
				plan.prefixes.push_back(env);
			}

			plan.total = 1;
			for (std::size_t j = 0; j < jobs.size(); j++) {
				plan.radix.push_back(jobs[j].wcet - e_min[j] + 1);
				plan.total = static_cast<std::uint64_t>(
					checked_mul(static_cast<dtime_t>(plan.total),
					            plan.radix.back()));
			}

			if (opts.strategy == ProbeStrategy::Exhaustive) {
				if (plan.total > opts.exhaustive_cap)
					throw AnalysisError(
						AnalysisError::Kind::ProfileSpaceTooLarge,
						"exhaustive profile space has "
						+ std::to_string(plan.total)
						+ " profiles, cap is "
						+ std::to_string(opts.exhaustive_cap)
						+ "; use the random strategy");
			} else {
				// pre-draw profiles so parallel evaluation stays reproducible;
				// plain modulo keeps the stream compiler-independent
				std::mt19937_64 rng(opts.seed);
				plan.samples.reserve(opts.count);
				for (std::uint64_t c = 0; c < opts.count; c++) {
					std::vector<dtime_t> p(jobs.size());
					for (std::size_t j = 0; j < jobs.size(); j++)
						p[j] = e_min[j] + static_cast<dtime_t>(
							rng() % static_cast<std::uint64_t>(plan.radix[j]));
					plan.samples.push_back(std::move(p));
				}
				plan.total = opts.count;
			}
			return plan;
		}

		std::vector<dtime_t> decode_profile(const ProbePlan& plan,
		                                    std::uint64_t index)
		{
			std::vector<dtime_t> p(plan.jobs.size());
			for (std::size_t j = plan.jobs.size(); j-- > 0;) {
				p[j] = plan.e_min[j] + static_cast<dtime_t>(
					index % static_cast<std::uint64_t>(plan.radix[j]));
				index /= static_cast<std::uint64_t>(plan.radix[j]);
			}
			return p;
		}

		void check_profile(const ProbePlan& plan,
		                   const std::vector<dtime_t>& profile,
		                   std::vector<ProbeViolation>& out)
		{
			for (std::size_t i = 1; i <= plan.jobs.size(); i++) {
				const PrefixEnvelope& env = plan.prefixes[i - 1];
				if (!env.applicable)
					continue;
				std::vector<dtime_t> actual(profile.begin(),
				                            profile.begin() + static_cast<long>(i));
				SimResult sim = run_prefix(plan, i, std::move(actual));
				auto sf = start_finish_times(sim, static_cast<int>(i) - 1);
				dtime_t s = sf.start.value();
				dtime_t f = sf.finish.value();
				auto record = [&](ProbeBound bound, dtime_t observed, dtime_t limit) {
					out.push_back({profile, static_cast<int>(i), bound,
					               observed, limit});
				};
				if (s < env.s_lo)
					record(ProbeBound::StartLow, s, env.s_lo);
				if (s > env.s_hi)
					record(ProbeBound::StartHigh, s, env.s_hi);
				if (f < env.f_lo)
					record(ProbeBound::FinishLow, f, env.f_lo);
				if (f > env.f_hi)
					record(ProbeBound::FinishHigh, f, env.f_hi);
			}
		}

		void sort_violations(std::vector<ProbeViolation>& vs)
		{
			std::sort(vs.begin(), vs.end(),
			          [](const ProbeViolation& a, const ProbeViolation& b) {
				          if (a.profile != b.profile)
					          return a.profile < b.profile;
				          if (a.prefix != b.prefix)
					          return a.prefix < b.prefix;
				          return static_cast<int>(a.bound) < static_cast<int>(b.bound);
			          });
		}

		ProbeReport finish_report(const ProbePlan& plan,
		                          const ProbeOptions& opts,
		                          std::vector<ProbeViolation> violations)
		{
			ProbeReport report;
			report.strategy = opts.strategy;
			report.seed = opts.seed;
			report.profiles_tested = plan.total;
			for (std::size_t i = 0; i < plan.prefixes.size(); i++) {
				if (plan.prefixes[i].applicable)
					report.applicable = true;
				else
					report.skipped_prefixes.push_back(static_cast<int>(i) + 1);
			}
			sort_violations(violations);
			report.violations = std::move(violations);
			return report;
		}

	}

	ProbeReport predictability_probe_serial(const std::vector<Job>& jobs,
	                                        const std::vector<dtime_t>& e_min,
	                                        int m, Policy policy,
	                                        const ProbeOptions& opts)
	{
		ProbePlan plan = prepare(jobs, e_min, m, policy, opts);
		std::vector<ProbeViolation> violations;
		for (std::uint64_t c = 0; c < plan.total; c++) {
			const std::vector<dtime_t> profile =
				opts.strategy == ProbeStrategy::Exhaustive
					? decode_profile(plan, c) : plan.samples[c];
			check_profile(plan, profile, violations);
		}
		return finish_report(plan, opts, std::move(violations));
	}

	ProbeReport predictability_probe(const std::vector<Job>& jobs,
	                                 const std::vector<dtime_t>& e_min,
	                                 int m, Policy policy,
	                                 const ProbeOptions& opts)
	{
		ProbePlan plan = prepare(jobs, e_min, m, policy, opts);
		std::vector<ProbeViolation> violations;
		const std::int64_t total = static_cast<std::int64_t>(plan.total);

		#pragma omp parallel
		{
			std::vector<ProbeViolation> local;
			#pragma omp for schedule(dynamic, 16) nowait
			for (std::int64_t c = 0; c < total; c++) {
				const std::vector<dtime_t> profile =
					opts.strategy == ProbeStrategy::Exhaustive
						? decode_profile(plan, static_cast<std::uint64_t>(c))
						: plan.samples[static_cast<std::size_t>(c)];
				check_profile(plan, profile, local);
			}
			#pragma omp critical
			violations.insert(violations.end(), local.begin(), local.end());
		}
		return finish_report(plan, opts, std::move(violations));
	}

	std::vector<InversionRecord> detect_priority_inversion(const SimResult& result)
	{
		// a job stays active until its completion; jobs cut off by the horizon
		// or an overrun abort stay active to the end of their record
		std::vector<dtime_t> active_until(result.jobs.size(), result.end_time);
		for (std::size_t j = 0; j < result.jobs.size(); j++)
			if (result.completion[j])
				active_until[j] = *result.completion[j];
		for (const auto& e : result.events)
			if (e.kind == EventKind::Abort)
				active_until[static_cast<std::size_t>(e.job)] = e.t;

		std::vector<InversionRecord> out;
		for (dtime_t t = 0; t < result.trace.horizon(); t++) {
			std::vector<int> running, waiting;
			for (std::size_t j = 0; j < result.jobs.size(); j++) {
				if (result.jobs[j].release > t || t >= active_until[j])
					continue;
				if (result.trace.outer_occupies(static_cast<int>(j), t))
					running.push_back(static_cast<int>(j));
				else
					waiting.push_back(static_cast<int>(j));
			}
			for (int starved : waiting)
				for (int lower : running)
					if (lower > starved)
						out.push_back({t, lower, starved});
		}
		return out;
	}

	Trace rewrite_as_idling(const SimResult& slack_result)
	{
		const Trace& in = slack_result.trace;
		Trace out = in;

		// erase inner-server service
		for (std::size_t i = 0; i < out.exec.size(); i++)
			if (out.cover[i] != kIdle)
				out.exec[i] = kIdle;

		// re-split each job's outer occupancy: the first e' quanta would have
		// been real execution with the servers idling, the rest reservation
		for (std::size_t j = 0; j < slack_result.jobs.size(); j++) {
			dtime_t budget = slack_result.actual[j];
			for (dtime_t t = 0; t < in.horizon(); t++) {
				auto procs = in.outer_procs(static_cast<int>(j), t);
				if (procs.empty())
					continue;
				for (int p : procs) {
					std::size_t at = out.at(t, p);
					if (budget > 0) {
						out.exec[at] = static_cast<int>(j);
						out.cover[at] = kIdle;
						out.kind[at] = SpanKind::None;
					} else {
						out.exec[at] = kIdle;
						out.cover[at] = static_cast<int>(j);
						out.kind[at] = SpanKind::Reservation;
					}
				}
				if (budget > 0)
					budget--;
			}
		}
		return out;
	}

}
