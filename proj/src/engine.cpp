#include "gang/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

namespace gang {

	dtime_t horizon_cap()
	{
		static const dtime_t cap = [] {
			if (const char* env = std::getenv("GANGSCHED_HORIZON_CAP")) {
				char* end = nullptr;
				long long v = std::strtoll(env, &end, 10);
				if (end && *end == '\0' && v > 0)
					return static_cast<dtime_t>(v);
			}
			return static_cast<dtime_t>(5'000'000);
		}();
		return cap;
	}

	const char* event_name(EventKind kind)
	{
		switch (kind) {
		case EventKind::Release:          return "release";
		case EventKind::Start:            return "start";
		case EventKind::Completion:       return "completion";
		case EventKind::DeadlineMiss:     return "deadline-miss";
		case EventKind::Preemption:       return "preemption";
		case EventKind::ServerSpawn:      return "server-spawn";
		case EventKind::ReservationStart: return "reservation";
		case EventKind::Inversion:        return "inversion";
		case EventKind::Abort:            return "abort";
		}
		return "?";
	}

	bool SimResult::has_miss() const
	{
		return first_miss_at().has_value();
	}

	std::optional<dtime_t> SimResult::first_miss_at() const
	{
		for (const auto& e : events)
			if (e.kind == EventKind::DeadlineMiss)
				return e.t;
		return std::nullopt;
	}

	namespace {

		struct JobRt {
			dtime_t rem_actual = 0;
			dtime_t rem_virtual = 0;
			bool released = false;
			bool departed = false;
			bool started = false;
			bool spawn_logged = false;
		};

		// Internal context; `tasks` is null in job-set mode.
		struct Engine {
			const std::vector<Task>* tasks;
			const SimOptions& opts;
			int m;
			SimResult& out;
			std::vector<JobRt> rt;
			std::set<int> active;              // job indices, ascending = priority order
			std::vector<int> by_release;       // job indices sorted by release time
			std::size_t next_release = 0;
			std::vector<int> cur_job_of_task;  // periodic mode: latest released job
			std::vector<int> prev_outer;       // jobs holding outer processors last quantum

			bool uses_virtual() const
			{
				return opts.policy == Policy::Idling
				       || opts.policy == Policy::SlackReclaiming;
			}

			void release_jobs_at(dtime_t t)
			{
				const auto& jobs = out.jobs;
				while (next_release < by_release.size()
				       && jobs[by_release[next_release]].release == t) {
					int j = by_release[next_release++];
					if (tasks) {
						int& cur = cur_job_of_task[
							static_cast<std::size_t>(jobs[j].task_index)];
						if (cur >= 0 && !rt[cur].departed) {
							// overran into its own next release: drop it so the
							// constrained-deadline invariant holds (trace keeps going)
							out.events.push_back({t, EventKind::Abort, cur, -1,
							                      rt[cur].rem_actual});
							rt[cur].departed = true;
							active.erase(cur);
						}
						cur = j;
					}
					rt[j].released = true;
					rt[j].rem_actual = out.actual[j];
					rt[j].rem_virtual = jobs[j].wcet;
					active.insert(j);
					out.events.push_back({t, EventKind::Release, j});
				}
			}

			bool record_misses_at(dtime_t t)
			{
				bool missed = false;
				for (int j : active) {
					if (out.jobs[j].deadline == t && rt[j].rem_actual > 0) {
						out.events.push_back({t, EventKind::DeadlineMiss, j});
						missed = true;
					}
				}
				return missed;
			}

			Digest capture_digest(dtime_t t) const
			{
				Digest d;
				d.t = t;
				if (tasks) {
					d.entries.reserve(tasks->size());
					for (std::size_t i = 0; i < tasks->size(); i++) {
						int cur = cur_job_of_task[i];
						if (cur < 0) {
							// not yet released: phase counts down to the offset
							d.entries.push_back({0, 0, t - (*tasks)[i].offset});
							continue;
						}
						const JobRt& r = rt[cur];
						d.entries.push_back(
							{r.departed ? 0 : r.rem_actual,
							 r.departed ? 0 : r.rem_virtual,
							 t - out.jobs[cur].release});
					}
				} else {
					d.entries.reserve(out.jobs.size());
					for (std::size_t j = 0; j < out.jobs.size(); j++) {
						const JobRt& r = rt[j];
						d.entries.push_back(
							{r.departed ? 0 : r.rem_actual,
							 r.departed ? 0 : r.rem_virtual,
							 r.released ? 0 : t - out.jobs[j].release});
					}
				}
				return d;
			}

			void run(dtime_t horizon);
			void dispatch_quantum(dtime_t t);
		};

		void Engine::dispatch_quantum(dtime_t t)
		{
			const auto& jobs = out.jobs;
			Trace& trace = out.trace;
			trace.append_quantum();

			std::vector<Candidate> cands;
			std::vector<int> cand_jobs;
			cands.reserve(active.size());
			for (int j : active) {
				cands.push_back({j, jobs[j].width});
				cand_jobs.push_back(j);
			}

			bool limited = opts.policy == Policy::Limited || opts.limited_scan;
			Assignment placed = limited ? select_limited_gang(cands, m)
			                            : select_gang_fjp(cands, m);

			// (owner, free processors) of every span materialized this quantum
			std::vector<std::pair<int, std::vector<int>>> servers;
			std::vector<int> outer_now;
			std::vector<bool> outer_placed(jobs.size(), false);

			for (std::size_t c = 0; c < placed.size(); c++) {
				if (placed[c].empty())
					continue;
				int j = cand_jobs[c];
				outer_now.push_back(j);
				outer_placed[static_cast<std::size_t>(j)] = true;
				JobRt& r = rt[static_cast<std::size_t>(j)];
				if (!r.started) {
					r.started = true;
					out.events.push_back({t, EventKind::Start, j});
				}
				if (r.rem_actual > 0) {
					for (int p : placed[c])
						trace.exec[trace.at(t, p)] = j;
					out.executed[static_cast<std::size_t>(j)]++;
					r.rem_actual--;
					r.rem_virtual--;
				} else {
					// actual work done, virtual budget keeps the processors:
					// idle reservation or slack-server rectangle
					SpanKind kind = opts.policy == Policy::SlackReclaiming
						? SpanKind::Server : SpanKind::Reservation;
					for (int p : placed[c]) {
						trace.cover[trace.at(t, p)] = j;
						trace.kind[trace.at(t, p)] = kind;
					}
					if (!r.spawn_logged) {
						r.spawn_logged = true;
						out.events.push_back(
							{t,
							 kind == SpanKind::Server ? EventKind::ServerSpawn
							                          : EventKind::ReservationStart,
							 j, -1, r.rem_virtual});
					}
					if (kind == SpanKind::Server)
						servers.emplace_back(j, placed[c]);
					r.rem_virtual--;
				}
			}

			// slack servers feed ready jobs of lower priority and fitting width;
			// the outer scheduler's claims for this quantum were taken first
			std::vector<bool> inner_claimed(jobs.size(), false);
			for (auto& [owner, free_procs] : servers) {
				for (int j : active) {
					if (j <= owner || outer_placed[static_cast<std::size_t>(j)]
					    || inner_claimed[static_cast<std::size_t>(j)])
						continue;
					JobRt& r = rt[static_cast<std::size_t>(j)];
					if (r.rem_actual <= 0)
						continue;
					if (jobs[j].width > static_cast<int>(free_procs.size()))
						continue;
					for (int i = 0; i < jobs[j].width; i++) {
						int p = free_procs.front();
						free_procs.erase(free_procs.begin());
						trace.exec[trace.at(t, p)] = j;
					}
					inner_claimed[static_cast<std::size_t>(j)] = true;
					out.executed[static_cast<std::size_t>(j)]++;
					r.rem_actual--;
				}
			}

			// preemption = held outer processors last quantum, still active, lost them
			for (int j : prev_outer) {
				if (!rt[static_cast<std::size_t>(j)].departed
				    && !outer_placed[static_cast<std::size_t>(j)])
					out.events.push_back({t, EventKind::Preemption, j});
			}

			// priority inversion: lower-priority job running at the outer level
			// while a higher-priority active job is not
			for (int starved : active) {
				if (outer_placed[static_cast<std::size_t>(starved)])
					continue;
				for (int running : outer_now)
					if (running > starved)
						out.events.push_back(
							{t, EventKind::Inversion, running, starved});
			}

			// departures at instant t+1
			for (int j : outer_now) {
				JobRt& r = rt[static_cast<std::size_t>(j)];
				dtime_t left = uses_virtual() ? r.rem_virtual : r.rem_actual;
				if (left == 0) {
					r.departed = true;
					active.erase(j);
					out.completion[static_cast<std::size_t>(j)] = t + 1;
					out.events.push_back({t + 1, EventKind::Completion, j});
				}
			}
			prev_outer = std::move(outer_now);
		}

		void Engine::run(dtime_t horizon)
		{
			std::size_t next_digest = 0;
			for (dtime_t t = 0;; t++) {
				bool missed = record_misses_at(t);
				if (missed && opts.stop_on_first_miss) {
					out.stopped_on_miss = true;
					out.end_time = t;
					out.final_state = capture_digest(t);
					return;
				}
				release_jobs_at(t);
				while (next_digest < opts.digest_at.size()
				       && opts.digest_at[next_digest] == t) {
					out.digests.push_back(capture_digest(t));
					next_digest++;
				}
				if (t == horizon) {
					out.end_time = t;
					out.final_state = capture_digest(t);
					return;
				}
				dispatch_quantum(t);
			}
		}

	}

	static SimResult simulate_impl(std::vector<Job> jobs, const ExecutionProfile& profile,
	                        int m, dtime_t horizon, const SimOptions& opts,
	                        const std::vector<Task>* tasks)
	{
		if (m < 1)
			throw std::invalid_argument("platform needs m >= 1");
		if (horizon < 0)
			throw std::invalid_argument("horizon must be >= 0");
		if (horizon > horizon_cap())
			throw HorizonError("HorizonOverflow: horizon "
			                   + std::to_string(horizon) + " exceeds cap "
			                   + std::to_string(horizon_cap())
			                   + " (set GANGSCHED_HORIZON_CAP to raise it)");
		for (std::size_t j = 1; j < jobs.size(); j++)
			if (!jobs[j - 1].higher_priority_than(jobs[j]))
				throw std::invalid_argument(
					"jobs must be in strict priority order");
		validate_profile(profile, jobs);
		for (const auto& j : jobs)
			if (j.width > m)
				throw std::invalid_argument(
					"job " + j.ref() + " wider than the platform");

		SimResult out;
		out.policy = opts.policy;
		out.m = m;
		out.jobs = std::move(jobs);
		out.actual.reserve(out.jobs.size());
		for (std::size_t j = 0; j < out.jobs.size(); j++)
			out.actual.push_back(profile.of(j, out.jobs));
		out.trace.m = m;
		out.completion.assign(out.jobs.size(), std::nullopt);
		out.executed.assign(out.jobs.size(), 0);

		Engine eng{tasks, opts, m, out, {}, {}, {}, 0, {}, {}};
		eng.rt.assign(out.jobs.size(), {});
		eng.by_release.resize(out.jobs.size());
		for (std::size_t j = 0; j < out.jobs.size(); j++)
			eng.by_release[j] = static_cast<int>(j);
		std::stable_sort(eng.by_release.begin(), eng.by_release.end(),
		                 [&](int a, int b) {
			                 return out.jobs[a].release < out.jobs[b].release;
		                 });
		if (tasks)
			eng.cur_job_of_task.assign(tasks->size(), -1);

		eng.run(horizon);
		return out;
	}

	SimResult simulate(std::vector<Job> jobs, const ExecutionProfile& profile,
	                   int m, dtime_t horizon, const SimOptions& opts)
	{
		return simulate_impl(std::move(jobs), profile, m, horizon, opts, nullptr);
	}

	std::vector<Job> jobs_within(const TaskSet& ts, dtime_t horizon)
	{
		// releases at exactly `horizon` are part of the end-of-run state
		return generate_jobs(ts, checked_add(horizon, 1));
	}

	SimResult simulate(const TaskSet& ts, const ExecutionProfile& profile,
	                   dtime_t horizon, const SimOptions& opts)
	{
		validate_or_throw(ts);
		return simulate_impl(jobs_within(ts, horizon), profile,
		                     ts.platform.proc_count, horizon, opts, &ts.tasks);
	}

	StartFinish start_finish_times(const SimResult& result, int job)
	{
		StartFinish sf;
		for (const auto& e : result.events) {
			if (e.job != job)
				continue;
			if (e.kind == EventKind::Start && !sf.start)
				sf.start = e.t;
			if (e.kind == EventKind::Completion)
				sf.finish = e.t;
		}
		return sf;
	}

	void check_sim_invariants(const SimResult& result)
	{
		const Trace& trace = result.trace;
		const auto& jobs = result.jobs;
		auto fail = [](const std::string& msg) {
			throw std::logic_error("trace invariant violated: " + msg);
		};

		std::vector<dtime_t> exec_quanta(jobs.size(), 0);
		std::vector<int> count(jobs.size());
		for (dtime_t t = 0; t < trace.horizon(); t++) {
			std::fill(count.begin(), count.end(), 0);
			std::vector<int> cover_count(jobs.size(), 0);
			for (int p = 0; p < trace.m; p++) {
				int e = trace.exec[trace.at(t, p)];
				int c = trace.cover[trace.at(t, p)];
				if (e != kIdle)
					count[static_cast<std::size_t>(e)]++;
				if (c != kIdle)
					cover_count[static_cast<std::size_t>(c)]++;
				if (e != kIdle && e == c)
					fail("job served inside its own span");
			}
			for (std::size_t j = 0; j < jobs.size(); j++) {
				// gang property: all width positions or none
				if (count[j] != 0 && count[j] != jobs[j].width)
					fail(jobs[j].ref() + " executes on " + std::to_string(count[j])
					     + " processors at t=" + std::to_string(t)
					     + ", width is " + std::to_string(jobs[j].width));
				if (cover_count[j] != 0 && cover_count[j] != jobs[j].width)
					fail(jobs[j].ref() + " span covers " + std::to_string(cover_count[j])
					     + " processors at t=" + std::to_string(t));
				if (count[j] > 0)
					exec_quanta[j]++;
				bool busy = count[j] > 0 || cover_count[j] > 0;
				if (busy && t < jobs[j].release)
					fail(jobs[j].ref() + " serviced before release at t="
					     + std::to_string(t));
				if (busy && result.completion[j] && t >= *result.completion[j])
					fail(jobs[j].ref() + " serviced after completion at t="
					     + std::to_string(t));
			}
		}
		for (std::size_t j = 0; j < jobs.size(); j++) {
			if (exec_quanta[j] != result.executed[j])
				fail(jobs[j].ref() + " trace/accounting mismatch");
			// work conservation for completed jobs
			if (result.completion[j] && exec_quanta[j] != result.actual[j])
				fail(jobs[j].ref() + " executed " + std::to_string(exec_quanta[j])
				     + " quanta, profile says " + std::to_string(result.actual[j]));
		}
	}

}
