#ifndef GANG_TEST_HELPERS_HPP
#define GANG_TEST_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "gang/analysis.hpp"
#include "gang/io.hpp"

namespace helpers {

	using namespace gang;

	inline Task task(std::string id, dtime_t offset, int width, dtime_t wcet,
	                 dtime_t deadline, dtime_t period)
	{
		return {std::move(id), offset, width, wcet, deadline, period};
	}

	inline Job job(int index, dtime_t release, int width, dtime_t wcet,
	               dtime_t deadline, std::string label = "")
	{
		Job j;
		j.task_index = index;
		j.instance = 1;
		j.release = release;
		j.width = width;
		j.wcet = wcet;
		j.deadline = deadline;
		j.label = label.empty() ? "J" + std::to_string(index + 1)
		                        : std::move(label);
		return j;
	}

	// three tasks whose gang-FTP schedule shows a priority inversion at t=0
	inline TaskSet inversion_tasks()
	{
		TaskSet ts;
		ts.platform.proc_count = 3;
		ts.tasks = {task("T1", 0, 2, 2, 5, 5),
		            task("T2", 0, 2, 3, 5, 5),
		            task("T3", 0, 1, 4, 5, 5)};
		return ts;
	}

	// three-job counterexample where shrinking J1 delays J3 past its deadline
	inline std::vector<Job> counterexample_jobs()
	{
		return {job(0, 0, 1, 3, 3), job(1, 0, 2, 1, 4), job(2, 0, 1, 2, 2)};
	}
	constexpr int kCounterexampleM = 2;

	// six synchronous jobs used for the slack-server walkthrough
	inline std::vector<Job> slack_jobs()
	{
		return {job(0, 0, 2, 3, 6), job(1, 0, 3, 1, 6), job(2, 0, 1, 2, 6),
		        job(3, 0, 1, 2, 6), job(4, 0, 2, 2, 6), job(5, 0, 1, 1, 6)};
	}
	constexpr int kSlackM = 3;

	inline ExecutionProfile profile(std::vector<dtime_t> actual)
	{
		ExecutionProfile p;
		p.actual = std::move(actual);
		return p;
	}

	inline dtime_t settle_horizon(const std::vector<Job>& jobs)
	{
		dtime_t h = 0;
		for (const auto& j : jobs)
			h = std::max(h, j.release);
		for (const auto& j : jobs)
			h += j.wcet;
		return h + 1;
	}

	inline SimResult sim_jobs(std::vector<Job> jobs, int m, Policy policy,
	                          const ExecutionProfile& prof = {},
	                          dtime_t horizon = -1)
	{
		if (horizon < 0)
			horizon = settle_horizon(jobs);
		SimOptions opts;
		opts.policy = policy;
		return simulate(std::move(jobs), prof, m, horizon, opts);
	}

	inline std::vector<std::string> exec_row(const SimResult& r, dtime_t t)
	{
		std::vector<std::string> out;
		for (int p = 0; p < r.m; p++) {
			int j = r.trace.exec[r.trace.at(t, p)];
			out.push_back(j < 0 ? "0" : r.jobs[static_cast<std::size_t>(j)].ref());
		}
		return out;
	}

	inline std::vector<std::string> cover_row(const SimResult& r, dtime_t t)
	{
		std::vector<std::string> out;
		for (int p = 0; p < r.m; p++) {
			int j = r.trace.cover[r.trace.at(t, p)];
			out.push_back(j < 0 ? "0" : r.jobs[static_cast<std::size_t>(j)].ref());
		}
		return out;
	}

	inline int job_named(const SimResult& r, const std::string& ref)
	{
		for (std::size_t j = 0; j < r.jobs.size(); j++)
			if (r.jobs[j].ref() == ref)
				return static_cast<int>(j);
		return -1;
	}

	// --- randomized instances -------------------------------------------------

	inline dtime_t pick(std::mt19937_64& rng, dtime_t lo, dtime_t hi)
	{
		return lo + static_cast<dtime_t>(
			rng() % static_cast<std::uint64_t>(hi - lo + 1));
	}

	struct JobSetInstance {
		std::vector<Job> jobs;
		std::vector<dtime_t> e_min;
		int m = 1;
	};

	// n <= 4 jobs, widths <= m <= 4, wcet <= 4, profile space <= 4^4
	inline JobSetInstance random_job_set(std::mt19937_64& rng,
	                                     bool tight_deadlines = false)
	{
		JobSetInstance inst;
		inst.m = static_cast<int>(pick(rng, 1, 4));
		int n = static_cast<int>(pick(rng, 1, 4));
		dtime_t budget = 0;
		for (int i = 0; i < n; i++) {
			Job j = job(i, pick(rng, 0, 4),
			            static_cast<int>(pick(rng, 1, inst.m)),
			            pick(rng, 1, 4), 0);
			budget += j.wcet;
			inst.jobs.push_back(std::move(j));
		}
		for (auto& j : inst.jobs) {
			dtime_t latest = 4 + budget; // everything settles by then
			j.deadline = tight_deadlines
				? j.release + pick(rng, j.wcet, std::max(j.wcet, budget))
				: latest;
			inst.e_min.push_back(pick(rng, 1, j.wcet));
		}
		return inst;
	}

	// stable-sort by width and re-rank so the order is parallelism monotonic
	inline JobSetInstance pm_ordered(const JobSetInstance& inst)
	{
		JobSetInstance out = inst;
		std::vector<std::size_t> order(inst.jobs.size());
		for (std::size_t i = 0; i < order.size(); i++)
			order[i] = i;
		std::stable_sort(order.begin(), order.end(),
		                 [&](std::size_t a, std::size_t b) {
			                 return inst.jobs[a].width < inst.jobs[b].width;
		                 });
		out.jobs.clear();
		out.e_min.clear();
		for (std::size_t rank = 0; rank < order.size(); rank++) {
			Job j = inst.jobs[order[rank]];
			j.task_index = static_cast<int>(rank);
			out.jobs.push_back(std::move(j));
			out.e_min.push_back(inst.e_min[order[rank]]);
		}
		return out;
	}

	// small periodic sets with lcm of periods <= 120
	inline TaskSet random_task_set(std::mt19937_64& rng, bool async_offsets)
	{
		static const dtime_t periods[] = {2, 3, 4, 5, 6, 8, 10, 12};
		TaskSet ts;
		ts.platform.proc_count = static_cast<int>(pick(rng, 1, 4));
		int n = static_cast<int>(pick(rng, 1, 4));
		for (int i = 0; i < n; i++) {
			Task t;
			t.id = "T" + std::to_string(i + 1);
			t.period = periods[rng() % 8];
			t.deadline = pick(rng, 1, t.period);
			t.wcet = pick(rng, 1, t.deadline);
			t.width = static_cast<int>(pick(rng, 1, ts.platform.proc_count));
			t.offset = async_offsets ? pick(rng, 0, 7) : 0;
			ts.tasks.push_back(std::move(t));
		}
		return ts;
	}

	// profile drawn uniformly from [e_min, wcet] per job
	inline ExecutionProfile random_profile(std::mt19937_64& rng,
	                                       const std::vector<Job>& jobs,
	                                       const std::vector<dtime_t>& e_min)
	{
		ExecutionProfile p;
		for (std::size_t j = 0; j < jobs.size(); j++)
			p.actual.push_back(pick(rng, e_min[j], jobs[j].wcet));
		return p;
	}

}

#endif
