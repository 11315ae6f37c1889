#include "gang/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace gang {

	const char* violation_name(ViolationKind kind)
	{
		switch (kind) {
		case ViolationKind::DeadlineExceedsPeriod:    return "DeadlineExceedsPeriod";
		case ViolationKind::WidthExceedsPlatform:     return "WidthExceedsPlatform";
		case ViolationKind::NonPositiveField:         return "NonPositiveField";
		case ViolationKind::DuplicateId:              return "DuplicateId";
		case ViolationKind::ExecutionExceedsDeadline: return "ExecutionExceedsDeadline";
		case ViolationKind::EmptyTaskSet:             return "EmptyTaskSet";
		case ViolationKind::InvalidId:                return "InvalidId";
		}
		return "?";
	}

	static std::string join_messages(const std::vector<Violation>& vs)
	{
		std::ostringstream out;
		out << "invalid task set:";
		for (const auto& v : vs)
			out << "\n  [" << violation_name(v.kind) << "] " << v.message;
		return out.str();
	}

	ValidationError::ValidationError(std::vector<Violation> vs)
	: std::runtime_error(join_messages(vs)), violations(std::move(vs))
	{
	}

	std::vector<Violation> validate(const TaskSet& ts)
	{
		std::vector<Violation> out;
		auto add = [&out](ViolationKind kind, const std::string& id,
		                  const std::string& msg) {
			out.push_back({kind, id, msg});
		};

		if (ts.platform.proc_count < 1)
			add(ViolationKind::NonPositiveField, "",
			    "platform needs at least one processor, got m="
			    + std::to_string(ts.platform.proc_count));
		if (ts.tasks.empty())
			add(ViolationKind::EmptyTaskSet, "", "task set has no tasks");

		std::set<std::string> seen;
		for (const auto& t : ts.tasks) {
			if (t.id.empty() || t.id == "0"
			    || t.id.find_first_of(",#\n") != std::string::npos)
				add(ViolationKind::InvalidId, t.id,
				    "task id '" + t.id + "' is empty, reserved, or contains ',', '#' or newline");
			if (!seen.insert(t.id).second)
				add(ViolationKind::DuplicateId, t.id,
				    "duplicate task id '" + t.id + "'");

			if (t.offset < 0)
				add(ViolationKind::NonPositiveField, t.id,
				    t.id + ": offset must be >= 0");
			if (t.width < 1)
				add(ViolationKind::NonPositiveField, t.id,
				    t.id + ": width must be >= 1");
			if (t.wcet < 1)
				add(ViolationKind::NonPositiveField, t.id,
				    t.id + ": execution requirement must be >= 1");
			if (t.deadline < 1)
				add(ViolationKind::NonPositiveField, t.id,
				    t.id + ": deadline must be >= 1");
			if (t.period < 1)
				add(ViolationKind::NonPositiveField, t.id,
				    t.id + ": period must be >= 1");

			if (t.deadline > t.period)
				add(ViolationKind::DeadlineExceedsPeriod, t.id,
				    t.id + ": deadline " + std::to_string(t.deadline)
				    + " exceeds period " + std::to_string(t.period));
			if (t.wcet > t.deadline)
				add(ViolationKind::ExecutionExceedsDeadline, t.id,
				    t.id + ": execution requirement " + std::to_string(t.wcet)
				    + " exceeds deadline " + std::to_string(t.deadline)
				    + " (first job can never finish in time)");
			if (t.width > ts.platform.proc_count)
				add(ViolationKind::WidthExceedsPlatform, t.id,
				    t.id + ": width " + std::to_string(t.width)
				    + " exceeds platform size m="
				    + std::to_string(ts.platform.proc_count));
		}
		return out;
	}

	void validate_or_throw(const TaskSet& ts)
	{
		auto vs = validate(ts);
		if (!vs.empty())
			throw ValidationError(std::move(vs));
	}

	std::vector<Job> generate_jobs(const TaskSet& ts, dtime_t horizon)
	{
		std::vector<Job> jobs;
		for (std::size_t i = 0; i < ts.tasks.size(); i++) {
			const Task& t = ts.tasks[i];
			for (dtime_t k = 1;; k++) {
				dtime_t release = checked_add(
					t.offset, checked_mul(k - 1, t.period));
				if (release >= horizon)
					break;
				Job j;
				j.task_index = static_cast<int>(i);
				j.instance = k;
				j.release = release;
				j.width = t.width;
				j.wcet = t.wcet;
				j.deadline = checked_add(release, t.deadline);
				j.label = t.id;
				jobs.push_back(std::move(j));
			}
		}
		std::sort(jobs.begin(), jobs.end(),
		          [](const Job& a, const Job& b) {
			          return a.higher_priority_than(b);
		          });
		return jobs;
	}

	bool is_parallelism_monotonic(const TaskSet& ts)
	{
		for (std::size_t i = 1; i < ts.tasks.size(); i++)
			if (ts.tasks[i - 1].width > ts.tasks[i].width)
				return false;
		return true;
	}

	dtime_t hyperperiod(const TaskSet& ts)
	{
		dtime_t p = 1;
		for (const auto& t : ts.tasks)
			p = checked_lcm(p, t.period);
		return p;
	}

	std::vector<dtime_t> stabilization_points(const TaskSet& ts)
	{
		std::vector<dtime_t> s;
		s.reserve(ts.tasks.size());
		for (const auto& t : ts.tasks) {
			if (s.empty()) {
				s.push_back(t.offset);
				continue;
			}
			// first release of this task not before S_{i-1}
			dtime_t steps = ceil_div(s.back() - t.offset, t.period);
			dtime_t aligned = checked_add(
				t.offset, checked_mul(steps, t.period));
			s.push_back(std::max(t.offset, aligned));
		}
		return s;
	}

	ExecutionProfile ExecutionProfile::worst_case(const std::vector<Job>& jobs)
	{
		ExecutionProfile p;
		p.actual.reserve(jobs.size());
		for (const auto& j : jobs)
			p.actual.push_back(j.wcet);
		return p;
	}

	void validate_profile(const ExecutionProfile& profile,
	                      const std::vector<Job>& jobs)
	{
		if (profile.actual.empty())
			return; // empty profile stands for worst case
		if (profile.actual.size() != jobs.size())
			throw std::invalid_argument(
				"execution profile covers " + std::to_string(profile.actual.size())
				+ " jobs, schedule has " + std::to_string(jobs.size()));
		for (std::size_t i = 0; i < jobs.size(); i++) {
			dtime_t e = profile.actual[i];
			if (e < 1 || e > jobs[i].wcet)
				throw std::invalid_argument(
					"actual execution " + std::to_string(e) + " of job "
					+ jobs[i].ref() + " outside [1, "
					+ std::to_string(jobs[i].wcet) + "]");
		}
	}

}
