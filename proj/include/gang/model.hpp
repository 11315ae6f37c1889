#ifndef GANG_MODEL_HPP
#define GANG_MODEL_HPP

#include <string>
#include <vector>

#include "gang/time.hpp"

namespace gang {

	struct Platform {
		int proc_count = 1; // m identical processors, indexed 1..m
	};

	// Periodic rigid task: every job needs exactly `width` processors at once.
	struct Task {
		std::string id;
		dtime_t offset = 0;   // first release
		int width = 1;        // processors required by every job
		dtime_t wcet = 1;     // worst-case execution requirement
		dtime_t deadline = 1; // relative, constrained (deadline <= period)
		dtime_t period = 1;

		bool operator==(const Task&) const = default;
	};

	// Tasks are listed in fixed-priority order: lower index = higher priority.
	struct TaskSet {
		std::vector<Task> tasks;
		Platform platform;
	};

	// One released instance. For finite job sets (no generating task) the
	// priority is the position in the list and `instance` is 1.
	struct Job {
		int task_index = 0;    // FTP priority level of the generating task
		dtime_t instance = 1;  // k-th job of its task, k >= 1
		dtime_t release = 0;
		int width = 1;
		dtime_t wcet = 1;
		dtime_t deadline = 0;  // absolute
		std::string label;     // display name: task id, or job id for job sets

		// FJP priority: (task_index, instance), lexicographic, lower = higher.
		bool higher_priority_than(const Job& other) const
		{
			return task_index < other.task_index
			       || (task_index == other.task_index
			           && instance < other.instance);
		}

		// Unique name, e.g. "T1#3" for periodic jobs, plain id for job sets.
		std::string ref() const
		{
			if (instance == 1)
				return label;
			return label + "#" + std::to_string(instance);
		}

		bool operator==(const Job&) const = default;
	};

	enum class ViolationKind {
		DeadlineExceedsPeriod,
		WidthExceedsPlatform,
		NonPositiveField,
		DuplicateId,
		ExecutionExceedsDeadline,
		EmptyTaskSet,
		InvalidId,
	};

	struct Violation {
		ViolationKind kind;
		std::string task_id; // empty when the violation is set-wide
		std::string message;
	};

	const char* violation_name(ViolationKind kind);

	class ValidationError : public std::runtime_error {
	public:
		explicit ValidationError(std::vector<Violation> violations);
		const std::vector<Violation> violations;
	};

	// Empty result means every Task/TaskSet invariant holds.
	std::vector<Violation> validate(const TaskSet& ts);
	// Throws ValidationError listing every violation.
	void validate_or_throw(const TaskSet& ts);

	// All jobs with release < horizon, in priority order.
	std::vector<Job> generate_jobs(const TaskSet& ts, dtime_t horizon);

	// True iff widths are non-decreasing along the priority order.
	bool is_parallelism_monotonic(const TaskSet& ts);

	// lcm of all periods; throws OverflowError rather than wrapping.
	dtime_t hyperperiod(const TaskSet& ts);

	// Stabilization points S_1..S_n: S_1 = O_1 and
	// S_i = max(O_i, O_i + ceil((S_{i-1} - O_i) / T_i) * T_i).
	std::vector<dtime_t> stabilization_points(const TaskSet& ts);

	// Actual execution time per job, aligned with a priority-ordered job list.
	// Every entry satisfies 1 <= e <= wcet of the corresponding job.
	struct ExecutionProfile {
		std::vector<dtime_t> actual;

		static ExecutionProfile worst_case(const std::vector<Job>& jobs);

		dtime_t of(std::size_t job, const std::vector<Job>& jobs) const
		{
			return actual.empty() ? jobs[job].wcet : actual[job];
		}
	};

	void validate_profile(const ExecutionProfile& profile,
	                      const std::vector<Job>& jobs);

}

#endif
