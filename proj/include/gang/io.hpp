#ifndef GANG_IO_HPP
#define GANG_IO_HPP

#include <string>
#include <vector>

#include "gang/engine.hpp"

namespace gang {

	// Parse/serialize failure with line and field context in the message.
	class ParseError : public std::runtime_error {
	public:
		using std::runtime_error::runtime_error;
	};

	struct TaskEntry {
		std::string id;
		dtime_t offset = 0;
		int width = 1;
		dtime_t wcet = 1;
		dtime_t deadline = 1;
		dtime_t period = 1;
		dtime_t e_min = 0; // 0 = not given; fuzzing then assumes 1

		bool operator==(const TaskEntry&) const = default;
	};

	// On-disk task-set description. `priority` is "declared", "rm", "dm",
	// "pm-sort", or "explicit" with the order spelled out in
	// `priority_order`; it is resolved into the task order before analysis.
	struct TaskSetDocument {
		int version = 1;
		int m = 1;
		std::string priority = "declared";
		std::vector<std::string> priority_order;
		std::vector<TaskEntry> tasks; // declared order

		bool operator==(const TaskSetDocument&) const = default;
	};

	TaskSetDocument parse_task_set(const std::string& text);
	std::string serialize_task_set(const TaskSetDocument& doc);

	struct ResolvedTaskSet {
		TaskSet ts;                 // priority directive applied, validated
		std::vector<dtime_t> e_min; // per task, aligned with ts.tasks
	};

	ResolvedTaskSet resolve_task_set(const TaskSetDocument& doc);

	// Execution-profile file: {"version":1,"actual":{"T1":2,"T1#2":1,...}}.
	// Jobs not named keep their worst case.
	ExecutionProfile parse_profile(const std::string& text,
	                               const std::vector<Job>& jobs);

	// Self-describing trace file contents.
	struct TraceDoc {
		int version = 1;
		int m = 0;
		std::string policy;

		struct JobMeta {
			std::string ref;   // unique, e.g. "T1#3"
			std::string label; // task id (CSV cell value)
			dtime_t release = 0;
			int width = 1;
			dtime_t wcet = 1;
			dtime_t actual = 1;
			dtime_t deadline = 0;

			bool operator==(const JobMeta&) const = default;
		};
		std::vector<JobMeta> jobs;

		// executing job per slot as index into `jobs`, -1 = idle
		std::vector<std::vector<int>> slots;

		struct Span {
			int job = -1;          // owner, index into jobs
			std::string kind;      // "server" | "reservation"
			std::vector<int> procs; // 1-based
			dtime_t from = 0, until = 0; // [from, until)

			bool operator==(const Span&) const = default;
		};
		std::vector<Span> spans;

		struct Miss {
			int job = -1;
			dtime_t t = 0;

			bool operator==(const Miss&) const = default;
		};
		std::vector<Miss> misses;

		bool operator==(const TraceDoc&) const = default;
	};

	TraceDoc make_trace_doc(const SimResult& result);
	std::string serialize_trace(const TraceDoc& doc);
	TraceDoc parse_trace(const std::string& text);

	// CSV view: header `t,p1..pm`, one row per quantum, labels or 0.
	std::string trace_to_csv(const TraceDoc& doc);

	struct LabelGrid {
		int m = 0;
		std::vector<std::vector<std::string>> rows; // "0" = idle

		bool operator==(const LabelGrid&) const = default;
	};

	LabelGrid csv_to_grid(const std::string& csv);
	LabelGrid grid_of(const TraceDoc& doc);
	std::string grid_to_csv(const LabelGrid& grid);

	// Static Gantt chart: one lane per processor, one rectangle per maximal
	// run of a job, server/reservation spans shaded gray, misses marked red.
	std::string trace_to_svg(const TraceDoc& doc);

	// SVG for a bare CSV re-import (labels only, no spans or misses).
	std::string grid_to_svg(const LabelGrid& grid);

}

#endif
