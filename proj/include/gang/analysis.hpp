#ifndef GANG_ANALYSIS_HPP
#define GANG_ANALYSIS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gang/engine.hpp"

namespace gang {

	class AnalysisError : public std::runtime_error {
	public:
		enum class Kind {
			PolicyNotPredictable,
			WindowOverflow,
			ProfileSpaceTooLarge,
			NotSchedulable,
		};

		AnalysisError(Kind kind, const std::string& what)
		: std::runtime_error(what), kind(kind)
		{
		}

		const Kind kind;
	};

	struct Verdict {
		bool schedulable = false;
		// set when a non-PM gang-fjp run was forced: the verdict only covers
		// the worst-case profile, not every execution scenario
		bool worst_case_only = false;

		enum class Witness { None, DeadlineMiss, StateMismatch };
		Witness witness = Witness::None;

		// deadline-miss witness
		std::string miss_task;
		dtime_t miss_instance = 0;
		dtime_t miss_t = 0;

		// state-mismatch witness
		Digest digest_start, digest_end;

		std::vector<dtime_t> stabilization; // S_1..S_n
		dtime_t hyperperiod = 0;            // P
		dtime_t window_end = 0;             // S_n + P
	};

	// Exact test: simulate the worst case over [0, S_n + P];
	// schedulable iff no deadline miss in the window and the state digests at
	// S_n and S_n + P are equal. Plain gang-fjp without a parallelism-monotonic
	// order is refused unless forced (the iff needs a predictable policy).
	Verdict exact_schedulability_test(const TaskSet& ts, Policy policy,
	                                  bool force_fjp = false);

	struct PeriodicityReport {
		bool periodic = false;
		dtime_t first_divergence = 0; // meaningful when !periodic
		dtime_t from = 0;             // S_n
		dtime_t period = 0;           // P
	};

	// Checks sigma(t) == sigma(t+P) for all t in [S_n, S_n+P) on a worst-case
	// simulation of [0, S_n+2P). Callers should establish schedulability first.
	PeriodicityReport verify_schedule_periodicity(const TaskSet& ts, Policy policy);

	enum class ProbeStrategy { Exhaustive, Random };

	enum class ProbeBound { StartLow, StartHigh, FinishLow, FinishHigh };

	const char* probe_bound_name(ProbeBound bound);

	struct ProbeViolation {
		std::vector<dtime_t> profile; // actual execution per job, all jobs
		int prefix = 0;               // i: first i jobs were simulated
		ProbeBound bound = ProbeBound::FinishHigh;
		dtime_t observed = 0;
		dtime_t limit = 0;

		bool operator==(const ProbeViolation&) const = default;
	};

	struct ProbeReport {
		bool applicable = false;          // some prefix has a schedulable J+
		std::vector<int> skipped_prefixes;
		std::vector<ProbeViolation> violations;
		std::uint64_t profiles_tested = 0;
		ProbeStrategy strategy = ProbeStrategy::Exhaustive;
		std::uint64_t seed = 0;

		bool operator==(const ProbeReport&) const = default;
	};

	struct ProbeOptions {
		ProbeStrategy strategy = ProbeStrategy::Exhaustive;
		std::uint64_t seed = 1;
		std::uint64_t count = 1000;        // profiles drawn by the random strategy
		std::uint64_t exhaustive_cap = 65536;
	};

	// Samples execution profiles with e_j in [e_min_j, wcet_j] and checks, for
	// every priority prefix with a schedulable worst case, that the prefix's
	// last job starts and finishes within the bounds set by the all-minimal and
	// all-maximal profiles. Violations replay deterministically from their
	// recorded profile. Profiles are evaluated concurrently (OpenMP) and the
	// report is merged in profile order, so output does not depend on timing.
	ProbeReport predictability_probe(const std::vector<Job>& jobs,
	                                 const std::vector<dtime_t>& e_min,
	                                 int m, Policy policy,
	                                 const ProbeOptions& opts = {});

	// Single-threaded reference driver with the identical contract; kept as
	// the oracle the parallel driver is tested against.
	ProbeReport predictability_probe_serial(const std::vector<Job>& jobs,
	                                        const std::vector<dtime_t>& e_min,
	                                        int m, Policy policy,
	                                        const ProbeOptions& opts = {});

	struct InversionRecord {
		dtime_t t = 0;
		int running = -1; // lower-priority job holding processors
		int starved = -1; // higher-priority active job left waiting

		bool operator==(const InversionRecord&) const = default;
	};

	// All (t, running, starved) with starved higher-priority, both active,
	// running occupying outer-level processors while starved does not.
	std::vector<InversionRecord> detect_priority_inversion(const SimResult& result);

	// Rebuilds the schedule a slack-reclaiming run would have produced had the
	// servers idled instead of serving: inner service is erased and each job's
	// outer occupancy is re-split into execution followed by reservation. The
	// result must equal the idling-variant trace of the same profile.
	Trace rewrite_as_idling(const SimResult& slack_result);

}

#endif
