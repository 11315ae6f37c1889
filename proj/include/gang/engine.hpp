#ifndef GANG_ENGINE_HPP
#define GANG_ENGINE_HPP

#include <array>
#include <optional>
#include <vector>

#include "gang/model.hpp"
#include "gang/policy.hpp"
#include "gang/trace.hpp"

namespace gang {

	class HorizonError : public std::runtime_error {
	public:
		using std::runtime_error::runtime_error;
	};

	// Cap on simulation horizons, overridable via GANGSCHED_HORIZON_CAP.
	dtime_t horizon_cap();

	enum class EventKind {
		Release,
		Start,        // first quantum of outer-level service
		Completion,   // departure instant; reservation-inclusive for idling/slack
		DeadlineMiss,
		Preemption,
		ServerSpawn,      // value = server length (slack-reclaiming)
		ReservationStart, // value = reservation length (idling)
		Inversion,        // job = running lower-priority, other = starved higher
		Abort,            // job overran into the next release of its task
	};

	const char* event_name(EventKind kind);

	struct Event {
		dtime_t t = 0;
		EventKind kind = EventKind::Release;
		int job = -1;
		int other = -1;
		dtime_t value = 0;

		bool operator==(const Event&) const = default;
	};

	// Canonical repeating-state value compared by the exact test. One entry
	// per task (periodic mode) or per job (job-set mode):
	// (remaining actual execution, remaining virtual budget, release phase).
	// Captured after release processing at the requested instant.
	struct Digest {
		dtime_t t = 0;
		std::vector<std::array<dtime_t, 3>> entries;

		bool same_state(const Digest& other) const
		{
			return entries == other.entries;
		}
	};

	struct SimOptions {
		Policy policy = Policy::GangFjp;
		bool stop_on_first_miss = false;
		std::vector<dtime_t> digest_at; // ascending instants in [0, horizon]
		// experimental: combine the limited scan with the idling or
		// slack-reclaiming variants; not covered by the exact test
		bool limited_scan = false;
	};

	struct SimResult {
		Policy policy = Policy::GangFjp;
		int m = 0;
		std::vector<Job> jobs;           // priority order; index = priority rank
		std::vector<dtime_t> actual;     // resolved execution profile
		Trace trace;
		std::vector<Event> events;
		std::vector<Digest> digests;
		std::vector<std::optional<dtime_t>> completion; // per job
		std::vector<dtime_t> executed;   // per job: real service received
		Digest final_state;              // state at end_time (post releases)
		bool stopped_on_miss = false;
		dtime_t end_time = 0;            // quanta simulated

		bool has_miss() const;
		std::optional<dtime_t> first_miss_at() const;
	};

	// Quantum-stepped deterministic simulation of a priority-ordered job list
	// on m processors. Same inputs always produce bit-identical results.
	SimResult simulate(std::vector<Job> jobs, const ExecutionProfile& profile,
	                   int m, dtime_t horizon, const SimOptions& opts = {});

	// The jobs taking part in a horizon-H simulation of a task set: all
	// releases up to and including H (the release at H belongs to the final
	// state even though it gets no processor time).
	std::vector<Job> jobs_within(const TaskSet& ts, dtime_t horizon);

	// Periodic-task entry point; digests per task rather than per job.
	SimResult simulate(const TaskSet& ts, const ExecutionProfile& profile,
	                   dtime_t horizon, const SimOptions& opts = {});

	struct StartFinish {
		std::optional<dtime_t> start;  // first outer-level quantum
		std::optional<dtime_t> finish; // departure; includes the idle reservation
	};

	// NeverStarted / not-finished come back as empty optionals.
	StartFinish start_finish_times(const SimResult& result, int job);

	// Asserts the structural trace invariants: the gang property, work
	// conservation, and no service outside [release, finish). Throws
	// std::logic_error naming the first violated invariant.
	void check_sim_invariants(const SimResult& result);

}

#endif
