#ifndef GANG_TRACE_HPP
#define GANG_TRACE_HPP

#include <span>
#include <vector>

#include "gang/model.hpp"

namespace gang {

	// Slot sentinel: no job on this processor at this time.
	constexpr int kIdle = -1;

	enum class SpanKind : unsigned char {
		None = 0,
		Reservation, // idling variant: processors held idle after early completion
		Server,      // slack-reclaiming variant: reclaimed rectangle serving jobs
	};

	// The schedule as a quantum-by-processor grid. `exec` holds the job that
	// actually executes in a slot (outer-level work, or service inside a slack
	// server); `cover` holds the job whose reservation or server occupies the
	// slot. A covered slot with exec == kIdle is idle machine time from the
	// executing point of view, but the processor is not available.
	struct Trace {
		int m = 0;
		std::vector<int> exec;
		std::vector<int> cover;
		std::vector<SpanKind> kind;

		dtime_t horizon() const
		{
			return m == 0 ? 0 : static_cast<dtime_t>(exec.size()) / m;
		}

		void append_quantum()
		{
			exec.resize(exec.size() + static_cast<std::size_t>(m), kIdle);
			cover.resize(cover.size() + static_cast<std::size_t>(m), kIdle);
			kind.resize(kind.size() + static_cast<std::size_t>(m), SpanKind::None);
		}

		std::size_t at(dtime_t t, int p) const
		{
			return static_cast<std::size_t>(t) * static_cast<std::size_t>(m)
			       + static_cast<std::size_t>(p);
		}

		// sigma(t): the m-vector of executing jobs.
		std::span<const int> slot(dtime_t t) const
		{
			return {exec.data() + at(t, 0), static_cast<std::size_t>(m)};
		}

		// Outer-level occupancy: the job either executes outside any span, or
		// the span it owns covers the slot.
		bool outer_occupies(int job, dtime_t t) const;
		std::vector<int> outer_procs(int job, dtime_t t) const; // 0-based

		bool operator==(const Trace&) const = default;
	};

	// Available processors of a slot, as 1-based indices.
	std::vector<int> availability(std::span<const int> slot);

}

#endif
