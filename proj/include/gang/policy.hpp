#ifndef GANG_POLICY_HPP
#define GANG_POLICY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gang {

	enum class Policy {
		GangFjp,         // greedy scan, skipped jobs do not stop the scan
		Limited,         // scan stops at the first job that does not fit
		Idling,          // gang-fjp + processors held idle after early completion
		SlackReclaiming, // gang-fjp + slack servers fed by early completions
	};

	const char* policy_name(Policy p);
	std::optional<Policy> parse_policy(const std::string& name);

	// One dispatch candidate, in priority order (index 0 = highest).
	struct Candidate {
		int job = 0; // caller-side handle, echoed back in the assignment
		int width = 1;
	};

	// Processor sets per candidate, same order; empty set = not scheduled.
	// Processors are 0-based here; sets are pairwise disjoint and each
	// scheduled candidate holds exactly `width` of them (gang property).
	using Assignment = std::vector<std::vector<int>>;

	// Scan by priority; each job takes the lowest-indexed free processors iff
	// enough are free, otherwise it is skipped and the scan continues.
	Assignment select_gang_fjp(std::span<const Candidate> active, int m);

	// Same placement rule, but the scan stops at the first job that does not
	// fit, so the scheduled set is always a priority-prefix of the active list.
	Assignment select_limited_gang(std::span<const Candidate> active, int m);

	// Level availability: the free-processor count if it suffices for a job
	// of the given width, else 0.
	int level_availability(int available, int width);

	// Limited level availability for every level 1..n, evaluated along the
	// limited-gang placement of the given widths on an initially empty
	// machine: once a level fails to fit, all deeper levels report 0.
	std::vector<int> limited_level_availability(int m, std::span<const int> widths);

}

#endif
