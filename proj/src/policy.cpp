#include "gang/policy.hpp"

namespace gang {

	const char* policy_name(Policy p)
	{
		switch (p) {
		case Policy::GangFjp:         return "gang-fjp";
		case Policy::Limited:         return "limited";
		case Policy::Idling:          return "idling";
		case Policy::SlackReclaiming: return "slack-reclaiming";
		}
		return "?";
	}

	std::optional<Policy> parse_policy(const std::string& name)
	{
		if (name == "gang-fjp")
			return Policy::GangFjp;
		if (name == "limited")
			return Policy::Limited;
		if (name == "idling")
			return Policy::Idling;
		if (name == "slack-reclaiming")
			return Policy::SlackReclaiming;
		return std::nullopt;
	}

	static Assignment select(std::span<const Candidate> active, int m,
	                         bool stop_at_first_misfit)
	{
		Assignment out(active.size());
		std::vector<bool> busy(static_cast<std::size_t>(m), false);
		int free_count = m;

		for (std::size_t i = 0; i < active.size(); i++) {
			if (active[i].width > free_count) {
				if (stop_at_first_misfit)
					break;
				continue;
			}
			auto& procs = out[i];
			procs.reserve(static_cast<std::size_t>(active[i].width));
			for (int p = 0; p < m && static_cast<int>(procs.size()) < active[i].width; p++) {
				if (!busy[static_cast<std::size_t>(p)]) {
					busy[static_cast<std::size_t>(p)] = true;
					procs.push_back(p);
				}
			}
			free_count -= active[i].width;
		}
		return out;
	}

	Assignment select_gang_fjp(std::span<const Candidate> active, int m)
	{
		return select(active, m, false);
	}

	Assignment select_limited_gang(std::span<const Candidate> active, int m)
	{
		return select(active, m, true);
	}

	int level_availability(int available, int width)
	{
		return available >= width ? available : 0;
	}

	std::vector<int> limited_level_availability(int m, std::span<const int> widths)
	{
		std::vector<int> out;
		out.reserve(widths.size());
		int available = m;
		bool alive = true;
		for (int v : widths) {
			if (alive && available >= v) {
				out.push_back(available);
				available -= v;
			} else {
				out.push_back(0);
				alive = false;
			}
		}
		return out;
	}

}
