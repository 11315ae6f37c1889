#include "gang/trace.hpp"

namespace gang {

	bool Trace::outer_occupies(int job, dtime_t t) const
	{
		for (int p = 0; p < m; p++) {
			std::size_t i = at(t, p);
			if (cover[i] == job)
				return true;
			if (exec[i] == job && cover[i] == kIdle)
				return true;
		}
		return false;
	}

	std::vector<int> Trace::outer_procs(int job, dtime_t t) const
	{
		std::vector<int> procs;
		for (int p = 0; p < m; p++) {
			std::size_t i = at(t, p);
			if (cover[i] == job || (exec[i] == job && cover[i] == kIdle))
				procs.push_back(p);
		}
		return procs;
	}

	std::vector<int> availability(std::span<const int> slot)
	{
		std::vector<int> out;
		for (std::size_t p = 0; p < slot.size(); p++)
			if (slot[p] == kIdle)
				out.push_back(static_cast<int>(p) + 1);
		return out;
	}

}
