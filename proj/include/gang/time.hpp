#ifndef GANG_TIME_HPP
#define GANG_TIME_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gang {

	// Discrete time: the unit quantum. All task parameters are non-negative integers.
	using dtime_t = std::int64_t;

	class OverflowError : public std::runtime_error {
	public:
		explicit OverflowError(const std::string& what)
		: std::runtime_error(what)
		{
		}
	};

	inline dtime_t checked_add(dtime_t a, dtime_t b)
	{
		dtime_t r;
		if (__builtin_add_overflow(a, b, &r))
			throw OverflowError("integer overflow in " + std::to_string(a)
			                    + " + " + std::to_string(b));
		return r;
	}

	inline dtime_t checked_mul(dtime_t a, dtime_t b)
	{
		dtime_t r;
		if (__builtin_mul_overflow(a, b, &r))
			throw OverflowError("integer overflow in " + std::to_string(a)
			                    + " * " + std::to_string(b));
		return r;
	}

	// lcm via a / gcd(a,b) * b; reports overflow instead of wrapping.
	inline dtime_t checked_lcm(dtime_t a, dtime_t b)
	{
		if (a <= 0 || b <= 0)
			throw std::invalid_argument("lcm arguments must be positive");
		return checked_mul(a / std::gcd(a, b), b);
	}

	// Exact mathematical ceiling of num/den for den > 0 (num may be negative).
	inline dtime_t ceil_div(dtime_t num, dtime_t den)
	{
		if (den <= 0)
			throw std::invalid_argument("ceil_div needs a positive divisor");
		dtime_t q = num / den;
		if (num % den != 0 && num > 0)
			q += 1;
		return q;
	}

}

#endif
