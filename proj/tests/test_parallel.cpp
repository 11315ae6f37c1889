#include "doctest.h"

#include "helpers.hpp"

using namespace gang;
using namespace helpers;

// The OpenMP sweep must reproduce the serial reference bit for bit.

TEST_CASE("parallel probe matches the serial reference")
{
	std::mt19937_64 rng(83);
	for (int round = 0; round < 30; round++) {
		JobSetInstance inst = random_job_set(rng, round % 2 == 0);
		for (Policy policy : {Policy::GangFjp, Policy::Limited, Policy::Idling,
		                      Policy::SlackReclaiming}) {
			ProbeReport par = predictability_probe(inst.jobs, inst.e_min,
			                                       inst.m, policy);
			ProbeReport ser = predictability_probe_serial(inst.jobs, inst.e_min,
			                                              inst.m, policy);
			CHECK(par == ser);
		}
	}
}

TEST_CASE("parallel probe matches the serial reference on random sampling")
{
	std::mt19937_64 rng(89);
	ProbeOptions opts;
	opts.strategy = ProbeStrategy::Random;
	opts.count = 200;
	for (int round = 0; round < 10; round++) {
		JobSetInstance inst = random_job_set(rng, true);
		opts.seed = rng();
		ProbeReport par = predictability_probe(inst.jobs, inst.e_min, inst.m,
		                                       Policy::GangFjp, opts);
		ProbeReport ser = predictability_probe_serial(inst.jobs, inst.e_min,
		                                              inst.m, Policy::GangFjp,
		                                              opts);
		CHECK(par == ser);
	}
}
